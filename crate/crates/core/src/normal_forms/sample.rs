use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{make_elliptic, make_hyperbolic, make_parabolic, NormalForm};
use crate::classifier::{ComplexType, DynamicalType};
use crate::embed::Field;
use crate::model::{inner, inverse_unchecked, to_model, Model};
use crate::qmatrix::{vec_scale_right, vec_sub, QMatrix3, QVector3};
use crate::quaternion::Quaternion;

/// Largest entry allowed in a conjugator, which keeps the characteristic
/// polynomial of conjugated samples well conditioned.
const MAX_ENTRY: f64 = 4.0;
/// Minimum distance between distinct resolvent roots `2cos θ`.
const T_SEPARATION: f64 = 0.4;
/// Minimum `|sin θ|` for an angle meant to be non-real.
const MIN_SIN: f64 = 0.2;

/// A random group element with its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub dtype: DynamicalType,
    pub field: Field,
    pub model: Model,
    /// `S N S⁻¹`, expressed in `model`.
    pub matrix: QMatrix3,
    pub normal_form: NormalForm,
    /// `S`, in the model of the normal form.
    pub conjugator: QMatrix3,
}

fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Quaternion {
    let mut u = || rng.random_range(-1.0..1.0);
    match field {
        Field::Quaternion => Quaternion::new(u(), u(), u(), u()),
        Field::Complex => Quaternion::new(u(), u(), 0.0, 0.0),
    }
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Quaternion {
    loop {
        let q = random_scalar(rng, field);
        let n = q.norm();
        if n > 0.1 {
            return q.scale(1.0 / n);
        }
    }
}

/// A random member built by orthonormalizing `I + 0.7 X` against the form,
/// negative vector first, then multiplied by random unit scalars on the right.
pub fn random_isometry<R: Rng + ?Sized>(field: Field, model: Model, rng: &mut R) -> QMatrix3 {
    loop {
        let mut cols: [QVector3; 3] = [[Quaternion::ZERO; 3]; 3];
        for (j, col) in cols.iter_mut().enumerate() {
            for (i, e) in col.iter_mut().enumerate() {
                let base = if i == j { Quaternion::ONE } else { Quaternion::ZERO };
                *e = base + random_scalar(rng, field).scale(0.7);
            }
        }
        if let Some(s) = gram_schmidt(cols) {
            let phases = QMatrix3::diag([random_unit(rng, field), random_unit(rng, field), random_unit(rng, field)]);
            let s = s * phases;
            if s.max_abs() > MAX_ENTRY {
                continue;
            }
            return to_model(&s, Model::Ball, model);
        }
    }
}

/// Indefinite Gram–Schmidt for the ball form; `None` when a norm is within
/// `1e-6` of zero or has the wrong sign.
fn gram_schmidt(cols: [QVector3; 3]) -> Option<QMatrix3> {
    let m = Model::Ball;
    let signs = [-1.0, 1.0, 1.0];
    let mut out: Vec<QVector3> = Vec::with_capacity(3);
    for (k, c) in cols.iter().enumerate() {
        let mut v = *c;
        for (e, s) in out.iter().zip(signs) {
            // v ← v − e ⟨e,e⟩⁻¹ ⟨e,v⟩
            let coef = inner(e, &v, m).scale(s);
            v = vec_sub(&v, &vec_scale_right(e, coef));
        }
        let n = inner(&v, &v, m).w;
        if n * signs[k] < 1e-6 {
            return None;
        }
        out.push(vec_scale_right(&v, Quaternion::real(1.0 / (n * signs[k]).sqrt())));
    }
    Some(QMatrix3::from_columns([out[0], out[1], out[2]]))
}

fn angle_range<R: Rng + ?Sized>(rng: &mut R, field: Field) -> f64 {
    match field {
        Field::Quaternion => rng.random_range(0.0..=PI),
        Field::Complex => rng.random_range(-PI..=PI),
    }
}

/// A non-real angle: `|sin θ| ≥ MIN_SIN`.
fn nonreal_angle<R: Rng + ?Sized>(rng: &mut R, field: Field) -> f64 {
    loop {
        let x = angle_range(rng, field);
        if x.sin().abs() >= MIN_SIN {
            return x;
        }
    }
}

/// Any angle, snapped to 0 or π a quarter of the time.
fn any_angle<R: Rng + ?Sized>(rng: &mut R, field: Field) -> f64 {
    if rng.random_bool(0.25) {
        if rng.random_bool(0.5) {
            0.0
        } else {
            PI
        }
    } else {
        nonreal_angle(rng, field)
    }
}

fn separated(angles: &[f64]) -> bool {
    angles.iter().enumerate().all(|(i, x)| {
        angles[i + 1..].iter().all(|y| (2.0 * x.cos() - 2.0 * y.cos()).abs() >= T_SEPARATION)
    })
}

fn distinct_angles<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| any_angle(rng, field)).collect();
        if separated(&v) {
            return v;
        }
    }
}

fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(-PI..PI))
}

fn signed_magnitude<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let m = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Normal-form parameters for a type, drawn away from coincidences.
fn draw_normal_form<R: Rng + ?Sized>(dtype: DynamicalType, field: Field, rng: &mut R) -> NormalForm {
    use DynamicalType::*;
    let real_angle = |rng: &mut R| if rng.random_bool(0.5) { 0.0 } else { PI };
    loop {
        let nf = match dtype {
            RegularElliptic => {
                let v = distinct_angles(rng, field, 3);
                make_elliptic(v[0], v[1], v[2], field)
            }
            ComplexElliptic => {
                let v = distinct_angles(rng, field, 2);
                if rng.random_bool(0.5) {
                    make_elliptic(v[0], v[0], v[1], field)
                } else {
                    make_elliptic(v[0], v[1], v[1], field)
                }
            }
            SimpleElliptic => {
                let x = any_angle(rng, field);
                make_elliptic(x, x, x, field)
            }
            RegularHyperbolic => {
                let r = rng.random_range(1.5..3.5);
                let mut beta = rng.random_range(0.3..PI - 0.3);
                if field == Field::Complex && rng.random_bool(0.5) {
                    beta = -beta;
                }
                make_hyperbolic(r, beta, any_angle(rng, field), field)
            }
            StrictlyHyperbolic => {
                let r = rng.random_range(1.5..3.5);
                make_hyperbolic(r, real_angle(rng), real_angle(rng), field)
            }
            ScrewHyperbolic => {
                let r = rng.random_range(1.5..3.5);
                make_hyperbolic(r, real_angle(rng), nonreal_angle(rng, field), field)
            }
            VerticalHeisenbergTranslation => {
                let s = signed_magnitude(rng, 0.5, 2.0);
                make_parabolic(0.0, 0.0, Complex64::new(0.0, s), Complex64::new(0.0, 0.0), field)
            }
            NonVerticalHeisenbergTranslation => {
                let g = unit_complex(rng) * rng.random_range(0.5..1.5);
                let s = rng.random_range(-2.0..2.0);
                make_parabolic(0.0, 0.0, Complex64::new(0.5 * g.norm_sqr(), s), g, field)
            }
            ElliptoTranslation => {
                let x = if rng.random_bool(0.25) { PI } else { nonreal_angle(rng, field) };
                let s = signed_magnitude(rng, 0.5, 2.0);
                let d = Complex64::from_polar(1.0, x) * Complex64::new(0.0, s);
                make_parabolic(x, x, d, Complex64::new(0.0, 0.0), field)
            }
            ElliptoParabolic => {
                let x = if rng.random_bool(0.25) { PI } else { nonreal_angle(rng, field) };
                let g = unit_complex(rng) * rng.random_range(0.5..1.5);
                let d = Complex64::from_polar(1.0, x) * Complex64::new(0.5 * g.norm_sqr(), rng.random_range(-2.0..2.0));
                make_parabolic(x, x, d, g, field)
            }
            ScrewParabolic => {
                let v = distinct_angles(rng, field, 2);
                let e = Complex64::from_polar(1.0, v[0]);
                if rng.random_bool(0.5) {
                    let d = e * Complex64::new(0.0, signed_magnitude(rng, 0.5, 2.0));
                    make_parabolic(v[0], v[1], d, Complex64::new(0.0, 0.0), field)
                } else {
                    let g = unit_complex(rng) * rng.random_range(0.5..1.5);
                    let d = e * Complex64::new(0.5 * g.norm_sqr(), rng.random_range(-2.0..2.0));
                    make_parabolic(v[0], v[1], d, g, field)
                }
            }
        };
        // constructors reject elliptic-in-disguise parabolic draws; redraw those
        if let Ok(nf) = nf {
            return nf;
        }
    }
}

/// A conjugated normal form of the requested type, in a randomly chosen model.
pub fn sample<R: Rng + ?Sized>(dtype: DynamicalType, field: Field, rng: &mut R) -> Sample {
    let nf = draw_normal_form(dtype, field, rng);
    let s = random_isometry(field, nf.model, rng);
    let conj = s * nf.matrix * inverse_unchecked(&s, nf.model);
    let model = if rng.random_bool(0.5) { nf.model } else { nf.model.other() };
    Sample {
        dtype,
        field,
        model,
        matrix: to_model(&conj, nf.model, model),
        normal_form: nf,
        conjugator: s,
    }
}

/// A complex-field sample whose collapsed type is `ct`.
pub fn sample_complex_type<R: Rng + ?Sized>(ct: ComplexType, rng: &mut R) -> Sample {
    let choices: Vec<DynamicalType> = DynamicalType::ALL.into_iter().filter(|t| t.collapse() == ct).collect();
    let dtype = choices[rng.random_range(0..choices.len())];
    sample(dtype, Field::Complex, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::membership_residual;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_isometries_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Quaternion, Field::Complex] {
            for model in [Model::Ball, Model::Siegel] {
                for _ in 0..200 {
                    let s = random_isometry(field, model, &mut rng);
                    assert!(membership_residual(&s, model) <= 1e-10);
                    if field == Field::Complex {
                        assert!(s.is_complex(0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for field in [Field::Quaternion, Field::Complex] {
            for t in DynamicalType::ALL {
                for _ in 0..20 {
                    let s = sample(t, field, &mut rng);
                    assert!(membership_residual(&s.matrix, s.model) <= 1e-10, "{t:?}");
                    assert!(membership_residual(&s.normal_form.matrix, s.normal_form.model) <= 1e-12);
                }
            }
        }
    }
}
