use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{fold_angle, make_elliptic, make_hyperbolic, make_parabolic, NormalForm};
use crate::classifier::{classify, EigenClass, Family};
use crate::embed::{complexify, to_complex3, Field};
use crate::error::{Error, Result};
use crate::linalg::{self, CDMatrix};
use crate::model::{inner, inverse_unchecked, to_model, Model};
use crate::qmatrix::{vec_add, vec_scale_right, vec_sub, QMatrix3, QVector3};
use crate::quaternion::Quaternion;
use crate::tolerance::Tolerances;

/// Largest accepted `‖S A S⁻¹ − N‖_F`, relative to `1 + max |a_ij|`.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub normal_form: NormalForm,
    /// `S` with `S A S⁻¹ = N`, both in the model of the normal form.
    pub conjugator: QMatrix3,
    pub residual: f64,
}

/// A right eigenvalue with its multiplicity as an eigenvalue of the complex
/// matrix being worked on (`A_ℂ` over ℍ, the 3×3 matrix over ℂ).
#[derive(Debug, Clone, Copy)]
struct Eig {
    value: Complex64,
    count: usize,
    jordan: usize,
}

impl Eig {
    fn is_real(&self) -> bool {
        self.value.im == 0.0
    }
}

struct Work {
    field: Field,
    model: Model,
    m: CDMatrix,
    form: CDMatrix,
}

impl Work {
    fn new(a: &QMatrix3, model: Model, field: Field, tols: &Tolerances) -> Result<Self> {
        let j = model.form_real();
        Ok(match field {
            Field::Quaternion => Work {
                field,
                model,
                m: linalg::to_dynamic(&complexify(a)),
                form: CDMatrix::from_fn(6, 6, |r, s| {
                    Complex64::new(if r / 3 == s / 3 { j[r % 3][s % 3] } else { 0.0 }, 0.0)
                }),
            },
            Field::Complex => {
                let c = to_complex3(a, tols.class)?;
                Work {
                    field,
                    model,
                    m: CDMatrix::from_fn(3, 3, |r, s| c[(r, s)]),
                    form: CDMatrix::from_fn(3, 3, |r, s| Complex64::new(j[r][s], 0.0)),
                }
            }
        })
    }

    fn n(&self) -> usize {
        self.m.nrows()
    }

    fn fold(&self, v: &DVector<Complex64>) -> QVector3 {
        match self.field {
            Field::Quaternion => [0, 1, 2].map(|i| Quaternion::from_split(v[i], v[i + 3])),
            Field::Complex => [0, 1, 2].map(|i| Quaternion::from_complex(v[i])),
        }
    }

    /// `v ↦ v j` in split coordinates; over ℂ there is no such map.
    fn sigma(&self, v: &DVector<Complex64>) -> Option<DVector<Complex64>> {
        (self.field == Field::Quaternion).then(|| {
            DVector::from_fn(6, |i, _| if i < 3 { -v[i + 3].conj() } else { v[i - 3].conj() })
        })
    }

    fn kernel(&self, lam: Complex64, power: u32, dim: usize) -> Vec<DVector<Complex64>> {
        let shifted = &self.m - CDMatrix::identity(self.n(), self.n()) * lam;
        let mut p = shifted.clone();
        for _ in 1..power {
            p = &p * &shifted;
        }
        linalg::smallest_right_singular(&p, dim)
    }

    /// The Gram eigenvector of largest (or smallest) absolute eigenvalue on the span.
    fn gram_extreme(&self, basis: &[DVector<Complex64>], largest: bool) -> (DVector<Complex64>, f64) {
        let k = CDMatrix::from_columns(basis);
        let g = k.adjoint() * &self.form * &k;
        let eig = ((&g + g.adjoint()) * Complex64::new(0.5, 0.0)).symmetric_eigen();
        let mut best = 0;
        for i in 1..eig.eigenvalues.len() {
            let (a, b) = (eig.eigenvalues[i].abs(), eig.eigenvalues[best].abs());
            if (largest && a > b) || (!largest && a < b) {
                best = i;
            }
        }
        (&k * eig.eigenvectors.column(best), eig.eigenvalues[best])
    }

    /// Rows `⟨x, ·⟩` for `x` in `against`, in the coordinates of `basis`, padded to square.
    fn functionals(&self, basis: &[DVector<Complex64>], against: &[DVector<Complex64>]) -> CDMatrix {
        let d = basis.len();
        let mut c = CDMatrix::zeros(d.max(against.len()), d);
        for (i, x) in against.iter().enumerate() {
            let fx = &self.form * x;
            for (j, b) in basis.iter().enumerate() {
                c[(i, j)] = fx.dotc(b);
            }
        }
        c
    }

    /// Orthonormal basis of the vectors in the span that are form-orthogonal
    /// to each of `against`; functionals below `thr` count as vanishing.
    fn restrict(&self, basis: &[DVector<Complex64>], against: &[DVector<Complex64>], thr: f64) -> Vec<DVector<Complex64>> {
        let k = CDMatrix::from_columns(basis);
        linalg::null_space(&self.functionals(basis, against), thr).iter().map(|y| &k * y).collect()
    }

    /// Form-orthonormal quaternionic eigenvectors for `e`, with the sign of each norm.
    fn eigen_basis(&self, e: &Eig) -> Vec<(QVector3, f64)> {
        let mut basis = self.kernel(e.value, 1, e.count);
        let mut out = Vec::new();
        while !basis.is_empty() {
            let (w, g) = self.gram_extreme(&basis, true);
            if g.abs() < 1e-9 {
                break;
            }
            out.push(unit(&self.fold(&w), self.model));
            let mut against = vec![w.clone()];
            if e.is_real() {
                against.extend(self.sigma(&w));
            }
            // w (and w j) have nonzero norm, so each functional removes one dimension
            let keep = basis.len().saturating_sub(against.len());
            let k = CDMatrix::from_columns(&basis);
            basis = linalg::smallest_right_singular(&self.functionals(&basis, &against), keep)
                .iter()
                .map(|y| &k * y)
                .collect();
        }
        out
    }
}

/// `(v / sqrt|⟨v,v⟩|, sign ⟨v,v⟩)`.
fn unit(v: &QVector3, m: Model) -> (QVector3, f64) {
    let n = inner(v, v, m).w;
    (vec_scale_right(v, Quaternion::real(1.0 / n.abs().sqrt())), n.signum())
}

fn frobenius(a: &QMatrix3) -> f64 {
    a.0.iter().flatten().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of the working matrix, taken from the accurate class
/// representatives. Over ℂ the numeric eigenvalues decide between `λ` and `λ̄`.
fn eigen_list(work: &Work, classes: &[EigenClass]) -> Vec<Eig> {
    let exact = |c: &EigenClass| {
        if c.class.angle.sin().abs() < 1e-12 {
            Complex64::new(c.class.modulus * c.class.angle.cos().signum(), 0.0)
        } else {
            c.class.representative()
        }
    };
    match work.field {
        Field::Quaternion => classes
            .iter()
            .map(|c| {
                let value = exact(c);
                let count = if value.im == 0.0 { 2 * c.multiplicity } else { c.multiplicity };
                Eig { value, count, jordan: c.jordan }
            })
            .collect(),
        Field::Complex => {
            let mut out: Vec<Eig> = Vec::new();
            for ev in linalg::eigenvalues(&work.m) {
                let mut best: Option<(f64, Complex64, usize)> = None;
                for c in classes {
                    let v = exact(c);
                    for cand in [v, v.conj()] {
                        let dist = (cand - ev).norm();
                        if best.is_none_or(|b| dist < b.0) {
                            best = Some((dist, cand, c.jordan));
                        }
                    }
                }
                let Some((_, value, jordan)) = best else { continue };
                match out.iter_mut().find(|e| e.value == value) {
                    Some(e) => e.count += 1,
                    None => out.push(Eig { value, count: 1, jordan }),
                }
            }
            out
        }
    }
}

/// `⟨l, M r⟩ / ⟨l, r⟩`. For an isometry `F l` is a left eigenvector whenever
/// `l` is a right eigenvector for `1/λ̄`, so this is a two-sided quotient.
fn rayleigh(work: &Work, l: &DVector<Complex64>, r: &DVector<Complex64>) -> Complex64 {
    let fl = &work.form * l;
    fl.dotc(&(&work.m * r)) / fl.dotc(r)
}

/// Sharpens eigenvalues that came from the characteristic polynomial.
/// Semisimple classes use Rayleigh quotients; a Jordan eigenvalue is
/// recovered from the trace once the others are known.
fn refine(work: &Work, eigs: &mut [Eig]) {
    let hfield = work.field == Field::Quaternion;
    let on_circle = |e: &Eig| (e.value.norm() - 1.0).abs() < 1e-6;
    for e in eigs.iter_mut().filter(|e| e.jordan == 1 && !e.is_real() && on_circle(e)) {
        let (v, _) = work.gram_extreme(&work.kernel(e.value, 1, e.count), true);
        let z = rayleigh(work, &v, &v);
        let z = z / z.norm();
        e.value = if hfield && z.im < 0.0 { z.conj() } else { z };
    }
    let off: Vec<usize> = (0..eigs.len()).filter(|&i| !on_circle(&eigs[i])).collect();
    if let [i, j] = off[..] {
        let (big, small) = if eigs[i].value.norm() > 1.0 { (i, j) } else { (j, i) };
        let x = work.kernel(eigs[big].value, 1, eigs[big].count).swap_remove(0);
        let y = work
            .kernel(eigs[small].value, 1, eigs[small].count)
            .into_iter()
            .max_by(|a, b| {
                let pa = (&work.form * a).dotc(&x).norm();
                let pb = (&work.form * b).dotc(&x).norm();
                pa.total_cmp(&pb)
            })
            .expect("nonempty kernel");
        let mut z = rayleigh(work, &y, &x);
        if eigs[big].is_real() {
            z = Complex64::new(z.re, 0.0);
        } else if hfield && z.im < 0.0 {
            z = z.conj();
        }
        eigs[big].value = z;
        eigs[small].value = 1.0 / z.conj();
    }
    if let Some(k) = eigs.iter().position(|e| e.jordan >= 2) {
        if eigs[k].is_real() {
            return;
        }
        let trace = work.m.trace();
        let rest: Complex64 = eigs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, e)| {
                let c = Complex64::new(e.count as f64, 0.0);
                if hfield && !e.is_real() { c * Complex64::new(2.0 * e.value.re, 0.0) } else { c * e.value }
            })
            .sum();
        let n = eigs[k].count as f64;
        let z = if hfield {
            // λ and λ̄ each appear `count` times
            let re = ((trace - rest).re / (2.0 * n)).clamp(-1.0, 1.0);
            Complex64::new(re, (1.0 - re * re).sqrt())
        } else {
            let z = (trace - rest) / n;
            z / z.norm()
        };
        eigs[k].value = z;
    }
}

/// A null vector `q ⊥ w` with `⟨q, p⟩ = −1`, completing `(q, p, w)` to a
/// Siegel-orthonormal basis.
fn complete_null(p: &QVector3, w: &QVector3) -> QVector3 {
    let m = Model::Siegel;
    let mut best: Option<(QVector3, Quaternion)> = None;
    for k in 0..3 {
        let mut e = [Quaternion::ZERO; 3];
        e[k] = Quaternion::ONE;
        let x = vec_sub(&e, &vec_scale_right(w, inner(w, &e, m)));
        let c = inner(&x, p, m);
        if best.is_none_or(|(_, b)| c.norm() > b.norm()) {
            best = Some((x, c));
        }
    }
    let (x, c) = best.expect("three candidates");
    let q0 = vec_scale_right(&x, (-c.inv_unchecked()).conj());
    let n0 = inner(&q0, &q0, m).w;
    vec_add(&q0, &vec_scale_right(p, Quaternion::real(n0 / 2.0)))
}

/// A unit quaternion `u` with `u a ū` on the positive `i` axis, for pure `a`.
fn rotate_to_i(a: Quaternion) -> Quaternion {
    let n = a.norm();
    if n == 0.0 {
        return Quaternion::ONE;
    }
    let a = a.scale(1.0 / n);
    // u = (1 − i a)/|1 − i a| turns a into i unless a ≈ −i
    let u = Quaternion::ONE - Quaternion::I * a;
    if u.norm() < 1e-8 {
        return Quaternion::J;
    }
    u.scale(1.0 / u.norm())
}

/// Conjugates a member to its normal form. The conjugator and the normal form
/// are expressed in the ball model for elliptic elements and in the Siegel
/// model otherwise. When `θ ≠ φ` a parabolic element is taken all the way to
/// `f = g = 0`.
pub fn normalize(a: &QMatrix3, m: Model, field: Field, tols: &Tolerances) -> Result<Normalization> {
    let cls = classify(a, m, field, tols)?;
    let target = match cls.dtype.family() {
        Family::Elliptic => Model::Ball,
        _ => Model::Siegel,
    };
    let a = to_model(a, m, target);
    let work = Work::new(&a, target, field, tols)?;
    let mut eigs = eigen_list(&work, &cls.eigen_classes);
    refine(&work, &mut eigs);
    let fail = |what: String| Error::Numerical { what, residual: f64::NAN };

    let (normal_form, s) = match cls.dtype.family() {
        Family::Elliptic => {
            let mut neg = Vec::new();
            let mut pos = Vec::new();
            for e in &eigs {
                for (v, sign) in work.eigen_basis(e) {
                    if sign < 0.0 {
                        neg.push((v, e.value))
                    } else {
                        pos.push((v, e.value))
                    }
                }
            }
            if neg.len() != 1 || pos.len() != 2 {
                return Err(fail(format!("eigenbasis has {} negative and {} positive vectors", neg.len(), pos.len())));
            }
            let ang = |z: Complex64| fold_angle(z.arg(), field);
            pos.sort_by(|x, y| ang(x.1).total_cmp(&ang(y.1)));
            let v = QMatrix3::from_columns([neg[0].0, pos[0].0, pos[1].0]);
            let nf = make_elliptic(ang(neg[0].1), ang(pos[0].1), ang(pos[1].1), field)?;
            (nf, inverse_unchecked(&v, target))
        }
        Family::Hyperbolic => {
            let by_modulus = |big: bool| {
                eigs.iter()
                    .copied()
                    .max_by(|x, y| {
                        let (a, b) = (x.value.norm(), y.value.norm());
                        if big { a.total_cmp(&b) } else { b.total_cmp(&a) }
                    })
                    .expect("eigenvalues")
            };
            let (e1, e2) = (by_modulus(true), by_modulus(false));
            let e3 = eigs
                .iter()
                .find(|e| (e.value.norm() - 1.0).abs() < 1e-6)
                .ok_or_else(|| fail("no unit eigenvalue".into()))?;
            let x = work.fold(&work.kernel(e1.value, 1, e1.count)[0]);
            let y = work.fold(&work.kernel(e2.value, 1, e2.count)[0]);
            let mu = -inner(&x, &y, target).inv_unchecked();
            let (w, sign) = *work
                .eigen_basis(e3)
                .first()
                .ok_or_else(|| fail("empty unit eigenspace".into()))?;
            if sign < 0.0 {
                return Err(fail("unit eigenvector is negative".into()));
            }
            let v = QMatrix3::from_columns([x, vec_scale_right(&y, mu), w]);
            let nf = make_hyperbolic(
                e1.value.norm(),
                fold_angle(e1.value.arg(), field),
                fold_angle(e3.value.arg(), field),
                field,
            )?;
            (nf, inverse_unchecked(&v, target))
        }
        Family::Parabolic => parabolic(&work, &a, &eigs)?,
    };

    let conj = s * a * inverse_unchecked(&s, target);
    let residual = frobenius(&(conj - normal_form.matrix));
    if !(residual <= RESIDUAL_TOL * (1.0 + a.max_abs())) {
        return Err(Error::Numerical { what: format!("normal form of a {} element", cls.dtype), residual });
    }
    Ok(Normalization { normal_form, conjugator: s, residual })
}

fn parabolic(work: &Work, a: &QMatrix3, eigs: &[Eig]) -> Result<(NormalForm, QMatrix3)> {
    let fail = |what: &str| Error::Numerical { what: what.into(), residual: f64::NAN };
    let m = Model::Siegel;
    let jord = *eigs.iter().find(|e| e.jordan >= 2).ok_or_else(|| fail("no Jordan block"))?;
    let other = eigs.iter().find(|e| e.jordan == 1).copied();
    let lam = jord.value;
    let hreal = work.field == Field::Quaternion && jord.is_real();
    let per = if hreal { 2 } else { 1 };
    let mult = jord.count / per;
    let k = jord.jordan;

    // fixed point: the radical of the form on the eigenspace
    let eig_space = work.kernel(lam, 1, (mult + 1).saturating_sub(k).max(1) * per);
    let (pc, _) = work.gram_extreme(&eig_space, false);
    let p = work.fold(&pc);

    let wc = match other {
        Some(o) => work.gram_extreme(&work.kernel(o.value, 1, o.count), true).0,
        None => {
            let dim = if k <= 2 { 3 } else { 2 };
            let gen = work.kernel(lam, 2, dim * per);
            let mut against = vec![pc.clone()];
            if hreal {
                against.extend(work.sigma(&pc));
            }
            let perp = work.restrict(&gen, &against, 1e-6);
            if perp.is_empty() {
                return Err(fail("empty complement of the fixed point"));
            }
            work.gram_extreme(&perp, true).0
        }
    };
    let mut w = unit(&work.fold(&wc), m).0;

    let build = |q: &QVector3, w: &QVector3| {
        let v = QMatrix3::from_columns([*q, p, *w]);
        let s = inverse_unchecked(&v, m);
        (s, s * *a * v)
    };
    let j_times = |y: Complex64| Quaternion::from_split(Complex64::new(0.0, 0.0), y);

    let mut q = complete_null(&p, &w);
    let (mut s, mut b) = build(&q, &w);
    if work.field == Field::Quaternion && !jord.is_real() {
        // w ↦ w + p j y and q ↦ q + p j y shift f and d by j (λ̄ − λ) y
        let gap = lam - lam.conj();
        if other.is_none() {
            let y = b[(1, 2)].split().1 / gap;
            w = vec_add(&w, &vec_scale_right(&p, j_times(y)));
            q = complete_null(&p, &w);
            b = build(&q, &w).1;
        }
        let y = b[(1, 0)].split().1 / gap;
        q = vec_add(&q, &vec_scale_right(&p, j_times(y)));
        (s, b) = build(&q, &w);
    } else if hreal {
        // real λ commutes with everything: rotate d, then g, into ℂ
        let d = b[(1, 0)];
        let u = rotate_to_i(d - Quaternion::real(d.w));
        let mut v = Quaternion::ONE;
        if other.is_none() {
            let g = b[(2, 0)] * u.conj();
            if g.norm() > 0.0 {
                v = g.conj().scale(1.0 / g.norm());
            }
        }
        let rot = QMatrix3::diag([u, u, v]);
        s = rot * s;
        b = rot * b * QMatrix3::diag([u.conj(), u.conj(), v.conj()]);
    }

    // the boost diag(r, 1/r, 1) sends d ↦ d/r², g ↦ g/r: make |g| = 1, or |d| = 1 when g = 0
    let (d, g) = (b[(1, 0)].norm(), b[(2, 0)].norm());
    let r = if g > 1e-6 * (1.0 + d).sqrt() { g } else { d.sqrt() };
    if r > 0.0 {
        let boost = |r: f64| QMatrix3::from_real([[r, 0.0, 0.0], [0.0, 1.0 / r, 0.0], [0.0, 0.0, 1.0]]);
        s = boost(r) * s;
        b = boost(r) * b * boost(1.0 / r);
    }

    let theta = fold_angle(lam.arg(), work.field);
    let phi = fold_angle(other.map_or(lam, |o| o.value).arg(), work.field);
    let nf = make_parabolic(theta, phi, b[(1, 0)].complex_part(), b[(2, 0)].complex_part(), work.field)?;
    Ok((nf, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::DynamicalType;
    use crate::normal_forms::{random_isometry, sample, same_parameters, NormalKind};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn normal_form_is_fixed() {
        let n = make_hyperbolic(2.0, 0.0, 0.0, Field::Quaternion).unwrap();
        let out = normalize(&n.matrix, Model::Siegel, Field::Quaternion, &tols()).unwrap();
        assert!(out.normal_form.matrix.approx_eq(&n.matrix, 1e-12));
        assert!(out.residual < 1e-12);
        // S lies in the centralizer of a diagonal matrix with distinct entries
        let s = out.conjugator;
        for (i, j) in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)] {
            assert!(s[(i, j)].norm() < 1e-12, "{i}{j}");
        }
    }

    #[test]
    fn conjugated_elliptic_keeps_angles() {
        let e = make_elliptic(PI / 2.0, PI / 3.0, 2.0 * PI / 3.0, Field::Quaternion).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s0 = random_isometry(Field::Quaternion, Model::Ball, &mut rng);
            let a = s0 * e.matrix * inverse_unchecked(&s0, Model::Ball);
            let out = normalize(&a, Model::Ball, Field::Quaternion, &tols()).unwrap();
            assert!(same_parameters(&out.normal_form.kind, &e.kind, Field::Quaternion, 1e-9), "{:?}", out.normal_form.kind);
        }
    }

    #[test]
    fn signed_angles_over_c() {
        let e = make_elliptic(-2.0, 0.5, -1.0, Field::Complex).unwrap();
        let out = normalize(&e.matrix, Model::Ball, Field::Complex, &tols()).unwrap();
        let NormalKind::Elliptic { theta, .. } = out.normal_form.kind else { panic!() };
        assert!((theta + 2.0).abs() < 1e-12);
        assert!(out.conjugator.is_complex(0.0));
    }

    #[test]
    fn screw_parabolic_loses_g() {
        let (theta, phi) = (1.0, 2.0);
        let g = Complex64::new(0.8, 0.3);
        let d = Complex64::from_polar(1.0, theta) * Complex64::new(0.5 * g.norm_sqr(), 0.7);
        let n = super::make_parabolic(theta, phi, d, g, Field::Quaternion).unwrap();
        let out = normalize(&n.matrix, Model::Siegel, Field::Quaternion, &tols()).unwrap();
        let NormalKind::Parabolic { g, f, d, .. } = out.normal_form.kind else { panic!() };
        assert!(g.norm() < 1e-9 && f.norm() < 1e-9);
        assert!((d.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn conjugator_is_a_member() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in DynamicalType::ALL {
            let s = sample(t, Field::Quaternion, &mut rng);
            let out = normalize(&s.matrix, s.model, Field::Quaternion, &tols()).unwrap();
            assert!(crate::model::membership_residual(&out.conjugator, out.normal_form.model) < 1e-9, "{t}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn samples_normalize_back(seed in any::<u64>(), which in 0usize..11, quaternion in any::<bool>()) {
            let field = if quaternion { Field::Quaternion } else { Field::Complex };
            let t = DynamicalType::ALL[which];
            let s = sample(t, field, &mut ChaCha8Rng::seed_from_u64(seed));
            let out = normalize(&s.matrix, s.model, field, &tols()).unwrap();
            prop_assert!(out.residual <= 1e-8, "{} {}", t, out.residual);
            prop_assert!(same_parameters(&out.normal_form.kind, &s.normal_form.kind, field, 1e-6),
                "{:?} vs {:?}", out.normal_form.kind, s.normal_form.kind);
        }
    }
}
