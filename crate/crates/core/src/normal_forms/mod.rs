//! Conjugacy representatives: diagonal hyperbolic and elliptic forms, the
//! lower-triangular parabolic form, samplers, fixed points and reduction of a
//! member to its representative.

mod fixed;
mod normalize;
mod sample;

pub use fixed::{fixed_point_analysis, FixedPointKind, FixedPoints};
pub use normalize::{normalize, Normalization, RESIDUAL_TOL};
pub use sample::{random_isometry, sample, sample_complex_type, Sample};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::embed::Field;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::qmatrix::{self, QMatrix3};
use crate::quaternion::Quaternion;

/// Relative zero threshold for the quaternionic rank test.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormalKind {
    Hyperbolic { r: f64, beta: f64, theta: f64 },
    Elliptic { theta: f64, phi: f64, psi: f64 },
    Parabolic { theta: f64, phi: f64, d: Complex64, f: Complex64, g: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub kind: NormalKind,
    pub matrix: QMatrix3,
    pub model: Model,
    /// Set when `make_parabolic` moved `d` onto its constraint surface.
    pub projected: bool,
}

fn check_angle(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > PI + 1e-12 {
        return Err(Error::Parameter(format!("{name} = {x} is outside [-π, π]")));
    }
    Ok(())
}

fn check_angle_field(name: &str, x: f64, field: Field) -> Result<()> {
    check_angle(name, x)?;
    if field == Field::Quaternion && x < -1e-12 {
        return Err(Error::Parameter(format!("{name} = {x} is outside [0, π]")));
    }
    Ok(())
}

/// `diag(r e^{iβ}, r⁻¹ e^{iβ}, e^{iθ})` in the Siegel model.
pub fn make_hyperbolic(r: f64, beta: f64, theta: f64, field: Field) -> Result<NormalForm> {
    if !(r > 0.0) || r == 1.0 || !r.is_finite() {
        return Err(Error::Parameter(format!("r = {r} must be positive and different from 1")));
    }
    check_angle_field("beta", beta, field)?;
    check_angle_field("theta", theta, field)?;
    let e = Quaternion::exp_i(beta);
    Ok(NormalForm {
        kind: NormalKind::Hyperbolic { r, beta, theta },
        matrix: QMatrix3::diag([e.scale(r), e.scale(1.0 / r), Quaternion::exp_i(theta)]),
        model: Model::Siegel,
        projected: false,
    })
}

/// `diag(e^{iθ}, e^{iφ}, e^{iψ})` in the ball model; `e^{iθ}` is the class of the fixed point.
pub fn make_elliptic(theta: f64, phi: f64, psi: f64, field: Field) -> Result<NormalForm> {
    check_angle_field("theta", theta, field)?;
    check_angle_field("phi", phi, field)?;
    check_angle_field("psi", psi, field)?;
    Ok(NormalForm {
        kind: NormalKind::Elliptic { theta, phi, psi },
        matrix: QMatrix3::diag([theta, phi, psi].map(Quaternion::exp_i)),
        model: Model::Ball,
        projected: false,
    })
}

/// Lemma-type rank test on the parabolic pattern: `true` when the element has
/// a fixed point inside, i.e. the two ranks agree.
pub fn has_interior_fixed_point(theta: f64, phi: f64, d: Quaternion, f: Quaternion, g: Quaternion) -> bool {
    let delta = Quaternion::exp_i(phi) - Quaternion::exp_i(theta);
    // both ranks share the scale of the 2×2 matrix
    let scale = [f, d, delta, g].iter().map(|q| q.norm()).fold(0.0, f64::max);
    let clip = |q: Quaternion| if q.norm() <= RANK_TOL * scale { Quaternion::ZERO } else { q };
    let (f, d, delta, g) = (clip(f), clip(d), clip(delta), clip(g));
    let full = qmatrix::rank(vec![vec![f, d], vec![delta, g]], RANK_TOL);
    let col = qmatrix::rank(vec![vec![f], vec![delta]], RANK_TOL);
    full == col
}

/// The lower-triangular form with `f = e^{i(θ+φ)} ḡ`. A `d` violating
/// `Re(e^{−iθ}d) = ½|g|²` by at most `1e-6 (1 + |d| + |g|²)` is projected onto it.
pub fn make_parabolic(theta: f64, phi: f64, d: Complex64, g: Complex64, field: Field) -> Result<NormalForm> {
    check_angle_field("theta", theta, field)?;
    check_angle_field("phi", phi, field)?;
    if d.norm() == 0.0 || !d.is_finite() || !g.is_finite() {
        return Err(Error::Parameter("d must be a nonzero complex number".into()));
    }
    let rot = Complex64::from_polar(1.0, theta);
    let target = 0.5 * g.norm_sqr();
    let mut z = d / rot;
    let violation = (z.re - target).abs();
    let mut projected = false;
    if violation > 0.0 {
        if violation > 1e-6 * (1.0 + d.norm() + g.norm_sqr()) {
            return Err(Error::Parameter(format!(
                "Re(e^(-i theta) d) = {} but |g|^2/2 = {target}",
                z.re
            )));
        }
        if violation > 1e-15 * (1.0 + d.norm()) {
            projected = true;
        }
        z.re = target;
    }
    let d = z * rot;
    if d.norm() == 0.0 {
        return Err(Error::Parameter("d vanishes after projection".into()));
    }
    let f = Complex64::from_polar(1.0, theta + phi) * g.conj();
    let (dq, fq, gq) = (Quaternion::from_complex(d), Quaternion::from_complex(f), Quaternion::from_complex(g));
    if has_interior_fixed_point(theta, phi, dq, fq, gq) {
        return Err(Error::NotParabolic(format!(
            "rank condition holds for theta = {theta}, phi = {phi}, d = {d}, g = {g}: the element is elliptic"
        )));
    }
    let (a, l) = (Quaternion::exp_i(theta), Quaternion::exp_i(phi));
    let matrix = QMatrix3([[a, Quaternion::ZERO, Quaternion::ZERO], [dq, a, fq], [gq, Quaternion::ZERO, l]]);
    Ok(NormalForm {
        kind: NormalKind::Parabolic { theta, phi, d, f, g },
        matrix,
        model: Model::Siegel,
        projected,
    })
}

/// Folds an angle into `[0, π]` (similarity-class convention over ℍ) or `(−π, π]` over ℂ.
pub fn fold_angle(x: f64, field: Field) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    match field {
        Field::Quaternion => y.abs(),
        Field::Complex => {
            if y <= -PI {
                PI
            } else {
                y
            }
        }
    }
}

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Whether two normal forms carry the same conjugacy parameters: `(r, β, θ)`;
/// `θ` and the multiset `{φ, ψ}`; or `(θ, φ)` and whether `g` vanishes. Angles
/// are compared after folding. The parabolic `d`, `g` are not conjugacy invariants.
pub fn same_parameters(a: &NormalKind, b: &NormalKind, field: Field, tol: f64) -> bool {
    let eq = |x: f64, y: f64| angle_gap(fold_angle(x, field), fold_angle(y, field)) <= tol;
    match (a, b) {
        (NormalKind::Hyperbolic { r, beta, theta }, NormalKind::Hyperbolic { r: r2, beta: b2, theta: t2 }) => {
            (r - r2).abs() <= tol * r.max(1.0) && eq(*beta, *b2) && eq(*theta, *t2)
        }
        (NormalKind::Elliptic { theta, phi, psi }, NormalKind::Elliptic { theta: t2, phi: p2, psi: s2 }) => {
            eq(*theta, *t2) && ((eq(*phi, *p2) && eq(*psi, *s2)) || (eq(*phi, *s2) && eq(*psi, *p2)))
        }
        (
            NormalKind::Parabolic { theta, phi, g, .. },
            NormalKind::Parabolic { theta: t2, phi: p2, g: g2, .. },
        ) => eq(*theta, *t2) && eq(*phi, *p2) && (!eq(*theta, *phi) || (g.norm() > tol) == (g2.norm() > tol)),
        _ => false,
    }
}
