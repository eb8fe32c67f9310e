//! The ball and Siegel models of the hyperbolic plane over ℂ or ℍ.
//!
//! Both are projectivizations of a 3-dimensional right vector space with a
//! Hermitian form of signature (2,1): `J₁ = diag(−1, 1, 1)` for the ball and
//! `⟨z,w⟩ = −(z̄₀w₁ + z̄₁w₀) + z̄₂w₂` for the Siegel domain. The Cayley matrix
//! `C` carries the first onto the second.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::{QMatrix3, QVector3};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ball,
    Siegel,
}

impl Model {
    /// Gram matrix of the form; real and symmetric in both models.
    pub fn form_matrix(self) -> QMatrix3 {
        match self {
            Model::Ball => QMatrix3::from_real([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            Model::Siegel => {
                QMatrix3::from_real([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
            }
        }
    }

    pub(crate) fn form_real(self) -> [[f64; 3]; 3] {
        match self {
            Model::Ball => [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            Model::Siegel => [[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn other(self) -> Model {
        match self {
            Model::Ball => Model::Siegel,
            Model::Siegel => Model::Ball,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ball => "ball",
            Model::Siegel => "siegel",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ball" => Ok(Model::Ball),
            "siegel" => Ok(Model::Siegel),
            _ => Err(Error::Parse(format!("unknown model {s:?}"))),
        }
    }
}

/// `⟨z, w⟩ = z* J w`.
pub fn inner(z: &QVector3, w: &QVector3, m: Model) -> Quaternion {
    let j = m.form_real();
    let mut acc = Quaternion::ZERO;
    for a in 0..3 {
        for b in 0..3 {
            if j[a][b] != 0.0 {
                acc += (z[a].conj() * w[b]).scale(j[a][b]);
            }
        }
    }
    acc
}

/// `‖A* J A − J‖` in the max-entry, max-component norm.
pub fn membership_residual(a: &QMatrix3, m: Model) -> f64 {
    let j = m.form_matrix();
    (a.adjoint() * j * *a - j).max_abs()
}

pub fn check_member(a: &QMatrix3, m: Model, tol: f64) -> Result<()> {
    let residual = membership_residual(a, m);
    if residual <= tol && residual.is_finite() {
        Ok(())
    } else {
        Err(Error::NotMember { residual, tol })
    }
}

/// Inverse of a group member read off entrywise from the form, with no elimination.
pub fn inverse_closed_form(a: &QMatrix3, m: Model, tol: f64) -> Result<QMatrix3> {
    check_member(a, m, tol)?;
    Ok(inverse_unchecked(a, m))
}

pub(crate) fn inverse_unchecked(a: &QMatrix3, m: Model) -> QMatrix3 {
    let e = |i: usize, j: usize| a.0[i][j].conj();
    match m {
        Model::Ball => QMatrix3([
            [e(0, 0), -e(1, 0), -e(2, 0)],
            [-e(0, 1), e(1, 1), e(2, 1)],
            [-e(0, 2), e(1, 2), e(2, 2)],
        ]),
        Model::Siegel => QMatrix3([
            [e(1, 1), e(0, 1), -e(2, 1)],
            [e(1, 0), e(0, 0), -e(2, 0)],
            [-e(1, 2), -e(0, 2), e(2, 2)],
        ]),
    }
}

/// The Cayley matrix; orthogonal, so `C⁻¹ = Cᵀ`.
pub fn cayley_matrix() -> QMatrix3 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    QMatrix3::from_real([[h, -h, 0.0], [h, h, 0.0], [0.0, 0.0, 1.0]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CayleyDirection {
    BallToSiegel,
    SiegelToBall,
}

/// `C A C⁻¹` (ball to Siegel) or `C⁻¹ A C` (Siegel to ball).
pub fn cayley_conjugate(a: &QMatrix3, dir: CayleyDirection) -> QMatrix3 {
    let c = cayley_matrix();
    let ct = c.adjoint();
    match dir {
        CayleyDirection::BallToSiegel => c * *a * ct,
        CayleyDirection::SiegelToBall => ct * *a * c,
    }
}

/// Re-expresses a member of `from` as a member of `to`.
pub fn to_model(a: &QMatrix3, from: Model, to: Model) -> QMatrix3 {
    match (from, to) {
        (Model::Ball, Model::Siegel) => cayley_conjugate(a, CayleyDirection::BallToSiegel),
        (Model::Siegel, Model::Ball) => cayley_conjugate(a, CayleyDirection::SiegelToBall),
        _ => *a,
    }
}

/// Which stabilizer subgroup of the Siegel model a member visibly lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerShape {
    /// Fixes both `o` and `∞`: diagonal.
    GZeroInfinity,
    /// Fixes `∞ = e₁`: lower triangular pattern.
    GInfinity,
    /// Fixes `o = e₀`: upper triangular pattern.
    GZero,
    None,
}

pub fn stabilizer_shape(a: &QMatrix3, tol: f64) -> StabilizerShape {
    let z = |i: usize, j: usize| a.0[i][j].norm() <= tol;
    let close = |x: Quaternion, y: Quaternion| (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0);
    let (l, av, e) = (a.0[2][2], a.0[0][0], a.0[1][1]);
    let common = (l.norm() - 1.0).abs() <= tol && close(av.conj() * e, Quaternion::ONE);
    if !common {
        return StabilizerShape::None;
    }
    let g_inf = z(0, 1) && z(0, 2) && z(2, 1) && {
        let (d, f, g) = (a.0[1][0], a.0[1][2], a.0[2][0]);
        (((av.conj() * d).w - 0.5 * g.norm_sqr()).abs() <= tol * (1.0 + g.norm_sqr()))
            && close(f, e * g.conj() * l)
    };
    let g_zero = z(1, 0) && z(1, 2) && z(2, 0) && {
        let (b, c, h) = (a.0[0][1], a.0[0][2], a.0[2][1]);
        (((e.conj() * b).w - 0.5 * h.norm_sqr()).abs() <= tol * (1.0 + h.norm_sqr()))
            && close(c, av * h.conj() * l)
    };
    match (g_inf, g_zero) {
        (true, true) => StabilizerShape::GZeroInfinity,
        (true, false) => StabilizerShape::GInfinity,
        (false, true) => StabilizerShape::GZero,
        (false, false) => StabilizerShape::None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub representative: QVector3,
    pub location: Location,
}

impl ProjectivePoint {
    /// Inhomogeneous coordinates `(z₁z₀⁻¹, z₂z₀⁻¹)`, absent when `z₀ = 0`.
    pub fn affine(&self, tol: f64) -> Option<[Quaternion; 2]> {
        let [z0, z1, z2] = self.representative;
        let scale = self.representative.iter().map(|q| q.norm()).fold(0.0, f64::max);
        if z0.norm() <= tol * scale {
            return None;
        }
        let inv = z0.inv_unchecked();
        Some([z1 * inv, z2 * inv])
    }

    /// Same projective point up to a right scalar.
    pub fn same_point(&self, other: &ProjectivePoint, tol: f64) -> bool {
        let (a, b) = (&self.representative, &other.representative);
        let p = (0..3).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm())).unwrap();
        if b[p].norm() == 0.0 {
            return false;
        }
        // b = a λ  with λ = a_p⁻¹ b_p
        let lambda = a[p].inv_unchecked() * b[p];
        let scale = b.iter().map(|q| q.norm()).fold(0.0, f64::max);
        (0..3).all(|i| (a[i] * lambda - b[i]).norm() <= tol * scale)
    }
}

/// Places `z` by the sign of `⟨z,z⟩`, with a boundary band `|⟨z,z⟩| ≤ tol ‖z‖²`.
pub fn locate(z: &QVector3, m: Model, tol: f64) -> Result<ProjectivePoint> {
    let norm2: f64 = z.iter().map(|q| q.norm_sqr()).sum();
    if norm2 == 0.0 {
        return Err(Error::Domain("zero vector has no projective point".into()));
    }
    let h = inner(z, z, m).w;
    let location = if h.abs() <= tol * norm2 {
        Location::Boundary
    } else if h < 0.0 {
        Location::Interior
    } else {
        Location::Exterior
    };
    Ok(ProjectivePoint {
        representative: *z,
        location,
    })
}

/// The Siegel points `o = C(−f₁)` and `∞ = C(f₁)`, i.e. the lines of `e₀` and `e₁`.
pub fn siegel_origin() -> QVector3 {
    [Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO]
}

pub fn siegel_infinity() -> QVector3 {
    [Quaternion::ZERO, Quaternion::ONE, Quaternion::ZERO]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(a: f64, b: f64, c: f64) -> QVector3 {
        [Quaternion::real(a), Quaternion::real(b), Quaternion::real(c)]
    }

    #[test]
    fn inner_products() {
        assert_eq!(inner(&rv(1.0, 0.0, 0.0), &rv(1.0, 0.0, 0.0), Model::Ball).w, -1.0);
        assert_eq!(inner(&rv(1.0, 0.0, 0.0), &rv(1.0, 0.0, 0.0), Model::Siegel).w, 0.0);
        assert_eq!(inner(&rv(1.0, 1.0, 1.0), &rv(1.0, 1.0, 1.0), Model::Ball).w, 1.0);
    }

    #[test]
    fn residuals_of_diagonals() {
        assert_eq!(membership_residual(&QMatrix3::identity(), Model::Ball), 0.0);
        let a = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -1.0]]);
        assert_eq!(membership_residual(&a, Model::Siegel), 0.0);
        assert_eq!(membership_residual(&a, Model::Ball), 3.0);
        let err = inverse_closed_form(&a, Model::Ball, 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotMember { residual, .. } if residual == 3.0));
    }

    #[test]
    fn closed_form_inverse_of_unit_diagonal() {
        let u = Quaternion::new(0.6, 0.0, 0.8, 0.0);
        let v = Quaternion::new(0.0, 0.6, 0.0, -0.8);
        let a = QMatrix3::diag([u, u, v]);
        let inv = inverse_closed_form(&a, Model::Ball, 1e-12).unwrap();
        assert_eq!(inv, QMatrix3::diag([u.conj(), u.conj(), v.conj()]));
        assert!((a * inv).approx_eq(&QMatrix3::identity(), 1e-15));
    }

    #[test]
    fn cayley_sends_minus_f1_to_origin() {
        let c = cayley_matrix();
        let img = c.apply(&rv(1.0, -1.0, 0.0));
        let o = ProjectivePoint { representative: siegel_origin(), location: Location::Boundary };
        let p = ProjectivePoint { representative: img, location: Location::Boundary };
        assert!(o.same_point(&p, 1e-15));
        let img = c.apply(&rv(1.0, 1.0, 0.0));
        let inf = ProjectivePoint { representative: siegel_infinity(), location: Location::Boundary };
        assert!(inf.same_point(&ProjectivePoint { representative: img, location: Location::Boundary }, 1e-15));
        // the form transforms as claimed: Cᵀ J_S C = J₁
        let j = c.adjoint() * Model::Siegel.form_matrix() * c;
        assert!(j.approx_eq(&Model::Ball.form_matrix(), 1e-15));
        assert!(cayley_conjugate(&QMatrix3::identity(), CayleyDirection::BallToSiegel)
            .approx_eq(&QMatrix3::identity(), 1e-15));
    }

    #[test]
    fn shapes() {
        let a = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -1.0]]);
        assert_eq!(stabilizer_shape(&a, 1e-12), StabilizerShape::GZeroInfinity);
        // a Heisenberg translation fixes ∞ only
        let t = QMatrix3::from_real([[1.0, 0.0, 0.0], [0.5, 1.0, 1.0], [1.0, 0.0, 1.0]]);
        assert_eq!(membership_residual(&t, Model::Siegel), 0.0);
        assert_eq!(stabilizer_shape(&t, 1e-12), StabilizerShape::GInfinity);
        assert_eq!(stabilizer_shape(&t.adjoint(), 1e-12), StabilizerShape::GZero);
        // a ball boost along f₁ becomes diagonal; a rotation moving f₁ fixes neither point
        let boost = QMatrix3::from_real([[2.0, 3f64.sqrt(), 0.0], [3f64.sqrt(), 2.0, 0.0], [0.0, 0.0, 1.0]]);
        let s = cayley_conjugate(&boost, CayleyDirection::BallToSiegel);
        assert_eq!(stabilizer_shape(&s, 1e-12), StabilizerShape::GZeroInfinity);
        let rot = QMatrix3::from_real([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]);
        let s = cayley_conjugate(&rot, CayleyDirection::BallToSiegel);
        assert!(membership_residual(&s, Model::Siegel) < 1e-15);
        assert_eq!(stabilizer_shape(&s, 1e-12), StabilizerShape::None);
    }

    #[test]
    fn locations() {
        assert_eq!(locate(&rv(1.0, 0.0, 0.0), Model::Ball, 1e-12).unwrap().location, Location::Interior);
        assert_eq!(locate(&rv(1.0, 1.0, 0.0), Model::Ball, 1e-12).unwrap().location, Location::Boundary);
        assert_eq!(locate(&rv(0.0, 1.0, 0.0), Model::Ball, 1e-12).unwrap().location, Location::Exterior);
        assert!(locate(&rv(0.0, 0.0, 0.0), Model::Ball, 1e-12).is_err());
    }
}
