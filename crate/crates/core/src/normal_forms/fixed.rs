use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::has_interior_fixed_point;
use crate::embed::{complexify, to_complex3, Field};
use crate::error::Result;
use crate::linalg::{self, CDMatrix};
use crate::model::{check_member, locate, stabilizer_shape, to_model, Location, Model, ProjectivePoint, StabilizerShape};
use crate::qmatrix::QVector3;
use crate::qmatrix::QMatrix3;
use crate::quaternion::Quaternion;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointKind {
    Elliptic,
    Parabolic,
    HyperbolicPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub kind: FixedPointKind,
    /// Interior points first, then boundary points, each up to projective equivalence.
    pub points: Vec<ProjectivePoint>,
    /// Verdict of the rank lemma when the Siegel matrix already has the
    /// lower-triangular parabolic pattern: `Some(true)` means elliptic.
    pub rank_lemma_elliptic: Option<bool>,
}

impl FixedPoints {
    pub fn count(&self, loc: Location) -> usize {
        self.points.iter().filter(|p| p.location == loc).count()
    }
}

/// Eigenvectors of the embedding, folded back to 3-vectors over the field,
/// placed by the sign of the form on each eigenspace.
pub fn fixed_point_analysis(a: &QMatrix3, m: Model, field: Field, tols: &Tolerances) -> Result<FixedPoints> {
    check_member(a, m, tols.membership)?;
    let j = m.form_real();
    let (mat, form, n) = match field {
        Field::Quaternion => {
            let c = complexify(a);
            let f = CDMatrix::from_fn(6, 6, |r, s| {
                Complex64::new(if r / 3 == s / 3 { j[r % 3][s % 3] } else { 0.0 }, 0.0)
            });
            (linalg::to_dynamic(&c), f, 6)
        }
        Field::Complex => {
            let c = to_complex3(a, tols.class)?;
            let f = CDMatrix::from_fn(3, 3, |r, s| Complex64::new(j[r][s], 0.0));
            (CDMatrix::from_fn(3, 3, |r, s| c[(r, s)]), f, 3)
        }
    };
    let fold = |v: &DVector<Complex64>| -> QVector3 {
        match field {
            Field::Quaternion => [0, 1, 2].map(|i| Quaternion::from_split(v[i], v[i + 3])),
            Field::Complex => [0, 1, 2].map(|i| Quaternion::from_complex(v[i])),
        }
    };

    let scale = linalg::norm2(&mat) + 1.0;
    let eig = linalg::eigenvalues(&mat);
    let clusters = linalg::cluster(&eig, tols.oracle_cluster * scale);
    let mut interior: Vec<ProjectivePoint> = Vec::new();
    let mut boundary: Vec<ProjectivePoint> = Vec::new();
    for (lam, _) in clusters {
        // over ℍ, λ and λ̄ give the same quaternionic eigenvectors
        if field == Field::Quaternion && lam.im < -tols.oracle_cluster * scale {
            continue;
        }
        let shifted = &mat - CDMatrix::identity(n, n) * lam;
        let basis = linalg::null_space(&shifted, tols.rank * 100.0 * scale);
        if basis.is_empty() {
            continue;
        }
        let v = CDMatrix::from_columns(&basis);
        let gram = v.adjoint() * &form * &v;
        let herm = (&gram + gram.adjoint()).scale(0.5);
        let eigen = herm.symmetric_eigen();
        let top = eigen.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1e-300);
        for (k, mu) in eigen.eigenvalues.iter().enumerate() {
            let w = &v * eigen.eigenvectors.column(k);
            let q = fold(&w);
            let p = match locate(&q, m, 0.0) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let place = if mu.abs() <= 1e-7 * top.max(1.0) {
                Location::Boundary
            } else if *mu < 0.0 {
                Location::Interior
            } else {
                continue;
            };
            let p = ProjectivePoint { representative: p.representative, location: place };
            let list = if place == Location::Interior { &mut interior } else { &mut boundary };
            if !list.iter().any(|x| x.same_point(&p, 1e-6)) {
                list.push(p);
            }
        }
    }

    let rank_lemma_elliptic = lemma_check(a, m);
    let kind = if !interior.is_empty() {
        FixedPointKind::Elliptic
    } else if boundary.len() >= 2 {
        FixedPointKind::HyperbolicPair
    } else {
        FixedPointKind::Parabolic
    };
    let mut points = interior;
    points.extend(boundary);
    Ok(FixedPoints { kind, points, rank_lemma_elliptic })
}

/// The rank lemma for Siegel matrices with the pattern
/// `[[e^{iθ},0,0],[d,e^{iθ},f],[g,0,e^{iφ}]]`.
fn lemma_check(a: &QMatrix3, m: Model) -> Option<bool> {
    let s = to_model(a, m, Model::Siegel);
    if stabilizer_shape(&s, 1e-9) == StabilizerShape::None {
        return None;
    }
    let (a0, e, l) = (s.0[0][0], s.0[1][1], s.0[2][2]);
    let unit_complex = |q: Quaternion| q.is_complex(1e-12) && (q.norm() - 1.0).abs() <= 1e-9;
    if !(unit_complex(a0) && unit_complex(l) && a0.approx_eq(e, 1e-12) && s.is_complex(1e-12)) {
        return None;
    }
    let theta = a0.x.atan2(a0.w);
    let phi = l.x.atan2(l.w);
    Some(has_interior_fixed_point(theta, phi, s.0[1][0], s.0[1][2], s.0[2][0]))
}
