//! An independent classifier that works from the eigenvalues of `A_ℂ` and
//! Jordan block sizes, without the polynomial invariants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classifier::DynamicalType;
use crate::embed::{complexify, Field};
use crate::error::Result;
use crate::linalg::{self, CDMatrix};
use crate::model::{check_member, Model};
use crate::normal_forms::{fixed_point_analysis, FixedPointKind};
use crate::qmatrix::QMatrix3;
use crate::quaternion::SimilarityClass;
use crate::tolerance::Tolerances;

/// Relative singular-value threshold for the Jordan structure.
const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleClass {
    pub class: SimilarityClass,
    pub multiplicity: usize,
    /// Largest Jordan block of `A_ℂ` at a representative eigenvalue.
    pub block: usize,
    pub real: bool,
    pub unitary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub eigenvalues: Vec<Complex64>,
    pub classes: Vec<OracleClass>,
    pub off_circle: usize,
    pub jordan_defect: bool,
    /// Some rank decision had a singular value within 10× of its threshold.
    pub borderline: bool,
}

/// Eigenvalues of `A_ℂ` grouped into similarity classes, with Jordan data.
pub fn eigen_report(a: &QMatrix3, m: Model, tols: &Tolerances) -> Result<EigenReport> {
    check_member(a, m, tols.membership)?;
    let mat = linalg::to_dynamic(&complexify(a));
    let scale = linalg::norm2(&mat).max(1.0);
    let eigenvalues = linalg::eigenvalues(&mat);
    let tol = tols.oracle_cluster * scale;

    // clusters of λ together with clusters of λ̄ form one class
    let clusters = linalg::cluster(&eigenvalues, tol);
    let mut used = vec![false; clusters.len()];
    let mut classes = Vec::new();
    let mut borderline = false;
    for i in 0..clusters.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (lam, members) = &clusters[i];
        let mut count = members.len();
        let real = lam.im.abs() <= tol;
        if !real {
            if let Some(j) = (0..clusters.len()).find(|&j| !used[j] && (clusters[j].0 - lam.conj()).norm() <= tol) {
                used[j] = true;
                count += clusters[j].1.len();
            }
        }
        let rep = if real { Complex64::new(lam.re, 0.0) } else { *lam };
        let (block, bl) = jordan_block(&mat, rep, members.len(), scale);
        borderline |= bl;
        let class = SimilarityClass::of_complex(rep);
        classes.push(OracleClass {
            class,
            multiplicity: count / 2,
            block,
            real,
            unitary: (class.modulus - 1.0).abs() <= tol,
        });
    }
    let off_circle = classes.iter().filter(|c| !c.unitary).count();
    let jordan_defect = classes.iter().any(|c| c.block > 1);
    Ok(EigenReport { eigenvalues, classes, off_circle, jordan_defect, borderline })
}

/// Least `k` with `rank (M − λ)^k = n − count`.
fn jordan_block(mat: &CDMatrix, lam: Complex64, count: usize, scale: f64) -> (usize, bool) {
    let n = mat.nrows();
    let shifted = mat - CDMatrix::identity(n, n) * lam;
    let mut pow = shifted.clone();
    let mut borderline = false;
    for k in 1..=count {
        let (rank, bl) = linalg::rank_abs(&pow, RANK_TOL * scale.powi(k as i32));
        borderline |= bl;
        if rank <= n - count {
            return (k, borderline);
        }
        pow = &pow * &shifted;
    }
    (count, true)
}

fn from_report(r: &EigenReport) -> Option<DynamicalType> {
    use DynamicalType::*;
    let unit: Vec<&OracleClass> = r.classes.iter().filter(|c| c.unitary).collect();
    if r.off_circle > 0 {
        let off_real = r.classes.iter().filter(|c| !c.unitary).all(|c| c.real);
        return Some(match (off_real, unit.iter().all(|c| c.real)) {
            (true, true) => StrictlyHyperbolic,
            (true, false) => ScrewHyperbolic,
            (false, _) => RegularHyperbolic,
        });
    }
    if !r.jordan_defect {
        return Some(match unit.len() {
            3 => RegularElliptic,
            2 => ComplexElliptic,
            _ => SimpleElliptic,
        });
    }
    let block = unit.iter().map(|c| c.block).max()?;
    Some(match unit.len() {
        1 => {
            let one = unit[0].real && unit[0].class.angle.cos() > 0.0;
            match (one, block >= 3) {
                (true, false) => VerticalHeisenbergTranslation,
                (true, true) => NonVerticalHeisenbergTranslation,
                (false, false) => ElliptoTranslation,
                (false, true) => ElliptoParabolic,
            }
        }
        _ => ScrewParabolic,
    })
}

/// The dynamical type read off from eigenvalues. When a Jordan rank decision
/// is borderline, the fixed-point count decides between elliptic and parabolic.
pub fn eigen_classify(a: &QMatrix3, m: Model, tols: &Tolerances) -> Result<DynamicalType> {
    let mut report = eigen_report(a, m, tols)?;
    if report.borderline && report.off_circle == 0 {
        let fp = fixed_point_analysis(a, m, Field::Quaternion, tols)?;
        let parabolic = fp.kind == FixedPointKind::Parabolic;
        if parabolic != report.jordan_defect {
            report.jordan_defect = parabolic;
            for c in &mut report.classes {
                c.block = if parabolic { c.block.max(2) } else { 1 };
            }
        }
    }
    Ok(from_report(&report).unwrap_or(DynamicalType::SimpleElliptic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_forms::{make_elliptic, sample};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let t = Tolerances::default();
        let l = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -1.0]]);
        assert_eq!(eigen_classify(&l, Model::Siegel, &t).unwrap(), DynamicalType::StrictlyHyperbolic);
        let e = make_elliptic(PI / 2.0, PI / 3.0, 2.0 * PI / 3.0, Field::Quaternion).unwrap();
        assert_eq!(eigen_classify(&e.matrix, Model::Ball, &t).unwrap(), DynamicalType::RegularElliptic);
        assert_eq!(eigen_classify(&QMatrix3::identity(), Model::Ball, &t).unwrap(), DynamicalType::SimpleElliptic);
    }

    #[test]
    fn report_shape() {
        let l = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -1.0]]);
        let r = eigen_report(&l, Model::Siegel, &Tolerances::default()).unwrap();
        assert_eq!(r.classes.iter().map(|c| c.multiplicity).sum::<usize>(), 3);
        assert_eq!(r.off_circle, 2);
        assert!(!r.jordan_defect);
        let mods: Vec<f64> = r.classes.iter().filter(|c| !c.unitary).map(|c| c.class.modulus).collect();
        assert!((mods[0] * mods[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_ground_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = Tolerances::default();
        for field in [Field::Quaternion, Field::Complex] {
            for dtype in DynamicalType::ALL {
                for _ in 0..30 {
                    let s = sample(dtype, field, &mut rng);
                    assert_eq!(eigen_classify(&s.matrix, s.model, &t).unwrap(), dtype, "{field}");
                }
            }
        }
    }
}
