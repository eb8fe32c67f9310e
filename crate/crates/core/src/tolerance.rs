use serde::{Deserialize, Serialize};

/// Thresholds for every floating-point decision made by the pipeline.
///
/// All comparisons are relative to a natural scale of the quantity compared;
/// each field documents that scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max-entry residual of `A* J A - J` accepted as group membership.
    pub membership: f64,
    /// Quaternion and similarity-class equality, relative.
    pub class: f64,
    /// Sign decisions on Δ and G, scaled by `max(1, G², |H|³)`.
    pub sign: f64,
    /// Root clustering of the resolvent cubic, scaled by `1 + max|t|`.
    pub root: f64,
    /// Singular values below `rank * σ_max` count as zero.
    pub rank: f64,
    /// An angle is "real" (0 or π) when `|sin θ| <= angle`.
    pub angle: f64,
    /// Eigenvalue clustering used by the eigenvalue oracle.
    pub oracle_cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: 1e-9,
            class: 1e-9,
            sign: 1e-8,
            root: 1e-7,
            rank: 1e-8,
            angle: 1e-7,
            oracle_cluster: 1e-4,
        }
    }
}

impl Tolerances {
    /// Every threshold set to `tol`, except the oracle's eigenvalue clustering,
    /// which stays loose because defective eigenvalues split at `ε^{1/k}`.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            membership: tol,
            class: tol,
            sign: tol,
            root: tol,
            rank: tol,
            angle: tol,
            ..Self::default()
        }
    }
}
