use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An operation was applied outside its domain (zero quaternion, zero vector, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The matrix does not preserve the Hermitian form of the requested model.
    #[error("not a member of the isometry group: residual {residual:e} exceeds tolerance {tol:e}")]
    NotMember { residual: f64, tol: f64 },

    /// Normal-form parameters outside their admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The parabolic constructor received data whose isometry has a fixed point inside.
    #[error("not parabolic: {0}")]
    NotParabolic(String),

    /// Characteristic polynomial or other derived data is inconsistent with group membership.
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A numerical pipeline finished but its residual is above tolerance.
    #[error("numerical failure: {what} (achieved residual {residual:e})")]
    Numerical { what: String, residual: f64 },

    #[error("classification mismatch: {0}")]
    Mismatch(String),
}
