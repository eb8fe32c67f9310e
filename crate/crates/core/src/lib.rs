//! Classification of isometries of the complex and quaternionic hyperbolic plane.

pub mod classifier;
pub mod document;
pub mod embed;
pub mod error;
pub mod exact;
pub mod invariants;
mod linalg;
pub mod model;
pub mod normal_forms;
pub mod oracle;
pub mod qmatrix;
pub mod quaternion;
pub mod tolerance;
pub mod zclass;

pub use classifier::{classify, Classification, ComplexType, DynamicalType};
pub use document::MatrixDocument;
pub use embed::Field;
pub use error::{Error, Result};
pub use invariants::InvariantRecord;
pub use model::{Location, Model, ProjectivePoint, StabilizerShape};
pub use qmatrix::{QMatrix3, QVector3};
pub use quaternion::{Quaternion, SimilarityClass};
pub use tolerance::Tolerances;
pub use zclass::{zclass_label, ZClassLabel};
