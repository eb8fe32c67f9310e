//! Dynamical type from `(a, b, c)`, `G`, `H`, `Δ` and the minimal polynomial.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embed::{embedding, CMatrix6, Field};
use crate::error::Result;
use crate::invariants::{self, on_boundary, Analysis, InvariantRecord, Sign};
use crate::linalg;
use crate::model::{check_member, Model};
use crate::qmatrix::QMatrix3;
use crate::quaternion::SimilarityClass;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynamicalType {
    RegularElliptic,
    ComplexElliptic,
    SimpleElliptic,
    RegularHyperbolic,
    StrictlyHyperbolic,
    ScrewHyperbolic,
    VerticalHeisenbergTranslation,
    NonVerticalHeisenbergTranslation,
    ElliptoTranslation,
    ElliptoParabolic,
    ScrewParabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl DynamicalType {
    pub const ALL: [DynamicalType; 11] = [
        DynamicalType::RegularElliptic,
        DynamicalType::ComplexElliptic,
        DynamicalType::SimpleElliptic,
        DynamicalType::RegularHyperbolic,
        DynamicalType::StrictlyHyperbolic,
        DynamicalType::ScrewHyperbolic,
        DynamicalType::VerticalHeisenbergTranslation,
        DynamicalType::NonVerticalHeisenbergTranslation,
        DynamicalType::ElliptoTranslation,
        DynamicalType::ElliptoParabolic,
        DynamicalType::ScrewParabolic,
    ];

    pub fn family(self) -> Family {
        use DynamicalType::*;
        match self {
            RegularElliptic | ComplexElliptic | SimpleElliptic => Family::Elliptic,
            RegularHyperbolic | StrictlyHyperbolic | ScrewHyperbolic => Family::Hyperbolic,
            _ => Family::Parabolic,
        }
    }

    pub fn is_unipotent(self) -> bool {
        matches!(
            self,
            DynamicalType::VerticalHeisenbergTranslation | DynamicalType::NonVerticalHeisenbergTranslation
        )
    }

    /// The type of the same matrix acting on the complex hyperbolic plane.
    pub fn collapse(self) -> ComplexType {
        use DynamicalType::*;
        match self {
            RegularElliptic => ComplexType::RegularElliptic,
            ComplexElliptic => ComplexType::ComplexElliptic,
            SimpleElliptic => ComplexType::Identity,
            RegularHyperbolic | StrictlyHyperbolic | ScrewHyperbolic => ComplexType::Loxodromic,
            VerticalHeisenbergTranslation | ElliptoTranslation => ComplexType::VerticalHeisenbergTranslation,
            NonVerticalHeisenbergTranslation | ElliptoParabolic => ComplexType::NonVerticalHeisenbergTranslation,
            ScrewParabolic => ComplexType::ScrewParabolic,
        }
    }

    pub fn name(self) -> &'static str {
        use DynamicalType::*;
        match self {
            RegularElliptic => "regular elliptic",
            ComplexElliptic => "complex elliptic",
            SimpleElliptic => "simple elliptic",
            RegularHyperbolic => "regular hyperbolic",
            StrictlyHyperbolic => "strictly hyperbolic",
            ScrewHyperbolic => "screw hyperbolic",
            VerticalHeisenbergTranslation => "vertical Heisenberg translation",
            NonVerticalHeisenbergTranslation => "non-vertical Heisenberg translation",
            ElliptoTranslation => "ellipto-translation",
            ElliptoParabolic => "ellipto-parabolic",
            ScrewParabolic => "screw parabolic",
        }
    }
}

impl fmt::Display for DynamicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for DynamicalType {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        DynamicalType::ALL
            .into_iter()
            .find(|t| {
                let n: String = format!("{t:?}").to_ascii_lowercase();
                let m: String = t.name().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
                n == key || m.to_ascii_lowercase() == key
            })
            .ok_or_else(|| crate::Error::Parse(format!("unknown dynamical type {s:?}")))
    }
}

/// Dynamical types on the complex hyperbolic plane, where central elements act
/// trivially and the hyperbolic kinds are indistinguishable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexType {
    Identity,
    RegularElliptic,
    ComplexElliptic,
    Loxodromic,
    VerticalHeisenbergTranslation,
    NonVerticalHeisenbergTranslation,
    ScrewParabolic,
}

impl ComplexType {
    pub const ALL: [ComplexType; 7] = [
        ComplexType::Identity,
        ComplexType::RegularElliptic,
        ComplexType::ComplexElliptic,
        ComplexType::Loxodromic,
        ComplexType::VerticalHeisenbergTranslation,
        ComplexType::NonVerticalHeisenbergTranslation,
        ComplexType::ScrewParabolic,
    ];
}

impl fmt::Display for ComplexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One similarity class of right eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenClass {
    pub class: SimilarityClass,
    pub multiplicity: usize,
    /// Largest Jordan block.
    pub jordan: usize,
    /// For a semisimple unitary class: whether the form is indefinite on its eigenspace.
    pub negative_type: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub field: Field,
    pub dtype: DynamicalType,
    /// Set for field ℂ.
    pub complex_type: Option<ComplexType>,
    pub invariants: InvariantRecord,
    pub eigen_classes: Vec<EigenClass>,
    pub borderline: bool,
    /// Types reached when thresholds move by a factor of 10 either way.
    pub alternatives: Vec<DynamicalType>,
    pub diagnostics: Vec<String>,
}

impl Classification {
    /// Eigen classes on the unit circle.
    pub fn unitary_classes(&self) -> impl Iterator<Item = &EigenClass> {
        self.eigen_classes.iter().filter(|c| c.class.is_unitary(1e-6))
    }
}

pub fn classify(a: &QMatrix3, m: Model, field: Field, tols: &Tolerances) -> Result<Classification> {
    check_member(a, m, tols.membership)?;
    let emb = embedding(a, field, tols.class)?;
    classify_embedding(&emb, m, field, tols)
}

/// The decision tree applied to an embedding `A_ℂ` or `A_ℝ`.
pub fn classify_embedding(emb: &CMatrix6, m: Model, field: Field, tols: &Tolerances) -> Result<Classification> {
    let an = invariants::analyze_embedding(emb, tols)?;
    let (dtype, mut diagnostics) = decision_tree(&an, tols);
    let mut borderline = an.borderline;
    diagnostics.extend(an.record.resolvent.notes.iter().cloned());
    diagnostics.extend(an.structure.notes.iter().cloned());

    let mut eigen_classes = Vec::new();
    for info in &an.structure.classes {
        let negative_type = if info.class.is_unitary(1e-9) && info.jordan == 1 {
            let (neg, bl) = negative_type(emb, m, info.class, tols);
            if bl {
                borderline = true;
                diagnostics.push(format!("form on the eigenspace of {:?} is nearly degenerate", info.class));
            }
            Some(neg)
        } else {
            None
        };
        eigen_classes.push(EigenClass { class: info.class, multiplicity: info.multiplicity, jordan: info.jordan, negative_type });
    }

    let mut alternatives = Vec::new();
    if borderline {
        for f in [10.0, 0.1] {
            let scaled = Tolerances {
                sign: tols.sign * f,
                root: tols.root * f,
                rank: tols.rank * f,
                ..*tols
            };
            if let Ok(alt) = invariants::analyze_embedding(emb, &scaled) {
                let (t, _) = decision_tree(&alt, &scaled);
                if t != dtype && !alternatives.contains(&t) {
                    alternatives.push(t);
                }
            }
        }
        diagnostics.push(if alternatives.is_empty() {
            "borderline decision, but the type is stable under 10× threshold changes".to_string()
        } else {
            format!("borderline: alternative type(s) {alternatives:?}")
        });
    }

    Ok(Classification {
        field,
        dtype,
        complex_type: (field == Field::Complex).then(|| dtype.collapse()),
        invariants: an.record,
        eigen_classes,
        borderline,
        alternatives,
        diagnostics,
    })
}

pub(crate) fn strictly_identity_gap(a: f64, b: f64, c: f64) -> f64 {
    let lhs = 16.0 * (a + c) * (a + c);
    let r = a * a + 4.0 * b + 8.0;
    let rhs = r * r;
    (lhs - rhs).abs() / lhs.max(rhs).max(1.0)
}

fn decision_tree(an: &Analysis, tols: &Tolerances) -> (DynamicalType, Vec<String>) {
    use DynamicalType::*;
    let rec = &an.record;
    let cubic = &rec.resolvent;
    let md = rec.min_degree;
    let mut notes = Vec::new();
    let t = match cubic.delta_sign {
        Sign::Positive => RegularHyperbolic,
        Sign::Negative => RegularElliptic,
        Sign::Zero if !cubic.g_zero => {
            let t0 = cubic.repeated_root().unwrap_or(f64::NAN);
            let (edge, _) = on_boundary(t0, tols);
            if !edge && t0.abs() > 2.0 {
                let gap = strictly_identity_gap(rec.a, rec.b, rec.c);
                notes.push(format!("double root t0 = {t0}, |16(a+c)^2 - (a^2+4b+8)^2| relative = {gap:e}"));
                if gap <= tols.root {
                    StrictlyHyperbolic
                } else {
                    ScrewHyperbolic
                }
            } else {
                notes.push(format!("double root t0 = {t0} on [-2, 2], min_degree {md}"));
                if md <= 2 {
                    ComplexElliptic
                } else {
                    ScrewParabolic
                }
            }
        }
        Sign::Zero => {
            let near = |x: f64, e: f64| (x - e).abs() <= tols.root * (1.0 + e);
            let unipotent = near(rec.a, 6.0) && near(rec.b, 15.0) && near(rec.c, 20.0);
            match (unipotent, md) {
                (true, 1) => SimpleElliptic,
                (true, 2) => VerticalHeisenbergTranslation,
                (true, _) => NonVerticalHeisenbergTranslation,
                (false, 1) => SimpleElliptic,
                (false, 2) => ElliptoTranslation,
                (false, _) => ElliptoParabolic,
            }
        }
    };
    if md > 3 {
        notes.push(format!("minimal polynomial degree {md} exceeds 3"));
    }
    (t, notes)
}

/// Whether the form restricted to the eigenspace of `class` has a negative direction.
pub(crate) fn negative_type(emb: &CMatrix6, m: Model, class: SimilarityClass, tols: &Tolerances) -> (bool, bool) {
    let md = linalg::to_dynamic(emb);
    let lam = class.representative();
    let shifted = &md - linalg::identity(6) * lam;
    let scale = linalg::norm2(&md) + 1.0;
    let basis = linalg::null_space(&shifted, tols.rank * 100.0 * scale);
    if basis.is_empty() {
        return (false, true);
    }
    let j = m.form_real();
    let form = linalg::CDMatrix::from_fn(6, 6, |r, c| {
        let v = if r / 3 == c / 3 { j[r % 3][c % 3] } else { 0.0 };
        num_complex::Complex64::new(v, 0.0)
    });
    let v = linalg::CDMatrix::from_columns(&basis);
    let gram = v.adjoint() * form * &v;
    let ev = linalg::hermitian_eigenvalues(&gram);
    let min = ev[0];
    let max_abs = ev.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let thr = tols.rank * max_abs.max(1e-300);
    (min < -thr, ev.iter().any(|x| x.abs() <= thr * 10.0))
}

/// Result of applying the theorem's inequality conditions verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiteralVerdict {
    RegularHyperbolic,
    RegularElliptic,
    /// `Δ = 0`, `G ≠ 0` and `a > 6, b > 15, c > 20`.
    HyperbolicBranch,
    /// `Δ ≤ 0` and `|a| < 6, |b| < 15, |c| < 20`.
    EllipticOrParabolicBranch,
    /// `Δ = 0`, `G = 0`, `(a, b, c) = (6, 15, 20)`.
    UnipotentBranch,
    /// `Δ = 0`, `G = 0`, other `(a, b, c)`.
    SimpleEllipticBranch,
    /// No item of the theorem applies.
    Ambiguous,
}

pub fn classify_literal_theorem(inv: &InvariantRecord) -> LiteralVerdict {
    let cubic = &inv.resolvent;
    let (a, b, c) = (inv.a, inv.b, inv.c);
    let tol = inv.tolerance.root;
    match cubic.delta_sign {
        Sign::Positive => LiteralVerdict::RegularHyperbolic,
        Sign::Negative => LiteralVerdict::RegularElliptic,
        Sign::Zero if cubic.g_zero => {
            let near = |x: f64, e: f64| (x - e).abs() <= tol * (1.0 + e);
            if near(a, 6.0) && near(b, 15.0) && near(c, 20.0) {
                LiteralVerdict::UnipotentBranch
            } else {
                LiteralVerdict::SimpleEllipticBranch
            }
        }
        Sign::Zero => {
            if a > 6.0 && b > 15.0 && c > 20.0 {
                LiteralVerdict::HyperbolicBranch
            } else if a.abs() < 6.0 && b.abs() < 15.0 && c.abs() < 20.0 {
                LiteralVerdict::EllipticOrParabolicBranch
            } else {
                LiteralVerdict::Ambiguous
            }
        }
    }
}
