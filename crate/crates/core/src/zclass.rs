//! z-classes: conjugacy classes of centralizers. A label is the pair
//! `(family, case_id)`; the centralizer string is for display.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classifier::{Classification, DynamicalType, EigenClass, Family};
use crate::embed::Field;
use crate::error::{Error, Result};
use crate::normal_forms::{make_elliptic, make_hyperbolic, make_parabolic, NormalForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZFamily {
    Elliptic,
    Hyperbolic,
    Unipotent,
    ParabolicNonUnipotent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZClassLabel {
    pub family: ZFamily,
    pub case_id: String,
    pub centralizer: String,
}

impl PartialEq for ZClassLabel {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.case_id == other.case_id
    }
}

impl Eq for ZClassLabel {}

impl fmt::Display for ZClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{} [{}]", self.family, self.case_id, self.centralizer)
    }
}

fn label(family: ZFamily, case_id: &str, centralizer: &str) -> ZClassLabel {
    ZClassLabel { family, case_id: case_id.into(), centralizer: centralizer.into() }
}

fn real_tag(real: bool) -> &'static str {
    if real {
        "real"
    } else {
        "nonreal"
    }
}

/// `Sp(1)` or `S¹`: the centralizer of a unit eigenvalue in `U(1; ℍ)`.
fn unit_centralizer(real: bool) -> &'static str {
    if real {
        "S³"
    } else {
        "S¹"
    }
}

fn mismatch(c: &Classification, what: &str) -> Error {
    Error::Mismatch(format!("{} with eigen classes {:?}: {what}", c.dtype, c.eigen_classes))
}

/// The z-class of a classified element.
pub fn zclass_label(c: &Classification) -> Result<ZClassLabel> {
    let tol = c.invariants.tolerance.angle;
    let is_real = |e: &EigenClass| e.class.is_real(tol);
    let quaternionic = c.field == Field::Quaternion;
    let unit: Vec<&EigenClass> = c.unitary_classes().collect();
    match c.dtype.family() {
        Family::Elliptic => {
            let neg = unit
                .iter()
                .find(|e| e.negative_type == Some(true))
                .ok_or_else(|| mismatch(c, "no class of negative type"))?;
            match unit.len() {
                3 => {
                    if !quaternionic {
                        return Ok(label(ZFamily::Elliptic, "distinct", "S¹ × S¹ × S¹"));
                    }
                    let reals = unit.iter().filter(|e| is_real(e)).count();
                    Ok(match reals {
                        0 => label(ZFamily::Elliptic, "distinct.r0", "S¹ × S¹ × S¹"),
                        1 => label(ZFamily::Elliptic, "distinct.r1", "S¹ × S¹ × S³"),
                        _ => label(ZFamily::Elliptic, "distinct.r2", "S³ × S³ × S¹"),
                    })
                }
                1 => Ok(match (quaternionic, is_real(neg)) {
                    (false, _) => label(ZFamily::Elliptic, "scalar", "U(2,1)"),
                    (true, false) => label(ZFamily::Elliptic, "scalar.nonreal", "U(2,1)"),
                    (true, true) => label(ZFamily::Elliptic, "scalar.real", "Sp(2,1)"),
                }),
                2 => {
                    if neg.multiplicity == 2 {
                        // the repeated class carries the negative vector: indefinite pair
                        return Ok(match (quaternionic, is_real(neg)) {
                            (false, _) => label(ZFamily::Elliptic, "indefinite-pair", "U(1,1) × S¹"),
                            (true, false) => label(ZFamily::Elliptic, "indefinite-pair.theta-nonreal", "U(1,1) × S¹"),
                            (true, true) => label(ZFamily::Elliptic, "indefinite-pair.theta-real", "Sp(1,1) × S¹"),
                        });
                    }
                    let pair = unit
                        .iter()
                        .find(|e| e.multiplicity == 2)
                        .ok_or_else(|| mismatch(c, "no repeated class"))?;
                    if !quaternionic {
                        return Ok(label(ZFamily::Elliptic, "positive-pair", "S¹ × U(2)"));
                    }
                    let (tr, pr) = (is_real(neg), is_real(pair));
                    let id = format!("positive-pair.theta-{}.phi-{}", real_tag(tr), real_tag(pr));
                    let cent = format!("{} × {}", unit_centralizer(tr), if pr { "Sp(2)" } else { "U(2)" });
                    Ok(label(ZFamily::Elliptic, &id, &cent))
                }
                _ => Err(mismatch(c, "expected one to three unit classes")),
            }
        }
        Family::Hyperbolic => {
            if !quaternionic {
                return Ok(label(ZFamily::Hyperbolic, "loxodromic", "GL(1,ℂ) × S¹"));
            }
            let off = c
                .eigen_classes
                .iter()
                .find(|e| !e.class.is_unitary(1e-6))
                .ok_or_else(|| mismatch(c, "no class off the unit circle"))?;
            let rot = unit.first().ok_or_else(|| mismatch(c, "no unit class"))?;
            let beta = if !is_real(off) {
                "interior"
            } else if off.class.angle.cos() > 0.0 {
                "zero"
            } else {
                "pi"
            };
            let tr = is_real(rot);
            let id = format!("beta-{beta}.theta-{}", real_tag(tr));
            let block = if beta == "interior" { "GL(1,ℂ)" } else { "GL(1,ℍ)" };
            Ok(label(ZFamily::Hyperbolic, &id, &format!("{block} × {}", unit_centralizer(tr))))
        }
        Family::Parabolic => {
            use DynamicalType::*;
            let jordan = c
                .eigen_classes
                .iter()
                .find(|e| e.jordan >= 2)
                .ok_or_else(|| mismatch(c, "no Jordan block"))?;
            let theta_real = is_real(jordan);
            let u = ZFamily::Unipotent;
            let p = ZFamily::ParabolicNonUnipotent;
            Ok(match c.dtype {
                VerticalHeisenbergTranslation => label(u, "translation", "G∞ ∩ {a₁ ∈ ℂ}"),
                NonVerticalHeisenbergTranslation => label(u, "strictly-parabolic", "G∞ ∩ {a₉ = a a₁ a⁻¹}"),
                ElliptoTranslation if !quaternionic => label(p, "ellipto-translation", "G∞ ∩ {a₁ ∈ ℂ}"),
                ElliptoTranslation if theta_real => label(p, "ellipto-translation.theta-pi", "G∞ ∩ {a₁ ∈ ℂ}"),
                ElliptoTranslation => label(p, "ellipto-translation.theta-nonreal", "G∞ ∩ U(2,1)"),
                ElliptoParabolic if theta_real => label(p, "ellipto-parabolic.theta-pi", "G∞ ∩ {a₉ = g a₁ g⁻¹}"),
                ElliptoParabolic => label(p, "ellipto-parabolic.theta-nonreal", "U(2,1) ∩ {a₁ = a₅ = a₉} ∪ twisted"),
                ScrewParabolic if !quaternionic => label(p, "screw", "U(2,1) ∩ {a₇ = a₆ = 0}"),
                ScrewParabolic => {
                    let other = unit
                        .iter()
                        .find(|e| e.jordan == 1)
                        .ok_or_else(|| mismatch(c, "no rotation class"))?;
                    let phi_real = is_real(other);
                    let id = format!("screw.theta-{}.phi-{}", real_tag(theta_real), real_tag(phi_real));
                    let cent = match (theta_real, phi_real) {
                        (true, true) => "G∞ ∩ {a₆ = a₇ = 0, a₁ ∈ ℂ}",
                        (true, false) => "G∞ ∩ {a₆ = a₇ = 0, a₁, a₉ ∈ ℂ}",
                        (false, true) => "G∞ ∩ {a₆ = a₇ = 0, a₁, a₄ ∈ ℂ}",
                        (false, false) => "U(2,1) ∩ {a₆ = a₇ = 0}",
                    };
                    label(p, &id, cent)
                }
                _ => return Err(mismatch(c, "not a parabolic type")),
            })
        }
    }
}

/// A z-class with a normal form that realizes it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZClassEntry {
    pub label: ZClassLabel,
    pub dtype: DynamicalType,
    pub representative: NormalForm,
}

enum Rep {
    E(f64, f64, f64),
    L(f64, f64),
    /// `(θ, φ, Im(e^{−iθ} d), g)`
    P(f64, f64, f64, f64),
}

fn build(rep: &Rep, field: Field) -> NormalForm {
    let built = match *rep {
        Rep::E(t, p, s) => make_elliptic(t, p, s, field),
        Rep::L(beta, theta) => make_hyperbolic(2.0, beta, theta, field),
        Rep::P(t, p, s, g) => {
            let g = Complex64::new(g, 0.0);
            let d = Complex64::from_polar(1.0, t) * Complex64::new(0.5 * g.norm_sqr(), s);
            make_parabolic(t, p, d, g, field)
        }
    };
    built.expect("representative parameters are admissible")
}

/// Every z-class over the field, 27 for ℍ and 11 for ℂ, each with a representative.
pub fn enumerate_zclasses(field: Field) -> Vec<ZClassEntry> {
    use DynamicalType::*;
    use Rep::*;
    let (h, t3) = (PI / 2.0, PI / 3.0);
    let reps: Vec<(DynamicalType, Rep)> = match field {
        Field::Quaternion => vec![
            (RegularElliptic, E(h, t3, 2.0 * t3)),
            (RegularElliptic, E(h, t3, 0.0)),
            (RegularElliptic, E(h, 0.0, PI)),
            (SimpleElliptic, E(1.0, 1.0, 1.0)),
            (SimpleElliptic, E(0.0, 0.0, 0.0)),
            (ComplexElliptic, E(h, t3, t3)),
            (ComplexElliptic, E(h, 0.0, 0.0)),
            (ComplexElliptic, E(0.0, t3, t3)),
            (ComplexElliptic, E(0.0, PI, PI)),
            (ComplexElliptic, E(t3, t3, h)),
            (ComplexElliptic, E(PI, PI, h)),
            (StrictlyHyperbolic, L(0.0, 0.0)),
            (ScrewHyperbolic, L(0.0, h)),
            (StrictlyHyperbolic, L(PI, PI)),
            (ScrewHyperbolic, L(PI, h)),
            (RegularHyperbolic, L(t3, 0.0)),
            (RegularHyperbolic, L(t3, h)),
            (VerticalHeisenbergTranslation, P(0.0, 0.0, 1.0, 0.0)),
            (NonVerticalHeisenbergTranslation, P(0.0, 0.0, 1.0, 1.0)),
            (ElliptoTranslation, P(PI, PI, 1.0, 0.0)),
            (ElliptoTranslation, P(h, h, 1.0, 0.0)),
            (ElliptoParabolic, P(PI, PI, 1.0, 1.0)),
            (ElliptoParabolic, P(h, h, 1.0, 1.0)),
            (ScrewParabolic, P(0.0, PI, 1.0, 0.0)),
            (ScrewParabolic, P(0.0, h, 1.0, 0.0)),
            (ScrewParabolic, P(h, 0.0, 1.0, 0.0)),
            (ScrewParabolic, P(t3, h, 1.0, 0.0)),
        ],
        Field::Complex => vec![
            (RegularElliptic, E(h, t3, 2.0 * t3)),
            (SimpleElliptic, E(1.0, 1.0, 1.0)),
            (ComplexElliptic, E(h, t3, t3)),
            (ComplexElliptic, E(t3, t3, h)),
            (RegularHyperbolic, L(t3, h)),
            (VerticalHeisenbergTranslation, P(0.0, 0.0, 1.0, 0.0)),
            (NonVerticalHeisenbergTranslation, P(0.0, 0.0, 1.0, 1.0)),
            (ElliptoTranslation, P(h, h, 1.0, 0.0)),
            (ElliptoParabolic, P(PI, PI, 1.0, 1.0)),
            (ElliptoParabolic, P(h, h, 1.0, 1.0)),
            (ScrewParabolic, P(t3, h, 1.0, 0.0)),
        ],
    };
    reps.into_iter()
        .map(|(dtype, rep)| {
            let representative = build(&rep, field);
            let c = crate::classifier::classify(
                &representative.matrix,
                representative.model,
                field,
                &crate::Tolerances::default(),
            )
            .expect("representatives are members");
            let label = zclass_label(&c).expect("representatives have consistent classes");
            ZClassEntry { label, dtype, representative }
        })
        .collect()
}
