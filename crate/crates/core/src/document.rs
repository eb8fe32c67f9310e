//! The JSON matrix document read and written by the command-line tool.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::classifier::DynamicalType;
use crate::embed::Field;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, ExactMatrix, ExactQuaternion, Rational};
use crate::model::Model;
use crate::qmatrix::QMatrix3;
use crate::quaternion::{parse_real, parse_terms, Quaternion};
use crate::tolerance::Tolerances;

/// A real number given either as a JSON number or as text such as `"3/4"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(Number),
    Text(String),
}

impl Scalar {
    fn to_f64(&self) -> Result<f64> {
        match self {
            Scalar::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Scalar::Text(s) => parse_real(s.trim()),
        }
    }

    fn to_rational(&self) -> Result<Rational> {
        match self {
            Scalar::Number(n) => parse_rational(&n.to_string()),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

/// One matrix entry: a real number, `"w+xi+yj+zk"` text, or `[w, x, y, z]`
/// (trailing components may be omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(Number),
    Text(String),
    Components(Vec<Scalar>),
}

impl Entry {
    pub fn from_quaternion(q: Quaternion) -> Self {
        let num = |x: f64| Scalar::Number(Number::from_f64(x).unwrap_or_else(|| 0.into()));
        Entry::Components(vec![num(q.w), num(q.x), num(q.y), num(q.z)])
    }

    fn components(&self) -> Result<&[Scalar]> {
        match self {
            Entry::Components(c) if (1..=4).contains(&c.len()) => Ok(c),
            Entry::Components(c) => Err(Error::Parse(format!("quaternion with {} components", c.len()))),
            _ => unreachable!(),
        }
    }

    pub fn to_quaternion(&self) -> Result<Quaternion> {
        match self {
            Entry::Number(_) | Entry::Components(_) => {
                let mut c = [0.0; 4];
                let parts = match self {
                    Entry::Number(n) => vec![Scalar::Number(n.clone())],
                    _ => self.components()?.to_vec(),
                };
                for (slot, s) in c.iter_mut().zip(&parts) {
                    *slot = s.to_f64()?;
                }
                Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
            }
            Entry::Text(s) => Quaternion::from_str(s),
        }
    }

    pub fn to_exact(&self) -> Result<ExactQuaternion> {
        let mut c: [Rational; 4] = Default::default();
        match self {
            Entry::Number(n) => c[0] = parse_rational(&n.to_string())?,
            Entry::Components(_) => {
                for (slot, s) in c.iter_mut().zip(self.components()?) {
                    *slot = s.to_rational()?;
                }
            }
            Entry::Text(s) => {
                for (coef, unit) in parse_terms(s)? {
                    c[unit] = &c[unit] + parse_rational(&coef)?;
                }
            }
        }
        let [w, x, y, z] = c;
        Ok(ExactQuaternion { w, x, y, z })
    }
}

/// Per-document overrides of the default tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_cluster: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            membership: self.membership.unwrap_or(base.membership),
            class: self.class.unwrap_or(base.class),
            sign: self.sign.unwrap_or(base.sign),
            root: self.root.unwrap_or(base.root),
            rank: self.rank.unwrap_or(base.rank),
            angle: self.angle.unwrap_or(base.angle),
            oracle_cluster: self.oracle_cluster.unwrap_or(base.oracle_cluster),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub field: Field,
    pub model: Model,
    pub matrix: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
    /// Ground-truth type, present on sampled documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<DynamicalType>,
}

impl MatrixDocument {
    pub fn new(a: &QMatrix3, field: Field, model: Model) -> Self {
        let matrix = a.0.iter().map(|row| row.iter().map(|&q| Entry::from_quaternion(q)).collect()).collect();
        MatrixDocument { field, model, matrix, tolerance: None, label: None }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    fn shape(&self) -> Result<()> {
        if self.matrix.len() != 3 || self.matrix.iter().any(|r| r.len() != 3) {
            return Err(Error::Parse("matrix must be 3×3".into()));
        }
        Ok(())
    }

    pub fn tolerances(&self, base: Tolerances) -> Tolerances {
        self.tolerance.map_or(base, |o| o.apply(base))
    }

    pub fn to_matrix(&self) -> Result<QMatrix3> {
        self.shape()?;
        let mut a = QMatrix3::zeros();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let q = e.to_quaternion()?;
                if self.field == Field::Complex && (q.y != 0.0 || q.z != 0.0) {
                    return Err(Error::Parse(format!("entry ({i}, {j}) has j or k parts but the field is C")));
                }
                a.0[i][j] = q;
            }
        }
        Ok(a)
    }

    pub fn to_exact(&self) -> Result<ExactMatrix> {
        self.shape()?;
        let mut rows = Vec::with_capacity(3);
        for row in &self.matrix {
            let r = row.iter().map(Entry::to_exact).collect::<Result<Vec<_>>>()?;
            rows.push(<[ExactQuaternion; 3]>::try_from(r).expect("checked shape"));
        }
        Ok(ExactMatrix(<[[ExactQuaternion; 3]; 3]>::try_from(rows).expect("checked shape")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_entries() {
        let doc = MatrixDocument::from_json(
            r#"{"field":"H","model":"siegel","matrix":[[2,0,"0"],[0,"1/2",[0]],[0,0,[-1,0,0,0]]]}"#,
        )
        .unwrap();
        let a = doc.to_matrix().unwrap();
        assert_eq!(a, QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -1.0]]));
        let e = doc.to_exact().unwrap();
        assert_eq!(e.0[1][1].w, Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn quaternion_text() {
        let doc = MatrixDocument::from_json(
            r#"{"field":"H","model":"ball","matrix":[["1",0,0],[0,"j",0],[0,0,"0.5+0.5i-0.5j+1/2k"]]}"#,
        )
        .unwrap();
        let a = doc.to_matrix().unwrap();
        assert_eq!(a.0[1][1], Quaternion::new(0.0, 0.0, 1.0, 0.0));
        assert_eq!(a.0[2][2], Quaternion::new(0.5, 0.5, -0.5, 0.5));
        assert_eq!(doc.to_exact().unwrap().0[2][2].z, Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn rejects_bad_documents() {
        let complex_with_j = r#"{"field":"C","model":"ball","matrix":[["j",0,0],[0,1,0],[0,0,1]]}"#;
        assert!(MatrixDocument::from_json(complex_with_j).unwrap().to_matrix().is_err());
        let short = r#"{"field":"H","model":"ball","matrix":[[1,0],[0,1]]}"#;
        assert!(MatrixDocument::from_json(short).unwrap().to_matrix().is_err());
        assert!(MatrixDocument::from_json(r#"{"field":"Q","model":"ball","matrix":[]}"#).is_err());
        let five = r#"{"field":"H","model":"ball","matrix":[[[1,0,0,0,0],0,0],[0,1,0],[0,0,1]]}"#;
        assert!(MatrixDocument::from_json(five).unwrap().to_matrix().is_err());
    }

    #[test]
    fn round_trip() {
        let a = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 1.0]]);
        let mut doc = MatrixDocument::new(&a, Field::Quaternion, Model::Siegel);
        doc.label = Some(DynamicalType::StrictlyHyperbolic);
        doc.tolerance = Some(ToleranceOverrides { rank: Some(1e-6), ..Default::default() });
        let back = MatrixDocument::from_json(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_matrix().unwrap(), a);
        assert_eq!(back.tolerances(Tolerances::default()).rank, 1e-6);
    }
}
