//! Linear embeddings `M₃(ℍ) → M₆(ℂ)` and `M₃(ℂ) → M₆(ℝ)`.
//!
//! With `A = A₁ + jA₂` (`A₁, A₂` complex), `A_ℂ = [[A₁, −Ā₂], [A₂, Ā₁]]`; a
//! quaternionic column `v₁ + jv₂` corresponds to `(v₁; v₂)`. With
//! `A = A₁ + A₂i` (`A₁, A₂` real), `A_ℝ = [[A₁, −A₂], [A₂, A₁]]`.

use std::fmt;

use nalgebra::{Matrix3, Matrix6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix3;
use crate::quaternion::Quaternion;

pub type CMatrix6 = Matrix6<Complex64>;
pub type RMatrix6 = Matrix6<f64>;
pub type CMatrix3 = Matrix3<Complex64>;

/// Scalar field of the hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "H")]
    Quaternion,
    #[serde(rename = "C")]
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Quaternion => "H",
            Field::Complex => "C",
        })
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" | "quaternion" => Ok(Field::Quaternion),
            "C" | "c" | "complex" => Ok(Field::Complex),
            _ => Err(Error::Parse(format!("unknown field {s:?}"))),
        }
    }
}

/// `A_ℂ` over ℍ, or `A_ℝ` viewed as a complex matrix over ℂ.
pub fn embedding(a: &QMatrix3, field: Field, tol: f64) -> Result<CMatrix6> {
    match field {
        Field::Quaternion => Ok(complexify(a)),
        Field::Complex => Ok(realify(a, tol)?.map(|x| Complex64::new(x, 0.0))),
    }
}

pub fn complexify(a: &QMatrix3) -> CMatrix6 {
    let mut m = CMatrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let (z1, z2) = a.0[i][j].split();
            m[(i, j)] = z1;
            m[(i, j + 3)] = -z2.conj();
            m[(i + 3, j)] = z2;
            m[(i + 3, j + 3)] = z1.conj();
        }
    }
    m
}

/// Inverse of [`complexify`] on matrices of the right block shape.
pub fn decomplexify(m: &CMatrix6) -> QMatrix3 {
    let mut a = QMatrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            a.0[i][j] = Quaternion::from_split(m[(i, j)], m[(i + 3, j)]);
        }
    }
    a
}

/// The complex 3×3 matrix of a quaternionic matrix whose entries are complex.
pub fn to_complex3(a: &QMatrix3, tol: f64) -> Result<CMatrix3> {
    if !a.is_complex(tol) {
        return Err(Error::Domain("matrix has j/k components".into()));
    }
    Ok(CMatrix3::from_fn(|i, j| a.0[i][j].complex_part()))
}

pub fn from_complex3(m: &CMatrix3) -> QMatrix3 {
    let mut a = QMatrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            a.0[i][j] = Quaternion::from_complex(m[(i, j)]);
        }
    }
    a
}

pub fn realify(a: &QMatrix3, tol: f64) -> Result<RMatrix6> {
    Ok(realify_complex(&to_complex3(a, tol)?))
}

pub fn realify_complex(a: &CMatrix3) -> RMatrix6 {
    let mut m = RMatrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let z = a[(i, j)];
            m[(i, j)] = z.re;
            m[(i, j + 3)] = -z.im;
            m[(i + 3, j)] = z.im;
            m[(i + 3, j + 3)] = z.re;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complexify_examples() {
        assert_eq!(complexify(&QMatrix3::identity()), CMatrix6::identity());
        let jj = complexify(&QMatrix3::diag([Quaternion::J; 3]));
        for i in 0..3 {
            assert_eq!(jj[(i, i + 3)], c(-1.0, 0.0));
            assert_eq!(jj[(i + 3, i)], c(1.0, 0.0));
        }
        assert_eq!(jj.iter().filter(|z| z.norm() != 0.0).count(), 6);
        let di = complexify(&QMatrix3::diag([Quaternion::I, Quaternion::ONE, Quaternion::ONE]));
        let expect = [c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(di, CMatrix6::from_diagonal(&nalgebra::Vector6::from_column_slice(&expect)));
    }

    #[test]
    fn realify_examples() {
        assert_eq!(realify(&QMatrix3::identity(), 1e-12).unwrap(), RMatrix6::identity());
        let ii = realify(&QMatrix3::diag([Quaternion::I; 3]), 1e-12).unwrap();
        for i in 0..3 {
            assert_eq!(ii[(i, i + 3)], -1.0);
            assert_eq!(ii[(i + 3, i)], 1.0);
        }
        let mut e = QMatrix3::zeros();
        e.0[0][1] = Quaternion::I;
        let r = realify(&e, 1e-12).unwrap();
        assert_eq!(r[(3, 1)], 1.0);
        assert_eq!(r[(0, 4)], -1.0);
        assert_eq!(r.iter().filter(|x| **x != 0.0).count(), 2);
        assert!(realify(&QMatrix3::diag([Quaternion::J; 3]), 1e-12).is_err());
    }

    fn arb_q() -> impl Strategy<Value = Quaternion> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    fn arb_m() -> impl Strategy<Value = QMatrix3> {
        proptest::array::uniform3(proptest::array::uniform3(arb_q())).prop_map(QMatrix3)
    }

    proptest! {
        #[test]
        fn complexify_is_multiplicative(a in arb_m(), b in arb_m()) {
            let lhs = complexify(&(a * b));
            let rhs = complexify(&a) * complexify(&b);
            prop_assert!((lhs - rhs).iter().all(|z| z.norm() <= 1e-12 * 64.0));
        }

        #[test]
        fn complexify_respects_adjoint(a in arb_m()) {
            prop_assert_eq!(complexify(&a.adjoint()), complexify(&a).adjoint());
            prop_assert_eq!(decomplexify(&complexify(&a)), a);
        }

        #[test]
        fn realify_is_multiplicative(a in arb_m(), b in arb_m()) {
            let (a, b) = (flatten(a), flatten(b));
            let lhs = realify(&(a * b), 1e-12).unwrap();
            let rhs = realify(&a, 1e-12).unwrap() * realify(&b, 1e-12).unwrap();
            prop_assert!((lhs - rhs).amax() <= 1e-12 * 64.0);
        }
    }

    fn flatten(mut a: QMatrix3) -> QMatrix3 {
        a.0.iter_mut().flatten().for_each(|q| *q = Quaternion::from_complex(q.complex_part()));
        a
    }
}
