//! Small quaternionic matrices: 3-vectors and 3×3 matrices over ℍ, plus
//! Gaussian elimination for ranks and inverses of arbitrary shape.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

pub type QVector3 = [Quaternion; 3];

/// Multiplies a vector on the right by a scalar, `v λ`.
pub fn vec_scale_right(v: &QVector3, s: Quaternion) -> QVector3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn vec_add(a: &QVector3, b: &QVector3) -> QVector3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn vec_sub(a: &QVector3, b: &QVector3) -> QVector3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn vec_max_abs(v: &QVector3) -> f64 {
    v.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QMatrix3(pub [[Quaternion; 3]; 3]);

impl QMatrix3 {
    pub fn zeros() -> Self {
        QMatrix3([[Quaternion::ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([Quaternion::ONE; 3])
    }

    pub fn diag(d: [Quaternion; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, q) in d.into_iter().enumerate() {
            m.0[i][i] = q;
        }
        m
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = Quaternion::real(rows[i][j]);
            }
        }
        m
    }

    pub fn from_columns(cols: [QVector3; 3]) -> Self {
        let mut m = Self::zeros();
        for (j, c) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][j] = c[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> QVector3 {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn apply(&self, v: &QVector3) -> QVector3 {
        let mut out = [Quaternion::ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o += self.0[i][j] * *vj;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|q| *q = q.scale(s));
        m
    }

    /// Max over entries of the max absolute real component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    /// True when every entry has vanishing `j`, `k` parts.
    pub fn is_complex(&self, tol: f64) -> bool {
        self.0.iter().flatten().all(|q| q.is_complex(tol))
    }

    pub fn approx_eq(&self, other: &QMatrix3, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    /// Numerical inverse by Gauss–Jordan elimination over ℍ.
    pub fn inverse(&self) -> Result<Self> {
        let a: Vec<Vec<Quaternion>> = self.0.iter().map(|r| r.to_vec()).collect();
        let inv = invert(a)?;
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = inv[i][j];
            }
        }
        Ok(m)
    }
}

impl Index<(usize, usize)> for QMatrix3 {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.0[i][j]
    }
}

impl Mul for QMatrix3 {
    type Output = QMatrix3;
    fn mul(self, o: QMatrix3) -> QMatrix3 {
        let mut m = QMatrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Quaternion::ZERO;
                for k in 0..3 {
                    acc += self.0[i][k] * o.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }
}

impl Add for QMatrix3 {
    type Output = QMatrix3;
    fn add(self, o: QMatrix3) -> QMatrix3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }
}

impl Sub for QMatrix3 {
    type Output = QMatrix3;
    fn sub(self, o: QMatrix3) -> QMatrix3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] -= o.0[i][j];
            }
        }
        m
    }
}

/// Row echelon reduction in place, returning the rank.
///
/// Rows are combined as `r_i ← r_i − (a_ip a_pp⁻¹) r_p`, which keeps the
/// solution set of `M η = b` for a right-linear unknown `η`. The pivot is the
/// largest-modulus entry in the column; entries below `tol · max|a|` are zero.
pub fn rank(mut rows: Vec<Vec<Quaternion>>, tol: f64) -> usize {
    let n_rows = rows.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = rows[0].len();
    let scale = rows
        .iter()
        .flatten()
        .map(|q| q.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let zero = tol * scale;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let (p, best) = (r..n_rows)
            .map(|i| (i, rows[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= zero {
            continue;
        }
        rows.swap(r, p);
        let pivot_inv = rows[r][c].inv_unchecked();
        for i in (r + 1)..n_rows {
            let m = rows[i][c] * pivot_inv;
            for k in c..n_cols {
                let t = m * rows[r][k];
                rows[i][k] -= t;
            }
        }
        r += 1;
    }
    r
}

fn invert(mut a: Vec<Vec<Quaternion>>) -> Result<Vec<Vec<Quaternion>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Quaternion>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Quaternion::ONE } else { Quaternion::ZERO }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm()))
            .unwrap();
        if a[p][c].norm() == 0.0 {
            return Err(Error::Domain("singular quaternionic matrix".into()));
        }
        a.swap(c, p);
        inv.swap(c, p);
        // scale pivot row on the left so the pivot becomes 1
        let s = a[c][c].inv_unchecked();
        for k in 0..n {
            a[c][k] = s * a[c][k];
            inv[c][k] = s * inv[c][k];
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let m = a[i][c];
            for k in 0..n {
                let (t, u) = (m * a[c][k], m * inv[c][k]);
                a[i][k] -= t;
                inv[i][k] -= u;
            }
        }
    }
    Ok(inv)
}
