//! Exact arithmetic over ℚ and ℚ(i) for matrices with rational entries.
//!
//! When the input is exact, every sign decision here is exact: the
//! characteristic polynomial comes from a trace recursion, and minimal
//! polynomial exponents come from ranks computed by elimination over ℚ(i).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::classifier::DynamicalType;
use crate::error::{Error, Result};
use crate::invariants::Sign;
use crate::model::Model;
use crate::qmatrix::QMatrix3;

pub type Rational = BigRational;

/// Parses `"3"`, `"-1/2"`, `"0.25"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.starts_with(['+', '-']) || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() { format!("{digits}0") } else { digits };
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10u8);
    Ok(if shift >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-shift) as usize))
    })
}

/// The exact binary value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite entry {x}")))
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// An element of ℚ(i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gauss {
    pub re: Rational,
    pub im: Rational,
}

impl Gauss {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gauss { re, im }
    }
    pub fn real(re: Rational) -> Self {
        Gauss { re, im: Rational::zero() }
    }
    pub fn zero() -> Self {
        Gauss::real(Rational::zero())
    }
    pub fn one() -> Self {
        Gauss::real(Rational::one())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -&self.im)
    }
    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }
    pub fn sub(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }
    pub fn neg(&self) -> Gauss {
        Gauss::new(-&self.re, -&self.im)
    }
    pub fn mul(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    pub fn scale(&self, r: &Rational) -> Gauss {
        Gauss::new(&self.re * r, &self.im * r)
    }
    pub fn inv(&self) -> Gauss {
        let n = &self.re * &self.re + &self.im * &self.im;
        Gauss::new(&self.re / &n, -&self.im / &n)
    }
}

/// A square matrix over ℚ(i), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussMatrix {
    n: usize,
    data: Vec<Gauss>,
}

impl GaussMatrix {
    pub fn zeros(n: usize) -> Self {
        GaussMatrix { n, data: vec![Gauss::zero(); n * n] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Gauss::one();
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> &Gauss {
        &self.data[i * self.n + j]
    }
    fn set(&mut self, i: usize, j: usize, v: Gauss) {
        self.data[i * self.n + j] = v;
    }
    pub fn mul(&self, o: &GaussMatrix) -> GaussMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Gauss::zero();
                for k in 0..n {
                    s = s.add(&self.get(i, k).mul(o.get(k, j)));
                }
                out.set(i, j, s);
            }
        }
        out
    }
    pub fn adjoint(&self) -> GaussMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }
    pub fn trace(&self) -> Gauss {
        (0..self.n).fold(Gauss::zero(), |s, i| s.add(self.get(i, i)))
    }
    /// `self + c·I`.
    pub fn add_scalar(&self, c: &Gauss) -> GaussMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            let v = out.get(i, i).add(c);
            out.set(i, i, v);
        }
        out
    }
    pub fn scale(&self, c: &Gauss) -> GaussMatrix {
        GaussMatrix { n: self.n, data: self.data.iter().map(|x| x.mul(c)).collect() }
    }
    pub fn sub(&self, o: &GaussMatrix) -> GaussMatrix {
        GaussMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(x, y)| x.sub(y)).collect() }
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Gauss::is_zero)
    }

    /// Rank by fraction-exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut m = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| !m[r * n + col].is_zero()) else {
                continue;
            };
            for k in 0..n {
                m.swap(rank * n + k, p * n + k);
            }
            let inv = m[rank * n + col].inv();
            for r in rank + 1..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let f = m[r * n + col].mul(&inv);
                for k in col..n {
                    let v = m[r * n + k].sub(&f.mul(&m[rank * n + k]));
                    m[r * n + k] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Coefficients of `det(xI − M)`, lowest degree first, by the
    /// Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Gauss> {
        let n = self.n;
        let mut c = vec![Gauss::zero(); n + 1];
        c[n] = Gauss::one();
        let mut mk = Self::zeros(n);
        for k in 1..=n {
            mk = self.mul(&mk).add_scalar(&c[n - k + 1]);
            let t = self.mul(&mk).trace();
            c[n - k] = t.scale(&Rational::new((-1).into(), (k as i64).into()));
        }
        c
    }
}

/// A quaternion with rational components `w + xi + yj + zk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactQuaternion {
    pub w: Rational,
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl ExactQuaternion {
    pub fn from_f64(q: crate::quaternion::Quaternion) -> Result<Self> {
        Ok(ExactQuaternion {
            w: rational_from_f64(q.w)?,
            x: rational_from_f64(q.x)?,
            y: rational_from_f64(q.y)?,
            z: rational_from_f64(q.z)?,
        })
    }

    pub fn zero() -> Self {
        ExactQuaternion { w: Rational::zero(), x: Rational::zero(), y: Rational::zero(), z: Rational::zero() }
    }

    pub fn real(w: Rational) -> Self {
        ExactQuaternion { w, ..Self::zero() }
    }

    pub fn add(&self, o: &Self) -> Self {
        ExactQuaternion { w: &self.w + &o.w, x: &self.x + &o.x, y: &self.y + &o.y, z: &self.z + &o.z }
    }

    /// Hamilton product.
    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        ExactQuaternion {
            w: &a.w * &b.w - &a.x * &b.x - &a.y * &b.y - &a.z * &b.z,
            x: &a.w * &b.x + &a.x * &b.w + &a.y * &b.z - &a.z * &b.y,
            y: &a.w * &b.y - &a.x * &b.z + &a.y * &b.w + &a.z * &b.x,
            z: &a.w * &b.z + &a.x * &b.y - &a.y * &b.x + &a.z * &b.w,
        }
    }

    /// `q = z1 + j z2` with `z1 = w + xi`, `z2 = y − zi`.
    pub fn split(&self) -> (Gauss, Gauss) {
        (Gauss::new(self.w.clone(), self.x.clone()), Gauss::new(self.y.clone(), -&self.z))
    }

    pub fn to_f64(&self) -> crate::quaternion::Quaternion {
        crate::quaternion::Quaternion::new(to_f64(&self.w), to_f64(&self.x), to_f64(&self.y), to_f64(&self.z))
    }
}

/// A 3×3 quaternionic matrix with rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix(pub [[ExactQuaternion; 3]; 3]);

impl ExactMatrix {
    pub fn from_f64(a: &QMatrix3) -> Result<Self> {
        let mut rows = Vec::with_capacity(3);
        for row in &a.0 {
            let r: Vec<ExactQuaternion> = row.iter().map(|&q| ExactQuaternion::from_f64(q)).collect::<Result<_>>()?;
            rows.push(<[ExactQuaternion; 3]>::try_from(r).expect("three entries"));
        }
        Ok(ExactMatrix(<[[ExactQuaternion; 3]; 3]>::try_from(rows).expect("three rows")))
    }

    pub fn to_f64(&self) -> QMatrix3 {
        let mut m = QMatrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j].to_f64();
            }
        }
        m
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        let entry = |i: usize, j: usize| {
            (0..3).fold(ExactQuaternion::zero(), |s, k| s.add(&self.0[i][k].mul(&o.0[k][j])))
        };
        ExactMatrix([0, 1, 2].map(|i| [0, 1, 2].map(|j| entry(i, j))))
    }

    pub fn complexify(&self) -> GaussMatrix {
        let mut m = GaussMatrix::zeros(6);
        for i in 0..3 {
            for j in 0..3 {
                let (z1, z2) = self.0[i][j].split();
                m.set(i, j + 3, z2.conj().neg());
                m.set(i + 3, j + 3, z1.conj());
                m.set(i + 3, j, z2);
                m.set(i, j, z1);
            }
        }
        m
    }
}

fn form(m: Model) -> GaussMatrix {
    let j = m.form_real();
    let mut f = GaussMatrix::zeros(6);
    for r in 0..6 {
        for c in 0..6 {
            if r / 3 == c / 3 && j[r % 3][c % 3] != 0.0 {
                f.set(r, c, Gauss::real(rational_from_f64(j[r % 3][c % 3]).expect("finite")));
            }
        }
    }
    f
}

/// Whether `A_ℂ* (J ⊕ J) A_ℂ = J ⊕ J` holds exactly.
pub fn is_member(a: &ExactMatrix, m: Model) -> bool {
    let c = a.complexify();
    let f = form(m);
    c.adjoint().mul(&f).mul(&c) == f
}

/// Exact invariants and the dynamical type they determine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactInvariants {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub g: Rational,
    pub h: Rational,
    pub delta: Rational,
    /// `R(g, g″)` of the resolvent cubic.
    pub resultant: Rational,
    pub min_degree: usize,
    pub dtype: DynamicalType,
}

fn sign(r: &Rational) -> Sign {
    if r.is_zero() {
        Sign::Zero
    } else if r.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

impl ExactInvariants {
    pub fn delta_sign(&self) -> Sign {
        sign(&self.delta)
    }
    pub fn g_sign(&self) -> Sign {
        sign(&self.g)
    }
    pub fn to_f64(&self) -> [f64; 6] {
        [&self.a, &self.b, &self.c, &self.g, &self.h, &self.delta].map(to_f64)
    }
}

impl fmt::Display for ExactInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a = {}, b = {}, c = {}, G = {}, H = {}, Δ = {}, min_degree {}, {}",
            self.a, self.b, self.c, self.g, self.h, self.delta, self.min_degree, self.dtype
        )
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `g(t) = t³ − a t² + (b − 3) t − (c − 2a)`.
fn cubic_at(a: &Rational, b: &Rational, c: &Rational, t: &Rational) -> Rational {
    ((t - a) * t + (b - int(3))) * t - (c - a * int(2))
}

/// Exponent of `q` in the minimal polynomial of `m`, where `q(M)` has
/// `eig_count` eigenvalues counted with multiplicity.
fn exponent(m: &GaussMatrix, q: &GaussMatrix, eig_count: usize) -> usize {
    let target = m.n - eig_count;
    let mut pow = q.clone();
    for k in 1..=eig_count {
        if pow.rank() <= target {
            return k;
        }
        pow = pow.mul(q);
    }
    eig_count
}

/// Minimal-polynomial exponents for a rational root `t` of the resolvent
/// cubic of multiplicity `mult`, summed in the same way as the floating
/// classifier: one term per real irreducible factor.
fn root_exponent(m: &GaussMatrix, t: &Rational, mult: usize) -> usize {
    let two = int(2);
    if t.abs() == two {
        let q = m.add_scalar(&Gauss::real(-t / &two));
        return exponent(m, &q, 2 * mult);
    }
    // x² − t x + 1
    let q = m.mul(m).sub(&m.scale(&Gauss::real(t.clone()))).add_scalar(&Gauss::one());
    let k = exponent(m, &q, 2 * mult);
    if t.abs() > two {
        // the real factors x − r and x − 1/r share the exponent
        2 * k
    } else {
        k
    }
}

/// The full exact pipeline. Fails with `NotMember` unless membership holds
/// exactly, and with `Malformed` if the characteristic polynomial is not real
/// and palindromic.
pub fn exact_invariants(a: &ExactMatrix, m: Model) -> Result<ExactInvariants> {
    if !is_member(a, m) {
        let residual = crate::model::membership_residual(&a.to_f64(), m);
        return Err(Error::NotMember { residual, tol: 0.0 });
    }
    let emb = a.complexify();
    let p = emb.char_poly();
    if p.iter().any(|c| !c.im.is_zero()) || p[1] != p[5] || p[2] != p[4] || !p[0].re.is_one() {
        return Err(Error::Malformed("characteristic polynomial is not real and palindromic".into()));
    }
    let (ca, cb, cc) = (-&p[5].re, p[4].re.clone(), -&p[3].re);
    let g = int(27) * (&ca - &cc) + int(9) * &ca * &cb - int(2) * &ca * &ca * &ca;
    let h = int(3) * (&cb - int(3)) - &ca * &ca;
    let delta = &g * &g + int(4) * &h * &h * &h;
    let resultant = int(-216) * cubic_at(&ca, &cb, &cc, &(&ca / int(3)));

    use DynamicalType::*;
    let (dtype, min_degree) = match sign(&delta) {
        Sign::Positive => (RegularHyperbolic, 0),
        Sign::Negative => (RegularElliptic, 0),
        Sign::Zero if !g.is_zero() => {
            // monic cubic t³ + p2 t² + p1 t + p0 with a double root
            let (p2, p1, p0) = (-&ca, &cb - int(3), -(&cc - int(2) * &ca));
            let t0 = (int(9) * &p0 - &p2 * &p1) / (int(2) * (&p2 * &p2 - int(3) * &p1));
            let t1 = &ca - int(2) * &t0;
            let md = root_exponent(&emb, &t0, 2) + root_exponent(&emb, &t1, 1);
            let t = if t0.abs() > int(2) {
                let lhs = int(16) * (&ca + &cc) * (&ca + &cc);
                let r = &ca * &ca + int(4) * &cb + int(8);
                if lhs == &r * &r {
                    StrictlyHyperbolic
                } else {
                    ScrewHyperbolic
                }
            } else if md <= 2 {
                ComplexElliptic
            } else {
                ScrewParabolic
            };
            (t, md)
        }
        Sign::Zero => {
            let md = root_exponent(&emb, &(&ca / int(3)), 3);
            let unipotent = ca == int(6) && cb == int(15) && cc == int(20);
            let t = match (unipotent, md) {
                (_, 1) => SimpleElliptic,
                (true, 2) => VerticalHeisenbergTranslation,
                (true, _) => NonVerticalHeisenbergTranslation,
                (false, 2) => ElliptoTranslation,
                (false, _) => ElliptoParabolic,
            };
            (t, md)
        }
    };
    Ok(ExactInvariants { a: ca, b: cb, c: cc, g, h, delta, resultant, min_degree, dtype })
}

/// Rational invariants as decimal strings, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub a: String,
    pub b: String,
    pub c: String,
    #[serde(rename = "G")]
    pub g: String,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "Delta")]
    pub delta: String,
    pub resultant_plus_8g: String,
    pub min_degree: usize,
}

impl From<&ExactInvariants> for ExactSummary {
    fn from(e: &ExactInvariants) -> Self {
        ExactSummary {
            a: e.a.to_string(),
            b: e.b.to_string(),
            c: e.c.to_string(),
            g: e.g.to_string(),
            h: e.h.to_string(),
            delta: e.delta.to_string(),
            resultant_plus_8g: (&e.resultant + int(8) * &e.g).to_string(),
            min_degree: e.min_degree,
        }
    }
}
