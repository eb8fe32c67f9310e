//! Quaternion scalars and their similarity classes.
//!
//! A quaternion is stored as `w + x i + y j + z k`. Right eigenvalues of a
//! quaternionic matrix are only defined up to conjugation `q ↦ u q u⁻¹` by
//! unit quaternions; such an orbit is a [`SimilarityClass`] and is determined
//! by `|q|` and `Re q`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Embeds `a + b i` as a quaternion with zero `j`, `k` parts.
    pub fn from_complex(c: Complex64) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    /// `e^{iθ} = cos θ + i sin θ`.
    pub fn exp_i(theta: f64) -> Self {
        Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0)
    }

    /// Builds `z₁ + j z₂` from its two complex halves.
    ///
    /// With `z₁ = w + x i` and `z₂ = y − z i` this is the inverse of [`Quaternion::split`];
    /// the convention is fixed by `j (a + b i) = a j − b k`.
    pub fn from_split(z1: Complex64, z2: Complex64) -> Self {
        Quaternion::new(z1.re, z1.im, z2.re, -z2.im)
    }

    /// Splits `q = z₁ + j z₂` into `(z₁, z₂)`.
    pub fn split(self) -> (Complex64, Complex64) {
        (Complex64::new(self.w, self.x), Complex64::new(self.y, -self.z))
    }

    /// The `w + x i` part, discarding `j` and `k`.
    pub fn complex_part(self) -> Complex64 {
        Complex64::new(self.w, self.x)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Length of the imaginary part `(x, y, z)`.
    pub fn imag_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn inverse(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        Ok(self.conj().scale(1.0 / n))
    }

    /// Inverse without a zero check; callers guarantee `self ≠ 0`.
    pub(crate) fn inv_unchecked(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Max absolute component, the entry norm used for matrix residuals.
    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    /// True when the `j` and `k` parts vanish within `tol * max(1, |q|)`.
    pub fn is_complex(self, tol: f64) -> bool {
        self.y.abs().max(self.z.abs()) <= tol * self.norm().max(1.0)
    }

    pub fn approx_eq(self, other: Quaternion, tol: f64) -> bool {
        (self - other).max_abs() <= tol * self.norm().max(other.norm()).max(1.0)
    }

    /// A unit quaternion `u` with `u q u⁻¹ = |q| e^{iθ}`, `θ ∈ [0, π]`.
    pub fn complexifier(self) -> Quaternion {
        let v = [self.x, self.y, self.z];
        let len = self.imag_norm();
        if len == 0.0 {
            return Quaternion::ONE;
        }
        let a = [v[0] / len, v[1] / len, v[2] / len];
        // rotate the unit imaginary direction `a` onto +i
        let cos = a[0];
        let axis = [0.0, a[2], -a[1]];
        let sin = (axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if sin < 1e-300 {
            return if cos > 0.0 { Quaternion::ONE } else { Quaternion::J };
        }
        let half = 0.5 * sin.atan2(cos);
        let s = half.sin() / sin;
        Quaternion::new(half.cos(), axis[0] * s, axis[1] * s, axis[2] * s)
    }

    /// The class representative `|q| e^{iθ}` with `θ ∈ [0, π]`, as a complex number.
    pub fn complex_representative(self) -> Complex64 {
        Complex64::new(self.w, self.imag_norm())
    }

    pub fn similarity_representative(self) -> Result<SimilarityClass> {
        SimilarityClass::of(self)
    }

    /// Whether `p` and `q` are similar, comparing `|·|` relatively and `Re/|·|` absolutely.
    pub fn same_class(p: Quaternion, q: Quaternion, tol: f64) -> Result<bool> {
        let (np, nq) = (p.norm(), q.norm());
        if np == 0.0 || nq == 0.0 {
            return Err(Error::Domain("similarity class of zero".into()));
        }
        Ok((np - nq).abs() <= tol * np.max(1.0) && (p.w / np - q.w / nq).abs() <= tol)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.w, self.x, self.y, self.z);
        let (b0, b1, b2, b3) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

/// Right division `p / q = p q⁻¹`.
impl Div for Quaternion {
    type Output = Quaternion;
    fn div(self, q: Quaternion) -> Quaternion {
        self * q.inv_unchecked()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Quaternion::from_complex(c)
    }
}

/// The similarity class `{u q u⁻¹}` represented by `modulus · e^{i angle}`, `angle ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityClass {
    pub modulus: f64,
    pub angle: f64,
}

impl SimilarityClass {
    pub fn of(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if n == 0.0 {
            return Err(Error::Domain("similarity class of zero".into()));
        }
        let angle = q.imag_norm().atan2(q.w);
        Ok(SimilarityClass { modulus: n, angle })
    }

    /// Class of a complex number; `λ` and `λ̄` share it.
    pub fn of_complex(c: Complex64) -> Self {
        SimilarityClass {
            modulus: c.norm(),
            angle: c.im.abs().atan2(c.re),
        }
    }

    pub fn representative(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.angle)
    }

    pub fn approx_eq(&self, other: &SimilarityClass, tol: f64) -> bool {
        (self.modulus - other.modulus).abs() <= tol * self.modulus.max(1.0)
            && (self.angle.cos() - other.angle.cos()).abs() <= tol
    }

    /// True when the representative is a real number (angle 0 or π).
    pub fn is_real(&self, tol: f64) -> bool {
        self.angle.sin().abs() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.modulus - 1.0).abs() <= tol
    }
}

// ---------------------------------------------------------------------------
// Text form "w+xi+yj+zk".

/// Splits the text form into `(coefficient, unit)` terms, unit 0..=3 for `1, i, j, k`.
///
/// Coefficients are returned as strings so callers can parse them as floats or
/// as exact rationals (`3/4`).
pub fn parse_terms(s: &str) -> Result<Vec<(String, usize)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty quaternion".into()));
    }
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    let mut i = 1;
    // split before every sign that is not part of an exponent
    let mut cuts = vec![];
    while i < bytes.len() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            cuts.push(i);
        }
        i += 1;
    }
    cuts.push(bytes.len());
    for end in cuts {
        let tok = &s[start..end];
        start = end;
        let (body, unit) = match tok.chars().last() {
            Some('i') => (&tok[..tok.len() - 1], 1),
            Some('j') => (&tok[..tok.len() - 1], 2),
            Some('k') => (&tok[..tok.len() - 1], 3),
            _ => (tok, 0),
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let coef = match body {
            "" | "+" => "1".to_string(),
            "-" => "-1".to_string(),
            b => b.strip_prefix('+').unwrap_or(b).to_string(),
        };
        if unit == 0 && coef.is_empty() {
            return Err(Error::Parse(format!("bad term in {s:?}")));
        }
        terms.push((coef, unit));
    }
    Ok(terms)
}

/// Parses a real coefficient, accepting `p/q` fractions.
pub fn parse_real(s: &str) -> Result<f64> {
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
        let d: f64 = d.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
        return Ok(n / d);
    }
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

impl FromStr for Quaternion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut c = [0.0; 4];
        for (coef, unit) in parse_terms(s)? {
            c[unit] += parse_real(&coef)?;
        }
        Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(self.w, ""), (self.x, "i"), (self.y, "j"), (self.z, "k")];
        let mut wrote = false;
        for (v, unit) in parts {
            if v == 0.0 {
                continue;
            }
            if wrote && v >= 0.0 {
                write!(f, "+")?;
            }
            write!(f, "{v}{unit}")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        for v in [self.w, self.x, self.y, self.z] {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// Accepts `[w, x, y, z]`, a bare number, or the text form.
impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Quaternion;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a quaternion as [w,x,y,z], a number, or \"w+xi+yj+zk\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Quaternion, E> {
                Ok(Quaternion::real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Quaternion, E> {
                Ok(Quaternion::real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Quaternion, E> {
                Ok(Quaternion::real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Quaternion, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Quaternion, A::Error> {
                let mut c = [0.0; 4];
                for (n, slot) in c.iter_mut().enumerate() {
                    *slot = seq
                        .next_element()?
                        .ok_or_else(|| de::Error::invalid_length(n, &self))?;
                }
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(5, &self));
                }
                Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn hamilton_relations() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
        let q = Quaternion::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn product_by_hand() {
        // (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0) * Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(p, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn split_convention() {
        // j z = z̄ j for complex z
        let z = Complex64::new(0.7, -1.3);
        let lhs = Quaternion::J * Quaternion::from_complex(z);
        let rhs = Quaternion::from_complex(z.conj()) * Quaternion::J;
        assert!(lhs.approx_eq(rhs, 1e-15));
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let (z1, z2) = q.split();
        let rebuilt = Quaternion::from_complex(z1) + Quaternion::J * Quaternion::from_complex(z2);
        assert!(rebuilt.approx_eq(q, 1e-15));
        assert_eq!(Quaternion::from_split(z1, z2), q);
    }

    #[test]
    fn representatives() {
        let c = Quaternion::J.similarity_representative().unwrap();
        assert!((c.modulus - 1.0).abs() < 1e-15 && (c.angle - FRAC_PI_2).abs() < 1e-15);
        let c = Quaternion::real(-3.0).similarity_representative().unwrap();
        assert!((c.modulus - 3.0).abs() < 1e-15 && (c.angle - PI).abs() < 1e-15);
        let c = Quaternion::new(0.5, 0.5, 0.5, 0.5).similarity_representative().unwrap();
        assert!((c.modulus - 1.0).abs() < 1e-15 && (c.angle - FRAC_PI_3).abs() < 1e-15);
        assert!(Quaternion::ZERO.similarity_representative().is_err());
    }

    #[test]
    fn class_equality() {
        assert!(Quaternion::same_class(Quaternion::J, Quaternion::I, 1e-9).unwrap());
        assert!(Quaternion::same_class(Quaternion::I, -Quaternion::I, 1e-9).unwrap());
        assert!(!Quaternion::same_class(Quaternion::I * 2.0, Quaternion::I, 1e-9).unwrap());
        assert!(Quaternion::same_class(Quaternion::ZERO, Quaternion::I, 1e-9).is_err());
    }

    #[test]
    fn text_form() {
        let q: Quaternion = "1-2i+0.5j-k".parse().unwrap();
        assert_eq!(q, Quaternion::new(1.0, -2.0, 0.5, -1.0));
        let q: Quaternion = "j".parse().unwrap();
        assert_eq!(q, Quaternion::J);
        let q: Quaternion = "-1/2 + 3e-1k".parse().unwrap();
        assert_eq!(q, Quaternion::new(-0.5, 0.0, 0.0, 0.3));
        assert_eq!(Quaternion::new(1.0, -2.0, 0.0, 1.0).to_string(), "1-2i+1k");
        assert_eq!(Quaternion::ZERO.to_string(), "0");
        assert!("1+x".parse::<Quaternion>().is_err());
    }

    #[test]
    fn json_forms() {
        let q: Quaternion = serde_json::from_str("[1, 2, 3, 4]").unwrap();
        assert_eq!(q, Quaternion::new(1.0, 2.0, 3.0, 4.0));
        let q: Quaternion = serde_json::from_str("\"2i\"").unwrap();
        assert_eq!(q, Quaternion::new(0.0, 2.0, 0.0, 0.0));
        let q: Quaternion = serde_json::from_str("-1.5").unwrap();
        assert_eq!(q, Quaternion::real(-1.5));
        assert_eq!(serde_json::to_string(&Quaternion::K).unwrap(), "[0.0,0.0,0.0,1.0]");
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(p in quat(), q in quat()) {
            let lhs = (p * q).norm();
            let rhs = p.norm() * q.norm();
            prop_assert!((lhs - rhs).abs() <= 10.0 * f64::EPSILON * rhs.max(1e-300) + 1e-300);
        }

        #[test]
        fn associative(p in quat(), q in quat(), r in quat()) {
            prop_assert!(((p * q) * r).approx_eq(p * (q * r), 1e-13));
        }

        #[test]
        fn similarity_invariance(q in quat(), u in quat()) {
            prop_assume!(q.norm() > 1e-3 && u.norm() > 1e-3);
            let conj = u * q * u.inverse().unwrap();
            prop_assert!(Quaternion::same_class(conj, q, 1e-9).unwrap());
            let a = q.similarity_representative().unwrap();
            let b = q.conj().similarity_representative().unwrap();
            prop_assert!(a.approx_eq(&b, 1e-12));
        }

        #[test]
        fn complexifier_lands_in_upper_half_plane(q in quat()) {
            let u = q.complexifier();
            prop_assert!((u.norm() - 1.0).abs() < 1e-12);
            let c = u * q * u.conj();
            let rep = q.complex_representative();
            prop_assert!(c.approx_eq(Quaternion::from_complex(rep), 1e-12));
        }
    }
}
