//! Conjugation invariants of a group element.
//!
//! The characteristic polynomial of the 6×6 embedding is self-dual,
//! `x⁶ − ax⁵ + bx⁴ − cx³ + bx² − ax + 1`, and substituting `t = x + x⁻¹`
//! turns it into the resolvent cubic `g(t) = t³ − at² + (b−3)t − (c−2a)`.
//! Its depressed form is `s³ + (H/3)s + G/27` with `t = s + a/3`, so `G`, `H`
//! and `Δ = G² + 4H³` govern the root pattern.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::embed::{embedding, CMatrix6, Field};
use crate::error::{Error, Result};
use crate::linalg::{self, CDMatrix};
use crate::qmatrix::QMatrix3;
use crate::quaternion::SimilarityClass;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPoly6 {
    /// Coefficients of `x⁶, x⁵, …, x⁰`.
    pub coeffs: [f64; 7],
    /// `max |c₅ − c₁|, |c₄ − c₂|` relative to `1 + |c|`, and `|c₀ − 1|`.
    pub self_dual_residual: f64,
    /// `max |c₅ − c₁|, |c₄ − c₂|`: an a-posteriori estimate of the rounding
    /// error in the coefficients.
    pub coefficient_error: f64,
}

const BINOM6: [f64; 7] = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];

/// Characteristic polynomial of the embedding; coefficients must come out real.
pub fn char_poly(m: &CMatrix6, tol: f64) -> Result<CharPoly6> {
    let a = linalg::to_dynamic(m);
    let rho = a.norm().max(1.0);
    let coeffs = hessenberg_char_poly(&a);
    let mut real = [0.0; 7];
    for (k, c) in coeffs.iter().enumerate() {
        // |e_k(λ)| ≤ C(6,k) ρ^k bounds the size of the kth coefficient
        let scale = BINOM6[k] * rho.powi(k as i32);
        if c.im.abs() > tol * scale {
            return Err(Error::Malformed(format!(
                "characteristic polynomial coefficient of x^{} has imaginary part {:e}",
                6 - k,
                c.im
            )));
        }
        real[k] = c.re;
    }
    Ok(CharPoly6 {
        coeffs: real,
        self_dual_residual: self_dual_residual(&real),
        coefficient_error: (real[1] - real[5]).abs().max((real[2] - real[4]).abs()),
    })
}

/// Coefficients of `det(xI − A)`, leading first, from a unitary Hessenberg
/// reduction and the determinant recursion over leading principal blocks.
pub(crate) fn hessenberg_char_poly(a: &CDMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    let h = a.clone().hessenberg().h();
    let zero = Complex64::new(0.0, 0.0);
    // p[i] is the characteristic polynomial of the leading i×i block, lowest degree first
    let mut p: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    for i in 1..=n {
        let d = h[(i - 1, i - 1)];
        let prev = &p[i - 1];
        let mut next = vec![zero; i + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= d * c;
        }
        let mut sub = Complex64::new(1.0, 0.0);
        for m in 1..i {
            sub *= h[(i - m, i - m - 1)];
            let w = h[(i - 1 - m, i - 1)] * sub;
            for (k, &c) in p[i - 1 - m].iter().enumerate() {
                next[k] -= w * c;
            }
        }
        p.push(next);
    }
    p.pop().expect("n ≥ 1").into_iter().rev().collect()
}

fn self_dual_residual(c: &[f64; 7]) -> f64 {
    let rel = |p: f64, q: f64| (p - q).abs() / (1.0 + p.abs().max(q.abs()));
    rel(c[1], c[5]).max(rel(c[2], c[4])).max((c[6] - 1.0).abs())
}

/// `(a, b, c)` with each read symmetrically from both halves of the polynomial.
pub fn extract_abc(p: &CharPoly6, tol: f64) -> Result<(f64, f64, f64)> {
    if !(p.self_dual_residual <= tol) {
        return Err(Error::Malformed(format!(
            "characteristic polynomial is not self-dual (residual {:e})",
            p.self_dual_residual
        )));
    }
    let c = &p.coeffs;
    Ok((-(c[1] + c[5]) / 2.0, (c[2] + c[4]) / 2.0, -c[3]))
}

pub fn ghd(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let g = 27.0 * (a - c) + 9.0 * a * b - 2.0 * a * a * a;
    let h = 3.0 * (b - 3.0) - a * a;
    (g, h, g * g + 4.0 * h * h * h)
}

/// Magnitude of the terms summed in `G`, used to judge `G = 0`.
fn g_scale(a: f64, b: f64, c: f64) -> f64 {
    27.0 * (a.abs() + c.abs()) + 9.0 * (a * b).abs() + 2.0 * a.abs().powi(3)
}

/// `R(g, g″) = −216 g(a/3)`, computed by evaluation.
pub fn resultant(a: f64, b: f64, c: f64) -> f64 {
    let t = a / 3.0;
    -216.0 * eval_cubic(a, b, c, t)
}

/// `|R(g, g″) + 8G|`.
pub fn resultant_check(a: f64, b: f64, c: f64) -> f64 {
    (resultant(a, b, c) + 8.0 * ghd(a, b, c).0).abs()
}

fn eval_cubic(a: f64, b: f64, c: f64, t: f64) -> f64 {
    ((t - a) * t + (b - 3.0)) * t - (c - 2.0 * a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "< 0",
            Sign::Zero => "= 0",
            Sign::Positive => "> 0",
        })
    }
}

/// A thresholded sign and whether `|v|` lies within a factor 10 of the threshold.
pub(crate) fn decide(v: f64, threshold: f64) -> (Sign, bool) {
    let borderline = v.abs() > threshold / 10.0 && v.abs() <= threshold * 10.0;
    let s = if v.abs() <= threshold {
        Sign::Zero
    } else if v < 0.0 {
        Sign::Negative
    } else {
        Sign::Positive
    };
    (s, borderline)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoot {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl CubicRoot {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventCubic {
    /// Coefficients of `t³, t², t, 1`.
    pub coeffs: [f64; 4],
    pub roots: Vec<CubicRoot>,
    pub delta_sign: Sign,
    /// Only meaningful when `delta_sign` is zero.
    pub g_zero: bool,
    pub borderline: bool,
    pub notes: Vec<String>,
}

impl ResolventCubic {
    /// The repeated root when `Δ = 0`.
    pub fn repeated_root(&self) -> Option<f64> {
        self.roots.iter().find(|r| r.multiplicity > 1).map(|r| r.re)
    }
}

/// Solves `g` in closed form. Multiplicities follow the thresholded signs of
/// `Δ` and `G`, so root clustering never disagrees with the `Δ = 0` decision.
pub fn resolvent(a: f64, b: f64, c: f64, tols: &Tolerances) -> ResolventCubic {
    resolvent_with_error(a, b, c, 0.0, tols)
}

/// Safety factor on propagated coefficient error.
const ERROR_MARGIN: f64 = 10.0;

/// As [`resolvent`], with zero thresholds for `Δ` and `G` widened by the
/// first-order effect of an error `err` in each of `a`, `b`, `c`.
pub fn resolvent_with_error(a: f64, b: f64, c: f64, err: f64, tols: &Tolerances) -> ResolventCubic {
    let (g, h, delta) = ghd(a, b, c);
    let coeffs = [1.0, -a, b - 3.0, -(c - 2.0 * a)];
    let shift = a / 3.0;
    let dg = [27.0 + 9.0 * b - 6.0 * a * a, 9.0 * a, -27.0];
    let dh = [-2.0 * a, 3.0, 0.0];
    let g_err = ERROR_MARGIN * err * dg.iter().map(|x| x.abs()).sum::<f64>();
    let delta_err = ERROR_MARGIN
        * err
        * (0..3).map(|i| (2.0 * g * dg[i] + 12.0 * h * h * dh[i]).abs()).sum::<f64>();
    let thr_delta = (tols.sign * 1f64.max(g * g).max(h.abs().powi(3))).max(delta_err);
    let (delta_sign, mut borderline) = decide(delta, thr_delta);
    let mut notes = Vec::new();
    if borderline {
        notes.push(format!("Δ = {delta:e} is within 10× of its threshold {thr_delta:e}"));
    }
    let real = |t: f64, m: usize| CubicRoot { re: t, im: 0.0, multiplicity: m };
    let mut g_zero = false;
    let roots = match delta_sign {
        Sign::Zero => {
            let thr_g = (tols.sign * g_scale(a, b, c).max(1.0)).max(g_err);
            let (gs, gb) = decide(g, thr_g);
            if gb {
                borderline = true;
                notes.push(format!("G = {g:e} is within 10× of its threshold {thr_g:e}"));
            }
            // a member's triple root is 2cosθ; off [−2, 2] the pair and the
            // single root are merely close, so G is small but not zero
            let (edge, _) = on_boundary(shift, tols);
            let impossible = gs == Sign::Zero && shift.abs() > 2.0 && !edge && g != 0.0 && h < 0.0;
            if impossible {
                borderline = true;
                notes.push(format!("triple root {shift} would lie off [−2, 2]; keeping G = {g:e} nonzero"));
            }
            if gs == Sign::Zero && !impossible {
                g_zero = true;
                vec![real(shift, 3)]
            } else {
                vec![real(shift - g / (6.0 * h), 2), real(shift + g / (3.0 * h), 1)]
            }
        }
        Sign::Positive => {
            // Cardano: one real root and a conjugate pair
            let q = g / 27.0;
            let sq = (delta / 2916.0).max(0.0).sqrt();
            let u = (-q / 2.0 + sq).cbrt();
            let v = (-q / 2.0 - sq).cbrt();
            let s_real = u + v;
            let t_real = polish(a, b, c, shift + s_real);
            let re = shift - s_real / 2.0;
            let im = 3f64.sqrt() / 2.0 * (u - v).abs();
            // refine the pair from the exact relations sum and product of roots
            let pair_sum = a - t_real;
            let pair_prod = (c - 2.0 * a) / t_real;
            let refined = if t_real.abs() > 1e-3 && 4.0 * pair_prod - pair_sum * pair_sum > 0.0 {
                let im2 = (4.0 * pair_prod - pair_sum * pair_sum).sqrt() / 2.0;
                (pair_sum / 2.0, im2)
            } else {
                (re, im)
            };
            vec![
                real(t_real, 1),
                CubicRoot { re: refined.0, im: refined.1, multiplicity: 1 },
                CubicRoot { re: refined.0, im: -refined.1, multiplicity: 1 },
            ]
        }
        Sign::Negative => {
            // three real roots, trigonometric form
            let p = h / 3.0;
            let q = g / 27.0;
            let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
            let arg = if m == 0.0 { 0.0 } else { (3.0 * q / (p * m)).clamp(-1.0, 1.0) };
            let phi = arg.acos() / 3.0;
            let mut ts: Vec<f64> = (0..3)
                .map(|k| polish(a, b, c, shift + m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos()))
                .collect();
            ts.sort_by(|x, y| y.total_cmp(x));
            ts.into_iter().map(|t| real(t, 1)).collect()
        }
    };
    ResolventCubic {
        coeffs,
        roots,
        delta_sign,
        g_zero,
        borderline,
        notes,
    }
}

/// Newton steps on `g`, kept only when they reduce the residual.
fn polish(a: f64, b: f64, c: f64, mut t: f64) -> f64 {
    for _ in 0..3 {
        let f = eval_cubic(a, b, c, t);
        let df = (3.0 * t - 2.0 * a) * t + (b - 3.0);
        if df == 0.0 {
            break;
        }
        let next = t - f / df;
        if eval_cubic(a, b, c, next).abs() < f.abs() {
            t = next;
        } else {
            break;
        }
    }
    t
}

/// An irreducible real factor of the characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RealFactor {
    /// `x − root`.
    Linear { root: f64 },
    /// `x² − trace·x + norm`.
    Quadratic { trace: f64, norm: f64 },
}

impl RealFactor {
    pub fn degree(&self) -> usize {
        match self {
            RealFactor::Linear { .. } => 1,
            RealFactor::Quadratic { .. } => 2,
        }
    }

    fn evaluate(&self, m: &CDMatrix) -> CDMatrix {
        let id = linalg::identity(m.nrows());
        match *self {
            RealFactor::Linear { root } => m - &id * Complex64::new(root, 0.0),
            RealFactor::Quadratic { trace, norm } => {
                m * m - m * Complex64::new(trace, 0.0) + &id * Complex64::new(norm, 0.0)
            }
        }
    }

    fn norm_bound(&self, m_norm: f64) -> f64 {
        match *self {
            RealFactor::Linear { root } => m_norm + root.abs(),
            RealFactor::Quadratic { trace, norm } => m_norm * m_norm + trace.abs() * m_norm + norm.abs(),
        }
    }
}

impl fmt::Display for RealFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RealFactor::Linear { root } => write!(f, "(x - {root})"),
            RealFactor::Quadratic { trace, norm } => write!(f, "(x^2 - {trace}x + {norm})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorMultiplicity {
    pub factor: RealFactor,
    /// Exponent in the minimal polynomial.
    pub multiplicity: usize,
}

/// One similarity class of right eigenvalues with its algebraic multiplicity
/// and the size of its largest Jordan block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub class: SimilarityClass,
    pub multiplicity: usize,
    pub jordan: usize,
    /// Index into the resolvent root list this class came from.
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPolyStructure {
    pub factors: Vec<FactorMultiplicity>,
    pub min_degree: usize,
    pub classes: Vec<ClassInfo>,
    pub borderline: bool,
    pub notes: Vec<String>,
}

/// Whether a real root `t = 2cos θ` sits on `±2`, i.e. `e^{iθ}` is real.
pub(crate) fn on_boundary(t: f64, tols: &Tolerances) -> (bool, bool) {
    let gap = 2.0 - t.abs();
    let thr = tols.root * 3.0;
    (gap.abs() <= thr, gap.abs() > thr / 10.0 && gap.abs() <= thr * 10.0)
}

/// Minimal-polynomial factors of `M` for the given resolvent roots. The
/// exponent of a factor `q` is the least `k` for which `rank q(M)^k` drops to
/// `6 − (number of eigenvalues of q)`.
pub fn min_poly_from_roots(m: &CMatrix6, cubic: &ResolventCubic, tols: &Tolerances) -> MinPolyStructure {
    let md = linalg::to_dynamic(m);
    let m_norm = linalg::norm2(&md);
    let mut factors = Vec::new();
    let mut classes = Vec::new();
    let mut borderline = false;
    let mut notes = Vec::new();

    let exponent = |factor: RealFactor, eig_count: usize, max_k: usize, borderline: &mut bool, notes: &mut Vec<String>| {
        if max_k <= 1 {
            return 1;
        }
        let q = factor.evaluate(&md);
        let s = factor.norm_bound(m_norm);
        let target = 6 - eig_count;
        let mut pow = q.clone();
        for k in 1..=max_k {
            let (rank, bl) = linalg::rank_abs(&pow, tols.rank * s.powi(k as i32));
            if bl {
                *borderline = true;
                notes.push(format!("rank of {factor}^{k} is near a singular-value threshold"));
            }
            if rank <= target {
                return k;
            }
            pow = &pow * &q;
        }
        *borderline = true;
        notes.push(format!("rank of {factor}^k did not stabilize by k = {max_k}"));
        max_k
    };

    for (idx, root) in cubic.roots.iter().enumerate() {
        let mult = root.multiplicity;
        if root.im > 0.0 {
            // conjugate pair t, t̄: classes x and 1/x̄ off the unit circle
            let t = root.value();
            let disc = (t * t - 4.0).sqrt();
            let mut x = (t + disc) / 2.0;
            if x.norm() < 1.0 {
                x = (t - disc) / 2.0;
            }
            for lam in [x, 1.0 / x.conj()] {
                let f = RealFactor::Quadratic { trace: 2.0 * lam.re, norm: lam.norm_sqr() };
                let k = exponent(f, 2 * mult, mult, &mut borderline, &mut notes);
                factors.push(FactorMultiplicity { factor: f, multiplicity: k });
                classes.push(ClassInfo { class: SimilarityClass::of_complex(lam), multiplicity: mult, jordan: k, root: idx });
            }
        } else if root.im < 0.0 {
            continue;
        } else {
            let t = root.re;
            let (edge, bl) = on_boundary(t, tols);
            if bl {
                borderline = true;
                notes.push(format!("root t = {t} is near ±2"));
            }
            if edge {
                let lam = t.signum();
                let f = RealFactor::Linear { root: lam };
                let k = exponent(f, 2 * mult, mult, &mut borderline, &mut notes);
                factors.push(FactorMultiplicity { factor: f, multiplicity: k });
                let angle = if lam > 0.0 { 0.0 } else { std::f64::consts::PI };
                classes.push(ClassInfo { class: SimilarityClass { modulus: 1.0, angle }, multiplicity: mult, jordan: k, root: idx });
            } else if t.abs() < 2.0 {
                let f = RealFactor::Quadratic { trace: t, norm: 1.0 };
                let k = exponent(f, 2 * mult, mult, &mut borderline, &mut notes);
                factors.push(FactorMultiplicity { factor: f, multiplicity: k });
                let angle = (t / 2.0).acos();
                classes.push(ClassInfo { class: SimilarityClass { modulus: 1.0, angle }, multiplicity: mult, jordan: k, root: idx });
            } else {
                // real pair r, 1/r: each gets `mult` eigenvalues of M, so mult/2 classes
                if mult % 2 == 1 {
                    borderline = true;
                    notes.push(format!("real root t = {t} off [−2, 2] with odd multiplicity {mult}"));
                }
                let half = (mult / 2).max(1);
                let r = (t.abs() + (t * t - 4.0).sqrt()) / 2.0;
                for lam in [r * t.signum(), t.signum() / r] {
                    let f = RealFactor::Linear { root: lam };
                    let k = exponent(f, mult, half, &mut borderline, &mut notes);
                    factors.push(FactorMultiplicity { factor: f, multiplicity: k });
                    let angle = if lam > 0.0 { 0.0 } else { std::f64::consts::PI };
                    classes.push(ClassInfo {
                        class: SimilarityClass { modulus: lam.abs(), angle },
                        multiplicity: half,
                        jordan: k,
                        root: idx,
                    });
                }
            }
        }
    }
    let min_degree = factors.iter().map(|f| f.multiplicity).sum();
    MinPolyStructure { factors, min_degree, classes, borderline, notes }
}

/// Everything computed from the embedding before the decision tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub min_degree: usize,
    pub factor_structure: Vec<FactorMultiplicity>,
    pub char_poly: CharPoly6,
    pub resolvent: ResolventCubic,
    pub tolerance: Tolerances,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub record: InvariantRecord,
    pub structure: MinPolyStructure,
    pub borderline: bool,
}

/// `char_poly → extract_abc → ghd → resolvent → minimal polynomial` on an embedding.
pub fn analyze_embedding(m: &CMatrix6, tols: &Tolerances) -> Result<Analysis> {
    let p = char_poly(m, tols.membership)?;
    let (a, b, c) = extract_abc(&p, tols.membership)?;
    let (g, h, delta) = ghd(a, b, c);
    let cubic = resolvent_with_error(a, b, c, p.coefficient_error, tols);
    let structure = min_poly_from_roots(m, &cubic, tols);
    let borderline = cubic.borderline || structure.borderline;
    Ok(Analysis {
        record: InvariantRecord {
            a,
            b,
            c,
            g,
            h,
            delta,
            min_degree: structure.min_degree,
            factor_structure: structure.factors.clone(),
            char_poly: p,
            resolvent: cubic,
            tolerance: *tols,
        },
        structure,
        borderline,
    })
}

pub fn analyze(a: &QMatrix3, field: Field, tols: &Tolerances) -> Result<Analysis> {
    analyze_embedding(&embedding(a, field, tols.class)?, tols)
}

/// Minimal-polynomial structure of an embedding, computed from scratch.
pub fn minimal_poly_structure(m: &CMatrix6, tols: &Tolerances) -> Result<MinPolyStructure> {
    Ok(analyze_embedding(m, tols)?.structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::complexify;
    use crate::quaternion::Quaternion;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * (1.0 + y.abs())
    }

    #[test]
    fn identity_polynomial() {
        let p = char_poly(&CMatrix6::identity(), 1e-12).unwrap();
        assert_eq!(p.coeffs, [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0]);
        assert_eq!(extract_abc(&p, 1e-12).unwrap(), (6.0, 15.0, 20.0));
    }

    #[test]
    fn j_scalar_polynomial() {
        let m = complexify(&QMatrix3::diag([Quaternion::J; 3]));
        let p = char_poly(&m, 1e-12).unwrap();
        for (x, y) in p.coeffs.iter().zip([1.0, 0.0, 3.0, 0.0, 3.0, 0.0, 1.0]) {
            assert!((x - y).abs() <= 1e-12, "{:?}", p.coeffs);
        }
        let (a, b, c) = extract_abc(&p, 1e-12).unwrap();
        assert!(a.abs() <= 1e-12 && (b - 3.0).abs() <= 1e-12 && c.abs() <= 1e-12);
        let s = minimal_poly_structure(&m, &tols()).unwrap();
        assert_eq!(s.min_degree, 1);
        assert_eq!(s.factors[0].factor, RealFactor::Quadratic { trace: 0.0, norm: 1.0 });
    }

    #[test]
    fn hyperbolic_polynomial() {
        let a = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 1.0]]);
        let p = char_poly(&complexify(&a), 1e-12).unwrap();
        let (a, b, c) = extract_abc(&p, 1e-12).unwrap();
        assert!(close(a, 7.0, 1e-14) && close(b, 19.25, 1e-14) && close(c, 26.5, 1e-14));
        let a = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -1.0]]);
        let (a, b, c) = extract_abc(&char_poly(&complexify(&a), 1e-12).unwrap(), 1e-12).unwrap();
        assert!(close(a, 3.0, 1e-14) && close(b, -0.75, 1e-14) && close(c, -6.5, 1e-14));
    }

    #[test]
    fn non_self_dual_rejected() {
        let a = QMatrix3::from_real([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let p = char_poly(&complexify(&a), 1e-12).unwrap();
        assert!(extract_abc(&p, 1e-9).is_err());
    }

    #[test]
    fn ghd_values() {
        assert_eq!(ghd(6.0, 15.0, 20.0), (0.0, 0.0, 0.0));
        assert_eq!(ghd(7.0, 19.25, 26.5), (0.25, -0.25, 0.0));
        assert_eq!(ghd(0.0, 2.0, 0.0), (0.0, -3.0, -108.0));
        assert_eq!(ghd(3.0, -0.75, -6.5).0, 182.25);
    }

    #[test]
    fn resolvent_roots() {
        let r = resolvent(6.0, 15.0, 20.0, &tols());
        assert_eq!(r.coeffs, [1.0, -6.0, 12.0, -8.0]);
        assert_eq!(r.roots, vec![CubicRoot { re: 2.0, im: 0.0, multiplicity: 3 }]);

        let r = resolvent(7.0, 19.25, 26.5, &tols());
        assert_eq!(r.delta_sign, Sign::Zero);
        assert!(close(r.roots[0].re, 2.5, 1e-14) && r.roots[0].multiplicity == 2);
        assert!(close(r.roots[1].re, 2.0, 1e-14) && r.roots[1].multiplicity == 1);

        let r = resolvent(0.0, 2.0, 0.0, &tols());
        assert_eq!(r.delta_sign, Sign::Negative);
        let ts: Vec<f64> = r.roots.iter().map(|x| x.re).collect();
        for (t, e) in ts.iter().zip([1.0, 0.0, -1.0]) {
            assert!((t - e).abs() < 1e-14, "{ts:?}");
        }
    }

    #[test]
    fn resolvent_complex_pair() {
        // t = 2cos(0.5) and the pair (r e^{iβ} + r⁻¹e^{−iβ}) and its conjugate
        let (r, beta, theta) = (2.0f64, 0.7f64, 0.5f64);
        let t1 = Complex64::from_polar(r, beta) + Complex64::from_polar(1.0 / r, -beta);
        let t3 = 2.0 * theta.cos();
        let a = 2.0 * t1.re + t3;
        let b = 3.0 + t1.norm_sqr() + 2.0 * t1.re * t3;
        let c = 2.0 * a + t1.norm_sqr() * t3;
        let cubic = resolvent(a, b, c, &tols());
        assert_eq!(cubic.delta_sign, Sign::Positive);
        assert!((cubic.roots[0].re - t3).abs() < 1e-13);
        assert!((cubic.roots[1].value() - t1).norm() < 1e-13);
    }

    #[test]
    fn resultant_values() {
        assert_eq!(resultant_check(6.0, 15.0, 20.0), 0.0);
        assert!((resultant(7.0, 19.25, 26.5) + 2.0).abs() < 1e-12);
        assert!(resultant_check(7.0, 19.25, 26.5) < 1e-12);
    }

    #[test]
    fn resolvent_reproduces_char_poly() {
        // x³ g(x + 1/x) = χ(x)
        let (a, b, c) = (1.3, -0.4, 2.2);
        for x in [0.3f64, 1.7, -2.1] {
            let chi = x.powi(6) - a * x.powi(5) + b * x.powi(4) - c * x.powi(3) + b * x * x - a * x + 1.0;
            let via = x.powi(3) * eval_cubic(a, b, c, x + 1.0 / x);
            assert!((chi - via).abs() < 1e-12 * (1.0 + chi.abs()));
        }
    }

    #[test]
    fn jordan_structure() {
        // vertical Heisenberg translation
        let mut u = QMatrix3::identity();
        u.0[1][0] = Quaternion::I;
        let s = minimal_poly_structure(&complexify(&u), &tols()).unwrap();
        assert_eq!(s.factors, vec![FactorMultiplicity { factor: RealFactor::Linear { root: 1.0 }, multiplicity: 2 }]);
        assert_eq!(s.min_degree, 2);
        // screw parabolic with θ = π/2, φ = 0
        let e = Quaternion::I;
        let mut p = QMatrix3::diag([e, e, Quaternion::ONE]);
        p.0[1][0] = e * Quaternion::I;
        let s = minimal_poly_structure(&complexify(&p), &tols()).unwrap();
        assert_eq!(s.min_degree, 3);
        assert_eq!(s.factors.len(), 2);
    }
}
