//! Dense complex helpers built on nalgebra: eigenvalues, numerical rank,
//! null spaces and Hermitian spectra.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::embed::CMatrix6;

pub(crate) type CDMatrix = DMatrix<Complex64>;

pub(crate) fn to_dynamic(m: &CMatrix6) -> CDMatrix {
    CDMatrix::from_fn(6, 6, |i, j| m[(i, j)])
}

/// Spectral norm.
pub(crate) fn norm2(m: &CDMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Eigenvalues via complex Schur. The matrix is centered and scaled first, and
/// a fixed unitary similarity is tried when the iteration stalls (it does on
/// some nearly scalar inputs).
pub(crate) fn eigenvalues(m: &CDMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let shift = m.trace() / Complex64::new(n as f64, 0.0);
    let centered = m - CDMatrix::identity(n, n) * shift;
    let scale = centered.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if scale <= f64::EPSILON * (1.0 + shift.norm()) {
        return vec![shift; n];
    }
    let x = centered.unscale(scale);
    let finish = |t: CDMatrix| (0..n).map(|i| t[(i, i)] * scale + shift).collect();
    if let Some(s) = Schur::try_new(x.clone(), f64::EPSILON, 10_000) {
        return finish(s.unpack().1);
    }
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + i as f64, 0.5 * i as f64));
    v.unscale_mut(v.norm());
    let h = CDMatrix::identity(n, n) - (&v * v.adjoint()) * Complex64::new(2.0, 0.0);
    let y = &h * x * &h;
    let s = Schur::try_new(y.clone(), f64::EPSILON, 100_000)
        .unwrap_or_else(|| Schur::try_new(y, 1e-12, 1_000_000).expect("Schur iteration diverged"));
    finish(s.unpack().1)
}

/// Numerical rank against an absolute threshold, plus whether a singular value
/// lies within a factor of 10 of it.
pub(crate) fn rank_abs(m: &CDMatrix, threshold: f64) -> (usize, bool) {
    if m.is_empty() {
        return (0, false);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let rank = sv.iter().filter(|s| **s > threshold).count();
    let borderline = sv.iter().any(|s| *s > threshold / 10.0 && *s < threshold * 10.0);
    (rank, borderline)
}

/// Orthonormal basis of the numerical null space (singular values ≤ `threshold`).
pub(crate) fn null_space(m: &CDMatrix, threshold: f64) -> Vec<DVector<Complex64>> {
    let n = m.ncols();
    // pad to square so that V is complete
    let rows = m.nrows().max(n);
    let mut sq = CDMatrix::zeros(rows, n);
    sq.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    (0..n)
        .filter(|&k| svd.singular_values[k] <= threshold)
        .map(|k| vt.row(k).adjoint())
        .collect()
}

/// The `dim` right singular vectors of a square matrix with the smallest singular values.
pub(crate) fn smallest_right_singular(m: &CDMatrix, dim: usize) -> Vec<DVector<Complex64>> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut order: Vec<usize> = (0..m.ncols()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    order.into_iter().take(dim).map(|k| vt.row(k).adjoint()).collect()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(h: &CDMatrix) -> Vec<f64> {
    let sym = (h + h.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub(crate) fn identity(n: usize) -> CDMatrix {
    CDMatrix::identity(n, n)
}

/// Greedy single-linkage clustering of complex numbers; returns (mean, members).
pub(crate) fn cluster(values: &[Complex64], tol: f64) -> Vec<(Complex64, Vec<usize>)> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let hits: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|&j| (values[j] - v).norm() <= tol))
            .map(|(k, _)| k)
            .collect();
        match hits.as_slice() {
            [] => groups.push(vec![i]),
            [first, rest @ ..] => {
                let first = *first;
                for &k in rest.iter().rev() {
                    let g = groups.remove(k);
                    groups[first].extend(g);
                }
                groups[first].push(i);
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&j| values[j]).sum::<Complex64>() / g.len() as f64;
            (mean, g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_and_null_space_of_jordan_block() {
        let mut m = CDMatrix::zeros(3, 3);
        m[(0, 1)] = c(1.0, 0.0);
        assert_eq!(rank_abs(&m, 1e-10).0, 1);
        assert_eq!(rank_abs(&(&m * &m), 1e-10).0, 0);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).norm() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let mut m = CDMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.0, 1.0);
        m[(1, 1)] = c(2.0, 0.0);
        m[(0, 1)] = c(5.0, 0.0);
        let mut ev = eigenvalues(&m);
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((ev[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hermitian_spectrum() {
        let mut h = CDMatrix::zeros(2, 2);
        h[(0, 1)] = c(0.0, 1.0);
        h[(1, 0)] = c(0.0, -1.0);
        let ev = hermitian_eigenvalues(&h);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clustering_merges_chains() {
        let v = [c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(5.0, 0.0)];
        let mut cl = cluster(&v, 0.6);
        cl.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].1.len(), 3);
        assert!((cl[0].0 - c(0.5, 0.0)).norm() < 1e-15);
    }
}
