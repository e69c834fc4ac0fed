//! Singular values, numerical rank, and orthonormal kernel bases via
//! one-sided (Hestenes) Jacobi.
//!
//! The one-sided variant orthogonalizes columns directly, which keeps the
//! tiny singular values of rank-deficient inputs at rounding level instead
//! of inflating them through a normal-matrix detour. Rank thresholds down
//! at 1e-9 relative stay meaningful that way.

use super::{phase_normalize_column, ComplexMatrix, C64, CZERO};

const MAX_SWEEPS: usize = 100;
// Stop rotating a pair once its cosine is at accumulated-rounding level;
// pushing below ~1e-13 makes pairs of noise columns dance forever.
const ORTHO_EPS: f64 = 1e-13;
// A column this far below the matrix scale is a rounding shadow of the
// columns it was eliminated against; zero it outright or it keeps
// re-aligning with them and the sweep never settles.
const DEFLATE_REL: f64 = 1e-60;

/// Singular values (descending) and the matching right singular vectors
/// as columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub right_vectors: ComplexMatrix,
}

/// One-sided Jacobi SVD of a general complex matrix.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let rows = m.rows();
    let cols = m.cols();
    let mut work: Vec<Vec<C64>> = (0..cols).map(|j| m.col(j)).collect();
    let mut right: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![CZERO; cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let scale = (0..cols).map(|j| m.col_norm(j)).fold(0.0, f64::max);
    let deflate_sqr = (scale * DEFLATE_REL) * (scale * DEFLATE_REL);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in (p + 1)..cols {
                let a: f64 = work[p].iter().map(|z| z.norm_sqr()).sum();
                let b: f64 = work[q].iter().map(|z| z.norm_sqr()).sum();
                if a <= deflate_sqr {
                    work[p].iter_mut().for_each(|z| *z = CZERO);
                }
                if b <= deflate_sqr {
                    work[q].iter_mut().for_each(|z| *z = CZERO);
                }
                if a <= deflate_sqr || b <= deflate_sqr {
                    continue;
                }
                let cpq: C64 = work[p]
                    .iter()
                    .zip(&work[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let r = cpq.norm();
                if r <= ORTHO_EPS * (a * b).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (b - a) / (2.0 * r);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                let s = (cpq / r).conj() * sigma;
                rotate_pair(&mut work, p, q, c, s, rows);
                rotate_pair(&mut right, p, q, c, s, cols);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        assert!(
            sweeps < MAX_SWEEPS,
            "one-sided Jacobi SVD did not converge within {MAX_SWEEPS} sweeps"
        );
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = work
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut v_cols: Vec<Vec<C64>> = order.into_iter().map(|j| right[j].clone()).collect();
    for col in &mut v_cols {
        phase_normalize_column(col);
    }
    let right_vectors = ComplexMatrix::from_fn(cols, cols, |i, j| v_cols[j][i]);
    Svd {
        values,
        right_vectors,
    }
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: C64, len: usize) {
    for i in 0..len {
        let xp = cols[p][i];
        let xq = cols[q][i];
        cols[p][i] = xp * c + xq * s;
        cols[q][i] = xp * (-s.conj()) + xq * c;
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    svd(m).values
}

/// Count of singular values above `rel_tol · σ_max`; zero for the zero
/// matrix.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    assert!(
        rel_tol > 0.0 && rel_tol < 1.0,
        "rel_tol must lie in (0, 1), got {rel_tol}"
    );
    let values = singular_values(m);
    let sigma_max = values.first().copied().unwrap_or(0.0);
    values.iter().filter(|&&s| s > rel_tol * sigma_max).count()
}

/// Orthonormal basis of the numerical kernel: the right singular vectors
/// whose singular values sit at or below `rel_tol · σ_max`. Column count
/// equals `cols(M) − numerical_rank(M, rel_tol)`.
pub fn orthonormal_kernel_basis(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    assert!(
        rel_tol > 0.0 && rel_tol < 1.0,
        "rel_tol must lie in (0, 1), got {rel_tol}"
    );
    let decomp = svd(m);
    let sigma_max = decomp.values.first().copied().unwrap_or(0.0);
    let rank = decomp
        .values
        .iter()
        .filter(|&&s| s > rel_tol * sigma_max)
        .count();
    let cols = m.cols();
    ComplexMatrix::from_fn(cols, cols - rank, |i, j| {
        decomp.right_vectors.get(i, rank + j)
    })
}
