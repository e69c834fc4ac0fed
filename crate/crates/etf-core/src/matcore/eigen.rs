//! Cyclic Jacobi eigendecomposition for Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair with a complex plane
//! rotation; sweeps run in fixed row-major pair order until the
//! off-diagonal Frobenius mass falls below `1e-14 · ‖M‖_F`. Simple,
//! deterministic, and accurate at the dense sizes this crate works with
//! (a few hundred at most).

use super::{phase_normalize_column, ComplexMatrix, EigenDecomposition, MatError, C64, CZERO};

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_FACTOR: f64 = 1e-14;

/// Eigendecomposition of a Hermitian matrix.
///
/// `tol` gates the Hermitian precondition (`‖M − M*‖_max ≤ tol·‖M‖_max`).
/// Output is sorted by ascending eigenvalue; ties are broken by the
/// phase-normalized eigenvector components so the result is a pure
/// function of the input bits.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition, MatError> {
    if !m.is_square() {
        return Err(MatError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let scale = m.max_abs();
    let deviation = m.hermitian_deviation();
    if deviation > tol * scale {
        return Err(MatError::NotHermitian {
            deviation,
            bound: tol * scale,
        });
    }

    let n = m.rows();
    // Work on the exactly Hermitian average (M + M*)/2 with a real diagonal.
    let mut w = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m.get(i, i).re, 0.0)
        } else {
            (m.get(i, j) + m.get(j, i).conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);

    let target = OFF_DIAG_FACTOR * w.fro_norm();
    let mut converged = off_diag_fro(&w) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diag_fro(&w) <= target;
    }
    if !converged {
        return Err(MatError::NoConvergence(MAX_SWEEPS));
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|j| {
            let mut col = v.col(j);
            phase_normalize_column(&mut col);
            (w.get(j, j).re, col)
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite eigenvalues")
            .then_with(|| cmp_columns(&a.1, &b.1))
    });

    let values = pairs.iter().map(|(val, _)| *val).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);
    Ok(EigenDecomposition { values, vectors })
}

fn off_diag_fro(w: &ComplexMatrix) -> f64 {
    let n = w.rows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            sum += w.get(p, q).norm_sqr();
        }
    }
    (2.0 * sum).sqrt()
}

/// Deterministic order on phase-normalized eigenvectors for exact
/// eigenvalue ties: position of the leading component first (so the
/// identity decomposes to itself), then entrywise (re, im).
fn cmp_columns(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    let lead = |col: &[C64]| col.iter().position(|z| z.norm() > 1e-12);
    match lead(a).cmp(&lead(b)) {
        std::cmp::Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().zip(b) {
        match x
            .re
            .partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
        {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// One complex Jacobi rotation annihilating the (p,q) entry.
///
/// With a_pq = r·e^{iφ} the rotation U is the identity outside the (p,q)
/// plane, where it equals [[c, −s̄], [s, c]] with s = σ·e^{−iφ}; σ and c
/// come from the usual smaller-root tangent choice, so the update stays
/// well conditioned.
fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = w.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = w.get(p, p).re;
    let aqq = w.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = -tau.signum_or_one() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let sigma = t * c;
    let phase = apq / r;
    let s = phase.conj() * sigma;

    let n = w.rows();
    // W ← W·U (columns), then U*·W (rows).
    for i in 0..n {
        let wp = w.get(i, p);
        let wq = w.get(i, q);
        w.set(i, p, wp * c + wq * s);
        w.set(i, q, wp * (-s.conj()) + wq * c);
    }
    for j in 0..n {
        let wp = w.get(p, j);
        let wq = w.get(q, j);
        w.set(p, j, wp * c + wq * s.conj());
        w.set(q, j, wp * (-s) + wq * c);
    }
    // The rotation zeroes the pair exactly and keeps the diagonal real;
    // enforce both against rounding.
    w.set(p, q, CZERO);
    w.set(q, p, CZERO);
    w.set(p, p, C64::new(w.get(p, p).re, 0.0));
    w.set(q, q, C64::new(w.get(q, q).re, 0.0));

    for i in 0..n {
        let vp = v.get(i, p);
        let vq = v.get(i, q);
        v.set(i, p, vp * c + vq * s);
        v.set(i, q, vp * (-s.conj()) + vq * c);
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}
