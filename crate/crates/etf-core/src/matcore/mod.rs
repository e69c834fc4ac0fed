//! Dense complex vector/matrix primitives and the numerically delicate
//! kernels the rest of the crate builds on: Hermitian eigendecomposition
//! (cyclic Jacobi), singular values with tolerance-based numerical rank
//! (one-sided Jacobi), and unitary constructions.
//!
//! Everything here is a pure function of its inputs and deterministic for
//! identical input bits: fixed sweep orders, explicit tie-breaking, and
//! phase-normalized vector output.

mod eigen;
mod svd;
mod unitary;

pub use eigen::hermitian_eigen;
pub use svd::{numerical_rank, orthonormal_kernel_basis, singular_values, svd, Svd};
pub use unitary::unitary_mapping_to_e1;

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

pub(crate) const CZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const CONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max deviation {deviation:.3e} exceeds {bound:.3e}")]
    NotHermitian { deviation: f64, bound: f64 },
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("cannot build a unitary from the zero vector")]
    ZeroVector,
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![CZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, CONE);
        }
        m
    }

    /// All-ones matrix (the J of the rank-one flatness identities).
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![CONE; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from explicit rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = z;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose M*.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == CZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * rhs.get(k, j));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Entrywise real part, returned as a complex matrix with zero
    /// imaginary part.
    pub fn real_part(&self) -> Self {
        self.map(|z| C64::new(z.re, 0.0))
    }

    /// Entrywise imaginary part as a real-valued complex matrix.
    pub fn imag_part(&self) -> Self {
        self.map(|z| C64::new(z.im, 0.0))
    }

    /// Max-modulus norm ‖M‖_max.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn col_norm(&self, j: usize) -> f64 {
        (0..self.rows)
            .map(|i| self.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// ‖M − M*‖_max, zero for exactly Hermitian input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Full spectrum of a Hermitian matrix: `values` ascending, `vectors`
/// holding the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Multiply a column in place by the unit scalar that makes its first
/// component of magnitude above `1e-12` real positive. The convention pins
/// the phase freedom of eigenvectors and singular vectors so identical
/// inputs produce identical output bits.
pub(crate) fn phase_normalize_column(col: &mut [C64]) {
    let lead = col.iter().find(|z| z.norm() > 1e-12);
    if let Some(&z) = lead {
        let fix = (z / z.norm()).conj();
        for entry in col.iter_mut() {
            *entry *= fix;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(0.0, 2.0)],
            vec![c(3.0, 0.0), c(1.0, -1.0)],
        ]);
        let gram = a.adjoint().matmul(&a);
        assert!(gram.hermitian_deviation() < 1e-15);
        assert!((gram.get(0, 0).re - 11.0).abs() < 1e-14);
        assert!((gram.get(1, 1).re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn identity_roundtrip() {
        let id = ComplexMatrix::identity(4);
        let m = ComplexMatrix::from_fn(4, 4, |i, j| c((i + 2 * j) as f64, j as f64));
        assert_eq!(id.matmul(&m), m);
        assert_eq!(m.matmul(&id), m);
    }

    #[test]
    fn phase_normalization_is_idempotent() {
        let mut col = vec![c(0.0, 0.5), c(0.3, -0.2)];
        phase_normalize_column(&mut col);
        assert!(col[0].im.abs() < 1e-15);
        assert!(col[0].re > 0.0);
        let snapshot = col.clone();
        phase_normalize_column(&mut col);
        assert_eq!(snapshot, col);
    }
}
