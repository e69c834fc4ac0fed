//! Deterministic sampling helpers for tests and benchmarks: a SplitMix64
//! stream plus random unitaries, Hermitian matrices, and projections built
//! from it. No external RNG dependency, so seeds reproduce bit-for-bit
//! across platforms and releases.

use crate::matcore::{ComplexMatrix, C64};

/// SplitMix64 PRNG (Steele et al.); passes through every 64-bit state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u = loop {
            let candidate = self.next_f64();
            if candidate > 0.0 {
                break candidate;
            }
        };
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    pub fn next_complex_gaussian(&mut self) -> C64 {
        C64::new(self.next_gaussian(), self.next_gaussian())
    }

    /// Unit-modulus complex scalar with uniform phase.
    pub fn next_unit_phase(&mut self) -> C64 {
        let theta = 2.0 * std::f64::consts::PI * self.next_f64();
        C64::new(theta.cos(), theta.sin())
    }
}

/// Haar-ish random unitary: Gaussian matrix orthonormalized column by
/// column with twice-applied modified Gram-Schmidt.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let g = ComplexMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian());
    orthonormalize_columns(&g)
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let g = ComplexMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian());
    g.add(&g.adjoint()).scaled(0.5)
}

/// Random rank-`rank` orthogonal projection P = QQ* with Q a random
/// orthonormal frame of `rank` columns.
pub fn random_projection(n: usize, rank: usize, seed: u64) -> ComplexMatrix {
    assert!(rank >= 1 && rank <= n, "rank must lie in 1..=n");
    let mut rng = SplitMix64::new(seed);
    let g = ComplexMatrix::from_fn(n, rank, |_, _| rng.next_complex_gaussian());
    let q = orthonormalize_columns(&g);
    q.matmul(&q.adjoint())
}

/// n independent unit phases.
pub fn random_unit_phases(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| rng.next_unit_phase()).collect()
}

fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let rows = m.rows();
    let cols = m.cols();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut col = m.col(j);
        // Two MGS passes keep orthogonality near machine precision.
        for _ in 0..2 {
            for prev in &basis {
                let overlap: C64 = prev.iter().zip(&col).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= p * overlap;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "Gaussian columns are independent a.s.");
        for c in col.iter_mut() {
            *c /= norm;
        }
        basis.push(col);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}
