//! Concrete equiangular tight frames: harmonic frames from difference
//! sets (Singer's projective-plane sets in particular), regular
//! simplices, and Naimark complements.
//!
//! These are the instances the certificate pipeline runs on; the Singer
//! family attains n = d²−d+1, the edge of the certified gap.

use crate::exec;
use crate::finite_field::{make_field, prime_power_decompose, relative_trace, FieldError};
use crate::matcore::{orthonormal_kernel_basis, ComplexMatrix, C64};
use crate::verification;
use crate::{DEFAULT_REL_TOL, DEFAULT_TOL};
use serde::Serialize;
use thiserror::Error;

/// Largest prime power accepted by [`singer_difference_set`].
pub const MAX_SINGER_Q: u64 = 64;

/// Largest subset count [`brute_force_difference_sets`] will enumerate.
pub const MAX_SEARCH_SPACE: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("Singer construction supports q ≤ {MAX_SINGER_Q}, got {0}")]
    SingerOrderTooLarge(u64),
    #[error("search space C({v},{k}) exceeds {MAX_SEARCH_SPACE} subsets")]
    SearchSpaceTooLarge { v: u32, k: u32 },
    #[error("not a ({v},{k},{lambda}) difference set: residue {residue} occurs {count} times")]
    NotADifferenceSet {
        v: u32,
        k: u32,
        lambda: u32,
        residue: u32,
        count: u32,
    },
    #[error("elements must be strictly increasing residues mod {v}")]
    MalformedElements { v: u32 },
    #[error("counting identity k(k-1) = λ(v-1) has no integer solution for v={v}, k={k}")]
    CountingIdentityFails { v: u32, k: u32 },
    #[error("frame shape {d}x{n} invalid: need 1 ≤ d ≤ n")]
    InvalidShape { d: usize, n: usize },
    #[error("matrix entries must be finite")]
    NonFiniteEntries,
    #[error("input is not an equiangular tight frame: {reason}")]
    NotAnEtf { reason: String },
    #[error("complement of an n = d+1 simplex is degenerate: its vectors are pairwise parallel")]
    DegenerateComplement,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A (v, k, λ)-difference set: k residues mod v whose pairwise differences
/// hit every nonzero residue exactly λ times. Validated exhaustively at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferenceSet {
    v: u32,
    k: u32,
    lambda: u32,
    elements: Vec<u32>,
}

impl DifferenceSet {
    /// Validate and wrap a candidate element list (strictly increasing
    /// residues mod v). λ is forced by the counting identity
    /// k(k−1) = λ(v−1).
    pub fn new(v: u32, elements: Vec<u32>) -> Result<Self, ConstructionError> {
        if v < 2 {
            return Err(ConstructionError::MalformedElements { v });
        }
        let k = elements.len() as u32;
        if k == 0 || k > v {
            return Err(ConstructionError::MalformedElements { v });
        }
        let increasing = elements.windows(2).all(|w| w[0] < w[1]);
        if !increasing || elements.iter().any(|&e| e >= v) {
            return Err(ConstructionError::MalformedElements { v });
        }
        let numerator = u64::from(k) * u64::from(k - 1);
        if numerator % u64::from(v - 1) != 0 {
            return Err(ConstructionError::CountingIdentityFails { v, k });
        }
        let lambda = (numerator / u64::from(v - 1)) as u32;
        if let Some((residue, count)) = difference_count_mismatch(v, lambda, &elements) {
            return Err(ConstructionError::NotADifferenceSet {
                v,
                k,
                lambda,
                residue,
                count,
            });
        }
        Ok(Self {
            v,
            k,
            lambda,
            elements,
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Replication count λ (every nonzero residue arises this many times
    /// as a difference).
    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// Lexicographically smallest translate; it always contains 0.
    pub fn canonicalize(&self) -> Self {
        Self {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            elements: canonical_translate(self.v, &self.elements),
        }
    }
}

fn canonical_translate(v: u32, elements: &[u32]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for t in 0..v {
        let mut shifted: Vec<u32> = elements.iter().map(|&e| (e + t) % v).collect();
        shifted.sort_unstable();
        if best.as_ref().is_none_or(|b| shifted < *b) {
            best = Some(shifted);
        }
    }
    best.unwrap()
}

/// Exhaustive validator: true iff the multiset of pairwise differences
/// covers every nonzero residue mod v exactly λ times.
pub fn is_difference_set(v: u32, lambda: u32, elements: &[u32]) -> bool {
    difference_count_mismatch(v, lambda, elements).is_none()
}

fn difference_count_mismatch(v: u32, lambda: u32, elements: &[u32]) -> Option<(u32, u32)> {
    let mut counts = vec![0u32; v as usize];
    difference_count_mismatch_buffered(v, lambda, elements, &mut counts)
}

fn difference_count_mismatch_buffered(
    v: u32,
    lambda: u32,
    elements: &[u32],
    counts: &mut [u32],
) -> Option<(u32, u32)> {
    counts.iter_mut().for_each(|c| *c = 0);
    for (i, &a) in elements.iter().enumerate() {
        for (j, &b) in elements.iter().enumerate() {
            if i != j {
                let diff = (a + v - b) % v;
                counts[diff as usize] += 1;
            }
        }
    }
    (1..v).find_map(|r| {
        let count = counts[r as usize];
        (count != lambda).then_some((r, count))
    })
}

/// Singer (q²+q+1, q+1, 1)-difference set via the trace-zero hyperplane
/// of GF(q³): with ω the primitive generator, D = { i mod v :
/// Tr_{GF(q³)/GF(q)}(ωⁱ) = 0 }. Validated exhaustively before return.
pub fn singer_difference_set(q: u64) -> Result<DifferenceSet, ConstructionError> {
    let (p, exp) = prime_power_decompose(q).ok_or(ConstructionError::NotPrimePower(q))?;
    if q > MAX_SINGER_Q {
        return Err(ConstructionError::SingerOrderTooLarge(q));
    }
    let field = make_field(p, 3 * exp)?;
    let v = (q * q + q + 1) as u32;

    let mut residues = std::collections::BTreeSet::new();
    let mut x = field.one();
    for i in 0..(field.order() - 1) {
        if relative_trace(&field, q, &x)?.is_zero() {
            residues.insert((i % u64::from(v)) as u32);
        }
        x = field.mul(&x, field.generator());
    }
    let elements: Vec<u32> = residues.into_iter().collect();
    debug_assert_eq!(elements.len() as u64, q + 1);
    DifferenceSet::new(v, elements)
}

/// All (v, k, λ)-difference sets, one canonical representative per
/// translation class (the representative contains 0 and is
/// lexicographically smallest among its translates).
///
/// Every translation class has a member containing 0, so only subsets
/// with smallest element 0 are scanned; the search space splits into
/// independent buckets by second element, one parallel task each.
pub fn brute_force_difference_sets(
    v: u32,
    k: u32,
    lambda: u32,
) -> Result<Vec<DifferenceSet>, ConstructionError> {
    assert!(v >= 2 && k >= 1 && k <= v, "need 2 ≤ v and 1 ≤ k ≤ v");
    if binomial(v, k) > MAX_SEARCH_SPACE {
        return Err(ConstructionError::SearchSpaceTooLarge { v, k });
    }
    if u64::from(k) * u64::from(k - 1) != u64::from(lambda) * u64::from(v - 1) {
        return Ok(Vec::new());
    }

    let mut canonical = std::collections::BTreeSet::new();
    if k == 1 {
        if is_difference_set(v, lambda, &[0]) {
            canonical.insert(vec![0u32]);
        }
    } else {
        let buckets: Vec<u32> = (1..=(v - (k - 1))).collect();
        let hits = exec::map_collect(buckets, |second| scan_bucket(v, k, lambda, second));
        for elements in hits.into_iter().flatten() {
            canonical.insert(elements);
        }
    }

    Ok(canonical
        .into_iter()
        .map(|elements| DifferenceSet {
            v,
            k,
            lambda,
            elements,
        })
        .collect())
}

/// Enumerate the k-subsets {0, second, x₂ < … < x_{k−1}} of Z_v and
/// return the canonical form of every difference set among them.
fn scan_bucket(v: u32, k: u32, lambda: u32, second: u32) -> Vec<Vec<u32>> {
    let k = k as usize;
    let mut subset: Vec<u32> = vec![0; k];
    subset[1] = second;
    for i in 2..k {
        subset[i] = second + (i as u32 - 1);
    }
    if *subset.last().unwrap() >= v {
        return Vec::new();
    }

    let mut counts = vec![0u32; v as usize];
    let mut hits = Vec::new();
    loop {
        if difference_count_mismatch_buffered(v, lambda, &subset, &mut counts).is_none() {
            hits.push(canonical_translate(v, &subset));
        }
        if k == 2 {
            return hits;
        }
        // Advance positions 2..k in lexicographic order; 0 and the
        // bucket's second element stay pinned.
        let mut i = k - 1;
        loop {
            let cap = v - (k - 1 - i) as u32;
            if subset[i] + 1 < cap {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
            if i == 2 {
                return hits;
            }
            i -= 1;
        }
    }
}

fn binomial(v: u32, k: u32) -> u128 {
    let k = k.min(v - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(v - i) / u128::from(i + 1);
        if acc > 100 * MAX_SEARCH_SPACE {
            return acc;
        }
    }
    acc
}

/// A d×n frame: complex matrix whose columns are the frame vectors.
/// Frames produced by the constructors in this module have unit-norm
/// columns within 1e-12; frames loaded from disk are checked by the
/// verification module instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    d: usize,
    n: usize,
    matrix: ComplexMatrix,
}

impl Frame {
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self, ConstructionError> {
        let (d, n) = (matrix.rows(), matrix.cols());
        if d < 1 || d > n {
            return Err(ConstructionError::InvalidShape { d, n });
        }
        if !matrix.all_finite() {
            return Err(ConstructionError::NonFiniteEntries);
        }
        Ok(Self { d, n, matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Gram matrix X*X of pairwise inner products.
    pub fn gram(&self) -> ComplexMatrix {
        self.matrix.adjoint().matmul(&self.matrix)
    }
}

/// Harmonic frame of a difference set: d = k rows indexed by the set
/// elements, n = v columns indexed by Z_v, entry exp(2πi·d_j·t/v)/√k.
pub fn harmonic_etf(ds: &DifferenceSet) -> Frame {
    let v = u64::from(ds.v());
    let k = ds.k() as usize;
    let norm = 1.0 / (k as f64).sqrt();
    let step = 2.0 * std::f64::consts::PI / v as f64;
    let matrix = ComplexMatrix::from_fn(k, ds.v() as usize, |j, t| {
        let phase = (u64::from(ds.elements()[j]) * t as u64) % v;
        let angle = step * phase as f64;
        C64::new(angle.cos() * norm, angle.sin() * norm)
    });
    Frame {
        d: k,
        n: ds.v() as usize,
        matrix,
    }
}

/// Regular d×(d+1) simplex: the (d+1)-point DFT matrix with its all-ones
/// row removed and columns renormalized.
pub fn simplex_etf(d: usize) -> Frame {
    assert!(d >= 1, "simplex dimension must be positive");
    let n = d + 1;
    let norm = 1.0 / (d as f64).sqrt();
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let matrix = ComplexMatrix::from_fn(d, n, |row, t| {
        let phase = ((row + 1) * t) % n;
        let angle = step * phase as f64;
        C64::new(angle.cos() * norm, angle.sin() * norm)
    });
    Frame { d, n, matrix }
}

/// Naimark complement: the (n−d)×n ETF Z with
/// (d/n)·X*X + ((n−d)/n)·Z*Z = I, built from an orthonormal basis of
/// ker(X) scaled by √(n/(n−d)).
///
/// Requires n ≥ d+2: at n = d+1 the complement lives in one dimension, all
/// its vectors are parallel, and the coherence degenerates to 1.
pub fn naimark_complement(f: &Frame) -> Result<Frame, ConstructionError> {
    let report = verification::verify_frame(f, DEFAULT_TOL);
    if !report.passed {
        return Err(ConstructionError::NotAnEtf {
            reason: report.first_failure().unwrap_or_else(|| "unknown".into()),
        });
    }
    let (d, n) = (f.d(), f.n());
    if n == d + 1 {
        return Err(ConstructionError::DegenerateComplement);
    }
    let kernel = orthonormal_kernel_basis(f.matrix(), DEFAULT_REL_TOL);
    if kernel.cols() != n - d {
        return Err(ConstructionError::NotAnEtf {
            reason: format!("numerical rank {} differs from d = {d}", n - kernel.cols()),
        });
    }
    let scale = (n as f64 / (n - d) as f64).sqrt();
    let z = kernel.adjoint().scaled(scale);
    Frame::from_matrix(z)
}
