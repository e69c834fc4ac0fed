//! Defining-identity checks for frames and the scalar parameter family
//! (α, β, γ, μ, λ) attached to a (d, n) pair.
//!
//! Every parameter is carried both as a float and as an exact reduced
//! fraction (α via α²), so reports can show exact arithmetic wherever the
//! underlying identity is exact.

use crate::constructions::Frame;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid pair (d,n) = ({d},{n}): need 2 ≤ d < n")]
    InvalidPair { d: u32, n: u32 },
}

/// Exact reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Self {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The scalar family of an ETF at (d, n):
/// α² = (n−d)/(d(n−1)), β = n/d, γ = α²/(1−α²) = (n−d)/(n(d−1)),
/// μ = (γ+1)/(2γ) = d(n−1)/(2(n−d)), λ = ((d−1)/(n−1))·μ = d(d−1)/(2(n−d)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtfParameters {
    pub d: u32,
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub lambda: f64,
    pub alpha_sq: Rational,
    pub beta_exact: Rational,
    pub gamma_exact: Rational,
    pub mu_exact: Rational,
    pub lambda_exact: Rational,
}

pub fn etf_params(d: u32, n: u32) -> Result<EtfParameters, VerifyError> {
    if d < 2 || n <= d {
        return Err(VerifyError::InvalidPair { d, n });
    }
    let (di, ni) = (i64::from(d), i64::from(n));
    let alpha_sq = Rational::new(ni - di, di * (ni - 1));
    let beta_exact = Rational::new(ni, di);
    let gamma_exact = Rational::new(ni - di, ni * (di - 1));
    let mu_exact = Rational::new(di * (ni - 1), 2 * (ni - di));
    let lambda_exact = Rational::new(di * (di - 1), 2 * (ni - di));
    Ok(EtfParameters {
        d,
        n,
        alpha: alpha_sq.to_f64().sqrt(),
        beta: beta_exact.to_f64(),
        gamma: gamma_exact.to_f64(),
        mu: mu_exact.to_f64(),
        lambda: lambda_exact.to_f64(),
        alpha_sq,
        beta_exact,
        gamma_exact,
        mu_exact,
        lambda_exact,
    })
}

/// Minimum possible coherence of n unit vectors in dimension d:
/// √((n−d)/(d(n−1))). ETFs are exactly the frames meeting it.
pub fn welch_bound(d: u32, n: u32) -> f64 {
    assert!(n > d && d >= 1, "welch_bound needs n > d ≥ 1");
    ((n - d) as f64 / (d as f64 * (n - 1) as f64)).sqrt()
}

/// Max over columns of | ‖x_j‖ − 1 |.
pub fn check_unit_norm(f: &Frame) -> f64 {
    (0..f.n())
        .map(|j| (f.matrix().col_norm(j) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// ‖X·X* − (n/d)·I‖_max.
pub fn check_tight(f: &Frame) -> f64 {
    let beta = f.n() as f64 / f.d() as f64;
    let gram_rows = f.matrix().matmul(&f.matrix().adjoint());
    let mut residual: f64 = 0.0;
    for i in 0..f.d() {
        for j in 0..f.d() {
            let expected = if i == j { beta } else { 0.0 };
            let z = gram_rows.get(i, j);
            residual = residual.max((z - crate::matcore::C64::new(expected, 0.0)).norm());
        }
    }
    residual
}

/// Mean off-diagonal |⟨x_i, x_j⟩| and the maximum deviation from that
/// mean. A frame is equiangular when the spread vanishes.
pub fn check_equiangular(f: &Frame) -> (f64, f64) {
    assert!(f.n() >= 2, "equiangularity needs at least two vectors");
    let gram = f.gram();
    let mut values = Vec::with_capacity(f.n() * (f.n() - 1) / 2);
    for i in 0..f.n() {
        for j in (i + 1)..f.n() {
            values.push(gram.get(i, j).norm());
        }
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = values.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    (mean, spread)
}

/// Maximum off-diagonal |⟨x_i, x_j⟩| of the Gram matrix.
pub fn coherence(f: &Frame) -> f64 {
    let gram = f.gram();
    let mut max = 0.0f64;
    for i in 0..f.n() {
        for j in (i + 1)..f.n() {
            max = max.max(gram.get(i, j).norm());
        }
    }
    max
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub d: usize,
    pub n: usize,
    pub tol: f64,
    pub unit_norm_residual: f64,
    pub tightness_residual: f64,
    pub equiangularity_spread: f64,
    pub alpha_observed: f64,
    pub coherence_observed: f64,
    pub welch_bound: f64,
    pub unit_norm_pass: bool,
    pub tight_pass: bool,
    pub equiangular_pass: bool,
    pub passed: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn first_failure(&self) -> Option<String> {
        if !self.unit_norm_pass {
            return Some(format!(
                "unit-norm residual {:.3e} exceeds {:.1e}",
                self.unit_norm_residual, self.tol
            ));
        }
        if !self.tight_pass {
            return Some(format!(
                "tightness residual {:.3e} exceeds {:.1e}",
                self.tightness_residual, self.tol
            ));
        }
        if !self.equiangular_pass {
            return Some(format!(
                "equiangularity fails: spread {:.3e}, mean |gram| {:.6} vs Welch {:.6}",
                self.equiangularity_spread, self.alpha_observed, self.welch_bound
            ));
        }
        None
    }
}

/// Run the three defining checks at tolerance `tol`.
///
/// The equiangularity verdict also requires α > 0 (an orthonormal basis
/// has constant zero angles yet is not an ETF).
pub fn verify_frame(f: &Frame, tol: f64) -> VerificationReport {
    let unit_norm_residual = check_unit_norm(f);
    let tightness_residual = check_tight(f);
    let (alpha_observed, equiangularity_spread) = check_equiangular(f);
    let coherence_observed = coherence(f);
    let (d, n) = (f.d(), f.n());
    let expected_alpha = if n > d {
        welch_bound(d as u32, n as u32)
    } else {
        0.0
    };
    let unit_norm_pass = unit_norm_residual <= tol;
    let tight_pass = tightness_residual <= tol;
    let equiangular_pass = equiangularity_spread <= tol
        && (alpha_observed - expected_alpha).abs() <= tol
        && alpha_observed > tol;
    let passed = unit_norm_pass && tight_pass && equiangular_pass;
    VerificationReport {
        d,
        n,
        tol,
        unit_norm_residual,
        tightness_residual,
        equiangularity_spread,
        alpha_observed,
        coherence_observed,
        welch_bound: expected_alpha,
        unit_norm_pass,
        tight_pass,
        equiangular_pass,
        passed,
    }
}
