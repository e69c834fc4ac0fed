//! Step-by-step numerical certificate that a concrete ETF satisfies every
//! identity in the spectral-gap argument: block-form reduction, the Gram
//! objects H, K, R and the projection P = A + iB, the flatness identity,
//! the projection split, eigenvalue pairing under B, and the rank chain
//! that concludes n ≤ d²−d+1.
//!
//! Identity residuals are compared against the caller's `tol`; assertions
//! that pass through an eigensolve or an SVD use the fixed
//! [`SPECTRAL_TOL`] instead, which absorbs the extra rounding those
//! factorizations carry.

use crate::cmx;
use crate::constructions::Frame;
use crate::matcore::{
    hermitian_eigen, numerical_rank, orthonormal_kernel_basis, singular_values,
    unitary_mapping_to_e1, ComplexMatrix, EigenDecomposition, MatError, C64, CONE,
};
use crate::verification::{etf_params, verify_frame, EtfParameters, Rational, VerifyError};
use serde::Serialize;
use thiserror::Error;

/// Pass threshold for residuals that depend on an eigendecomposition or
/// an SVD (eigenvalue relations, kernel alignment, cluster locations).
pub const SPECTRAL_TOL: f64 = 1e-8;

/// A restriction of B between paired eigenspaces certifies bijectivity
/// when its smallest singular value clears this threshold.
pub const BIJECTION_MIN_SV: f64 = 1e-8;

/// Two eigenvalues of A belong to one cluster when they differ by less
/// than `CLUSTER_FACTOR · max(1, ‖A‖_max)`.
const CLUSTER_FACTOR: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    InvalidPair(#[from] VerifyError),
    #[error("input is not an equiangular tight frame: {reason}")]
    NotAnEtf { reason: String },
    #[error("column {column} overlaps column 1 with magnitude {magnitude:.3e}; cannot phase")]
    PhaseDegeneracy { column: usize, magnitude: f64 },
    #[error("Gram invariant `{name}` violated: residual {residual:.3e} exceeds {bound:.3e}")]
    InvariantViolation {
        name: &'static str,
        residual: f64,
        bound: f64,
    },
    #[error("eigenspace pairing violated at λ = {lambda}: {detail}")]
    PairingViolation { lambda: f64, detail: String },
    #[error("rank chain violated: {detail}")]
    RankChainViolation { detail: String },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Outcome of the block-form reduction: Y is (d−1)×(n−1) with unit
/// columns, zero row sums, and Y·Y* = ((n−1)/(d−1))·I, all within `tol`.
#[derive(Debug, Clone)]
pub struct BlockForm {
    pub y: ComplexMatrix,
    pub column_norm_residual: f64,
    pub row_sum_residual: f64,
    pub tightness_residual: f64,
}

impl BlockForm {
    pub fn residual(&self) -> f64 {
        self.column_norm_residual
            .max(self.row_sum_residual)
            .max(self.tightness_residual)
    }
}

/// Rotate the frame so column 1 becomes e₁, phase every column so the
/// first row is real positive, and peel off the trailing block divided by
/// √(1−α²).
pub fn reduce_to_block_form(f: &Frame, tol: f64) -> Result<BlockForm, CertifyError> {
    let report = verify_frame(f, tol);
    if !report.passed {
        return Err(CertifyError::NotAnEtf {
            reason: report.first_failure().unwrap_or_else(|| "unknown".into()),
        });
    }
    let params = etf_params(f.d() as u32, f.n() as u32)?;
    reduce_verified(f, &params, tol)
}

fn reduce_verified(f: &Frame, params: &EtfParameters, tol: f64) -> Result<BlockForm, CertifyError> {
    let (d, n) = (f.d(), f.n());
    let u = unitary_mapping_to_e1(&f.matrix().col(0))?;
    let mut x = u.matmul(f.matrix());

    for j in 0..n {
        let lead = x.get(0, j);
        let magnitude = lead.norm();
        if magnitude <= tol {
            return Err(CertifyError::PhaseDegeneracy {
                column: j + 1,
                magnitude,
            });
        }
        let fix = (lead / magnitude).conj();
        for i in 0..d {
            let z = x.get(i, j);
            x.set(i, j, z * fix);
        }
    }

    let alpha = params.alpha;
    let scale = 1.0 / (1.0 - alpha * alpha).sqrt();
    let y = ComplexMatrix::from_fn(d - 1, n - 1, |i, j| x.get(i + 1, j + 1) * scale);

    let column_norm_residual = (0..n - 1)
        .map(|j| (y.col_norm(j) - 1.0).abs())
        .fold(0.0, f64::max);
    let ones = vec![CONE; n - 1];
    let row_sums = y.mul_vec(&ones);
    let row_sum_residual =
        row_sums.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / (n as f64).sqrt();
    let ratio = (n as f64 - 1.0) / (d as f64 - 1.0);
    let yyt = y.matmul(&y.adjoint());
    let tightness_residual = yyt
        .sub(&ComplexMatrix::identity(d - 1).scaled(ratio))
        .max_abs();

    Ok(BlockForm {
        y,
        column_norm_residual,
        row_sum_residual,
        tightness_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramResiduals {
    pub hermitian: f64,
    pub diag_k: f64,
    pub diag_r: f64,
    pub a_symmetric: f64,
    pub b_antisymmetric: f64,
    pub idempotency: f64,
}

/// The matrices the argument runs on: H = Y*Y, K = |H|² entrywise,
/// R = Re(H), P = ((d−1)/(n−1))·H, and its real/imaginary split
/// P = A + iB.
#[derive(Debug, Clone)]
pub struct GramObjects {
    pub h: ComplexMatrix,
    pub k: ComplexMatrix,
    pub r: ComplexMatrix,
    pub p: ComplexMatrix,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub residuals: GramResiduals,
}

pub fn build_gram_objects(
    y: &ComplexMatrix,
    params: &EtfParameters,
    tol: f64,
) -> Result<GramObjects, CertifyError> {
    let h = y.adjoint().matmul(y);
    let k = h.map(|z| C64::new(z.norm_sqr(), 0.0));
    let r = h.real_part();
    let ratio = (params.d as f64 - 1.0) / (params.n as f64 - 1.0);
    let p = h.scaled(ratio);
    let a = p.real_part();
    let b = p.imag_part();

    let m = h.rows();
    let diag_dev = |mat: &ComplexMatrix| {
        (0..m)
            .map(|i| (mat.get(i, i) - CONE).norm())
            .fold(0.0, f64::max)
    };
    let residuals = GramResiduals {
        hermitian: h.hermitian_deviation(),
        diag_k: diag_dev(&k),
        diag_r: diag_dev(&r),
        a_symmetric: a.sub(&a.adjoint()).max_abs(),
        b_antisymmetric: b.add(&b.adjoint()).max_abs(),
        idempotency: p.matmul(&p).sub(&p).max_abs(),
    };

    let checks: [(&'static str, f64); 6] = [
        ("H Hermitian", residuals.hermitian),
        ("diag(K) = 1", residuals.diag_k),
        ("diag(R) = 1", residuals.diag_r),
        ("A symmetric", residuals.a_symmetric),
        ("B antisymmetric", residuals.b_antisymmetric),
        ("P idempotent", residuals.idempotency),
    ];
    for (name, residual) in checks {
        if residual > tol {
            return Err(CertifyError::InvariantViolation {
                name,
                residual,
                bound: tol,
            });
        }
    }
    Ok(GramObjects {
        h,
        k,
        r,
        p,
        a,
        b,
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessCheck {
    /// ‖K + 2γR − γJ − (γ+1)I‖_max.
    pub identity_residual: f64,
    /// max |(R·1)_i|.
    pub r_row_sum_residual: f64,
    /// max |(K·1)_i − (n−1)/(d−1)|.
    pub k_row_sum_residual: f64,
}

impl FlatnessCheck {
    pub fn residual(&self) -> f64 {
        self.identity_residual
            .max(self.r_row_sum_residual)
            .max(self.k_row_sum_residual)
    }
}

/// The entrywise consequence of every off-diagonal Gram entry z obeying
/// |z|² + 2γ·Re(z) − γ = 0, plus the forced row sums R·1 = 0 and
/// K·1 = ((n−1)/(d−1))·1.
pub fn check_flatness_identity(g: &GramObjects, params: &EtfParameters) -> FlatnessCheck {
    let m = g.k.rows();
    let gamma = params.gamma;
    let lhs =
        g.k.add(&g.r.scaled(2.0 * gamma))
            .sub(&ComplexMatrix::ones(m, m).scaled(gamma));
    let identity_residual = lhs
        .sub(&ComplexMatrix::identity(m).scaled(gamma + 1.0))
        .max_abs();

    let ones = vec![CONE; m];
    let r_row_sum_residual =
        g.r.mul_vec(&ones)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
    let degree = (params.n as f64 - 1.0) / (params.d as f64 - 1.0);
    let k_row_sum_residual =
        g.k.mul_vec(&ones)
            .iter()
            .map(|z| (z - C64::new(degree, 0.0)).norm())
            .fold(0.0, f64::max);

    FlatnessCheck {
        identity_residual,
        r_row_sum_residual,
        k_row_sum_residual,
    }
}

/// Real and imaginary parts of P² = P: returns
/// (‖A²−B²−A‖_max, ‖AB+BA−B‖_max).
pub fn check_projection_split(g: &GramObjects) -> (f64, f64) {
    let residual_a = g.a.matmul(&g.a).sub(&g.b.matmul(&g.b)).sub(&g.a).max_abs();
    let residual_b = g.a.matmul(&g.b).add(&g.b.matmul(&g.a)).sub(&g.b).max_abs();
    (residual_a, residual_b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumCluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingEntry {
    pub lambda: f64,
    pub dim: usize,
    pub partner_lambda: f64,
    pub dim_partner: usize,
    pub bijection_min_singular: f64,
    pub self_paired: bool,
}

/// Certify the eigenspace-pairing lemma on an arbitrary split P = A + iB
/// of an idempotent: every eigenvalue cluster of A strictly inside (0,1)
/// pairs with a cluster at 1−λ of equal dimension, and B restricted
/// between the eigenspaces has smallest singular value above
/// [`BIJECTION_MIN_SV`]. Clusters at λ = ½ are self-paired.
pub fn pair_projection_eigenspaces(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<(Vec<SpectrumCluster>, Vec<PairingEntry>), CertifyError> {
    let ed = hermitian_eigen(a, tol)?;
    let cluster_tol = CLUSTER_FACTOR * a.max_abs().max(1.0);
    let clusters = cluster_eigenvalues(&ed.values, cluster_tol);

    let summary: Vec<SpectrumCluster> = clusters
        .iter()
        .map(|c| SpectrumCluster {
            value: c.value,
            multiplicity: c.indices.len(),
        })
        .collect();

    let interior: Vec<usize> = (0..clusters.len())
        .filter(|&i| clusters[i].value > cluster_tol && clusters[i].value < 1.0 - cluster_tol)
        .collect();
    let mut consumed = vec![false; clusters.len()];
    let mut table = Vec::new();

    for &i in interior.iter().rev() {
        if consumed[i] {
            continue;
        }
        let lambda = clusters[i].value;
        if (lambda - 0.5).abs() <= cluster_tol {
            // Self-paired: B maps ker(A − ½I) bijectively to itself.
            let basis = eigvec_block(&ed, &clusters[i].indices);
            let restriction = basis.adjoint().matmul(&b.matmul(&basis));
            let min_sv = min_singular(&restriction);
            if min_sv <= BIJECTION_MIN_SV {
                return Err(CertifyError::PairingViolation {
                    lambda,
                    detail: format!("B restriction at λ = ½ has min singular value {min_sv:.3e}"),
                });
            }
            consumed[i] = true;
            table.push(PairingEntry {
                lambda,
                dim: clusters[i].indices.len(),
                partner_lambda: lambda,
                dim_partner: clusters[i].indices.len(),
                bijection_min_singular: min_sv,
                self_paired: true,
            });
            continue;
        }
        if lambda < 0.5 {
            // Would have been consumed by its partner above ½.
            return Err(CertifyError::PairingViolation {
                lambda,
                detail: format!("no partner cluster found near {:.6}", 1.0 - lambda),
            });
        }
        let partner = interior
            .iter()
            .copied()
            .filter(|&j| !consumed[j] && j != i)
            .find(|&j| (clusters[j].value - (1.0 - lambda)).abs() <= cluster_tol);
        let j = partner.ok_or_else(|| CertifyError::PairingViolation {
            lambda,
            detail: format!("no partner cluster found near {:.6}", 1.0 - lambda),
        })?;
        let dim = clusters[i].indices.len();
        let dim_partner = clusters[j].indices.len();
        if dim != dim_partner {
            return Err(CertifyError::PairingViolation {
                lambda,
                detail: format!(
                    "dimension mismatch: dim ker(A−λI) = {dim}, dim ker(A−(1−λ)I) = {dim_partner}"
                ),
            });
        }
        let basis_i = eigvec_block(&ed, &clusters[i].indices);
        let basis_j = eigvec_block(&ed, &clusters[j].indices);
        let restriction = basis_j.adjoint().matmul(&b.matmul(&basis_i));
        let min_sv = min_singular(&restriction);
        if min_sv <= BIJECTION_MIN_SV {
            return Err(CertifyError::PairingViolation {
                lambda,
                detail: format!("B restriction has min singular value {min_sv:.3e}"),
            });
        }
        consumed[i] = true;
        consumed[j] = true;
        table.push(PairingEntry {
            lambda,
            dim,
            partner_lambda: clusters[j].value,
            dim_partner,
            bijection_min_singular: min_sv,
            self_paired: false,
        });
    }
    table.reverse();
    Ok((summary, table))
}

struct Cluster {
    value: f64,
    indices: Vec<usize>,
}

fn cluster_eigenvalues(values: &[f64], cluster_tol: f64) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for (idx, &value) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if (value - values[idx - 1]).abs() < cluster_tol => {
                last.indices.push(idx);
            }
            _ => clusters.push(Cluster {
                value,
                indices: vec![idx],
            }),
        }
    }
    // Report the mean of each cluster.
    for c in &mut clusters {
        c.value = c.indices.iter().map(|&i| values[i]).sum::<f64>() / c.indices.len() as f64;
    }
    clusters
}

fn eigvec_block(ed: &EigenDecomposition, indices: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(ed.vectors.rows(), indices.len(), |i, j| {
        ed.vectors.get(i, indices[j])
    })
}

fn min_singular(m: &ComplexMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPairEntry {
    pub kappa: f64,
    pub rho: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenPairingReport {
    pub a_spectrum: Vec<SpectrumCluster>,
    pub pairing_table: Vec<PairingEntry>,
    /// Shared eigenpairs (κ, ρ) of K and R on the orthocomplement of the
    /// all-ones vector.
    pub eigen_pairs: Vec<EigenPairEntry>,
    /// max |κ + 2γρ − (γ+1)| over the shared eigenpairs.
    pub eigen_relation_residual: f64,
    /// max ‖K̃w − κw‖_∞ over eigenvectors w of R̃ (shared-eigenvector
    /// certificate).
    pub shared_eigenvector_residual: f64,
    pub kernel_k_dim: usize,
    pub kernel_r_mu_dim: usize,
    /// Sine of the largest principal angle between ker(K) and ker(R−μI);
    /// 1.0 when the dimensions disagree.
    pub kernel_match_residual: f64,
    /// Largest cosine between ker(K) and ker(R − ((n−1)/(d−1) − μ)I);
    /// orthogonal subspaces give 0.
    pub kernel_orthogonality_residual: f64,
}

/// Eigen-structure step: pairing of A-eigenspaces, the κ + 2γρ = γ+1
/// relation on 1⊥, and the kernel identification ker(K) = ker(R−μI).
pub fn eigen_pairing_report(
    g: &GramObjects,
    params: &EtfParameters,
    tol: f64,
    rel_tol: f64,
) -> Result<EigenPairingReport, CertifyError> {
    let (a_spectrum, pairing_table) = pair_projection_eigenspaces(&g.a, &g.b, tol)?;

    // Compress K and R onto the orthocomplement of the all-ones vector.
    let m = g.k.rows();
    let ones = vec![CONE; m];
    let u = unitary_mapping_to_e1(&ones)?;
    let u_adj = u.adjoint();
    let q = ComplexMatrix::from_fn(m, m - 1, |i, j| u_adj.get(i, j + 1));
    let k_tilde = q.adjoint().matmul(&g.k.matmul(&q));
    let r_tilde = q.adjoint().matmul(&g.r.matmul(&q));

    let ed_r = hermitian_eigen(&r_tilde, tol)?;
    let gamma = params.gamma;
    let mut eigen_relation_residual: f64 = 0.0;
    let mut shared_eigenvector_residual: f64 = 0.0;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(m - 1);
    for idx in 0..(m - 1) {
        let w = ed_r.vectors.col(idx);
        let rho = ed_r.values[idx];
        let kw = k_tilde.mul_vec(&w);
        let kappa: f64 = w
            .iter()
            .zip(&kw)
            .map(|(wi, kwi)| (wi.conj() * kwi).re)
            .sum();
        eigen_relation_residual =
            eigen_relation_residual.max((kappa + 2.0 * gamma * rho - (gamma + 1.0)).abs());
        let defect = kw
            .iter()
            .zip(&w)
            .map(|(kwi, wi)| (kwi - wi * kappa).norm())
            .fold(0.0, f64::max);
        shared_eigenvector_residual = shared_eigenvector_residual.max(defect);
        pairs.push((rho, kappa));
    }
    let cluster_tol = CLUSTER_FACTOR * r_tilde.max_abs().max(1.0);
    let eigen_pairs = cluster_eigen_pairs(&pairs, cluster_tol);

    // Kernel identification via two independent SVD routes.
    let kernel_k = orthonormal_kernel_basis(&g.k, rel_tol);
    let r_minus_mu = g.r.sub(&ComplexMatrix::identity(m).scaled(params.mu));
    let kernel_r_mu = orthonormal_kernel_basis(&r_minus_mu, rel_tol);
    let kernel_match_residual = subspace_gap(&kernel_k, &kernel_r_mu);

    let nu = (params.n as f64 - 1.0) / (params.d as f64 - 1.0) - params.mu;
    let r_minus_nu = g.r.sub(&ComplexMatrix::identity(m).scaled(nu));
    let kernel_r_nu = orthonormal_kernel_basis(&r_minus_nu, rel_tol);
    let kernel_orthogonality_residual = if kernel_k.cols() == 0 || kernel_r_nu.cols() == 0 {
        0.0
    } else {
        singular_values(&kernel_k.adjoint().matmul(&kernel_r_nu))
            .first()
            .copied()
            .unwrap_or(0.0)
    };

    Ok(EigenPairingReport {
        a_spectrum,
        pairing_table,
        eigen_pairs,
        eigen_relation_residual,
        shared_eigenvector_residual,
        kernel_k_dim: kernel_k.cols(),
        kernel_r_mu_dim: kernel_r_mu.cols(),
        kernel_match_residual,
        kernel_orthogonality_residual,
    })
}

fn cluster_eigen_pairs(pairs: &[(f64, f64)], cluster_tol: f64) -> Vec<EigenPairEntry> {
    let mut out: Vec<EigenPairEntry> = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end].0 - pairs[end - 1].0).abs() < cluster_tol {
            end += 1;
        }
        let len = (end - start) as f64;
        out.push(EigenPairEntry {
            rho: pairs[start..end].iter().map(|p| p.0).sum::<f64>() / len,
            kappa: pairs[start..end].iter().map(|p| p.1).sum::<f64>() / len,
            multiplicity: end - start,
        });
        start = end;
    }
    out
}

/// Sine of the largest principal angle between two orthonormal column
/// spans; 1.0 when dimensions differ, 0.0 when both are empty.
fn subspace_gap(v1: &ComplexMatrix, v2: &ComplexMatrix) -> f64 {
    if v1.cols() != v2.cols() {
        return 1.0;
    }
    if v1.cols() == 0 {
        return 0.0;
    }
    let gap_one_way = |from: &ComplexMatrix, onto: &ComplexMatrix| {
        let overlap = onto.adjoint().matmul(from);
        let residual = from.sub(&onto.matmul(&overlap));
        singular_values(&residual).first().copied().unwrap_or(0.0)
    };
    gap_one_way(v1, v2).max(gap_one_way(v2, v1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankChain {
    pub rank_k: usize,
    pub nullity_k: usize,
    pub rank_r: usize,
    /// (d−1)², the Hadamard-product rank bound on K.
    pub rank_k_limit: usize,
    /// 2(d−1), the sum rank bound on R.
    pub rank_r_limit: usize,
    /// 2·nullity(K), the paired-eigenspace lower bound on rank(R).
    pub pairing_lower_bound: usize,
    /// The lower bound is only guaranteed for λ ∈ (0,1) \ {½}; outside
    /// that window it is reported without being enforced.
    pub pairing_inequality_applicable: bool,
    pub pairing_inequality_holds: bool,
    /// d²−d+1.
    pub bound: u32,
    pub rel_tol: f64,
}

/// Numerical ranks of K and R and the chain
/// 2(d−1) ≥ rank(R) ≥ 2·nullity(K) ≥ 2((n−1)−(d−1)²) that rearranges to
/// n ≤ d²−d+1.
pub fn rank_chain(
    g: &GramObjects,
    params: &EtfParameters,
    rel_tol: f64,
) -> Result<RankChain, CertifyError> {
    let m = g.k.rows();
    let rank_k = numerical_rank(&g.k, rel_tol);
    let rank_r = numerical_rank(&g.r, rel_tol);
    let nullity_k = m - rank_k;
    let d = params.d as usize;
    let rank_k_limit = (d - 1) * (d - 1);
    let rank_r_limit = 2 * (d - 1);
    if rank_k > rank_k_limit {
        return Err(CertifyError::RankChainViolation {
            detail: format!("rank(K) = {rank_k} exceeds (d-1)^2 = {rank_k_limit}"),
        });
    }
    if rank_r > rank_r_limit {
        return Err(CertifyError::RankChainViolation {
            detail: format!("rank(R) = {rank_r} exceeds 2(d-1) = {rank_r_limit}"),
        });
    }

    // λ ∈ (0,1) ⟺ 0 < d(d−1) < 2(n−d); λ ≠ ½ ⟺ d(d−1) ≠ n−d. Exact
    // integer tests, no float rounding.
    let (di, ni) = (u64::from(params.d), u64::from(params.n));
    let numerator = di * (di - 1);
    let lambda_in_01 = numerator > 0 && numerator < 2 * (ni - di);
    let applicable = lambda_in_01 && numerator != ni - di;
    let pairing_lower_bound = 2 * nullity_k;
    let holds = rank_r >= pairing_lower_bound;
    if applicable && !holds {
        return Err(CertifyError::RankChainViolation {
            detail: format!(
                "rank(R) = {rank_r} below the paired lower bound 2·nullity(K) = {pairing_lower_bound}"
            ),
        });
    }
    Ok(RankChain {
        rank_k,
        nullity_k,
        rank_r,
        rank_k_limit,
        rank_r_limit,
        pairing_lower_bound,
        pairing_inequality_applicable: applicable,
        pairing_inequality_holds: holds,
        bound: params.d * params.d - params.d + 1,
        rel_tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub tol: f64,
    pub rel_tol: f64,
    /// SHA-256 of the frame's canonical cmx-1 rendering.
    pub input_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepResidual {
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl StepResidual {
    fn new(residual: f64, threshold: f64) -> Self {
        Self {
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

/// λ-regime of the certified pair: λ ∈ (½, 1) exactly when
/// binom(d+1, 2) < n < d².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regime {
    pub lambda: f64,
    pub lambda_exact: Rational,
    /// binom(d+1, 2), exclusive lower window edge.
    pub window_lower: u64,
    /// d², exclusive upper window edge.
    pub window_upper: u64,
    pub in_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessStep {
    #[serde(flatten)]
    pub check: FlatnessCheck,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitStep {
    pub residual_a: f64,
    pub residual_b: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFormStep {
    pub column_norm_residual: f64,
    pub row_sum_residual: f64,
    pub tightness_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelStep {
    pub dim_ker_k: usize,
    pub dim_ker_r_mu: usize,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Full machine-checkable record of one certificate run.
#[derive(Debug, Clone, Serialize)]
pub struct GapCertificateReport {
    pub provenance: Provenance,
    pub params: EtfParameters,
    pub verification: crate::verification::VerificationReport,
    pub block_form: BlockFormStep,
    pub gram_residuals: GramResiduals,
    pub flatness: FlatnessStep,
    pub projection_split: SplitStep,
    pub a_spectrum: Vec<SpectrumCluster>,
    pub pairing_table: Vec<PairingEntry>,
    pub eigen_pairs: Vec<EigenPairEntry>,
    pub eigen_relation: StepResidual,
    pub shared_eigenvector: StepResidual,
    pub kernel_match: KernelStep,
    pub kernel_orthogonality: StepResidual,
    pub ranks: RankChain,
    pub regime: Regime,
    pub bound_concluded: u32,
    pub bound_applicable: bool,
    /// `Some(n ≤ d²−d+1)` when the regime is in-window, `None` otherwise.
    pub n_le_bound: Option<bool>,
    pub passed: bool,
}

impl GapCertificateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn first_failing_step(&self) -> Option<&'static str> {
        if !self.verification.passed {
            return Some("verification");
        }
        if !self.block_form.pass {
            return Some("block_form");
        }
        if !self.flatness.pass {
            return Some("flatness");
        }
        if !self.projection_split.pass {
            return Some("projection_split");
        }
        if !self.eigen_relation.pass || !self.shared_eigenvector.pass {
            return Some("eigen_relation");
        }
        if !self.kernel_match.pass {
            return Some("kernel_match");
        }
        if !self.kernel_orthogonality.pass {
            return Some("kernel_orthogonality");
        }
        None
    }
}

/// Run the whole certificate: verification, block form, Gram objects,
/// flatness, projection split, eigen pairing, rank chain. Structural
/// failures (non-ETF input, invariant violations, pairing or rank-chain
/// violations) short-circuit as errors; residuals above tolerance are
/// recorded in the report with `passed = false`.
pub fn certify(f: &Frame, tol: f64, rel_tol: f64) -> Result<GapCertificateReport, CertifyError> {
    let verification = verify_frame(f, tol);
    if !verification.passed {
        return Err(CertifyError::NotAnEtf {
            reason: verification
                .first_failure()
                .unwrap_or_else(|| "unknown".into()),
        });
    }
    let params = etf_params(f.d() as u32, f.n() as u32)?;

    let block = reduce_verified(f, &params, tol)?;
    let gram = build_gram_objects(&block.y, &params, tol)?;
    let flatness_check = check_flatness_identity(&gram, &params);
    let (split_a, split_b) = check_projection_split(&gram);
    let eigen = eigen_pairing_report(&gram, &params, tol, rel_tol)?;
    let ranks = rank_chain(&gram, &params, rel_tol)?;

    let (di, ni) = (u64::from(params.d), u64::from(params.n));
    let window_lower = di * (di + 1) / 2;
    let window_upper = di * di;
    let in_window = ni > window_lower && ni < window_upper;
    // λ ∈ (½,1) is the same statement, rationally: d(d−1) between n−d and
    // 2(n−d) exclusive.
    debug_assert_eq!(
        in_window,
        di * (di - 1) > ni - di && di * (di - 1) < 2 * (ni - di)
    );

    let block_form = BlockFormStep {
        column_norm_residual: block.column_norm_residual,
        row_sum_residual: block.row_sum_residual,
        tightness_residual: block.tightness_residual,
        threshold: tol,
        pass: block.residual() <= tol,
    };
    let flatness = FlatnessStep {
        pass: flatness_check.residual() <= tol,
        threshold: tol,
        check: flatness_check,
    };
    let projection_split = SplitStep {
        residual_a: split_a,
        residual_b: split_b,
        threshold: tol,
        pass: split_a <= tol && split_b <= tol,
    };
    let eigen_relation = StepResidual::new(eigen.eigen_relation_residual, SPECTRAL_TOL);
    let shared_eigenvector = StepResidual::new(eigen.shared_eigenvector_residual, SPECTRAL_TOL);
    let kernel_match = KernelStep {
        dim_ker_k: eigen.kernel_k_dim,
        dim_ker_r_mu: eigen.kernel_r_mu_dim,
        residual: eigen.kernel_match_residual,
        threshold: SPECTRAL_TOL,
        pass: eigen.kernel_k_dim == eigen.kernel_r_mu_dim
            && eigen.kernel_match_residual <= SPECTRAL_TOL,
    };
    let kernel_orthogonality = StepResidual::new(eigen.kernel_orthogonality_residual, SPECTRAL_TOL);

    let passed = verification.passed
        && block_form.pass
        && flatness.pass
        && projection_split.pass
        && eigen_relation.pass
        && shared_eigenvector.pass
        && kernel_match.pass
        && kernel_orthogonality.pass;

    let bound = ranks.bound;
    let n_le_bound = in_window.then_some(params.n <= bound);
    Ok(GapCertificateReport {
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tol,
            rel_tol,
            input_sha256: cmx::content_hash(f.matrix()),
        },
        params,
        verification,
        block_form,
        gram_residuals: gram.residuals.clone(),
        flatness,
        projection_split,
        a_spectrum: eigen.a_spectrum,
        pairing_table: eigen.pairing_table,
        eigen_pairs: eigen.eigen_pairs,
        eigen_relation,
        shared_eigenvector,
        kernel_match,
        kernel_orthogonality,
        ranks,
        regime: Regime {
            lambda: (di * (di - 1)) as f64 / (2 * (ni - di)) as f64,
            lambda_exact: Rational::new((di * (di - 1)) as i64, (2 * (ni - di)) as i64),
            window_lower,
            window_upper,
            in_window,
        },
        bound_concluded: bound,
        bound_applicable: in_window,
        n_le_bound,
        passed,
    })
}
