//! Complex equiangular tight frames: constructions, numerical
//! verification, admissibility classification, and a machine-checkable
//! certificate of the spectral-gap argument showing no complex d×n ETF
//! exists for d²−d+1 < n < d².
//!
//! - [`matcore`] — dense complex kernels: Jacobi eigendecomposition,
//!   one-sided Jacobi SVD (rank, kernels), Householder unitaries.
//! - [`finite_field`] — GF(p^m) arithmetic and the relative trace.
//! - [`constructions`] — difference sets (Singer, brute force), harmonic
//!   and simplex ETFs, Naimark complements.
//! - [`verification`] — the defining-identity checks and the (α, β, γ,
//!   μ, λ) parameter family.
//! - [`gap_certificate`] — the full step-by-step certificate ending in
//!   the rank chain that forces n ≤ d²−d+1.
//! - [`admissibility`] — (d, n) classification against every known
//!   necessary condition.
//! - [`cmx`] — the auditable on-disk matrix format reports are keyed to.
//!
//! Bulk operations (admissibility scans, difference-set searches) run on
//! rayon when the default `parallel` feature is enabled and fall back to
//! sequential loops without it; results are identical either way.

pub mod admissibility;
pub mod cmx;
pub mod constructions;
mod exec;
pub mod finite_field;
pub mod gap_certificate;
pub mod matcore;
pub mod rng;
pub mod verification;

/// Default absolute tolerance for identity checks (about 100× the
/// accumulated roundoff at the sizes this crate targets).
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default relative threshold for numerical rank decisions.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

pub use constructions::{DifferenceSet, Frame};
pub use matcore::{ComplexMatrix, C64};
pub use verification::EtfParameters;
