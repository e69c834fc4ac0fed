//! Cross-module pipeline checks on the (3,7) Singer frame and friends:
//! the matrices the certificate builds have the documented spectra,
//! ranks, and kernels.

use etf_core::constructions::{
    harmonic_etf, naimark_complement, simplex_etf, singer_difference_set, Frame,
};
use etf_core::gap_certificate::{build_gram_objects, certify, reduce_to_block_form, GramObjects};
use etf_core::matcore::{hermitian_eigen, numerical_rank, orthonormal_kernel_basis};
use etf_core::verification::{etf_params, verify_frame, welch_bound};
use etf_core::{DEFAULT_REL_TOL, DEFAULT_TOL};

fn singer37_gram() -> GramObjects {
    let f = harmonic_etf(&singer_difference_set(2).unwrap());
    let block = reduce_to_block_form(&f, DEFAULT_TOL).unwrap();
    let params = etf_params(3, 7).unwrap();
    build_gram_objects(&block.y, &params, DEFAULT_TOL).unwrap()
}

#[test]
fn a_spectrum_of_singer37() {
    let g = singer37_gram();
    let ed = hermitian_eigen(&g.a, DEFAULT_TOL).unwrap();
    let expected = [0.0, 0.0, 0.25, 0.25, 0.75, 0.75];
    assert_eq!(ed.values.len(), 6);
    for (got, want) in ed.values.iter().zip(expected) {
        assert!(
            (got - want).abs() < 1e-9,
            "spectrum {:?} != expected {:?}",
            ed.values,
            expected
        );
    }
}

#[test]
fn k_rank_and_kernel_of_singer37() {
    let g = singer37_gram();
    assert_eq!(numerical_rank(&g.k, DEFAULT_REL_TOL), 4);
    let kernel = orthonormal_kernel_basis(&g.k, DEFAULT_REL_TOL);
    assert_eq!(kernel.cols(), 2);
    for j in 0..kernel.cols() {
        let image = g.k.mul_vec(&kernel.col(j));
        let norm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm <= 1e-9, "kernel column {j} has |Kv| = {norm:.3e}");
    }
    // Projection trace equals d−1.
    assert!((g.p.trace().re - 2.0).abs() < 1e-10);
}

#[test]
fn singer37_certificate_full_pass() {
    let f = harmonic_etf(&singer_difference_set(2).unwrap());
    let report = certify(&f, DEFAULT_TOL, DEFAULT_REL_TOL).unwrap();
    assert!(report.passed);
    assert!(report.flatness.check.identity_residual <= 1e-9);
    assert!(report.projection_split.residual_a <= 1e-9);
    assert!(report.projection_split.residual_b <= 1e-9);
    assert!(report.eigen_relation.residual <= 1e-8);
    assert!(report.kernel_match.residual <= 1e-8);
    assert!(report.kernel_orthogonality.residual <= 1e-8);
}

#[test]
fn naimark_of_singer37_certifies_out_of_window() {
    // The (4,7) complement has λ = 2 ∉ (0,1): identities hold, the bound
    // conclusion is not applicable.
    let f = harmonic_etf(&singer_difference_set(2).unwrap());
    let z = naimark_complement(&f).unwrap();
    assert_eq!((z.d(), z.n()), (4, 7));
    let report = certify(&z, DEFAULT_TOL, DEFAULT_REL_TOL).unwrap();
    assert!(report.passed);
    assert!(!report.regime.in_window);
    assert_eq!(report.n_le_bound, None);
    assert_eq!(report.regime.lambda, 2.0);
    assert_eq!(report.ranks.nullity_k, 0);
    assert!(!report.ranks.pairing_inequality_applicable);
}

#[test]
fn certified_singer_family_has_predicted_rank_profile() {
    // λ = d(d−1)/(2(n−d)) lies in (½,1) for the whole family, so every
    // member is in-window and attains the concluded bound.
    for q in [2u64, 3, 5] {
        let f = harmonic_etf(&singer_difference_set(q).unwrap());
        let d = f.d();
        let report = certify(&f, DEFAULT_TOL, DEFAULT_REL_TOL).unwrap();
        assert!(report.passed, "singer({q}) certificate failed");
        assert_eq!(report.ranks.rank_k, (d - 1) * (d - 1));
        assert_eq!(report.ranks.rank_r, 2 * (d - 1));
        assert_eq!(report.ranks.nullity_k, d - 1);
        assert_eq!(report.ranks.bound as usize, d * d - d + 1);
        assert_eq!(report.n_le_bound, Some(true));
        // All eigen-pairing dimensions match exactly.
        for entry in &report.pairing_table {
            assert_eq!(entry.dim, entry.dim_partner);
        }
    }
}

#[test]
fn constructed_frames_all_verify() {
    let mut frames: Vec<Frame> = vec![simplex_etf(2), simplex_etf(5), simplex_etf(9)];
    for q in [2u64, 3, 4] {
        frames.push(harmonic_etf(&singer_difference_set(q).unwrap()));
    }
    // Complements of (3,7) and (4,13): a 4×7 and a 9×13 ETF.
    frames.push(naimark_complement(&frames[3].clone()).unwrap());
    let nine_thirteen = naimark_complement(&frames[4].clone()).unwrap();
    assert_eq!((nine_thirteen.d(), nine_thirteen.n()), (9, 13));
    frames.push(nine_thirteen);
    for f in &frames {
        let report = verify_frame(f, 1e-10);
        assert!(
            report.passed,
            "({}, {}) failed verification: {:?}",
            f.d(),
            f.n(),
            report.first_failure()
        );
        assert!(
            (report.coherence_observed - welch_bound(f.d() as u32, f.n() as u32)).abs() <= 1e-10
        );
    }
}

#[test]
fn naimark_double_complement_preserves_gram_modulus() {
    let f = harmonic_etf(&singer_difference_set(2).unwrap());
    let z = naimark_complement(&f).unwrap();
    let back = naimark_complement(&z).unwrap();
    assert_eq!((back.d(), back.n()), (f.d(), f.n()));
    let g1 = f.gram();
    let g2 = back.gram();
    let mut worst: f64 = 0.0;
    for i in 0..f.n() {
        for j in 0..f.n() {
            worst = worst.max((g1.get(i, j).norm() - g2.get(i, j).norm()).abs());
        }
    }
    assert!(worst <= 1e-9, "Gram modulus drift {worst:.3e}");
}

#[test]
fn harmonic_coherence_matches_alpha_for_small_v() {
    // Singer difference sets with v ≤ 200 plus the brute-force (11,5,2)
    // biplane family.
    let mut sets = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
        sets.push(singer_difference_set(q).unwrap());
    }
    sets.extend(etf_core::constructions::brute_force_difference_sets(11, 5, 2).unwrap());
    for ds in &sets {
        assert!(ds.v() <= 200);
        let f = harmonic_etf(ds);
        let coh = etf_core::verification::coherence(&f);
        let alpha = welch_bound(f.d() as u32, f.n() as u32);
        assert!(
            (coh - alpha).abs() <= 1e-10,
            "coherence {coh} vs alpha {alpha} at v={}, k={}",
            ds.v(),
            ds.k()
        );
    }
}

#[test]
fn admissibility_witnesses_are_buildable() {
    for verdict in etf_core::admissibility::scan_table(10, 100).unwrap() {
        let Some(witness) = verdict.witness else {
            continue;
        };
        match witness {
            etf_core::admissibility::Witness::Singer(q) => {
                let f = harmonic_etf(&singer_difference_set(q).unwrap());
                assert_eq!((f.d() as u64, f.n() as u64), (verdict.d, verdict.n));
                assert!(verify_frame(&f, 1e-10).passed);
            }
            etf_core::admissibility::Witness::Simplex => {
                let f = simplex_etf(verdict.d as usize);
                assert_eq!(f.n() as u64, verdict.n);
                assert!(verify_frame(&f, 1e-10).passed);
            }
            etf_core::admissibility::Witness::Orthobasis => {
                // α = 0: unit-norm and tight, but not an ETF.
                let f = Frame::from_matrix(etf_core::ComplexMatrix::identity(verdict.d as usize))
                    .unwrap();
                assert!(etf_core::verification::check_unit_norm(&f) <= 1e-10);
                assert!(etf_core::verification::check_tight(&f) <= 1e-10);
            }
        }
    }
}
