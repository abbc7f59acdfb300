//! Derived quantities against independent computations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use steerkit_core::assemblage::Assemblage;
use steerkit_core::criteria::{chsh_max, chsh_value, steering_by_coexistence};
use steerkit_core::linalg::{kron, pauli};
use steerkit_core::measurements::{ProjectiveMeasurement, QubitMeasurement, RestrictedSpan};
use steerkit_core::sdp::{lhs_feasible, restricted_lhs_feasible, FeasibilityStatus};
use steerkit_core::states::{random_state_with, RandomKind};
use steerkit_core::statistics::exact_statistics;
use steerkit_core::{tol, Matrix2, Matrix4, QubitOperator, TwoQubitState, Vec3};

fn unit(r: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(StandardNormal.sample(r), StandardNormal.sample(r), StandardNormal.sample(r));
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}

fn span(b: &[Vec3]) -> RestrictedSpan {
    let ms: Vec<QubitMeasurement> = b.iter().map(|&v| ProjectiveMeasurement::new(v).unwrap().into()).collect();
    RestrictedSpan::span_of(&ms)
}

/// Wootters: eigenvalues of `√ρ (σy⊗σy) ρ* (σy⊗σy) √ρ` are the squares of
/// the ones entering `C = max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
fn wootters(rho: &Matrix4) -> f64 {
    let e = rho.eigh().unwrap();
    let sqrt = e.reconstruct_with(|x| x.max(0.0).sqrt());
    let yy = kron(&pauli(2), &pauli(2));
    let tilde = yy.matmul(&rho.conj()).matmul(&yy);
    let m = sqrt.matmul(&tilde).matmul(&sqrt);
    let mut l = m.eigh().unwrap().values.map(|x| x.max(0.0).sqrt());
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[test]
fn concurrence_matches_wootters_formula() {
    let mut r = ChaCha8Rng::seed_from_u64(10);
    for i in 0..2000 {
        let kind = [RandomKind::Pure, RandomKind::Mixed, RandomKind::BellDiagonal][i % 3];
        let st = random_state_with(&mut r, kind);
        let want = wootters(&st.density_matrix());
        assert!((st.concurrence() - want).abs() < 1e-7, "{i}: {} vs {want}", st.concurrence());
    }
}

#[test]
fn werner_closed_forms() {
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let st = TwoQubitState::werner(p).unwrap();
        let c = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((st.concurrence() - c).abs() < 1e-12);
        // PT spectrum {(1+p)/4 ×3, (1−3p)/4}
        let e = st.entanglement();
        assert!((e.negativity - c).abs() < 1e-12);
        assert!((chsh_max(&st.correlation()) - 2.0 * 2f64.sqrt() * p).abs() < 1e-12);
    }
}

#[test]
fn partial_transpose_matches_explicit_matrix() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let mut explicit = st.density_matrix().partial_transpose_b().eigh().unwrap().values;
        explicit.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let got = st.partial_transpose_eigenvalues();
        for k in 0..4 {
            assert!((got[k] - explicit[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn assemblage_matches_explicit_partial_trace() {
    let mut r = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let a = unit(&mut r);
        let asm = Assemblage::from_projective(&st, &[a]).unwrap();
        let rho = st.density_matrix();
        for (k, sign) in [(0, 1.0), (1, -1.0)] {
            // Tr_A[(E ⊗ I) ρ] with E = (I + sign a·σ)/2
            let e = QubitOperator::new(0.5, a * (0.5 * sign)).matrix();
            let m = kron(&e, &Matrix2::identity()).matmul(&rho);
            let mut reduced = Matrix2::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    reduced.0[i][j] = m.0[i][j] + m.0[2 + i][2 + j];
                }
            }
            assert!(asm.element(0, k).matrix().max_abs_diff(&reduced) < 1e-14);
        }
    }
}

#[test]
fn chsh_maximum_dominates_random_search() {
    let mut r = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let st = random_state_with(&mut r, RandomKind::Pure);
        let s = chsh_max(&st.correlation());
        let mut best: f64 = 0.0;
        for _ in 0..20_000 {
            let a = [unit(&mut r), unit(&mut r)];
            let b = [unit(&mut r), unit(&mut r)];
            best = best.max(chsh_value(&exact_statistics(&st, &a, &b).correlators).unwrap().value);
        }
        assert!(best <= s + 1e-12);
        assert!(best >= s - 0.1, "search {best} vs {s}");
    }
}

#[test]
fn sdp_relabeling_invariance() {
    let mut r = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let a = [unit(&mut r), unit(&mut r)];
        let sp = span(&[unit(&mut r), unit(&mut r)]);
        let base = restricted_lhs_feasible(&Assemblage::from_projective(&st, &a).unwrap(), &sp).unwrap();
        // swapped settings, flipped outcomes
        let relabeled = [
            Assemblage::from_projective(&st, &[a[1], a[0]]).unwrap(),
            Assemblage::from_projective(&st, &[a[0] * -1.0, a[1]]).unwrap(),
        ];
        for asm in &relabeled {
            let v = restricted_lhs_feasible(asm, &sp).unwrap();
            assert_eq!(v.status, base.status);
            assert!((v.slack - base.slack).abs() < 1e-8);
        }
    }
}

#[test]
fn full_span_equals_unrestricted() {
    let mut r = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let st = random_state_with(&mut r, RandomKind::Pure);
        let asm = Assemblage::from_projective(&st, &[unit(&mut r), unit(&mut r), unit(&mut r)]).unwrap();
        let full = span(&[Vec3::X, Vec3::Y, Vec3::Z]);
        assert_eq!(full.dim(), 4);
        let (a, b) = (lhs_feasible(&asm).unwrap(), restricted_lhs_feasible(&asm, &full).unwrap());
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn smaller_span_is_easier_to_model() {
    let mut r = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..100 {
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let asm = Assemblage::from_projective(&st, &[unit(&mut r), unit(&mut r)]).unwrap();
        let (b1, b2) = (unit(&mut r), unit(&mut r));
        let small = restricted_lhs_feasible(&asm, &span(&[b1, b2])).unwrap();
        let large = lhs_feasible(&asm).unwrap();
        if large.status == FeasibilityStatus::Feasible {
            assert_eq!(small.status, FeasibilityStatus::Feasible);
        }
        assert!(small.slack <= large.slack + 1e-9);
    }
}

#[test]
fn feasible_ensembles_and_witnesses_are_valid() {
    let mut r = ChaCha8Rng::seed_from_u64(17);
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..200 {
        let kind = if i % 2 == 0 { RandomKind::Pure } else { RandomKind::Mixed };
        let st = random_state_with(&mut r, kind);
        let asm = Assemblage::from_projective(&st, &[unit(&mut r), unit(&mut r)]).unwrap();
        let sp = span(&[unit(&mut r), unit(&mut r)]);
        let v = restricted_lhs_feasible(&asm, &sp).unwrap();
        match v.status {
            FeasibilityStatus::Feasible => {
                feasible += 1;
                assert!(v.residual <= tol::FEASIBILITY);
                assert!(v.ensemble.iter().all(|s| s.min_eigenvalue() >= -tol::FEASIBILITY));
                let total: f64 = v.ensemble.iter().map(QubitOperator::trace).sum();
                assert!((total - 1.0).abs() <= tol::FEASIBILITY);
            }
            FeasibilityStatus::Infeasible => {
                infeasible += 1;
                let cert = v.certificate.as_ref().unwrap();
                assert!(cert.value < -tol::FEASIBILITY);
                assert!(cert.min_strategy_eigenvalue >= -1e-9);
                // the witness lives in the restricted span
                for w in cert.witness.iter().flatten() {
                    assert!(sp.contains(w));
                }
            }
            FeasibilityStatus::Boundary => {}
        }
        // agrees with the analytic route away from the boundary
        let report = steering_by_coexistence(&asm.restrict(&sp)).unwrap();
        if report.margin().abs() > 1e-6 {
            assert_eq!(v.steerable(), Some(report.margin() > 0.0));
        }
    }
    assert!(feasible > 20 && infeasible > 20, "{feasible} {infeasible}");
}

#[test]
fn witness_rejects_every_deterministic_model() {
    // A valid witness is non-negative on any LHS assemblage; try random ones.
    let st = TwoQubitState::hierarchy(0.9).unwrap();
    let asm = Assemblage::from_projective(&st, &[Vec3::X, Vec3::Z]).unwrap();
    let cert = lhs_feasible(&asm).unwrap().certificate.unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..1000 {
        // random PSD hidden states, one per strategy (λ₁, λ₂) ∈ {0,1}²
        let sigmas: Vec<QubitOperator> = (0..4)
            .map(|_| {
                let v = unit(&mut r);
                let w: f64 = rand::Rng::random(&mut r);
                QubitOperator::new(0.125, v * (0.125 * w))
            })
            .collect();
        let mut value = 0.0;
        for lam in 0..4 {
            let (o1, o2) = (lam / 2, lam % 2);
            value += cert.witness[0][o1].hs_inner(&sigmas[lam]) + cert.witness[1][o2].hs_inner(&sigmas[lam]);
        }
        assert!(value >= -1e-12, "{value}");
    }
}
