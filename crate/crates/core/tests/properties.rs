use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use steerkit_core::assemblage::{Assemblage, SeoOutcome};
use steerkit_core::criteria::{
    analog_chsh_max, chsh_max, chsh_max_mub, chsh_value, steering_by_coexistence, top_eigenvalues,
};
use steerkit_core::linalg::{dual_basis, svd3};
use steerkit_core::measurements::{ProjectiveMeasurement, QubitMeasurement, RestrictedSpan, TrineMeasurement};
use steerkit_core::states::{random_rotation, random_state, random_state_with, RandomKind};
use steerkit_core::statistics::{exact_statistics, sample_statistics};
use steerkit_core::{tol, CMatrix, Mat3, QubitOperator, TwoQubitState, Vec3};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian3(r: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(StandardNormal.sample(r), StandardNormal.sample(r), StandardNormal.sample(r))
}

fn unit(r: &mut ChaCha8Rng) -> Vec3 {
    loop {
        if let Some(u) = gaussian3(r).normalized() {
            return u;
        }
    }
}

fn kind(k: u8) -> RandomKind {
    [RandomKind::Pure, RandomKind::Mixed, RandomKind::BellDiagonal][k as usize % 3]
}

fn proj_span(b: &[Vec3]) -> RestrictedSpan {
    let ms: Vec<QubitMeasurement> = b.iter().map(|&v| ProjectiveMeasurement::new(v).unwrap().into()).collect();
    RestrictedSpan::span_of(&ms)
}

fn random_hermitian4(r: &mut ChaCha8Rng) -> CMatrix<4> {
    let mut m = CMatrix::<4>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = num_complex::Complex64::new(StandardNormal.sample(r), StandardNormal.sample(r));
        }
    }
    let h = m.adjoint();
    let mut out = CMatrix::<4>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out.0[i][j] = (m.0[i][j] + h.0[i][j]) * 0.5;
        }
    }
    out
}

#[test]
fn dual_basis_contract_on_random_pairs() {
    let mut r = rng(1);
    let mut checked = 0;
    while checked < 10_000 {
        let (b1, b2) = (gaussian3(&mut r), gaussian3(&mut r));
        let Ok((d1, d2)) = dual_basis(&b1, &b2) else { continue };
        checked += 1;
        for (m, d) in [d1, d2].iter().enumerate() {
            for (n, b) in [b1, b2].iter().enumerate() {
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((d.dot(b) - want).abs() < 1e-9, "{b1:?} {b2:?}");
            }
            // duals live in the plane of the pair
            assert!(d.dot(&b1.cross(&b2)).abs() < 1e-9 * b1.cross(&b2).norm().max(1.0));
        }
    }
}

#[test]
fn compose_decompose_roundtrip() {
    let mut r = rng(2);
    for i in 0..10_000 {
        let st = random_state_with(&mut r, kind(i as u8));
        let back = TwoQubitState::decompose(&st.density_matrix()).unwrap();
        assert!(back.density_matrix().max_abs_diff(&st.density_matrix()) <= 1e-12);
    }
}

#[test]
fn assemblage_consistency_on_random_pairs() {
    let mut r = rng(3);
    for i in 0..10_000 {
        let st = random_state_with(&mut r, kind(i as u8));
        let a = [unit(&mut r), unit(&mut r)];
        let asm = Assemblage::from_projective(&st, &a).unwrap();
        for m in 0..2 {
            let sum = asm.element(m, 0) + asm.element(m, 1);
            assert!(sum.max_abs_diff(&st.reduced_bob()) <= 1e-10);
            for k in 0..2 {
                assert!(asm.element(m, k).min_eigenvalue() >= -1e-10);
            }
        }
    }
}

#[test]
fn s_mub_never_exceeds_s() {
    let mut r = rng(4);
    for _ in 0..10_000 {
        let mut t = [[0.0; 3]; 3];
        for row in t.iter_mut() {
            for x in row.iter_mut() {
                *x = StandardNormal.sample(&mut r);
            }
        }
        let t = Mat3(t);
        let (s, sm) = (chsh_max(&t), chsh_max_mub(&t));
        assert!(sm <= s + 1e-12 * s);
        if (s - sm).abs() <= 1e-12 * s {
            let [l1, l2] = top_eigenvalues(&t);
            assert!((l1 - l2).abs() <= 1e-8 * l1.max(1.0));
        }
    }
}

#[test]
fn trine_effects_sum_to_identity() {
    let sum = TrineMeasurement::xz_plane().effects().iter().fold(QubitOperator::ZERO, |acc, e| acc + *e);
    assert!(sum.max_abs_diff(&QubitOperator::IDENTITY) < 1e-15);
}

#[test]
fn hierarchy_entangled_iff_positive() {
    assert_eq!(TwoQubitState::hierarchy(0.0).unwrap().concurrence(), 0.0);
    for k in 1..=100 {
        let s = k as f64 / 100.0;
        assert!(TwoQubitState::hierarchy(s).unwrap().concurrence() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigh_reconstructs(seed in any::<u64>()) {
        let m = random_hermitian4(&mut rng(seed));
        let e = m.eigh().unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&m) <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn singular_values_survive_rotations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_state_with(&mut r, RandomKind::Mixed).correlation();
        let (oa, ob) = (random_rotation(&mut r), random_rotation(&mut r));
        let rotated = oa.mul_mat(&t).mul_mat(&ob.transpose());
        let (p, q) = (svd3(&t).values, svd3(&rotated).values);
        for k in 0..3 {
            prop_assert!((p[k] - q[k]).abs() <= 1e-10);
        }
    }

    #[test]
    fn local_unitaries_keep_entanglement(seed in any::<u64>(), k in 0u8..3) {
        let mut r = rng(seed);
        let st = random_state_with(&mut r, kind(k));
        let moved = st.rotated(&random_rotation(&mut r), &random_rotation(&mut r));
        let (e0, e1) = (st.entanglement(), moved.entanglement());
        prop_assert!((e0.concurrence - e1.concurrence).abs() <= 1e-10);
        prop_assert!((e0.negativity - e1.negativity).abs() <= 1e-10);
    }

    #[test]
    fn product_states_are_separable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scale = |v: Vec3, x: f64| v * x;
        let st = TwoQubitState::product(scale(unit(&mut r), 0.9), scale(unit(&mut r), 0.4)).unwrap();
        let e = st.entanglement();
        prop_assert!(e.concurrence <= 1e-10 && e.negativity <= 1e-10);
    }

    #[test]
    fn restrict_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let asm = Assemblage::from_projective(&st, &[unit(&mut r), unit(&mut r)]).unwrap();
        let span = proj_span(&[unit(&mut r), unit(&mut r)]);
        let once = asm.restrict(&span);
        for m in 0..2 {
            for k in 0..2 {
                let again = span.project(&once.element(m, k));
                prop_assert!(again.max_abs_diff(&once.element(m, k)) <= 1e-14);
                // the restriction preserves every traced-out component
                for p in span.basis() {
                    prop_assert!((p.hs_inner(&once.element(m, k)) - p.hs_inner(&asm.element(m, k))).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn seo_completeness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let asm = Assemblage::from_projective(&st, &[unit(&mut r), unit(&mut r)]).unwrap();
        let ra = asm.restrict(&proj_span(&[unit(&mut r), unit(&mut r)]));
        if let SeoOutcome::Observables(pair) = ra.steering_equivalent_observables(tol::RANK).unwrap() {
            for m in 0..2 {
                let (plus, minus) = (pair.plus[m].operator(), pair.minus[m].operator());
                prop_assert!((plus + minus).max_abs_diff(&QubitOperator::IDENTITY) <= 1e-10);
                for e in [plus, minus] {
                    let [hi, lo] = e.eigenvalues();
                    prop_assert!(lo >= -1e-10 && hi <= 1.0 + 1e-10);
                }
            }
        }
    }

    #[test]
    fn span_is_invariant_under_reordering(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (b1, b2) = (unit(&mut r), unit(&mut r));
        let spans = [proj_span(&[b1, b2]), proj_span(&[b2, b1]), proj_span(&[b1 * -1.0, b2]), proj_span(&[b2, b1 * -1.0])];
        for s in &spans[1..] {
            prop_assert_eq!(s.dim(), spans[0].dim());
            let (p, q) = (s.projector(), spans[0].projector());
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((p[i][j] - q[i][j]).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn seo_verdict_depends_only_on_the_plane(seed in any::<u64>(), phi in 0.3f64..2.8) {
        let mut r = rng(seed);
        let st = random_state_with(&mut r, RandomKind::Mixed);
        let asm = Assemblage::from_projective(&st, &[unit(&mut r), unit(&mut r)]).unwrap();
        let (b1, b2) = (unit(&mut r), unit(&mut r));
        let n = b1.cross(&b2).normalized().unwrap();
        let rebased = [b2, b1 * phi.cos() + n.cross(&b1) * phi.sin()];
        let v0 = steering_by_coexistence(&asm.restrict(&proj_span(&[b1, b2]))).unwrap();
        let v1 = steering_by_coexistence(&asm.restrict(&proj_span(&rebased))).unwrap();
        prop_assert!((v0.margin() - v1.margin()).abs() <= 1e-9);
    }

    #[test]
    fn chsh_never_exceeds_common_maximum(seed in any::<u64>(), k in 0u8..3) {
        let mut r = rng(seed);
        let st = random_state_with(&mut r, kind(k));
        let a = [unit(&mut r), unit(&mut r)];
        let b = [unit(&mut r), unit(&mut r)];
        let v = chsh_value(&exact_statistics(&st, &a, &b).correlators).unwrap().value;
        prop_assert!(v <= analog_chsh_max(&st.correlation()) + 1e-12);
    }

    #[test]
    fn sampled_record_concentrates(seed in any::<u64>()) {
        let st = random_state(seed, RandomKind::Mixed);
        let mut r = rng(seed ^ 0x5eed);
        let (a, b) = ([unit(&mut r), unit(&mut r)], [unit(&mut r), unit(&mut r)]);
        let shots = 10_000;
        let rec = sample_statistics(&st, &a, &b, shots, seed).unwrap();
        // five standard deviations of a ±1 mean; a miss here is ~1e-6 per case
        prop_assert!(rec.max_abs_diff(&exact_statistics(&st, &a, &b)) <= 5.0 / (shots as f64).sqrt());
    }
}
