//! Measurement statistics in the two-setting scenario: exact Born-rule
//! expectations and finite-shot estimates.
//!
//! With projective measurements `a_m·σ` and `b_n·σ`,
//! `⟨A_m⟩ = α·a_m`, `⟨B_n⟩ = β·b_n` and `⟨A_m B_n⟩ = a_mᵀ T b_n`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::assemblage::RestrictedAssemblage;
use crate::linalg::{dual_basis, QubitOperator, Vec3};
use crate::measurements::{ProjectiveMeasurement, QubitMeasurement, RestrictedSpan};
use crate::states::TwoQubitState;
use crate::{Error, Result};

/// Outcome order within a setting: `(+,+), (+,−), (−,+), (−,−)`.
pub type JointCounts = [u64; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub alice: [f64; 2],
    pub bob: [f64; 2],
    /// `correlators[m][n] = ⟨A_m B_n⟩`.
    pub correlators: [[f64; 2]; 2],
    /// Shots per joint setting; `None` for exact records.
    pub shots: Option<u64>,
    /// Raw counts per joint setting `[m][n]`; `None` for exact records.
    pub counts: Option<[[JointCounts; 2]; 2]>,
}

impl CorrelationRecord {
    pub fn is_exact(&self) -> bool {
        self.shots.is_none()
    }

    /// Largest absolute difference over the eight expectation values.
    pub fn max_abs_diff(&self, o: &CorrelationRecord) -> f64 {
        let mut d: f64 = 0.0;
        for k in 0..2 {
            d = d.max((self.alice[k] - o.alice[k]).abs()).max((self.bob[k] - o.bob[k]).abs());
            for n in 0..2 {
                d = d.max((self.correlators[k][n] - o.correlators[k][n]).abs());
            }
        }
        d
    }

    /// The restricted assemblage on `span{I, b₁·σ, b₂·σ}` implied by these
    /// statistics:
    /// `ρ̃_{±|m} = ¼[(1 ± ⟨A_m⟩)I + Σ_n (⟨B_n⟩ ± ⟨A_m B_n⟩) b'_n·σ]`.
    pub fn restricted_assemblage(&self, bob_axes: &[Vec3; 2]) -> Result<RestrictedAssemblage> {
        let (d1, d2) = dual_basis(&bob_axes[0], &bob_axes[1])?;
        let mut elements = alloc::vec::Vec::with_capacity(2);
        for m in 0..2 {
            let mut setting = alloc::vec::Vec::with_capacity(2);
            for sign in [1.0, -1.0] {
                let v = d1 * (self.bob[0] + sign * self.correlators[m][0])
                    + d2 * (self.bob[1] + sign * self.correlators[m][1]);
                setting.push(QubitOperator::new(0.25 * (1.0 + sign * self.alice[m]), v * 0.25));
            }
            elements.push(setting);
        }
        let span = RestrictedSpan::span_of(&[
            QubitMeasurement::from(ProjectiveMeasurement::normalized(bob_axes[0])?.0),
            QubitMeasurement::from(ProjectiveMeasurement::normalized(bob_axes[1])?.0),
        ]);
        RestrictedAssemblage::from_parts(elements, span)
    }
}

pub fn exact_statistics(state: &TwoQubitState, alice: &[Vec3; 2], bob: &[Vec3; 2]) -> CorrelationRecord {
    let t = state.correlation();
    let mut correlators = [[0.0; 2]; 2];
    for m in 0..2 {
        for n in 0..2 {
            correlators[m][n] = alice[m].dot(&t.mul_vec(&bob[n]));
        }
    }
    CorrelationRecord {
        alice: [state.alpha().dot(&alice[0]), state.alpha().dot(&alice[1])],
        bob: [state.beta().dot(&bob[0]), state.beta().dot(&bob[1])],
        correlators,
        shots: None,
        counts: None,
    }
}

/// Sample `shots` rounds for each of the four joint settings from
/// `p(a, b) = ¼(1 + a⟨A⟩ + b⟨B⟩ + ab⟨AB⟩)`.
///
/// Setting `(m, n)` draws from its own ChaCha stream `2m + n` under `seed`,
/// so results do not depend on evaluation order.
pub fn sample_statistics(
    state: &TwoQubitState,
    alice: &[Vec3; 2],
    bob: &[Vec3; 2],
    shots: u64,
    seed: u64,
) -> Result<CorrelationRecord> {
    if shots == 0 {
        return Err(Error::OutOfRange { name: "shots", value: 0.0, domain: "≥ 1" });
    }
    let exact = exact_statistics(state, alice, bob);
    let mut counts = [[[0u64; 4]; 2]; 2];
    for m in 0..2 {
        for n in 0..2 {
            let (ea, eb, eab) = (exact.alice[m], exact.bob[n], exact.correlators[m][n]);
            let p = [
                0.25 * (1.0 + ea + eb + eab),
                0.25 * (1.0 + ea - eb - eab),
                0.25 * (1.0 - ea + eb - eab),
                0.25 * (1.0 - ea - eb + eab),
            ];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * m as u64 + n as u64);
            counts[m][n] = multinomial(&mut rng, shots, p)?;
        }
    }
    let f = shots as f64;
    let mut rec = CorrelationRecord {
        alice: [0.0; 2],
        bob: [0.0; 2],
        correlators: [[0.0; 2]; 2],
        shots: Some(shots),
        counts: Some(counts),
    };
    for m in 0..2 {
        for n in 0..2 {
            let [pp, pm, mp, mm] = counts[m][n].map(|c| c as f64);
            rec.correlators[m][n] = (pp - pm - mp + mm) / f;
            // marginals pool the two settings of the other party
            rec.alice[m] += 0.5 * (pp + pm - mp - mm) / f;
            rec.bob[n] += 0.5 * (pp - pm + mp - mm) / f;
        }
    }
    Ok(rec)
}

/// Exact multinomial draw by sequential conditional binomials.
fn multinomial(rng: &mut ChaCha8Rng, n: u64, p: [f64; 4]) -> Result<JointCounts> {
    let p = p.map(|x| x.max(0.0));
    let mut left = n;
    let mut mass: f64 = p.iter().sum();
    let mut out = [0u64; 4];
    for k in 0..3 {
        if left == 0 || mass <= 0.0 {
            break;
        }
        let q = (p[k] / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(left, q).map_err(|_| Error::Solver("invalid binomial parameters"))?;
        out[k] = draw.sample(rng);
        left -= out[k];
        mass -= p[k];
    }
    out[3] = left;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::analog_chsh_value;
    use crate::states::{random_state, RandomKind};

    const XZ: [Vec3; 2] = [Vec3::X, Vec3::Z];

    #[test]
    fn singlet_anticorrelation() {
        let r = exact_statistics(&TwoQubitState::singlet(), &XZ, &XZ);
        assert_eq!(r.correlators[0][0], -1.0);
        assert_eq!(r.correlators[1][1], -1.0);
        assert_eq!(r.correlators[0][1], 0.0);
    }

    #[test]
    fn hierarchy_reads_off_parameters() {
        let s = 0.4;
        let r = exact_statistics(&TwoQubitState::hierarchy(s).unwrap(), &XZ, &XZ);
        assert_eq!(r.correlators[0][0], -s);
        assert_eq!(r.alice[0], 0.0);
        assert_eq!(r.bob[0], 0.0);
        assert!((r.alice[1] - (1.0 - s)).abs() < 1e-15);
    }

    #[test]
    fn product_state_factorises() {
        let st = TwoQubitState::product(Vec3::new(0.2, 0.3, 0.4), Vec3::new(-0.5, 0.1, 0.0)).unwrap();
        let b = [Vec3::Y, Vec3::new(0.6, 0.0, 0.8)];
        let r = exact_statistics(&st, &XZ, &b);
        for m in 0..2 {
            for n in 0..2 {
                assert!((r.correlators[m][n] - r.alice[m] * r.bob[n]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let st = random_state(2, RandomKind::Mixed);
        let a = sample_statistics(&st, &XZ, &XZ, 1000, 42).unwrap();
        let b = sample_statistics(&st, &XZ, &XZ, 1000, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_statistics(&st, &XZ, &XZ, 1000, 43).unwrap();
        assert_ne!(a, c);
        for setting in a.counts.unwrap().iter().flatten() {
            assert_eq!(setting.iter().sum::<u64>(), 1000);
        }
        assert!(sample_statistics(&st, &XZ, &XZ, 0, 1).is_err());
    }

    #[test]
    fn singlet_sampling_concentrates() {
        let r = sample_statistics(&TwoQubitState::singlet(), &XZ, &XZ, 1_000_000, 7).unwrap();
        // perfectly anticorrelated outcomes never coincide
        assert_eq!(r.correlators[0][0], -1.0);
        assert!((r.correlators[0][1]).abs() < 0.005);
    }

    #[test]
    fn reconstruction_matches_direct_restriction() {
        use crate::assemblage::Assemblage;
        let st = random_state(12, RandomKind::Mixed);
        let a = [Vec3::new(0.0, 0.6, 0.8), Vec3::X];
        let b = [Vec3::new(0.6, 0.8, 0.0), Vec3::new(0.0, 0.0, 1.0)];
        let rec = exact_statistics(&st, &a, &b);
        let from_stats = rec.restricted_assemblage(&b).unwrap();
        let direct = Assemblage::from_projective(&st, &a).unwrap().restrict(from_stats.span());
        for m in 0..2 {
            for k in 0..2 {
                assert!(from_stats.element(m, k).max_abs_diff(&direct.element(m, k)) < 1e-14);
            }
        }
    }

    #[test]
    fn analog_chsh_from_exact_statistics_matches_t_formula() {
        // With orthonormal b's the value is |Tᵀ(a₁+a₂)| + |Tᵀ(a₁−a₂)| restricted to the plane.
        let st = random_state(5, RandomKind::Mixed);
        let a = [Vec3::new(0.6, 0.0, 0.8), Vec3::Y];
        let rec = exact_statistics(&st, &a, &XZ);
        let v = analog_chsh_value(&rec.correlators, &XZ[0], &XZ[1]).unwrap().value;
        let t = st.correlation();
        let proj = |g: Vec3| Vec3::new(g[0], 0.0, g[2]).norm();
        let e = proj(t.tmul_vec(&(a[0] + a[1]))) + proj(t.tmul_vec(&(a[0] - a[1])));
        assert!((v - e).abs() < 1e-12);
    }
}
