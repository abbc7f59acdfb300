//! Closed-form decision procedures: coexistence of two qubit effects, the
//! CHSH and analog CHSH inequalities with their maximal violations, and the
//! concurrence bounds on those violations.

use num_traits::Float;

use crate::assemblage::{RestrictedAssemblage, SeoOutcome};
use crate::linalg::{dual_basis, svd3, Mat3, Vec3};
use crate::measurements::QubitEffect;
use crate::states::TwoQubitState;
use crate::{tol, Error, Result};

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Below this `F_m` the effect is treated as sharp; see [`coexistence`].
const F_TOL: f64 = 1e-7;

/// Relative gap below which `(1 ± η) − |r|` counts as zero in [`f_parameter`].
const EDGE_SNAP: f64 = 64.0 * f64::EPSILON;

/// Tolerance for the bound checks in [`concurrence_bounds_check`].
const BOUND_TOL: f64 = 1e-9;

/// Three-way outcome of comparing a value against a bound with
/// [`tol::DECISION`] slack on either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Violated,
    Boundary,
}

impl Verdict {
    /// `margin > tol` is a violation, `margin < −tol` holds.
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin > tol {
            Verdict::Violated
        } else if margin < -tol {
            Verdict::Holds
        } else {
            Verdict::Boundary
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationReport {
    pub value: f64,
    pub bound: f64,
    /// `value − bound`.
    pub margin: f64,
    pub verdict: Verdict,
}

impl ViolationReport {
    pub fn new(value: f64, bound: f64) -> Self {
        let margin = value - bound;
        ViolationReport { value, bound, margin, verdict: Verdict::from_margin(margin, tol::DECISION) }
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

/// Both sides of the coexistence inequality
/// `(1 − F₁² − F₂²)(1 − η₁²/F₁² − η₂²/F₂²) ≤ (r₁·r₂ − η₁η₂)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoexistenceReport {
    pub lhs: f64,
    pub rhs: f64,
    pub f: [f64; 2],
    /// `lhs − rhs`; positive means the effects are not coexistent.
    pub violation: f64,
}

impl CoexistenceReport {
    pub fn coexistent(&self) -> bool {
        self.violation <= tol::DECISION
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_margin(self.violation, tol::DECISION)
    }
}

/// `F = ½(√((1+η)² − r²) + √((1−η)² − r²))`.
pub fn f_parameter(e: &QubitEffect) -> f64 {
    let r = e.r.norm();
    // Factored differences of squares lose less near |η| + |r| = 1. A gap
    // x − r at rounding level is taken as exactly zero: F has a square-root
    // singularity there, so ulp noise would otherwise cost ~√ε.
    let root = |x: f64| {
        let gap = x - r;
        if gap <= EDGE_SNAP * (x + r) {
            0.0
        } else {
            (gap * (x + r)).sqrt()
        }
    };
    0.5 * (root(1.0 + e.eta) + root(1.0 - e.eta))
}

/// Joint measurability of two effects `½[(1+η_m)I + r_m·σ]`.
///
/// The inequality is evaluated as written. For a valid effect
/// `(1 + |η|)² − r² ≥ 4|η|`, hence `F² ≥ |η|` and `η²/F² ≤ F²`; when
/// `F < F_TOL` that term is therefore replaced by its limit 0, which keeps
/// sharp effects (`F = 0`) decidable.
pub fn coexistence(e1: &QubitEffect, e2: &QubitEffect) -> Result<CoexistenceReport> {
    for e in [e1, e2] {
        if !e.is_valid(tol::PSD) {
            return Err(Error::InvalidEffect(e.eta.abs() + e.r.norm()));
        }
    }
    let f = [f_parameter(e1), f_parameter(e2)];
    let ratio = |eta: f64, f: f64| if f < F_TOL { 0.0 } else { eta * eta / (f * f) };
    let lhs = (1.0 - f[0] * f[0] - f[1] * f[1]) * (1.0 - ratio(e1.eta, f[0]) - ratio(e2.eta, f[1]));
    let rhs = (e1.r.dot(&e2.r) - e1.eta * e2.eta).powi(2);
    Ok(CoexistenceReport { lhs, rhs, f, violation: lhs - rhs })
}

/// Steering verdict for a two-setting restricted assemblage via its
/// steering-equivalent observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteeringReport {
    /// Span of dimension ≤ 2: all effects commute, never steerable.
    CommutingSpan,
    /// `ρ̃_B` is pure: never steerable.
    PureReduced,
    /// Steerable iff `O_{+|1}` and `O_{+|2}` are not coexistent.
    Coexistence(CoexistenceReport),
}

impl SteeringReport {
    /// `Some(true)` if steerable, `None` inside the boundary band.
    pub fn steerable(&self) -> Option<bool> {
        match self {
            SteeringReport::CommutingSpan | SteeringReport::PureReduced => Some(false),
            SteeringReport::Coexistence(c) => match c.verdict() {
                Verdict::Violated => Some(true),
                Verdict::Holds => Some(false),
                Verdict::Boundary => None,
            },
        }
    }

    /// Signed distance from the decision boundary (positive = steerable).
    pub fn margin(&self) -> f64 {
        match self {
            SteeringReport::Coexistence(c) => c.violation,
            _ => f64::NEG_INFINITY,
        }
    }
}

pub fn steering_by_coexistence(ra: &RestrictedAssemblage) -> Result<SteeringReport> {
    if ra.span().dim() <= 2 {
        return Ok(SteeringReport::CommutingSpan);
    }
    match ra.steering_equivalent_observables(tol::RANK)? {
        SeoOutcome::PureReduced => Ok(SteeringReport::PureReduced),
        SeoOutcome::Observables(o) => Ok(SteeringReport::Coexistence(coexistence(&o.plus[0], &o.plus[1])?)),
    }
}

/// `|γ₁ + γ₂| + |γ₁ − γ₂| ≤ 2`.
pub fn gamma_pair_bound(gamma1: &Vec3, gamma2: &Vec3) -> ViolationReport {
    ViolationReport::new((*gamma1 + *gamma2).norm() + (*gamma1 - *gamma2).norm(), 2.0)
}

fn check_correlators(c: &[[f64; 2]; 2]) -> Result<()> {
    for x in c.iter().flatten() {
        if !(x.abs() <= 1.0 + tol::DECISION) {
            return Err(Error::CorrelatorOutOfRange(*x));
        }
    }
    Ok(())
}

/// CHSH value maximised over the eight relabelings of settings and
/// outcomes. `c[m][n] = ⟨A_m B_n⟩`.
pub fn chsh_value(c: &[[f64; 2]; 2]) -> Result<ViolationReport> {
    check_correlators(c)?;
    let total: f64 = c.iter().flatten().sum();
    // Each variant is ±(sum − 2·one term).
    let best = c.iter().flatten().map(|x| (total - 2.0 * x).abs()).fold(0.0, f64::max);
    Ok(ViolationReport::new(best, 2.0))
}

/// Analog CHSH value
/// `|⟨(A₁+A₂)B₁⟩b'₁ + ⟨(A₁+A₂)B₂⟩b'₂| + |⟨(A₁−A₂)B₁⟩b'₁ + ⟨(A₁−A₂)B₂⟩b'₂|`
/// where `b'_n` is the dual basis of Bob's axes.
pub fn analog_chsh_value(c: &[[f64; 2]; 2], b1: &Vec3, b2: &Vec3) -> Result<ViolationReport> {
    check_correlators(c)?;
    let (d1, d2) = dual_basis(b1, b2)?;
    let plus = d1 * (c[0][0] + c[1][0]) + d2 * (c[0][1] + c[1][1]);
    let minus = d1 * (c[0][0] - c[1][0]) + d2 * (c[0][1] - c[1][1]);
    Ok(ViolationReport::new(plus.norm() + minus.norm(), 2.0))
}

/// `λ₁, λ₂`: the two largest eigenvalues of `TTᵀ`.
pub fn top_eigenvalues(t: &Mat3) -> [f64; 2] {
    let s = svd3(t).values;
    [s[0] * s[0], s[1] * s[1]]
}

/// Maximal CHSH violation `2√(λ₁ + λ₂)`.
pub fn chsh_max(t: &Mat3) -> f64 {
    let [l1, l2] = top_eigenvalues(t);
    2.0 * (l1 + l2).sqrt()
}

/// Maximal analog CHSH violation; coincides with [`chsh_max`].
pub fn analog_chsh_max(t: &Mat3) -> f64 {
    chsh_max(t)
}

/// Maximal CHSH violation with mutually unbiased measurements on both sides,
/// `√2(√λ₁ + √λ₂)`.
pub fn chsh_max_mub(t: &Mat3) -> f64 {
    let s = svd3(t).values;
    SQRT_2 * (s[0] + s[1])
}

/// Whether `λ₁ + λ₂ > 1` (outside the decision band).
pub fn chsh_violable(t: &Mat3) -> Verdict {
    let [l1, l2] = top_eigenvalues(t);
    Verdict::from_margin(l1 + l2 - 1.0, tol::DECISION)
}

/// Measurement axes for the two-setting scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axes {
    pub alice: [Vec3; 2],
    pub bob: [Vec3; 2],
}

fn top_singular_pairs(t: &Mat3) -> Result<(f64, f64, [Vec3; 2], [Vec3; 2])> {
    let svd = svd3(t);
    if svd.values[1] <= tol::RANK {
        return Err(Error::DegenerateCorrelation(svd.values[1]));
    }
    Ok((svd.values[0], svd.values[1], [svd.left(0), svd.left(1)], [svd.right(0), svd.right(1)]))
}

/// Axes attaining [`analog_chsh_max`]: Alice measures along the top two left
/// singular vectors of `T`, Bob along the corresponding right ones. Both
/// pairs are orthonormal.
pub fn optimal_measurements(t: &Mat3) -> Result<Axes> {
    let (_, _, u, v) = top_singular_pairs(t)?;
    Ok(Axes { alice: u, bob: v })
}

/// Axes attaining [`chsh_max`] for the ordinary CHSH combination
/// `⟨A₁B₁⟩ + ⟨A₂B₁⟩ + ⟨A₁B₂⟩ − ⟨A₂B₂⟩`.
pub fn optimal_chsh_measurements(t: &Mat3) -> Result<Axes> {
    let (s1, s2, u, v) = top_singular_pairs(t)?;
    let n = (s1 * s1 + s2 * s2).sqrt();
    let b1 = (v[0] * s1 + v[1] * s2) * (1.0 / n);
    let b2 = (v[0] * s1 - v[1] * s2) * (1.0 / n);
    Ok(Axes { alice: u, bob: [b1, b2] })
}

/// Mutually unbiased axes on both sides attaining [`chsh_max_mub`].
pub fn optimal_mub_measurements(t: &Mat3) -> Result<Axes> {
    let (_, _, u, v) = top_singular_pairs(t)?;
    let h = core::f64::consts::FRAC_1_SQRT_2;
    Ok(Axes { alice: [(u[0] + u[1]) * h, (u[0] - u[1]) * h], bob: v })
}

/// Concurrence bounds on the maximal violations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub concurrence: f64,
    pub s: f64,
    pub s_mub: f64,
    /// `2√2 C ≤ S ≤ 2√(1 + C²)`.
    pub s_bounds: bool,
    /// `2√2 C ≤ S_M ≤ √2(1 + C)`.
    pub s_mub_bounds: bool,
    /// `S ≥ 2√2(1 + 2C)/3` and `S_M ≥ 2√2(1 + 2C)/3`; only evaluated for
    /// entangled Bell-diagonal states.
    pub bell_diagonal_lower: Option<bool>,
}

pub fn concurrence_bounds_check(state: &TwoQubitState) -> BoundsReport {
    let c = state.concurrence();
    let t = state.correlation();
    let s = chsh_max(&t);
    let s_mub = chsh_max_mub(&t);
    let low = 2.0 * SQRT_2 * c;
    let s_bounds = low <= s + BOUND_TOL && s <= 2.0 * (1.0 + c * c).sqrt() + BOUND_TOL;
    let s_mub_bounds = low <= s_mub + BOUND_TOL && s_mub <= SQRT_2 * (1.0 + c) + BOUND_TOL;
    let bell_diagonal_lower = (state.is_bell_diagonal() && c > 0.0).then(|| {
        let b = 2.0 * SQRT_2 / 3.0 * (1.0 + 2.0 * c);
        s + BOUND_TOL >= b && s_mub + BOUND_TOL >= b
    });
    BoundsReport { concurrence: c, s, s_mub, s_bounds, s_mub_bounds, bell_diagonal_lower }
}

/// `cos²(2θ) ≥ (2p − 1)/((2 − p)p³)`: the projective-measurement condition
/// under which the one-way family is not steerable from Bob to Alice.
pub fn one_way_unsteerable_condition(p: f64, theta: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "p", value: p, domain: "[0, 1]" });
    }
    if p == 0.0 {
        return Ok(true);
    }
    let c = (2.0 * theta).cos();
    Ok(c * c >= (2.0 * p - 1.0) / ((2.0 - p) * p * p * p))
}
