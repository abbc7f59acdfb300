//! Quantities shared by `analyze` and `scan`.

use serde::Serialize;
use steerkit_core::assemblage::Assemblage;
use steerkit_core::criteria::{
    analog_chsh_value, chsh_max, chsh_max_mub, chsh_value, steering_by_coexistence, Axes, CoexistenceReport,
    SteeringReport, Verdict, ViolationReport,
};
use steerkit_core::measurements::{ProjectiveMeasurement, QubitMeasurement, RestrictedSpan};
use steerkit_core::sdp::{lhs_feasible, restricted_lhs_feasible, FeasibilityStatus, FeasibilityVerdict};
use steerkit_core::statistics::exact_statistics;
use steerkit_core::{TwoQubitState, Vec3};

use crate::output::{nums, Num};
use crate::Failure;

/// `span{I, b₁·σ, b₂·σ}`; Bob's axes must not be parallel.
pub fn bob_span(b: &[Vec3; 2]) -> Result<RestrictedSpan, Failure> {
    let m = |v: Vec3| -> Result<QubitMeasurement, Failure> {
        Ok(ProjectiveMeasurement::normalized(v).map_err(|e| Failure::Validation(e.to_string()))?.0.into())
    };
    let span = RestrictedSpan::span_of(&[m(b[0])?, m(b[1])?]);
    if span.dim() < 3 {
        return Err(Failure::Validation("Bob's two axes must not be parallel".into()));
    }
    Ok(span)
}

/// Everything that depends on the choice of axes.
#[derive(Debug, Clone)]
pub struct AxisEvaluation {
    pub chsh: ViolationReport,
    pub analog: ViolationReport,
    pub steering: SteeringReport,
    pub assemblage: Assemblage,
    pub span: RestrictedSpan,
}

pub fn at_axes(state: &TwoQubitState, axes: &Axes) -> Result<AxisEvaluation, Failure> {
    let span = bob_span(&axes.bob)?;
    let c = exact_statistics(state, &axes.alice, &axes.bob).correlators;
    let assemblage = Assemblage::from_projective(state, &axes.alice)?;
    Ok(AxisEvaluation {
        chsh: chsh_value(&c)?,
        analog: analog_chsh_value(&c, &axes.bob[0], &axes.bob[1])?,
        steering: steering_by_coexistence(&assemblage.restrict(&span))?,
        assemblage,
        span,
    })
}

impl AxisEvaluation {
    pub fn restricted_sdp(&self) -> Result<FeasibilityVerdict, Failure> {
        Ok(restricted_lhs_feasible(&self.assemblage, &self.span)?)
    }

    pub fn full_sdp(&self) -> Result<FeasibilityVerdict, Failure> {
        Ok(lhs_feasible(&self.assemblage)?)
    }
}

pub fn s_values(state: &TwoQubitState) -> (f64, f64) {
    let t = state.correlation();
    (chsh_max(&t), chsh_max_mub(&t))
}

/// `Tr ρ²`.
pub fn purity(state: &TwoQubitState) -> f64 {
    let t = state.correlation();
    let tt: f64 = t.0.iter().flatten().map(|x| x * x).sum();
    0.25 * (1.0 + state.alpha().norm_sq() + state.beta().norm_sq() + tt)
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "no",
        Verdict::Violated => "yes",
        Verdict::Boundary => "boundary",
    }
}

pub fn route_name(r: &SteeringReport) -> &'static str {
    match r {
        SteeringReport::CommutingSpan => "commuting_span",
        SteeringReport::PureReduced => "pure_reduced",
        SteeringReport::Coexistence(_) => "coexistence",
    }
}

pub fn status_name(s: FeasibilityStatus) -> &'static str {
    match s {
        FeasibilityStatus::Feasible => "feasible",
        FeasibilityStatus::Infeasible => "infeasible",
        FeasibilityStatus::Boundary => "boundary",
    }
}

pub fn steerable_name(s: Option<bool>) -> &'static str {
    match s {
        Some(true) => "steerable",
        Some(false) => "unsteerable",
        None => "boundary",
    }
}

#[derive(Debug, Serialize)]
pub struct ViolationJson {
    pub value: Num,
    pub bound: Num,
    pub margin: Num,
    pub violated: bool,
}

impl From<&ViolationReport> for ViolationJson {
    fn from(v: &ViolationReport) -> Self {
        ViolationJson { value: Num(v.value), bound: Num(v.bound), margin: Num(v.margin), violated: v.violated() }
    }
}

#[derive(Debug, Serialize)]
pub struct CoexistenceJson {
    pub lhs: Num,
    pub rhs: Num,
    #[serde(rename = "F")]
    pub f: [Num; 2],
    pub violation: Num,
}

impl From<&CoexistenceReport> for CoexistenceJson {
    fn from(c: &CoexistenceReport) -> Self {
        CoexistenceJson { lhs: Num(c.lhs), rhs: Num(c.rhs), f: nums(c.f), violation: Num(c.violation) }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateJson {
    pub value: Num,
    pub min_strategy_eigenvalue: Num,
    /// `witness[setting][outcome]` as `[w₀, w_x, w_y, w_z]` with
    /// `W = w₀I + w·σ`.
    pub witness: Vec<Vec<[Num; 4]>>,
}

#[derive(Debug, Serialize)]
pub struct SdpJson {
    pub status: &'static str,
    pub steerable: Option<bool>,
    pub slack: Num,
    pub residual: Num,
    pub iterations: usize,
    pub certificate: Option<CertificateJson>,
}

impl From<&FeasibilityVerdict> for SdpJson {
    fn from(v: &FeasibilityVerdict) -> Self {
        SdpJson {
            status: status_name(v.status),
            steerable: v.steerable(),
            slack: Num(v.slack),
            residual: Num(v.residual),
            iterations: v.iterations,
            certificate: v.certificate.as_ref().map(|c| CertificateJson {
                value: Num(c.value),
                min_strategy_eigenvalue: Num(c.min_strategy_eigenvalue),
                witness: c.witness.iter().map(|s| s.iter().map(|w| nums(w.coords())).collect()).collect(),
            }),
        }
    }
}
