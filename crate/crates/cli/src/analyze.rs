//! `steerkit analyze`: one state, one choice of axes, one JSON report.

use std::path::Path;

use serde::Serialize;
use steerkit_core::criteria::{chsh_violable, one_way_unsteerable_condition, Axes, SteeringReport};
use steerkit_core::TwoQubitState;

use crate::args::{AnalyzeArgs, Family, Policy};
use crate::evaluate::{self, at_axes, CoexistenceJson, SdpJson, ViolationJson};
use crate::input::{family_name, resolve_axes, resolve_state};
use crate::output::{destination, nums, to_json, write_artifact, Num};
use crate::Failure;

#[derive(Debug, Serialize)]
pub struct Report {
    pub source: String,
    pub state: StateOut,
    pub policy: &'static str,
    pub axes: AxesOut,
    pub entanglement: EntanglementOut,
    pub purity: PurityOut,
    pub bell: BellOut,
    pub steering: SteeringOut,
    pub sdp: SdpOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_way: Option<OneWayOut>,
}

#[derive(Debug, Serialize)]
pub struct StateOut {
    pub alpha: [Num; 3],
    pub beta: [Num; 3],
    #[serde(rename = "T")]
    pub t: [[Num; 3]; 3],
}

#[derive(Debug, Serialize)]
pub struct AxesOut {
    pub alice: [[Num; 3]; 2],
    pub bob: [[Num; 3]; 2],
}

#[derive(Debug, Serialize)]
pub struct EntanglementOut {
    #[serde(rename = "C")]
    pub concurrence: Num,
    #[serde(rename = "N")]
    pub negativity: Num,
    pub pt_eigenvalues: [Num; 4],
    pub entangled: bool,
}

#[derive(Debug, Serialize)]
pub struct PurityOut {
    pub purity: Num,
    pub pure: bool,
    pub reduced_bob_pure: bool,
}

#[derive(Debug, Serialize)]
pub struct BellOut {
    #[serde(rename = "S")]
    pub s: Num,
    #[serde(rename = "S_M")]
    pub s_mub: Num,
    /// `yes`, `no` or `boundary`.
    pub chsh_violable: &'static str,
    pub chsh: ViolationJson,
    pub analog_chsh: ViolationJson,
}

#[derive(Debug, Serialize)]
pub struct SteeringOut {
    pub route: &'static str,
    pub steerable: Option<bool>,
    /// Coexistence violation; `null` when the route decides without it.
    pub margin: Num,
    pub coexistence: Option<CoexistenceJson>,
}

#[derive(Debug, Serialize)]
pub struct SdpOut {
    pub restricted: SdpJson,
    pub full: SdpJson,
}

#[derive(Debug, Serialize)]
pub struct OneWayOut {
    pub p: Num,
    pub theta: Num,
    pub alice_to_bob_steerable: Option<bool>,
    pub bob_to_alice_unsteerable: bool,
}

fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::Fixed => "fixed",
        Policy::Optimal => "optimal",
        Policy::Mub => "mub",
    }
}

pub fn report(state: &TwoQubitState, axes: &Axes, source: String, policy: Policy) -> Result<Report, Failure> {
    let ev = at_axes(state, axes)?;
    let (s, s_mub) = evaluate::s_values(state);
    let ent = state.entanglement();
    let purity = evaluate::purity(state);
    let bob = state.reduced_bob();
    let coexistence = match &ev.steering {
        SteeringReport::Coexistence(c) => Some(CoexistenceJson::from(c)),
        _ => None,
    };
    let (restricted, full) = (ev.restricted_sdp()?, ev.full_sdp()?);
    Ok(Report {
        source,
        state: StateOut {
            alpha: nums(state.alpha().0),
            beta: nums(state.beta().0),
            t: state.correlation().0.map(nums),
        },
        policy: policy_name(policy),
        axes: AxesOut { alice: axes.alice.map(|v| nums(v.0)), bob: axes.bob.map(|v| nums(v.0)) },
        entanglement: EntanglementOut {
            concurrence: Num(ent.concurrence),
            negativity: Num(ent.negativity),
            pt_eigenvalues: nums(ent.pt_eigenvalues),
            entangled: ent.concurrence > steerkit_core::tol::DECISION,
        },
        purity: PurityOut {
            purity: Num(purity),
            pure: (purity - 1.0).abs() <= steerkit_core::tol::RANK,
            reduced_bob_pure: bob.min_eigenvalue() <= steerkit_core::tol::RANK,
        },
        bell: BellOut {
            s: Num(s),
            s_mub: Num(s_mub),
            chsh_violable: evaluate::verdict_name(chsh_violable(&state.correlation())),
            chsh: (&ev.chsh).into(),
            analog_chsh: (&ev.analog).into(),
        },
        steering: SteeringOut {
            route: evaluate::route_name(&ev.steering),
            steerable: ev.steering.steerable(),
            margin: Num(ev.steering.margin()),
            coexistence,
        },
        sdp: SdpOut { restricted: (&restricted).into(), full: (&full).into() },
        one_way: None,
    })
}

pub fn run(args: &AnalyzeArgs, out_dir: Option<&Path>) -> Result<(), Failure> {
    let (state, source) = resolve_state(&args.state)?;
    let axes = resolve_axes(&args.axes, &state)?;
    let mut rep = report(&state, &axes, source, args.axes.policy)?;
    if let Some(f @ (Family::OneWay | Family::OneWayPovm)) = args.state.family {
        let (p, theta) = (args.state.params[0], args.state.params[1]);
        rep.one_way = Some(OneWayOut {
            p: Num(p),
            theta: Num(theta),
            alice_to_bob_steerable: rep.steering.steerable,
            bob_to_alice_unsteerable: one_way_unsteerable_condition(p, theta)
                .map_err(|e| Failure::Validation(format!("{}: {e}", family_name(f))))?,
        });
    }
    let stem = match args.state.family {
        Some(f) => format!("analyze_{}", family_name(f)),
        None => "analyze_state".into(),
    };
    let dest = destination(args.out.as_deref(), out_dir, &stem, "json");
    write_artifact(dest.as_deref(), &to_json(&rep)?)
}
