//! `steerkit crosscheck`: restricted-LHS SDP against the coexistence
//! verdict on random instances.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use steerkit_core::criteria::Axes;
use steerkit_core::states::{random_state_with, RandomKind};
use steerkit_core::Vec3;

use crate::args::CrosscheckArgs;
use crate::evaluate::{at_axes, status_name};
use crate::output::{destination, nums, to_json, write_artifact, Num};
use crate::Failure;

/// Instances with a coexistence margin closer to zero than this are not
/// compared.
pub const BAND: f64 = 1e-6;

const KINDS: [(RandomKind, &str); 3] =
    [(RandomKind::Mixed, "mixed"), (RandomKind::Pure, "pure"), (RandomKind::BellDiagonal, "bell_diagonal")];

#[derive(Debug, Serialize)]
pub struct Case {
    pub index: usize,
    pub kind: &'static str,
    pub alice: [[Num; 3]; 2],
    pub bob: [[Num; 3]; 2],
    pub coexistence_margin: Num,
    pub sdp_status: &'static str,
    pub sdp_slack: Num,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub n: usize,
    pub seed: u64,
    pub band: Num,
    pub agreements: usize,
    pub disagreements: usize,
    pub boundary: usize,
    pub steerable: usize,
    /// Every disagreement, in instance order.
    pub cases: Vec<Case>,
}

enum Comparison {
    Agree { steerable: bool },
    Boundary,
    Disagree(Case),
}

fn unit(r: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(StandardNormal.sample(r), StandardNormal.sample(r), StandardNormal.sample(r));
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}

fn instance(seed: u64, index: usize) -> Result<Comparison, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let (kind, kind_name) = KINDS[index % KINDS.len()];
    let state = random_state_with(&mut rng, kind);
    let axes = Axes { alice: [unit(&mut rng), unit(&mut rng)], bob: [unit(&mut rng), unit(&mut rng)] };
    let Ok(ev) = at_axes(&state, &axes) else { return Ok(Comparison::Boundary) };
    let margin = ev.steering.margin();
    if margin.abs() < BAND {
        return Ok(Comparison::Boundary);
    }
    let sdp = ev.restricted_sdp()?;
    let analytic = margin > 0.0;
    Ok(match sdp.steerable() {
        Some(s) if s == analytic => Comparison::Agree { steerable: s },
        _ => Comparison::Disagree(Case {
            index,
            kind: kind_name,
            alice: axes.alice.map(|v| nums(v.0)),
            bob: axes.bob.map(|v| nums(v.0)),
            coexistence_margin: Num(margin),
            sdp_status: status_name(sdp.status),
            sdp_slack: Num(sdp.slack),
        }),
    })
}

pub fn summary(n: usize, seed: u64) -> Result<Summary, Failure> {
    if n == 0 {
        return Err(Failure::Validation("--n must be at least 1".into()));
    }
    let results: Vec<Comparison> = (0..n).into_par_iter().map(|i| instance(seed, i)).collect::<Result<_, _>>()?;
    let mut s =
        Summary { n, seed, band: Num(BAND), agreements: 0, disagreements: 0, boundary: 0, steerable: 0, cases: Vec::new() };
    for r in results {
        match r {
            Comparison::Agree { steerable } => {
                s.agreements += 1;
                s.steerable += steerable as usize;
            }
            Comparison::Boundary => s.boundary += 1,
            Comparison::Disagree(c) => {
                s.disagreements += 1;
                s.cases.push(c);
            }
        }
    }
    Ok(s)
}

pub fn run(args: &CrosscheckArgs, out_dir: Option<&Path>) -> Result<(), Failure> {
    let s = summary(args.n, args.seed)?;
    let dest = destination(args.out.as_deref(), out_dir, "crosscheck", "json");
    write_artifact(dest.as_deref(), &to_json(&s)?)?;
    if s.disagreements > 0 {
        return Err(Failure::Disagreement(format!("{} of {} instances disagree", s.disagreements, s.n)));
    }
    Ok(())
}
