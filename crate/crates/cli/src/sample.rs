//! `steerkit sample`: finite-shot statistics.
//!
//! The CSV has one row per joint setting `(m, n)`:
//! `m,n,alice_x,alice_y,alice_z,bob_x,bob_y,bob_z,shots,n_pp,n_pm,n_mp,n_mm,A,B,AB,exact_A,exact_B,exact_AB`
//! where `n_pm` counts Alice `+`, Bob `−`, and `A`, `B`, `AB` are the
//! empirical `⟨A_m⟩`, `⟨B_n⟩`, `⟨A_m B_n⟩`. The JSON summary compares sampled
//! and exact CHSH values; it is written next to the CSV as
//! `<name>.summary.json`, or to stderr when the CSV goes to stdout.

use std::path::Path;

use serde::Serialize;
use steerkit_core::criteria::{analog_chsh_value, chsh_value, Axes};
use steerkit_core::statistics::{exact_statistics, sample_statistics, CorrelationRecord};

use crate::args::SampleArgs;
use crate::evaluate::bob_span;
use crate::input::{family_name, resolve_axes, resolve_state};
use crate::output::{destination, fmt_float, nums, to_json, write_artifact, Num};
use crate::Failure;

pub const HEADER: [&str; 19] = [
    "m", "n", "alice_x", "alice_y", "alice_z", "bob_x", "bob_y", "bob_z", "shots", "n_pp", "n_pm", "n_mp", "n_mm", "A",
    "B", "AB", "exact_A", "exact_B", "exact_AB",
];

#[derive(Debug, Serialize)]
pub struct Values {
    pub chsh: Num,
    pub analog_chsh: Num,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub source: String,
    pub shots: u64,
    pub seed: u64,
    pub alice: [[Num; 3]; 2],
    pub bob: [[Num; 3]; 2],
    pub sampled: Values,
    pub exact: Values,
    /// Largest deviation over the eight expectation values.
    pub max_abs_deviation: Num,
}

fn values(rec: &CorrelationRecord, axes: &Axes) -> Result<Values, Failure> {
    Ok(Values {
        chsh: Num(chsh_value(&rec.correlators)?.value),
        analog_chsh: Num(analog_chsh_value(&rec.correlators, &axes.bob[0], &axes.bob[1])?.value),
    })
}

pub fn table(rec: &CorrelationRecord, exact: &CorrelationRecord, axes: &Axes) -> Result<Vec<u8>, Failure> {
    let counts = rec.counts.ok_or_else(|| anyhow::anyhow!("record carries no counts"))?;
    let shots = rec.shots.unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(anyhow::Error::from)?;
    for m in 0..2 {
        for n in 0..2 {
            let mut r = vec![m.to_string(), n.to_string()];
            r.extend(axes.alice[m].0.iter().chain(&axes.bob[n].0).map(|&x| fmt_float(x)));
            r.push(shots.to_string());
            r.extend(counts[m][n].iter().map(u64::to_string));
            for x in [rec.alice[m], rec.bob[n], rec.correlators[m][n], exact.alice[m], exact.bob[n], exact.correlators[m][n]] {
                r.push(fmt_float(x));
            }
            w.write_record(&r).map_err(anyhow::Error::from)?;
        }
    }
    Ok(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
}

pub fn run(args: &SampleArgs, out_dir: Option<&Path>) -> Result<(), Failure> {
    if args.shots == 0 {
        return Err(Failure::Validation("--shots must be at least 1".into()));
    }
    let (state, source) = resolve_state(&args.state)?;
    let axes = resolve_axes(&args.axes, &state)?;
    bob_span(&axes.bob)?;
    let exact = exact_statistics(&state, &axes.alice, &axes.bob);
    let rec = sample_statistics(&state, &axes.alice, &axes.bob, args.shots, args.seed)?;
    let summary = Summary {
        source,
        shots: args.shots,
        seed: args.seed,
        alice: axes.alice.map(|v| nums(v.0)),
        bob: axes.bob.map(|v| nums(v.0)),
        sampled: values(&rec, &axes)?,
        exact: values(&exact, &axes)?,
        max_abs_deviation: Num(rec.max_abs_diff(&exact)),
    };
    let stem = match args.state.family {
        Some(f) => format!("sample_{}", family_name(f)),
        None => "sample_state".into(),
    };
    let dest = destination(args.out.as_deref(), out_dir, &stem, "csv");
    write_artifact(dest.as_deref(), &table(&rec, &exact, &axes)?)?;
    let json = to_json(&summary)?;
    match dest {
        Some(p) => write_artifact(Some(&p.with_extension("summary.json")), &json),
        None => {
            eprint!("{}", String::from_utf8_lossy(&json));
            Ok(())
        }
    }
}
