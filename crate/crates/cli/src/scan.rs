//! `steerkit scan`: one CSV row per grid point.
//!
//! Columns are the grid parameters (`s`; `p,theta`; or the instance index
//! `n`) followed by the requested outputs in this order:
//!
//! | output   | columns                                          |
//! |----------|--------------------------------------------------|
//! | `C`      | `C`                                              |
//! | `N`      | `N`                                              |
//! | `S`      | `S`, `chsh_violable`                             |
//! | `S_M`    | `S_M`                                            |
//! | `margin` | `analog_chsh`, `coexistence_margin`, `steering`  |
//! | `sdp`    | `sdp_status`, `sdp_slack`                        |
//!
//! The one-way families add `one_way_condition`. Axis-dependent cells are
//! left empty when the policy cannot produce axes for a state.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use steerkit_core::criteria::{chsh_violable, one_way_unsteerable_condition, Axes};
use steerkit_core::states::{random_state_with, RandomKind};
use steerkit_core::TwoQubitState;

use crate::args::{Family, Output, Policy, ScanArgs};
use crate::evaluate::{self, at_axes, bob_span};
use crate::input::{family_name, family_state, fixed_axes, parse_grid, random_kind, resolve_axes, validate_grid, GridAxis};
use crate::output::{destination, fmt_float, write_artifact};
use crate::Failure;

const ORDER: [Output; 6] = [Output::Concurrence, Output::Negativity, Output::S, Output::SMub, Output::Margin, Output::Sdp];

fn columns(o: Output) -> &'static [&'static str] {
    match o {
        Output::Concurrence => &["C"],
        Output::Negativity => &["N"],
        Output::S => &["S", "chsh_violable"],
        Output::SMub => &["S_M"],
        Output::Margin => &["analog_chsh", "coexistence_margin", "steering"],
        Output::Sdp => &["sdp_status", "sdp_slack"],
    }
}

/// Grid points in output order; the last axis varies fastest.
pub fn grid_points(axes: &[GridAxis]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for a in axes {
        points = points.into_iter().flat_map(|p| a.values.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
    }
    points
}

fn state_at(args: &ScanArgs, point: &[f64]) -> Result<TwoQubitState, Failure> {
    match args.family {
        Family::Random | Family::BellDiagonal => {
            let kind = if args.family == Family::Random { random_kind(args.kind) } else { RandomKind::BellDiagonal };
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(point[0] as u64);
            Ok(random_state_with(&mut rng, kind))
        }
        f => family_state(f, point, args.kind),
    }
}

fn row(args: &ScanArgs, outputs: &[Output], fixed: Option<&Axes>, point: &[f64]) -> Result<Vec<String>, Failure> {
    let state = state_at(args, point)?;
    let axes = match fixed {
        Some(a) => Some(*a),
        None => resolve_axes(&args.axes, &state).ok(),
    };
    let ev = axes.as_ref().map(|a| at_axes(&state, a)).transpose()?;
    let mut cells: Vec<String> = point.iter().map(|&x| fmt_float(x)).collect();
    let (s, s_mub) = evaluate::s_values(&state);
    for &o in outputs {
        match o {
            Output::Concurrence => cells.push(fmt_float(state.concurrence())),
            Output::Negativity => cells.push(fmt_float(state.entanglement().negativity)),
            Output::S => {
                cells.push(fmt_float(s));
                cells.push(evaluate::verdict_name(chsh_violable(&state.correlation())).into());
            }
            Output::SMub => cells.push(fmt_float(s_mub)),
            Output::Margin => match &ev {
                Some(ev) => {
                    cells.push(fmt_float(ev.analog.value));
                    cells.push(fmt_float(ev.steering.margin()));
                    cells.push(evaluate::steerable_name(ev.steering.steerable()).into());
                }
                None => cells.extend(std::iter::repeat(String::new()).take(3)),
            },
            Output::Sdp => match &ev {
                Some(ev) => {
                    let v = ev.restricted_sdp()?;
                    cells.push(evaluate::status_name(v.status).into());
                    cells.push(fmt_float(v.slack));
                }
                None => cells.extend(std::iter::repeat(String::new()).take(2)),
            },
        }
    }
    if matches!(args.family, Family::OneWay | Family::OneWayPovm) {
        cells.push(one_way_unsteerable_condition(point[0], point[1])?.to_string());
    }
    Ok(cells)
}

pub fn table(args: &ScanArgs) -> Result<Vec<u8>, Failure> {
    let grid: Vec<GridAxis> = args.grid.iter().map(|g| parse_grid(g)).collect::<Result<_, _>>()?;
    validate_grid(args.family, &grid)?;
    let fixed = match args.axes.policy {
        Policy::Fixed => {
            let a = fixed_axes(args.axes.axes.as_deref())?;
            bob_span(&a.bob)?;
            Some(a)
        }
        _ if args.axes.axes.is_some() => {
            return Err(Failure::Validation("--axes only applies to --policy fixed".into()))
        }
        _ => None,
    };
    let outputs: Vec<Output> = ORDER.into_iter().filter(|o| args.outputs.contains(o)).collect();

    let mut header: Vec<&str> = grid.iter().map(|g| g.name.as_str()).collect();
    header.extend(outputs.iter().flat_map(|&o| columns(o).iter().copied()));
    if matches!(args.family, Family::OneWay | Family::OneWayPovm) {
        header.push("one_way_condition");
    }

    let points = grid_points(&grid);
    let rows: Vec<Vec<String>> =
        points.par_iter().map(|p| row(args, &outputs, fixed.as_ref(), p)).collect::<Result<_, _>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(anyhow::Error::from)?;
    for r in &rows {
        w.write_record(r).map_err(anyhow::Error::from)?;
    }
    Ok(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
}

pub fn run(args: &ScanArgs, out_dir: Option<&Path>) -> Result<(), Failure> {
    let bytes = table(args)?;
    let dest = destination(args.out.as_deref(), out_dir, &format!("scan_{}", family_name(args.family)), "csv");
    write_artifact(dest.as_deref(), &bytes)
}
