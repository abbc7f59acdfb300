//! Turning command-line inputs into states, axes and grids.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use steerkit_core::criteria::{optimal_measurements, optimal_mub_measurements, Axes};
use steerkit_core::states::{random_state, RandomKind};
use steerkit_core::{Mat3, TwoQubitState, Vec3};

use crate::args::{AxesArgs, Family, Kind, Policy, StateArgs};
use crate::Failure;

/// Tolerated deviation of a user axis from unit length before warning.
const AXIS_WARN: f64 = 1e-6;

/// On-disk state schema; `T` is row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateJson {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    #[serde(rename = "T")]
    pub t: [[f64; 3]; 3],
}

impl StateJson {
    pub fn from_state(s: &TwoQubitState) -> Self {
        StateJson { alpha: s.alpha().0, beta: s.beta().0, t: s.correlation().0 }
    }

    pub fn to_state(&self) -> Result<TwoQubitState, Failure> {
        TwoQubitState::compose(Vec3(self.alpha), Vec3(self.beta), Mat3(self.t))
            .map_err(|e| Failure::Validation(format!("state file does not describe a valid state: {e}")))
    }
}

pub fn random_kind(k: Kind) -> RandomKind {
    match k {
        Kind::Pure => RandomKind::Pure,
        Kind::Mixed => RandomKind::Mixed,
        Kind::BellDiagonal => RandomKind::BellDiagonal,
    }
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Hierarchy => "hierarchy",
        Family::OneWay => "one_way",
        Family::OneWayPovm => "one_way_povm",
        Family::BellDiagonal => "bell_diagonal",
        Family::Random => "random",
    }
}

/// Parameter names of a family, in `--params` order.
pub fn param_names(f: Family) -> &'static [&'static str] {
    match f {
        Family::Hierarchy => &["s"],
        Family::OneWay | Family::OneWayPovm => &["p", "theta"],
        Family::BellDiagonal => &["w1", "w2", "w3", "w4"],
        Family::Random => &["seed"],
    }
}

pub fn family_state(f: Family, params: &[f64], kind: Kind) -> Result<TwoQubitState, Failure> {
    let names = param_names(f);
    if params.len() != names.len() {
        return Err(Failure::Validation(format!(
            "family {} takes {} parameter(s) ({}), got {}",
            family_name(f),
            names.len(),
            names.join(","),
            params.len()
        )));
    }
    let bad = |e: steerkit_core::Error| Failure::Validation(format!("{}: {e}", family_name(f)));
    match f {
        Family::Hierarchy => TwoQubitState::hierarchy(params[0]).map_err(bad),
        Family::OneWay => TwoQubitState::one_way(params[0], params[1]).map_err(bad),
        Family::OneWayPovm => TwoQubitState::one_way_povm(params[0], params[1]).map_err(bad),
        Family::BellDiagonal => {
            TwoQubitState::bell_diagonal([params[0], params[1], params[2], params[3]]).map_err(bad)
        }
        Family::Random => {
            let seed = params[0];
            if !(seed >= 0.0 && seed.fract() == 0.0 && seed <= u64::MAX as f64) {
                return Err(Failure::Validation(format!("random: seed must be a non-negative integer, got {seed}")));
            }
            Ok(random_state(seed as u64, random_kind(kind)))
        }
    }
}

/// The state and a short description of where it came from.
pub fn resolve_state(a: &StateArgs) -> Result<(TwoQubitState, String), Failure> {
    if let Some(path) = &a.state {
        return Ok((read_state(path)?, path.display().to_string()));
    }
    let f = a.family.ok_or_else(|| Failure::Validation("either --family or --state is required".into()))?;
    let st = family_state(f, &a.params, a.kind)?;
    let args: Vec<String> =
        param_names(f).iter().zip(&a.params).map(|(n, v)| format!("{n}={v}")).collect();
    Ok((st, format!("{}({})", family_name(f), args.join(","))))
}

pub fn read_state(path: &Path) -> Result<TwoQubitState, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read state file {}: {e}", path.display())))?;
    let js: StateJson = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("malformed state file {}: {e}", path.display())))?;
    js.to_state()
}

/// Parse "x,y,z;x,y,z[;…]" into unit vectors, warning on non-unit input.
pub fn parse_vectors(text: &str) -> Result<Vec<Vec3>, Failure> {
    let mut out = Vec::new();
    for (i, part) in text.split(';').enumerate() {
        let comps: Vec<f64> = part
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Validation(format!("axis {}: {e}", i + 1)))?;
        let [x, y, z] = comps[..] else {
            return Err(Failure::Validation(format!("axis {} needs three components", i + 1)));
        };
        let v = Vec3::new(x, y, z);
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Failure::Validation(format!("axis {} has no direction", i + 1)));
        }
        if (norm - 1.0).abs() > AXIS_WARN {
            eprintln!("warning: axis {} has length {norm}; normalised", i + 1);
        }
        out.push(v * (1.0 / norm));
    }
    Ok(out)
}

pub fn resolve_axes(a: &AxesArgs, state: &TwoQubitState) -> Result<Axes, Failure> {
    let t = state.correlation();
    let derived = |r: steerkit_core::Result<Axes>| {
        r.map_err(|e| Failure::Validation(format!("cannot derive measurement axes for this state: {e}")))
    };
    match a.policy {
        Policy::Fixed => fixed_axes(a.axes.as_deref()),
        _ if a.axes.is_some() => Err(Failure::Validation("--axes only applies to --policy fixed".into())),
        Policy::Optimal => derived(optimal_measurements(&t)),
        Policy::Mub => derived(optimal_mub_measurements(&t)),
    }
}

pub fn fixed_axes(text: Option<&str>) -> Result<Axes, Failure> {
    let v = match text {
        Some(t) => parse_vectors(t)?,
        None => vec![Vec3::X, Vec3::Z],
    };
    match v[..] {
        [a1, a2] => Ok(Axes { alice: [a1, a2], bob: [a1, a2] }),
        [a1, a2, b1, b2] => Ok(Axes { alice: [a1, a2], bob: [b1, b2] }),
        _ => Err(Failure::Validation(format!("--axes takes 2 or 4 vectors, got {}", v.len()))),
    }
}

/// One scan axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub name: String,
    pub values: Vec<f64>,
}

/// `name=start:stop:count` (inclusive, evenly spaced) or `n=count`.
pub fn parse_grid(spec: &str) -> Result<GridAxis, Failure> {
    let bad = |why: &str| Failure::Validation(format!("grid '{spec}': {why}"));
    let (name, range) = spec.split_once('=').ok_or_else(|| bad("expected name=..."))?;
    let parts: Vec<&str> = range.split(':').collect();
    let count = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("count must be a positive integer"));
    let values = match parts[..] {
        [n] => (0..count(n)?).map(|i| i as f64).collect(),
        [a, b, n] => {
            let (a, b): (f64, f64) = (
                a.trim().parse().map_err(|_| bad("bad start"))?,
                b.trim().parse().map_err(|_| bad("bad stop"))?,
            );
            let n = count(n)?;
            if n == 1 {
                vec![a]
            } else {
                (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
            }
        }
        _ => return Err(bad("expected start:stop:count")),
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(GridAxis { name: name.trim().to_string(), values })
}

/// Check that the grid names match the family and stay inside its domain.
pub fn validate_grid(f: Family, axes: &[GridAxis]) -> Result<(), Failure> {
    let expected: &[&str] = match f {
        Family::Hierarchy => &["s"],
        Family::OneWay | Family::OneWayPovm => &["p", "theta"],
        Family::BellDiagonal | Family::Random => &["n"],
    };
    let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    if names != expected {
        return Err(Failure::Validation(format!(
            "family {} scans over {}, got {}",
            family_name(f),
            expected.join(" and "),
            names.join(" and ")
        )));
    }
    for a in axes {
        let ok = |v: f64| match a.name.as_str() {
            "s" | "p" => (0.0..=1.0).contains(&v),
            "theta" => v > 0.0 && v < std::f64::consts::FRAC_PI_2,
            _ => true,
        };
        if let Some(v) = a.values.iter().find(|&&v| !ok(v)) {
            return Err(Failure::Validation(format!("grid value {}={v} outside the family's domain", a.name)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = parse_grid("s=0:1:1001").unwrap();
        assert_eq!(g.values.len(), 1001);
        assert_eq!(g.values[0], 0.0);
        assert_eq!(g.values[1000], 1.0);
        assert_eq!(parse_grid("n=5").unwrap().values, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(parse_grid("s=0:1").is_err());
        assert!(parse_grid("s=0:1:0").is_err());
        assert!(parse_grid("nonsense").is_err());
    }

    #[test]
    fn axes_parse_and_normalise() {
        let v = parse_vectors("2,0,0; 0,0,-1").unwrap();
        assert_eq!(v, vec![Vec3::X, Vec3::new(0.0, 0.0, -1.0)]);
        assert!(parse_vectors("1,0").is_err());
        assert!(parse_vectors("0,0,0").is_err());
        assert!(fixed_axes(Some("1,0,0")).is_err());
        let four = fixed_axes(Some("1,0,0;0,0,1;0,1,0;1,0,0")).unwrap();
        assert_eq!(four.bob[0], Vec3::Y);
    }

    #[test]
    fn domains_are_enforced() {
        let g = |s: &str| vec![parse_grid(s).unwrap()];
        assert!(validate_grid(Family::Hierarchy, &g("s=0:1:11")).is_ok());
        assert!(validate_grid(Family::Hierarchy, &g("s=0:1.1:11")).is_err());
        assert!(validate_grid(Family::Hierarchy, &g("p=0:1:11")).is_err());
        let two = vec![parse_grid("p=0:1:3").unwrap(), parse_grid("theta=0:0.5:3").unwrap()];
        assert!(validate_grid(Family::OneWay, &two).is_err());
    }

    #[test]
    fn state_json_roundtrip() {
        let st = TwoQubitState::hierarchy(0.3).unwrap();
        let js = serde_json::to_string(&StateJson::from_state(&st)).unwrap();
        assert!(js.starts_with("{\"alpha\":"));
        let back: StateJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back.to_state().unwrap().max_abs_diff(&st), 0.0);
    }
}
