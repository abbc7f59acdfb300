//! Local-hidden-state feasibility as a cone program.
//!
//! An assemblage `{ρ_{a|A}}` is unsteerable iff there are PSD `σ_λ`, one per
//! deterministic strategy `λ`, with `Σ_λ D(a|A,λ) σ_λ = ρ_{a|A}`. The
//! restricted variant only asks for `Tr(Π_j ·)` to agree for a basis
//! `{Π_j}` of an operator span `R`.
//!
//! Both are decided through the minimum-slack program
//!
//! ```text
//!   t* = min t  s.t.  σ_λ ⪰ 0,
//!                     e_{a|A,j} = Σ_λ D(a|A,λ) Tr(Π_j σ_λ) − Tr(Π_j ρ_{a|A}),
//!                     |e| ≤ t,
//! ```
//!
//! which is always feasible and has `t* = 0` iff a (restricted) LHS model
//! exists. A qubit operator `q₀I + q·σ` is PSD iff `(q₀, q)` lies in the
//! Lorentz cone `Q⁴`, so this is a second-order cone program. The primal
//! gives the ensemble, the dual a steering witness when `t* > 0`.

pub mod socp;

use alloc::vec;
use alloc::vec::Vec;

use crate::assemblage::Assemblage;
use crate::linalg::dense::DMatrix;
use crate::linalg::QubitOperator;
use crate::measurements::RestrictedSpan;
use crate::{tol, Error, Result};

pub use socp::{Cone, Settings, Solution};

/// Hard cap on the number of deterministic strategies.
pub const MAX_STRATEGIES: usize = 1_000_000;

/// All deterministic assignments `λ: setting → outcome`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySet {
    outcomes: Vec<usize>,
    strategies: Vec<Vec<usize>>,
}

impl StrategySet {
    /// One entry of `outcomes` per setting.
    pub fn new(outcomes: &[usize]) -> Result<Self> {
        if outcomes.is_empty() || outcomes.iter().any(|&k| k == 0) {
            return Err(Error::Shape("need at least one setting with at least one outcome"));
        }
        let mut total: usize = 1;
        for &k in outcomes {
            total = total
                .checked_mul(k)
                .filter(|&t| t <= MAX_STRATEGIES)
                .ok_or(Error::TooManyStrategies { settings: outcomes.len(), outcomes: k })?;
        }
        // Mixed-radix counting, last setting fastest.
        let mut strategies = Vec::with_capacity(total);
        let mut current = vec![0usize; outcomes.len()];
        for _ in 0..total {
            strategies.push(current.clone());
            for pos in (0..outcomes.len()).rev() {
                current[pos] += 1;
                if current[pos] < outcomes[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
        Ok(StrategySet { outcomes: outcomes.to_vec(), strategies })
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn strategies(&self) -> &[Vec<usize>] {
        &self.strategies
    }

    /// `D(a|A,λ)`.
    pub fn d(&self, lambda: usize, setting: usize, outcome: usize) -> bool {
        self.strategies[lambda][setting] == outcome
    }
}

/// `N` settings with `K` outcomes each: `K^N` strategies.
pub fn enumerate_strategies(settings: usize, outcomes: usize) -> Result<StrategySet> {
    if settings == 0 {
        return Err(Error::Shape("need at least one setting"));
    }
    StrategySet::new(&vec![outcomes; settings])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeasibilityStatus {
    /// An LHS model exists (unsteerable).
    Feasible,
    /// No LHS model exists (steerable); a witness is attached.
    Infeasible,
    /// `t*` between the feasibility tolerance and the boundary band.
    Boundary,
}

/// Steering witness `{W_{a|A}}` with `Σ_A W_{λ(A)|A} ⪰ 0` for every
/// strategy, normalised so that `Σ_λ Tr Σ_A W_{λ(A)|A} = 1`. Any LHS
/// assemblage has `Σ Tr(W_{a|A} ρ_{a|A}) ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub witness: Vec<Vec<QubitOperator>>,
    /// `Σ Tr(W_{a|A} ρ_{a|A})` for the target assemblage (negative).
    pub value: f64,
    /// Smallest eigenvalue over `Σ_A W_{λ(A)|A}`, all `λ` (≈ 0 or positive).
    pub min_strategy_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict {
    pub status: FeasibilityStatus,
    /// Optimal slack `t*`: the smallest Euclidean mismatch, over PSD
    /// ensembles, between the modelled and target span components.
    pub slack: f64,
    /// Hidden-state ensemble `{σ_λ}` in strategy order, from the solve.
    pub ensemble: Vec<QubitOperator>,
    /// Largest violation of the linear constraints by `ensemble`.
    pub residual: f64,
    pub certificate: Option<Certificate>,
    pub iterations: usize,
}

impl FeasibilityVerdict {
    /// `Some(true)` if steerable, `None` on the boundary.
    pub fn steerable(&self) -> Option<bool> {
        match self.status {
            FeasibilityStatus::Feasible => Some(false),
            FeasibilityStatus::Infeasible => Some(true),
            FeasibilityStatus::Boundary => None,
        }
    }
}

/// LHS feasibility against the full operator space.
pub fn lhs_feasible(assemblage: &Assemblage) -> Result<FeasibilityVerdict> {
    restricted_lhs_feasible(assemblage, &RestrictedSpan::full())
}

/// Restricted LHS feasibility: only `Tr(Π_j ρ_{a|A})` must be reproduced.
pub fn restricted_lhs_feasible(assemblage: &Assemblage, span: &RestrictedSpan) -> Result<FeasibilityVerdict> {
    let outcomes: Vec<usize> = (0..assemblage.settings()).map(|s| assemblage.outcomes(s)).collect();
    let strategies = StrategySet::new(&outcomes)?;
    let units: Vec<[f64; 4]> =
        span.basis().iter().map(|p| p.coords().map(|c| c * core::f64::consts::SQRT_2)).collect();
    let l = strategies.len();

    // Variables: q_λ = coords(σ_λ) ∈ Q⁴ for every λ, then (t, e) ∈ Q^{m+1}.
    // Row (a, A, j) in units of √2:  Σ_λ D(a|A,λ) u_j·q_λ − e_r = u_j·coords(ρ_{a|A}).
    // The last outcome of each setting is implied by the marginal rows
    // Σ_λ u_j·q_λ − e_r = u_j·coords(ρ_B); keeping it would make the rows
    // dependent and the normal equations singular at the optimum.
    let element_row = |setting: usize, outcome: Option<usize>, j: usize| {
        let u = &units[j];
        let mut coeffs = vec![0.0; 4 * l];
        for lam in 0..l {
            if outcome.map_or(true, |o| strategies.d(lam, setting, o)) {
                coeffs[4 * lam..4 * lam + 4].copy_from_slice(u);
            }
        }
        let target = match outcome {
            Some(o) => assemblage.element(setting, o).coords(),
            None => assemblage.reduced().coords(),
        };
        let rhs = (0..4).map(|k| u[k] * target[k]).sum::<f64>();
        Row { coeffs, rhs, tag: outcome.map(|o| (setting, o, j)).unwrap_or((usize::MAX, 0, j)) }
    };
    let mut rows = Vec::new();
    for setting in 0..assemblage.settings() {
        for outcome in 0..assemblage.outcomes(setting) - 1 {
            for j in 0..units.len() {
                rows.push(element_row(setting, Some(outcome), j));
            }
        }
    }
    for j in 0..units.len() {
        rows.push(element_row(0, None, j));
    }
    let m = rows.len();
    let n = 4 * l + 1 + m;
    let mut a = DMatrix::zeros(m, n);
    let mut b = vec![0.0; m];
    for (r, row) in rows.iter().enumerate() {
        for (k, &v) in row.coeffs.iter().enumerate() {
            a[(r, k)] = v;
        }
        a[(r, 4 * l + 1 + r)] = -1.0;
        b[r] = row.rhs;
    }
    let mut c = vec![0.0; n];
    c[4 * l] = 1.0;
    let mut soc = vec![4; l];
    soc.push(m + 1);
    let cone = Cone { nonneg: 0, soc };
    let sol = socp::solve(&c, &a, &b, &cone, &Settings::default())?;

    let slack = sol.x[4 * l].max(0.0);
    let ensemble: Vec<QubitOperator> = (0..l)
        .map(|lam| {
            let q = &sol.x[4 * lam..4 * lam + 4];
            QubitOperator::from_coords([q[0], q[1], q[2], q[3]])
        })
        .collect();
    let mut residual: f64 = 0.0;
    for setting in 0..assemblage.settings() {
        for outcome in 0..assemblage.outcomes(setting) {
            let model = (0..l)
                .filter(|&lam| strategies.d(lam, setting, outcome))
                .fold(QubitOperator::ZERO, |acc, lam| acc + ensemble[lam]);
            let diff = span.project(&(model - assemblage.element(setting, outcome)));
            residual = residual.max(diff.coords().iter().fold(0.0, |m, v| m.max(v.abs())));
        }
    }

    let status = if slack <= tol::FEASIBILITY / 10.0 {
        FeasibilityStatus::Feasible
    } else if slack > tol::FEASIBILITY_BAND {
        FeasibilityStatus::Infeasible
    } else {
        FeasibilityStatus::Boundary
    };
    let certificate = (status == FeasibilityStatus::Infeasible)
        .then(|| witness(assemblage, &strategies, &units, &rows, &sol.y))
        .flatten();
    Ok(FeasibilityVerdict { status, slack, ensemble, residual, certificate, iterations: sol.iterations })
}

struct Row {
    coeffs: Vec<f64>,
    rhs: f64,
    /// (setting, outcome, basis index); setting `usize::MAX` marks a marginal row.
    tag: (usize, usize, usize),
}

/// Steering witness from the dual solution. With `y` the row multipliers,
/// `W_{a|A} = −Σ_j y_{aAj} Π_j − (1/N) Σ_j y_{Bj} Π_j` (no element term for
/// the last outcome), so `Σ_A W_{λ(A)|A}` is the (PSD) dual slack of block
/// `λ` and `Σ Tr(W ρ) = −2t*`.
fn witness(
    assemblage: &Assemblage,
    strategies: &StrategySet,
    units: &[[f64; 4]],
    rows: &[Row],
    y: &[f64],
) -> Option<Certificate> {
    let settings = assemblage.settings();
    let mut f: Vec<Vec<[f64; 4]>> = (0..settings).map(|s| vec![[0.0; 4]; assemblage.outcomes(s)]).collect();
    let mut marginal = [0.0; 4];
    for (row, &yi) in rows.iter().zip(y) {
        let (s, o, j) = row.tag;
        let target = if s == usize::MAX { &mut marginal } else { &mut f[s][o] };
        for k in 0..4 {
            target[k] -= yi * units[j][k];
        }
    }
    let share = 1.0 / settings as f64;
    let witness: Vec<Vec<QubitOperator>> = f
        .iter()
        .map(|s| {
            s.iter()
                .map(|w| QubitOperator::from_coords(core::array::from_fn(|k| w[k] + share * marginal[k])))
                .collect()
        })
        .collect();
    let combined = |w: &[Vec<QubitOperator>], lam: usize| {
        (0..settings).fold(QubitOperator::ZERO, |acc, s| acc + w[s][strategies.strategies()[lam][s]])
    };
    let norm: f64 = (0..strategies.len()).map(|lam| combined(&witness, lam).trace()).sum();
    if !(norm > 0.0) {
        return None;
    }
    let witness: Vec<Vec<QubitOperator>> =
        witness.into_iter().map(|s| s.into_iter().map(|w| w.scaled(1.0 / norm)).collect()).collect();
    let value = (0..settings)
        .flat_map(|s| (0..assemblage.outcomes(s)).map(move |o| (s, o)))
        .map(|(s, o)| witness[s][o].hs_inner(&assemblage.element(s, o)))
        .sum();
    let min_strategy_eigenvalue = (0..strategies.len())
        .map(|lam| combined(&witness, lam).min_eigenvalue())
        .fold(f64::INFINITY, f64::min);
    Some(Certificate { witness, value, min_strategy_eigenvalue })
}
