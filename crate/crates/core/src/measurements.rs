//! Qubit measurements and the operator span of a measurement assemblage.

use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::{symmetric_eigen, QubitOperator, Vec3};
use crate::{tol, Error, Result};

/// `{(I ± a·σ)/2}` with outcomes `±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveMeasurement {
    axis: Vec3,
}

impl ProjectiveMeasurement {
    /// Requires `| |axis| − 1 | ≤ tol::UNIT`.
    pub fn new(axis: Vec3) -> Result<Self> {
        let n = axis.norm();
        if !((n - 1.0).abs() <= tol::UNIT) {
            return Err(Error::NotUnit(n));
        }
        Ok(ProjectiveMeasurement { axis })
    }

    /// Rescale to unit length. Returns the measurement together with the
    /// original length so callers can warn about sloppy input.
    pub fn normalized(axis: Vec3) -> Result<(Self, f64)> {
        let n = axis.norm();
        let unit = axis.normalized().filter(|_| n.is_finite()).ok_or(Error::NotUnit(n))?;
        Ok((ProjectiveMeasurement { axis: unit }, n))
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    /// Effect for outcome `+1` (`sign = true`) or `−1`.
    pub fn effect(&self, plus: bool) -> QubitOperator {
        let s = if plus { 0.5 } else { -0.5 };
        QubitOperator::new(0.5, self.axis * s)
    }

    pub fn effects(&self) -> [QubitOperator; 2] {
        [self.effect(true), self.effect(false)]
    }
}

/// `½[(1+η)I + r·σ]`. Its complement `I − O` is `½[(1−η)I − r·σ]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QubitEffect {
    pub eta: f64,
    pub r: Vec3,
}

impl QubitEffect {
    pub fn new(eta: f64, r: Vec3) -> Result<Self> {
        let e = QubitEffect { eta, r };
        let size = eta.abs() + r.norm();
        if !(size <= 1.0 + tol::PSD) {
            return Err(Error::InvalidEffect(size));
        }
        Ok(e)
    }

    pub fn complement(&self) -> Self {
        QubitEffect { eta: -self.eta, r: -self.r }
    }

    pub fn operator(&self) -> QubitOperator {
        QubitOperator::new(0.5 * (1.0 + self.eta), self.r * 0.5)
    }

    /// `η = Tr O − 1`, `r_i = Tr(O σ_i)`. No validity check.
    pub fn from_operator(o: &QubitOperator) -> Self {
        QubitEffect { eta: o.trace() - 1.0, r: o.vector * 2.0 }
    }

    /// Whether `0 ≤ O ≤ I` up to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.eta.abs() + self.r.norm() <= 1.0 + tol
    }
}

/// Three-outcome measurement `{(I + c_j·σ)/3}` with unit `c_j` summing to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrineMeasurement {
    c: [Vec3; 3],
}

impl TrineMeasurement {
    pub fn new(c: [Vec3; 3]) -> Result<Self> {
        for v in &c {
            if !((v.norm() - 1.0).abs() <= tol::UNIT * 10.0) {
                return Err(Error::NotUnit(v.norm()));
            }
        }
        let sum = c[0] + c[1] + c[2];
        if sum.norm() > 1e-10 {
            return Err(Error::OutOfRange { name: "|c₁+c₂+c₃|", value: sum.norm(), domain: "{0}" });
        }
        Ok(TrineMeasurement { c })
    }

    /// The trine in the x–z plane starting at `+z`.
    pub fn xz_plane() -> Self {
        let h = 3f64.sqrt() / 2.0;
        TrineMeasurement { c: [Vec3::new(0.0, 0.0, 1.0), Vec3::new(h, 0.0, -0.5), Vec3::new(-h, 0.0, -0.5)] }
    }

    pub fn vectors(&self) -> [Vec3; 3] {
        self.c
    }

    pub fn effects(&self) -> [QubitOperator; 3] {
        self.c.map(|c| QubitOperator::new(1.0 / 3.0, c * (1.0 / 3.0)))
    }
}

/// A measurement on Bob's qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitMeasurement {
    Projective(ProjectiveMeasurement),
    /// Two-outcome POVM `{O, I − O}`.
    Binary(QubitEffect),
    Trine(TrineMeasurement),
}

impl QubitMeasurement {
    pub fn effects(&self) -> Vec<QubitOperator> {
        match self {
            QubitMeasurement::Projective(m) => m.effects().to_vec(),
            QubitMeasurement::Binary(e) => alloc::vec![e.operator(), e.complement().operator()],
            QubitMeasurement::Trine(t) => t.effects().to_vec(),
        }
    }
}

impl From<ProjectiveMeasurement> for QubitMeasurement {
    fn from(m: ProjectiveMeasurement) -> Self {
        QubitMeasurement::Projective(m)
    }
}

/// Hilbert–Schmidt orthonormal basis `{Π_j}` of the real span of a set of
/// qubit effects.
///
/// In Pauli coordinates `x = (x₀, x₁, x₂, x₃)` with `X = x₀I + x·σ`, the
/// inner product is `Tr(XY) = 2 xᵀy`, so orthogonal projection onto the span
/// is an ordinary Euclidean projection in `R⁴`. Basis element `j` is stored
/// as a unit vector `u_j ∈ R⁴`, i.e. `Π_j = (u_j0 I + u_j·σ)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedSpan {
    basis: Vec<[f64; 4]>,
}

impl RestrictedSpan {
    /// Span of all effects of the given measurements. The dimension is the
    /// numerical rank of the Gram matrix of the (normalised) effect
    /// coordinates, with relative threshold `tol::RANK`.
    pub fn span_of(measurements: &[QubitMeasurement]) -> Self {
        let effects: Vec<QubitOperator> = measurements.iter().flat_map(|m| m.effects()).collect();
        Self::of_operators(&effects)
    }

    pub fn of_operators(ops: &[QubitOperator]) -> Self {
        let mut gram = [[0.0; 4]; 4];
        for op in ops {
            let x = op.coords();
            let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n == 0.0 {
                continue;
            }
            for i in 0..4 {
                for j in 0..4 {
                    gram[i][j] += x[i] * x[j] / (n * n);
                }
            }
        }
        let (vals, vecs) = symmetric_eigen(&gram).expect("Gram matrix is symmetric");
        let cutoff = tol::RANK * vals[0].max(0.0);
        let basis = (0..4).filter(|&k| vals[k] > cutoff && vals[k] > 0.0).map(|k| vecs[k]).collect();
        RestrictedSpan { basis }
    }

    /// The whole operator space `B(C²)`.
    pub fn full() -> Self {
        let mut basis = Vec::with_capacity(4);
        for k in 0..4 {
            let mut e = [0.0; 4];
            e[k] = 1.0;
            basis.push(e);
        }
        RestrictedSpan { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Π_j` as operators; `Tr(Π_i Π_j) = δ_ij`.
    pub fn basis(&self) -> Vec<QubitOperator> {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        self.basis.iter().map(|u| QubitOperator::from_coords(u.map(|x| x * s))).collect()
    }

    /// Projector onto the span in Pauli coordinates (`P = Σ u_j u_jᵀ`).
    pub fn projector(&self) -> [[f64; 4]; 4] {
        let mut p = [[0.0; 4]; 4];
        for u in &self.basis {
            for i in 0..4 {
                for j in 0..4 {
                    p[i][j] += u[i] * u[j];
                }
            }
        }
        p
    }

    /// Hilbert–Schmidt orthogonal projection `Σ_j Tr(Π_j X) Π_j`.
    pub fn project(&self, x: &QubitOperator) -> QubitOperator {
        let c = x.coords();
        let mut out = [0.0; 4];
        for u in &self.basis {
            let d: f64 = (0..4).map(|i| u[i] * c[i]).sum();
            for i in 0..4 {
                out[i] += d * u[i];
            }
        }
        QubitOperator::from_coords(out)
    }

    /// Inner products `Tr(Π_j X)` for every basis element.
    pub fn components(&self, x: &QubitOperator) -> Vec<f64> {
        self.basis().iter().map(|p| p.hs_inner(x)).collect()
    }

    /// Whether `X` lies in the span up to a projection residual of `tol::SPAN`.
    pub fn contains(&self, x: &QubitOperator) -> bool {
        let r = *x - self.project(x);
        let scale = x.coords().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        r.coords().iter().all(|v| v.abs() <= tol::SPAN * scale)
    }
}

/// `W = Π_p Σ_s O_{p,s}`: the number of joint detection patterns, for a list
/// of parties each given as its per-setting outcome counts.
pub fn complexity_cost(parties: &[&[usize]]) -> Result<u64> {
    if parties.len() < 2 {
        return Err(Error::MalformedCounts("need at least two parties"));
    }
    let mut w: u64 = 1;
    for settings in parties {
        if settings.is_empty() {
            return Err(Error::MalformedCounts("every party needs a setting"));
        }
        if settings.iter().any(|&o| o < 2) {
            return Err(Error::MalformedCounts("every setting needs at least two outcomes"));
        }
        let sum = settings.iter().try_fold(0u64, |acc, &o| acc.checked_add(o as u64));
        w = sum
            .and_then(|s| w.checked_mul(s))
            .ok_or(Error::MalformedCounts("complexity cost overflows u64"))?;
    }
    Ok(w)
}
