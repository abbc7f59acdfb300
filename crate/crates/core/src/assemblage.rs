//! Bob's conditional states, their restriction to an operator span, and the
//! steering-equivalent observables `O = ρ̃_B^{-1/2} ρ̃ ρ̃_B^{-1/2}`.

use alloc::vec::Vec;

use crate::linalg::{psd_sqrt_pinv, QubitOperator, Vec3};
use crate::measurements::{QubitEffect, RestrictedSpan};
use crate::states::TwoQubitState;
use crate::{tol, Error, Result};

/// Subnormalised conditional states `ρ_{a|A}`, indexed `[setting][outcome]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    elements: Vec<Vec<QubitOperator>>,
    reduced: QubitOperator,
}

impl Assemblage {
    /// Checks that every element is PSD, that all settings share the same
    /// marginal `Σ_a ρ_{a|A}` and that the marginal has unit trace.
    pub fn new(elements: Vec<Vec<QubitOperator>>) -> Result<Self> {
        let first = elements.first().ok_or(Error::Shape("no settings"))?;
        if elements.iter().any(|s| s.len() < 2) {
            return Err(Error::Shape("every setting needs at least two outcomes"));
        }
        let marginal = |s: &[QubitOperator]| s.iter().fold(QubitOperator::ZERO, |acc, x| acc + *x);
        let reduced = marginal(first);
        for setting in &elements {
            let d = marginal(setting).max_abs_diff(&reduced);
            if d > tol::HERMITIAN {
                return Err(Error::InconsistentAssemblage(d));
            }
            for e in setting {
                if e.min_eigenvalue() < -tol::PSD {
                    return Err(Error::NotPositive(e.min_eigenvalue()));
                }
            }
        }
        if (reduced.trace() - 1.0).abs() > tol::HERMITIAN {
            return Err(Error::BadTrace(reduced.trace()));
        }
        Ok(Assemblage { elements, reduced })
    }

    /// `ρ_{±|m} = ¼[(1 ± α·a_m)I + (β ± Tᵀa_m)·σ]` for projective
    /// measurements `a_m·σ` on Alice's side. Outcome 0 is `+1`.
    pub fn from_projective(state: &TwoQubitState, alice_axes: &[Vec3]) -> Result<Self> {
        let (alpha, beta, t) = (state.alpha(), state.beta(), state.correlation());
        let mut elements = Vec::with_capacity(alice_axes.len());
        for a in alice_axes {
            let n = a.norm();
            if (n - 1.0).abs() > tol::UNIT {
                return Err(Error::NotUnit(n));
            }
            let gamma = t.tmul_vec(a);
            let aa = alpha.dot(a);
            elements.push(alloc::vec![
                QubitOperator::new(0.25 * (1.0 + aa), (beta + gamma) * 0.25),
                QubitOperator::new(0.25 * (1.0 - aa), (beta - gamma) * 0.25),
            ]);
        }
        Self::new(elements)
    }

    /// Conditional states for arbitrary Alice POVMs, `ρ_{a|A} = Tr_A[(E_{a|A}⊗I)ρ]`.
    /// For `E = e₀I + e·σ` this is `½[(e₀ + e·α)I + (e₀β + Tᵀe)·σ]`.
    pub fn from_povms(state: &TwoQubitState, alice_effects: &[Vec<QubitOperator>]) -> Result<Self> {
        let (alpha, beta, t) = (state.alpha(), state.beta(), state.correlation());
        let elements = alice_effects
            .iter()
            .map(|setting| {
                setting
                    .iter()
                    .map(|e| {
                        QubitOperator::new(
                            0.5 * (e.scalar + e.vector.dot(&alpha)),
                            (beta * e.scalar + t.tmul_vec(&e.vector)) * 0.5,
                        )
                    })
                    .collect()
            })
            .collect();
        Self::new(elements)
    }

    pub fn elements(&self) -> &[Vec<QubitOperator>] {
        &self.elements
    }

    pub fn element(&self, setting: usize, outcome: usize) -> QubitOperator {
        self.elements[setting][outcome]
    }

    pub fn settings(&self) -> usize {
        self.elements.len()
    }

    pub fn outcomes(&self, setting: usize) -> usize {
        self.elements[setting].len()
    }

    pub fn reduced(&self) -> QubitOperator {
        self.reduced
    }

    /// Hilbert–Schmidt projection of every element onto `span`.
    pub fn restrict(&self, span: &RestrictedSpan) -> RestrictedAssemblage {
        let elements = self.elements.iter().map(|s| s.iter().map(|x| span.project(x)).collect()).collect();
        RestrictedAssemblage { elements, reduced: span.project(&self.reduced), span: span.clone() }
    }
}

/// An assemblage after projection onto a [`RestrictedSpan`].
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedAssemblage {
    elements: Vec<Vec<QubitOperator>>,
    reduced: QubitOperator,
    span: RestrictedSpan,
}

/// Steering-equivalent observables of a two-setting, two-outcome
/// restricted assemblage. `plus[m]` is `O_{+|m}`, `minus[m]` is `O_{−|m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeoPair {
    pub plus: [QubitEffect; 2],
    pub minus: [QubitEffect; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeoOutcome {
    Observables(SeoPair),
    /// `ρ̃_B` is rank deficient, hence pure; such an assemblage is never
    /// steerable.
    PureReduced,
}

impl RestrictedAssemblage {
    /// Assemble from already-projected parts (e.g. reconstructed from
    /// measurement statistics). The elements are projected again, which is a
    /// no-op when they already lie in the span.
    pub fn from_parts(elements: Vec<Vec<QubitOperator>>, span: RestrictedSpan) -> Result<Self> {
        let elements: Vec<Vec<QubitOperator>> =
            elements.into_iter().map(|s| s.iter().map(|x| span.project(x)).collect()).collect();
        let first = elements.first().ok_or(Error::Shape("no settings"))?;
        let reduced = first.iter().fold(QubitOperator::ZERO, |a, x| a + *x);
        for s in &elements {
            let d = s.iter().fold(QubitOperator::ZERO, |a, x| a + *x).max_abs_diff(&reduced);
            if d > tol::HERMITIAN {
                return Err(Error::InconsistentAssemblage(d));
            }
        }
        Ok(RestrictedAssemblage { elements, reduced, span })
    }

    pub fn elements(&self) -> &[Vec<QubitOperator>] {
        &self.elements
    }

    pub fn element(&self, setting: usize, outcome: usize) -> QubitOperator {
        self.elements[setting][outcome]
    }

    pub fn reduced(&self) -> QubitOperator {
        self.reduced
    }

    pub fn span(&self) -> &RestrictedSpan {
        &self.span
    }

    /// `O_{a|m} = ρ̃_B^{-1/2} ρ̃_{a|m} ρ̃_B^{-1/2}`. A reduced state with
    /// smallest eigenvalue below `rank_tol · λ_max` counts as pure.
    pub fn steering_equivalent_observables(&self, rank_tol: f64) -> Result<SeoOutcome> {
        if self.elements.len() != 2 || self.elements.iter().any(|s| s.len() != 2) {
            return Err(Error::Shape("steering-equivalent observables need two settings with two outcomes"));
        }
        let roots = psd_sqrt_pinv(&self.reduced.matrix(), rank_tol)?;
        if roots.rank < 2 {
            return Ok(SeoOutcome::PureReduced);
        }
        let k = roots.inv_sqrt;
        let seo = |x: &QubitOperator| -> Result<QubitEffect> {
            let o = k.matmul(&x.matrix()).matmul(&k);
            Ok(QubitEffect::from_operator(&QubitOperator::from_matrix(&o)?))
        };
        Ok(SeoOutcome::Observables(SeoPair {
            plus: [seo(&self.elements[0][0])?, seo(&self.elements[1][0])?],
            minus: [seo(&self.elements[0][1])?, seo(&self.elements[1][1])?],
        }))
    }
}
