//! Two-qubit states in the Bloch parametrisation
//! `ρ = ¼(I⊗I + α·σ⊗I + I⊗β·σ + Σ t_ij σ_i⊗σ_j)`.
//!
//! `(α, β, T)` is the source of truth; the density matrix is derived on
//! demand. Alice is always the first tensor factor.

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{kron, pauli, CMatrix, Mat3, Matrix4, QubitOperator, Vec3, C0};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    alpha: Vec3,
    beta: Vec3,
    t: Mat3,
}

/// Which distribution [`random_state`] draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RandomKind {
    /// Haar-random pure state.
    Pure,
    /// Induced measure from a pure state on a doubled space (Hilbert–Schmidt).
    Mixed,
    /// Uniform (Dirichlet(1)) mixture of the four Bell states.
    BellDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub concurrence: f64,
    /// `‖ρ^{T_B}‖₁ − 1`, i.e. twice the magnitude of the negative
    /// partial-transpose eigenvalue sum.
    pub negativity: f64,
    /// Descending.
    pub pt_eigenvalues: [f64; 4],
}

// Correlation matrices of |Φ+>, |Φ->, |Ψ+>, |Ψ->.
const BELL_T: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];

impl TwoQubitState {
    /// Validated constructor: the resulting matrix must be PSD.
    pub fn compose(alpha: Vec3, beta: Vec3, t: Mat3) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && t.is_finite()) {
            return Err(Error::OutOfRange { name: "state parameter", value: f64::NAN, domain: "finite reals" });
        }
        let s = TwoQubitState { alpha, beta, t };
        let min = s.density_matrix().eigh()?.min_value();
        if min < -tol::PSD {
            return Err(Error::NotPositive(min));
        }
        Ok(s)
    }

    /// Pauli coordinates of a density matrix. `ρ` must be Hermitian, PSD and
    /// of unit trace.
    pub fn decompose(rho: &Matrix4) -> Result<Self> {
        let eig = rho.eigh()?;
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > tol::PSD {
            return Err(Error::BadTrace(tr));
        }
        if eig.min_value() < -tol::PSD {
            return Err(Error::NotPositive(eig.min_value()));
        }
        Ok(Self::coordinates(rho))
    }

    fn coordinates(rho: &Matrix4) -> Self {
        let c = |i: usize, j: usize| rho.matmul(&kron(&pauli(i), &pauli(j))).trace().re;
        let mut t = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = c(i + 1, j + 1);
            }
        }
        TwoQubitState { alpha: Vec3::new(c(1, 0), c(2, 0), c(3, 0)), beta: Vec3::new(c(0, 1), c(0, 2), c(0, 3)), t }
    }

    pub fn alpha(&self) -> Vec3 {
        self.alpha
    }

    pub fn beta(&self) -> Vec3 {
        self.beta
    }

    pub fn correlation(&self) -> Mat3 {
        self.t
    }

    pub fn density_matrix(&self) -> Matrix4 {
        let mut m = CMatrix::<4>::identity();
        for i in 0..3 {
            m = m + kron(&pauli(i + 1), &pauli(0)).scale(self.alpha[i]);
            m = m + kron(&pauli(0), &pauli(i + 1)).scale(self.beta[i]);
            for j in 0..3 {
                let tij = self.t.0[i][j];
                if tij != 0.0 {
                    m = m + kron(&pauli(i + 1), &pauli(j + 1)).scale(tij);
                }
            }
        }
        m.scale(0.25)
    }

    /// `ρ_A = ½(I + α·σ)`.
    pub fn reduced_alice(&self) -> QubitOperator {
        QubitOperator::new(0.5, self.alpha * 0.5)
    }

    /// `ρ_B = ½(I + β·σ)`.
    pub fn reduced_bob(&self) -> QubitOperator {
        QubitOperator::new(0.5, self.beta * 0.5)
    }

    /// Exchange the roles of Alice and Bob.
    pub fn swapped(&self) -> Self {
        TwoQubitState { alpha: self.beta, beta: self.alpha, t: self.t.transpose() }
    }

    /// Apply local rotations: `α → O_A α`, `β → O_B β`, `T → O_A T O_Bᵀ`.
    /// Every local unitary acts this way for some `O_A, O_B ∈ SO(3)`.
    pub fn rotated(&self, o_a: &Mat3, o_b: &Mat3) -> Self {
        TwoQubitState {
            alpha: o_a.mul_vec(&self.alpha),
            beta: o_b.mul_vec(&self.beta),
            t: o_a.mul_mat(&self.t).mul_mat(&o_b.transpose()),
        }
    }

    pub fn is_bell_diagonal(&self) -> bool {
        let t = &self.t.0;
        self.alpha.norm() <= tol::UNIT
            && self.beta.norm() <= tol::UNIT
            && (0..3).all(|i| (0..3).all(|j| i == j || t[i][j].abs() <= tol::UNIT))
    }

    pub fn singlet() -> Self {
        TwoQubitState { alpha: Vec3::ZERO, beta: Vec3::ZERO, t: Mat3::diag([-1.0; 3]) }
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState { alpha: Vec3::ZERO, beta: Vec3::ZERO, t: Mat3::ZERO }
    }

    /// `½(I + a·σ) ⊗ ½(I + b·σ)`, for Bloch vectors of length at most 1.
    pub fn product(a: Vec3, b: Vec3) -> Result<Self> {
        for v in [a, b] {
            if !(v.norm() <= 1.0 + tol::UNIT) {
                return Err(Error::OutOfRange { name: "|Bloch vector|", value: v.norm(), domain: "[0, 1]" });
            }
        }
        Ok(TwoQubitState { alpha: a, beta: b, t: super::linalg::outer(&a, &b) })
    }

    /// `p|Ψ⁻⟩⟨Ψ⁻| + (1−p)I/4`.
    pub fn werner(p: f64) -> Result<Self> {
        check_unit_interval("p", p)?;
        Ok(TwoQubitState { alpha: Vec3::ZERO, beta: Vec3::ZERO, t: Mat3::diag([-p; 3]) })
    }

    /// Mixture of `|Φ⁺⟩, |Φ⁻⟩, |Ψ⁺⟩, |Ψ⁻⟩` with the given weights.
    pub fn bell_diagonal(weights: [f64; 4]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange { name: "Bell weights", value: total, domain: "probability vector" });
        }
        let mut d = [0.0; 3];
        for (w, bt) in weights.iter().zip(BELL_T.iter()) {
            for k in 0..3 {
                d[k] += w * bt[k];
            }
        }
        Ok(TwoQubitState { alpha: Vec3::ZERO, beta: Vec3::ZERO, t: Mat3::diag(d) })
    }

    /// `s|Ψ⁻⟩⟨Ψ⁻| + (1−s)|0⟩⟨0|⊗I/2`, entangled for every `s > 0`.
    pub fn hierarchy(s: f64) -> Result<Self> {
        check_unit_interval("s", s)?;
        Ok(TwoQubitState { alpha: Vec3::new(0.0, 0.0, 1.0 - s), beta: Vec3::ZERO, t: Mat3::diag([-s; 3]) })
    }

    /// `p|ψ(θ)⟩⟨ψ(θ)| + (1−p) I/2 ⊗ ρ_B(θ)` with `|ψ(θ)⟩ = cos θ|00⟩ + sin θ|11⟩`.
    pub fn one_way(p: f64, theta: f64) -> Result<Self> {
        check_unit_interval("p", p)?;
        let (s2, c2) = (2.0 * theta).sin_cos();
        check_family(s2)?;
        Ok(TwoQubitState {
            alpha: Vec3::new(0.0, 0.0, p * c2),
            beta: Vec3::new(0.0, 0.0, c2),
            t: Mat3::diag([p * s2, -p * s2, p]),
        })
    }

    /// `½[ρ(p,θ) + ρ_A(p,θ) ⊗ |0⟩⟨0|]`, with `ρ(p,θ)` from [`Self::one_way`].
    pub fn one_way_povm(p: f64, theta: f64) -> Result<Self> {
        check_unit_interval("p", p)?;
        let (s2, c2) = (2.0 * theta).sin_cos();
        check_family(s2)?;
        let (s, c) = theta.sin_cos();
        Ok(TwoQubitState {
            alpha: Vec3::new(0.0, 0.0, p * c2),
            beta: Vec3::new(0.0, 0.0, c * c),
            t: Mat3::diag([p * s * c, -p * s * c, p * c * c]),
        })
    }

    /// Spectrum of `ρ^{T_B}`, descending.
    pub fn partial_transpose_eigenvalues(&self) -> [f64; 4] {
        // Transposing Bob flips σ_y on his side: β₂ → −β₂ and t_{i2} → −t_{i2}.
        let mut pt = *self;
        pt.beta[1] = -pt.beta[1];
        for i in 0..3 {
            pt.t.0[i][1] = -pt.t.0[i][1];
        }
        pt.density_matrix().eigh().map(|e| e.values).unwrap_or([f64::NAN; 4])
    }

    /// Wootters concurrence.
    ///
    /// With `ρ = Σ vᵢvᵢ†` (unnormalised eigenvectors) the relevant
    /// `λᵢ` are the singular values of `τ_ij = vᵢᵀ (σ_y⊗σ_y) v_j`. They
    /// are read off as the positive half of the spectrum of the Hermitian
    /// dilation `[[0, τ], [τ†, 0]]`, which avoids a square root of a
    /// possibly tiny eigenvalue.
    pub fn concurrence(&self) -> f64 {
        let Ok(eig) = self.density_matrix().eigh() else {
            return f64::NAN;
        };
        let yy = kron(&pauli(2), &pauli(2));
        let mut v = [[C0; 4]; 4];
        for (k, vk) in v.iter_mut().enumerate() {
            let w = eig.values[k].max(0.0).sqrt();
            for (i, x) in vk.iter_mut().enumerate() {
                *x = eig.vectors.0[i][k] * w;
            }
        }
        let mut dil = CMatrix::<8>::zeros();
        for i in 0..4 {
            let yvi = yy.transpose().mul_vec(&v[i]);
            for j in 0..4 {
                let tau: Complex64 = (0..4).map(|k| yvi[k] * v[j][k]).sum();
                dil.0[i][4 + j] = tau;
                dil.0[4 + j][i] = tau.conj();
            }
        }
        let Ok(sv) = dil.eigh_jacobi() else {
            return f64::NAN;
        };
        let l = &sv.values;
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    pub fn entanglement(&self) -> EntanglementReport {
        let pt = self.partial_transpose_eigenvalues();
        let neg: f64 = pt.iter().filter(|x| **x < 0.0).sum();
        EntanglementReport { concurrence: self.concurrence(), negativity: -2.0 * neg, pt_eigenvalues: pt }
    }

    pub fn max_abs_diff(&self, o: &TwoQubitState) -> f64 {
        self.alpha.max_abs_diff(&o.alpha).max(self.beta.max_abs_diff(&o.beta)).max(self.t.max_abs_diff(&o.t))
    }
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: x, domain: "[0, 1]" })
    }
}

fn check_family(sin2theta: f64) -> Result<()> {
    if sin2theta.abs() < tol::FAMILY_DEGENERACY || !sin2theta.is_finite() {
        return Err(Error::DegenerateFamily(sin2theta));
    }
    Ok(())
}

/// Reproducible random state. The same `(seed, kind)` always yields the same
/// state on every platform.
pub fn random_state(seed: u64, kind: RandomKind) -> TwoQubitState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(&mut rng, kind)
}

pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, kind: RandomKind) -> TwoQubitState {
    match kind {
        RandomKind::Pure => {
            let psi = gaussian_vector(rng);
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            let mut rho = Matrix4::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    rho.0[i][j] = psi[i] * psi[j].conj() / norm;
                }
            }
            TwoQubitState::coordinates(&rho)
        }
        RandomKind::Mixed => {
            // G G† / Tr is the reduced state of a random pure state on 4⊗4.
            let mut g = Matrix4::zeros();
            for row in g.0.iter_mut() {
                *row = gaussian_vector(rng);
            }
            let gg = g.matmul(&g.adjoint());
            let tr = gg.trace().re;
            TwoQubitState::coordinates(&gg.scale(1.0 / tr))
        }
        RandomKind::BellDiagonal => {
            let mut w = [0.0; 4];
            for x in w.iter_mut() {
                *x = Exp1.sample(rng);
            }
            let total: f64 = w.iter().sum();
            let mut d = [0.0; 3];
            for (wk, bt) in w.iter().zip(BELL_T.iter()) {
                for k in 0..3 {
                    d[k] += wk / total * bt[k];
                }
            }
            TwoQubitState { alpha: Vec3::ZERO, beta: Vec3::ZERO, t: Mat3::diag(d) }
        }
    }
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 4] {
    let mut v = [C0; 4];
    for z in v.iter_mut() {
        *z = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    }
    v
}

/// Uniformly random rotation (via a random unit quaternion).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let mut q = [0.0f64; 4];
    for x in q.iter_mut() {
        *x = StandardNormal.sample(rng);
    }
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    Mat3([
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ])
}
