//! Fixed-size dense linear algebra for qubit and two-qubit operators.
//!
//! Nothing in this crate needs matrices larger than 8×8, so all types here
//! are stack arrays with const-generic sizes. The SDP layer has its own
//! heap-backed [`dense::DMatrix`] for the normal equations.

pub mod dense;
mod eigen;
mod svd;

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::{tol, Error, Result};

pub use eigen::{eigh_jacobi, psd_sqrt_pinv, symmetric_eigen, HermitianEigen, PsdRoots};
pub use svd::{svd3, Svd3};

pub(crate) const C0: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C1: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const CI: Complex64 = Complex64::new(0.0, 1.0);

/// A real 3-vector (Bloch vectors, measurement axes, correlation rows).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);
    pub const X: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const Y: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const Z: Vec3 = Vec3([0.0, 0.0, 1.0]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a, b, c] = self.0;
        let [x, y, z] = other.0;
        Vec3([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        // hypot-style scaling is unnecessary: entries are O(1) everywhere.
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    pub fn max_abs_diff(&self, other: &Vec3) -> f64 {
        (0..3).map(|i| (self.0[i] - other.0[i]).abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }
}

/// A real 3×3 matrix, row-major. Used for the correlation matrix `T`
/// (`t_ij = Tr[ρ σ_i⊗σ_j]`) and for local rotations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn diag(d: [f64; 3]) -> Mat3 {
        let mut m = Mat3::ZERO;
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: [Vec3; 3]) -> Mat3 {
        let mut m = Mat3::ZERO;
        for (j, c) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][j] = c.0[i];
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        let mut t = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    /// `vᵀ M`, i.e. `Mᵀ v`.
    pub fn tmul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3([self.column(0).dot(v), self.column(1).dot(v), self.column(2).dot(v)])
    }

    pub fn mul_mat(&self, o: &Mat3) -> Mat3 {
        let mut m = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        m
    }

    pub fn scaled(&self, k: f64) -> Mat3 {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= k);
        m
    }

    /// Rotation by `angle` about `axis` (Rodrigues). The axis need not be
    /// normalised; a zero axis gives the identity.
    pub fn rotation(axis: &Vec3, angle: f64) -> Mat3 {
        let Some(k) = axis.normalized() else {
            return Mat3::IDENTITY;
        };
        let (s, c) = angle.sin_cos();
        let kx = Mat3([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]]);
        Mat3::IDENTITY + kx.scaled(s) + kx.mul_mat(&kx).scaled(1.0 - c)
    }

    pub fn determinant(&self) -> f64 {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    pub fn max_abs_diff(&self, o: &Mat3) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(o.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }
}

/// Outer product `u vᵀ`.
pub fn outer(u: &Vec3, v: &Vec3) -> Mat3 {
    let mut m = Mat3::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = u.0[i] * v.0[j];
        }
    }
    m
}

/// Dense complex N×N matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix<const N: usize>(pub [[Complex64; N]; N]);

/// 2×2 complex matrix (single-qubit operators).
pub type Matrix2 = CMatrix<2>;
/// 4×4 complex matrix (two-qubit operators, Alice ⊗ Bob).
pub type Matrix4 = CMatrix<4>;

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix([[C0; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C1;
        }
        m
    }

    pub fn from_real_diagonal(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = Complex64::new(d[i], 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= k);
        m
    }

    pub fn scale_c(&self, k: Complex64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= k);
        m
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == C0 {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * o.0[k][j];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex64; N]) -> [Complex64; N] {
        let mut out = [C0; N];
        for i in 0..N {
            out[i] = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Column `j` as an array.
    pub fn column(&self, j: usize) -> [Complex64; N] {
        let mut c = [C0; N];
        for i in 0..N {
            c[i] = self.0[i][j];
        }
        c
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(o.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations; eigenvalues descending.
    pub fn eigh_jacobi(&self) -> Result<HermitianEigen<N>> {
        eigh_jacobi(self)
    }
}

impl CMatrix<2> {
    /// Closed-form eigen-decomposition; eigenvalues descending.
    pub fn eigh(&self) -> Result<HermitianEigen<2>> {
        eigen::eigh2(self)
    }
}

impl CMatrix<4> {
    /// Eigen-decomposition; eigenvalues descending.
    pub fn eigh(&self) -> Result<HermitianEigen<4>> {
        eigh_jacobi(self)
    }

    /// Partial transpose on the second (Bob) factor.
    pub fn partial_transpose_b(&self) -> Matrix4 {
        let mut m = Matrix4::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        // ⟨a b|ρ|c d⟩ -> ⟨a d|ρ^{T_B}|c b⟩
                        m.0[2 * a + d][2 * c + b] = self.0[2 * a + b][2 * c + d];
                    }
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] -= o.0[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.matmul(&o)
    }
}

/// Pauli matrix `σ_k` with `σ_0 = I`.
pub fn pauli(k: usize) -> Matrix2 {
    match k {
        0 => Matrix2::identity(),
        1 => CMatrix([[C0, C1], [C1, C0]]),
        2 => CMatrix([[C0, -CI], [CI, C0]]),
        3 => CMatrix([[C1, C0], [C0, -C1]]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Kronecker product `a ⊗ b`, with `a` acting on the first (Alice) factor.
pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Hermitian qubit operator written as `scalar·I + vector·σ`.
///
/// This is the working representation for conditional states and effects:
/// the Hilbert–Schmidt inner product is `Tr(XY) = 2(x₀y₀ + x·y)` and the
/// operator is PSD iff `scalar ≥ |vector|`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QubitOperator {
    pub scalar: f64,
    pub vector: Vec3,
}

impl QubitOperator {
    pub const ZERO: QubitOperator = QubitOperator { scalar: 0.0, vector: Vec3::ZERO };
    pub const IDENTITY: QubitOperator = QubitOperator { scalar: 1.0, vector: Vec3::ZERO };

    pub const fn new(scalar: f64, vector: Vec3) -> Self {
        QubitOperator { scalar, vector }
    }

    /// Coordinates `(x₀, x₁, x₂, x₃)` with respect to `(I, σ₁, σ₂, σ₃)`.
    pub fn coords(&self) -> [f64; 4] {
        [self.scalar, self.vector[0], self.vector[1], self.vector[2]]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        QubitOperator { scalar: c[0], vector: Vec3([c[1], c[2], c[3]]) }
    }

    pub fn matrix(&self) -> Matrix2 {
        let [x0, x1, x2, x3] = self.coords();
        CMatrix([
            [Complex64::new(x0 + x3, 0.0), Complex64::new(x1, -x2)],
            [Complex64::new(x1, x2), Complex64::new(x0 - x3, 0.0)],
        ])
    }

    /// Pauli coordinates of a Hermitian 2×2 matrix.
    pub fn from_matrix(m: &Matrix2) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > tol::HERMITIAN {
            return Err(Error::NotHermitian(defect));
        }
        let c = |k: usize| 0.5 * m.matmul(&pauli(k)).trace().re;
        Ok(QubitOperator { scalar: c(0), vector: Vec3([c(1), c(2), c(3)]) })
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.scalar
    }

    /// Hilbert–Schmidt inner product `Tr(self · other)`.
    pub fn hs_inner(&self, other: &QubitOperator) -> f64 {
        2.0 * (self.scalar * other.scalar + self.vector.dot(&other.vector))
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = self.vector.norm();
        [self.scalar + r, self.scalar - r]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.scalar - self.vector.norm()
    }

    pub fn scaled(&self, k: f64) -> Self {
        QubitOperator { scalar: self.scalar * k, vector: self.vector * k }
    }

    pub fn max_abs_diff(&self, o: &QubitOperator) -> f64 {
        (self.scalar - o.scalar).abs().max(self.vector.max_abs_diff(&o.vector))
    }
}

impl Add for QubitOperator {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QubitOperator { scalar: self.scalar + o.scalar, vector: self.vector + o.vector }
    }
}

impl Sub for QubitOperator {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QubitOperator { scalar: self.scalar - o.scalar, vector: self.vector - o.vector }
    }
}

/// Dual basis of two independent vectors within their span:
/// `b'_m · b_n = δ_mn`, with `b'_m ∈ span{b₁, b₂}`.
///
/// Fails when the Gram determinant is at most [`tol::INDEPENDENCE`].
pub fn dual_basis(b1: &Vec3, b2: &Vec3) -> Result<(Vec3, Vec3)> {
    let g11 = b1.dot(b1);
    let g12 = b1.dot(b2);
    let g22 = b2.dot(b2);
    let det = g11 * g22 - g12 * g12;
    if !(det > tol::INDEPENDENCE) {
        return Err(Error::DegenerateSpan(det));
    }
    let d1 = (*b1 * g22 - *b2 * g12) * (1.0 / det);
    let d2 = (*b2 * g11 - *b1 * g12) * (1.0 / det);
    Ok((d1, d2))
}
