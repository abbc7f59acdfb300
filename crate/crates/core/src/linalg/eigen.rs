use num_complex::Complex64;
use num_traits::Float;

use super::{CMatrix, Matrix2, C0};
use crate::{tol, Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (descending) and orthonormal eigenvectors (as columns).
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: CMatrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix<N> {
        let mut m = CMatrix::<N>::zeros();
        for k in 0..N {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..N {
                let vik = self.vectors.0[i][k] * w;
                for j in 0..N {
                    m.0[i][j] += vik * self.vectors.0[j][k].conj();
                }
            }
        }
        m
    }

    pub fn reconstruct(&self) -> CMatrix<N> {
        self.reconstruct_with(|x| x)
    }

    pub fn min_value(&self) -> f64 {
        self.values[N - 1]
    }
}

fn check_hermitian<const N: usize>(m: &CMatrix<N>) -> Result<()> {
    let scale = m.0.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = m.hermiticity_defect();
    if !(defect <= tol::HERMITIAN * scale) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Closed form for 2×2: write `M = m₀I + m·σ`; eigenvalues are `m₀ ± |m|`
/// and the upper eigenvector is the spinor along `m/|m|`.
pub(super) fn eigh2(m: &Matrix2) -> Result<HermitianEigen<2>> {
    check_hermitian(m)?;
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    // Average the off-diagonal pair so tiny asymmetries do not leak in.
    let b = (m.0[0][1] + m.0[1][0].conj()) * 0.5;
    let m0 = 0.5 * (a + d);
    let m3 = 0.5 * (a - d);
    let (m1, m2) = (b.re, -b.im);
    let r = (m1 * m1 + m2 * m2 + m3 * m3).sqrt();
    if r == 0.0 {
        return Ok(HermitianEigen { values: [m0, m0], vectors: Matrix2::identity() });
    }
    // Two algebraically equivalent spinors; pick the one without cancellation.
    let (x, y) = if m3 >= 0.0 {
        (Complex64::new(r + m3, 0.0), Complex64::new(m1, m2))
    } else {
        (Complex64::new(m1, -m2), Complex64::new(r - m3, 0.0))
    };
    let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let (x, y) = (x / n, y / n);
    let vectors = CMatrix([[x, -y.conj()], [y, x.conj()]]);
    Ok(HermitianEigen { values: [m0 + r, m0 - r], vectors })
}

/// Cyclic Jacobi for Hermitian matrices of any (small) size.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary,
/// then applies the real symmetric Jacobi rotation.
pub fn eigh_jacobi<const N: usize>(m: &CMatrix<N>) -> Result<HermitianEigen<N>> {
    check_hermitian(m)?;
    let mut a = (*m + m.adjoint()).scale(0.5);
    let mut v = CMatrix::<N>::identity();
    let total: f64 = a.frobenius_norm();
    let threshold = (f64::EPSILON * total).powi(2) * 0.25;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a.0[p][q].norm_sqr();
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // D = diag(.., e^{-iφ} at q, ..) makes a_pq real and positive.
                let phase = (apq / mag).conj();
                for r in 0..N {
                    a.0[r][q] *= phase;
                    v.0[r][q] *= phase;
                }
                let phase_c = phase.conj();
                for r in 0..N {
                    a.0[q][r] *= phase_c;
                }
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..N {
                    let arp = a.0[r][p];
                    let arq = a.0[r][q];
                    a.0[r][p] = arp * c - arq * s;
                    a.0[r][q] = arp * s + arq * c;
                    let vrp = v.0[r][p];
                    let vrq = v.0[r][q];
                    v.0[r][p] = vrp * c - vrq * s;
                    v.0[r][q] = vrp * s + vrq * c;
                }
                for r in 0..N {
                    let apr = a.0[p][r];
                    let aqr = a.0[q][r];
                    a.0[p][r] = apr * c - aqr * s;
                    a.0[q][r] = apr * s + aqr * c;
                }
                a.0[p][q] = C0;
                a.0[q][p] = C0;
                a.0[p][p] = Complex64::new(a.0[p][p].re, 0.0);
                a.0[q][q] = Complex64::new(a.0[q][q].re, 0.0);
            }
        }
    }

    let mut order = [0usize; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&i, &j| a.0[j][j].re.total_cmp(&a.0[i][i].re));
    let mut values = [0.0; N];
    let mut vectors = CMatrix::<N>::zeros();
    for (k, &src) in order.iter().enumerate() {
        values[k] = a.0[src][src].re;
        for r in 0..N {
            vectors.0[r][k] = v.0[r][src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Real symmetric eigen-decomposition via the complex Jacobi routine.
/// Returns eigenvalues descending and eigenvectors as rows of the second
/// component (`vectors[k]` belongs to `values[k]`).
pub fn symmetric_eigen<const N: usize>(m: &[[f64; N]; N]) -> Result<([f64; N], [[f64; N]; N])> {
    let mut c = CMatrix::<N>::zeros();
    for i in 0..N {
        for j in 0..N {
            c.0[i][j] = Complex64::new(m[i][j], 0.0);
        }
    }
    let eig = eigh_jacobi(&c)?;
    let mut vecs = [[0.0; N]; N];
    for (k, row) in vecs.iter_mut().enumerate() {
        for (i, x) in row.iter_mut().enumerate() {
            // real input keeps every rotation real
            *x = eig.vectors.0[i][k].re;
        }
    }
    Ok((eig.values, vecs))
}

/// Square root and pseudo-inverse square root of a PSD 2×2 matrix.
#[derive(Debug, Clone, Copy)]
pub struct PsdRoots {
    pub sqrt: Matrix2,
    pub inv_sqrt: Matrix2,
    pub rank: usize,
    pub eigenvalues: [f64; 2],
}

/// `M^{1/2}` and the Moore–Penrose `M^{-1/2}`; eigenvalues below
/// `rank_tol · λ_max` are treated as zero.
pub fn psd_sqrt_pinv(m: &Matrix2, rank_tol: f64) -> Result<PsdRoots> {
    let eig = eigh2(m)?;
    if eig.min_value() < -tol::PSD {
        return Err(Error::NotPositive(eig.min_value()));
    }
    let cutoff = rank_tol * eig.values[0].max(0.0);
    let keep = |x: f64| x > cutoff && x > 0.0;
    let rank = eig.values.iter().filter(|&&x| keep(x)).count();
    let sqrt = eig.reconstruct_with(|x| if x > 0.0 { x.sqrt() } else { 0.0 });
    let inv_sqrt = eig.reconstruct_with(|x| if keep(x) { 1.0 / x.sqrt() } else { 0.0 });
    Ok(PsdRoots { sqrt, inv_sqrt, rank, eigenvalues: eig.values })
}
