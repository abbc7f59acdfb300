use num_traits::Float;

use super::{Mat3, Vec3};

/// `T = U diag(values) Vᵀ` with `values` non-negative and descending.
/// Columns of `u` and `v` are the left and right singular vectors.
#[derive(Debug, Clone, Copy)]
pub struct Svd3 {
    pub values: [f64; 3],
    pub u: Mat3,
    pub v: Mat3,
}

impl Svd3 {
    pub fn left(&self, k: usize) -> Vec3 {
        self.u.column(k)
    }

    pub fn right(&self, k: usize) -> Vec3 {
        self.v.column(k)
    }

    pub fn reconstruct(&self) -> Mat3 {
        self.u.mul_mat(&Mat3::diag(self.values)).mul_mat(&self.v.transpose())
    }
}

/// One-sided Jacobi SVD. Orthogonalises the columns of `T` directly, which
/// keeps small singular values accurate (no squaring through `TᵀT`).
pub fn svd3(t: &Mat3) -> Svd3 {
    let mut a = *t;
    let mut v = Mat3::IDENTITY;
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let cp = a.column(p);
                let cq = a.column(q);
                let alpha = cp.norm_sq();
                let beta = cq.norm_sq();
                let gamma = cp.dot(&cq);
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let tan = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let tan = if zeta == 0.0 { 1.0 } else { tan };
                let c = 1.0 / (1.0 + tan * tan).sqrt();
                let s = c * tan;
                for m in [&mut a, &mut v] {
                    for i in 0..3 {
                        let xp = m.0[i][p];
                        let xq = m.0[i][q];
                        m.0[i][p] = c * xp - s * xq;
                        m.0[i][q] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms = [a.column(0).norm(), a.column(1).norm(), a.column(2).norm()];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let scale = norms[order[0]];
    let mut values = [0.0; 3];
    let mut ucols = [Vec3::ZERO; 3];
    let mut vcols = [Vec3::ZERO; 3];
    let mut rank = 0;
    for (k, &src) in order.iter().enumerate() {
        values[k] = norms[src];
        vcols[k] = v.column(src);
        if norms[src] > 1e-14 * scale && norms[src] > 0.0 {
            ucols[k] = a.column(src) * (1.0 / norms[src]);
            rank = k + 1;
        }
    }
    complete_basis(&mut ucols, rank);
    Svd3 { values, u: Mat3::from_columns(ucols), v: Mat3::from_columns(vcols) }
}

/// Fill `cols[rank..]` so that all three columns are orthonormal.
fn complete_basis(cols: &mut [Vec3; 3], rank: usize) {
    let mut filled = rank;
    for e in [Vec3::X, Vec3::Y, Vec3::Z] {
        if filled == 3 {
            break;
        }
        let mut w = e;
        for c in cols.iter().take(filled) {
            w = w - *c * c.dot(&w);
        }
        if let Some(n) = w.normalized().filter(|_| w.norm() > 0.5) {
            cols[filled] = n;
            filled += 1;
        }
    }
    // With two columns known the last one is fixed up to sign.
    if filled == 3 && rank == 2 {
        cols[2] = cols[0].cross(&cols[1]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(t: &Mat3) -> Svd3 {
        let s = svd3(t);
        assert!(s.reconstruct().max_abs_diff(t) < 1e-12, "{t:?}");
        assert!(s.u.transpose().mul_mat(&s.u).max_abs_diff(&Mat3::IDENTITY) < 1e-12);
        assert!(s.v.transpose().mul_mat(&s.v).max_abs_diff(&Mat3::IDENTITY) < 1e-12);
        assert!(s.values[0] >= s.values[1] && s.values[1] >= s.values[2] && s.values[2] >= 0.0);
        s
    }

    #[test]
    fn diagonal_with_signs() {
        let s = check(&Mat3::diag([0.3, -0.9, 0.5]));
        assert!((s.values[0] - 0.9).abs() < 1e-15);
        assert!((s.values[1] - 0.5).abs() < 1e-15);
        assert!((s.values[2] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_inputs() {
        check(&Mat3::ZERO);
        check(&Mat3::diag([1.0, 0.0, 0.0]));
        check(&Mat3::diag([0.0, 0.7, -0.7]));
        check(&super::super::outer(&Vec3::new(1.0, 2.0, 3.0), &Vec3::new(0.0, -1.0, 1.0)));
    }

    #[test]
    fn random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let mut m = Mat3::ZERO;
            m.0.iter_mut().flatten().for_each(|x| *x = rng.random_range(-1.0..1.0));
            let s = check(&m);
            let prod: f64 = s.values.iter().product();
            assert!((prod - m.determinant().abs()).abs() < 1e-12);
        }
    }
}
