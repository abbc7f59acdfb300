//! Heap-backed real matrices, just enough for the interior-point solver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::Float;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = DMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `self · x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `selfᵀ · y`
    pub fn tmul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        out
    }

    /// Lower-triangular `L` with `self · selfᵀ = L Lᵀ`, for a matrix with no
    /// more rows than columns. Computed by Householder LQ, so the Gram
    /// matrix is never formed. Pivots below `rel_floor · max|L_kk|` are
    /// raised to that floor.
    pub fn gram_factor(&self, rel_floor: f64) -> Option<Cholesky> {
        let (m, n) = (self.rows, self.cols);
        if m > n || self.data.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let mut w = self.clone();
        let mut l = DMatrix::zeros(m, m);
        for k in 0..m {
            let norm = w.row(k)[k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            let alpha = if w[(k, k)] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = w.row(k)[k..].to_vec();
            v[0] -= alpha;
            let vv: f64 = v.iter().map(|x| x * x).sum();
            if vv > 0.0 {
                for i in k..m {
                    let d: f64 = w.row(i)[k..].iter().zip(&v).map(|(a, b)| a * b).sum();
                    let f = 2.0 * d / vv;
                    for (j, vj) in v.iter().enumerate() {
                        w[(i, k + j)] -= f * vj;
                    }
                }
            }
            // column k of L; flip so the diagonal is non-negative
            let sign = if w[(k, k)] < 0.0 { -1.0 } else { 1.0 };
            for i in k..m {
                l[(i, k)] = sign * w[(i, k)];
            }
        }
        let top = (0..m).map(|k| l[(k, k)]).fold(0.0, f64::max);
        if !(top > 0.0) {
            return None;
        }
        for k in 0..m {
            l[(k, k)] = l[(k, k)].max(rel_floor * top);
        }
        Some(Cholesky { l })
    }

    /// Cholesky factor `L` with `self = L Lᵀ`, or `None` if a pivot is not
    /// positive.
    pub fn cholesky(&self) -> Option<Cholesky> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Some(Cholesky { l })
    }

    /// Cholesky with diagonal regularisation: retries with `δ·max|diag|`
    /// added, growing `δ` until the factorisation succeeds.
    pub fn cholesky_regularized(&self) -> Option<Cholesky> {
        if let Some(c) = self.cholesky() {
            return Some(c);
        }
        let scale = (0..self.rows).map(|i| self[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
        let mut delta = 1e-14;
        while delta < 1e-2 {
            let mut m = self.clone();
            for i in 0..self.rows {
                m[(i, i)] += delta * scale;
            }
            if let Some(c) = m.cholesky() {
                return Some(c);
            }
            delta *= 10.0;
        }
        None
    }
}

impl Index<(usize, usize)> for DMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Lower-triangular Cholesky factor.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DMatrix,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.rows;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[(i, k)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        y
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
