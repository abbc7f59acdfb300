//! Primal–dual interior-point method for small second-order cone programs
//!
//! ```text
//!   minimise cᵀx  subject to  Ax = b,  x ∈ K
//!   maximise bᵀy  subject to  Aᵀy + s = c,  s ∈ K
//! ```
//!
//! with `K = R₊ⁿ × Q^{q₁} × … × Q^{q_k}` and
//! `Q^q = {(x₀, x̄) : x₀ ≥ |x̄|}`. Mehrotra predictor–corrector steps with
//! Nesterov–Todd scaling; the normal equations are solved densely.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::dense::{dot, norm_inf, DMatrix};
use crate::{Error, Result};

/// Block layout of the cone: `nonneg` scalar coordinates first, then one
/// second-order cone per entry of `soc` (entry = cone dimension, ≥ 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub nonneg: usize,
    pub soc: Vec<usize>,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.nonneg + self.soc.iter().sum::<usize>()
    }

    /// Barrier degree: one per scalar, one per second-order block.
    fn degree(&self) -> f64 {
        (self.nonneg + self.soc.len()) as f64
    }

    fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut start = self.nonneg;
        self.soc.iter().map(move |&q| {
            let b = (start, q);
            start += q;
            b
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub max_iter: usize,
    /// Relative tolerance on residuals and duality gap.
    pub tol: f64,
    /// Fraction of the distance to the boundary taken per step.
    pub step_fraction: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { max_iter: 100, tol: 1e-11, step_fraction: 0.99 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    /// Largest of the relative primal residual, dual residual and gap.
    pub accuracy: f64,
}

/// Nesterov–Todd scaling for one second-order block:
/// `W = β(2vvᵀ − J)`, `W⁻¹ = β⁻¹(2Jv vᵀJ − J)`, with `W s = W⁻¹ x = λ`.
#[derive(Debug, Clone)]
struct SocScaling {
    beta: f64,
    v: Vec<f64>,
}

impl SocScaling {
    fn new(x: &[f64], s: &[f64]) -> Self {
        let dx = det(x);
        let ds = det(s);
        let beta = (dx / ds).sqrt().sqrt();
        let (nx, ns) = (dx.sqrt(), ds.sqrt());
        let xb: Vec<f64> = x.iter().map(|v| v / nx).collect();
        let sb: Vec<f64> = s.iter().map(|v| v / ns).collect();
        let gamma = ((1.0 + dot(&xb, &sb)) / 2.0).sqrt();
        let mut w: Vec<f64> = (0..x.len()).map(|i| if i == 0 { xb[0] + sb[0] } else { xb[i] - sb[i] }).collect();
        w.iter_mut().for_each(|v| *v /= 2.0 * gamma);
        let scale = (2.0 * (w[0] + 1.0)).sqrt();
        let mut v = w;
        v[0] += 1.0;
        v.iter_mut().for_each(|c| *c /= scale);
        SocScaling { beta, v }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        // β(2v(vᵀu) − Ju)
        let vu = dot(&self.v, u);
        for i in 0..u.len() {
            let ju = if i == 0 { u[0] } else { -u[i] };
            out[i] = self.beta * (2.0 * self.v[i] * vu - ju);
        }
    }

    fn apply_inv(&self, u: &[f64], out: &mut [f64]) {
        // β⁻¹(2Jv(vᵀJu) − Ju)
        let jv = |i: usize| if i == 0 { self.v[0] } else { -self.v[i] };
        let vju: f64 = (0..u.len()).map(|i| jv(i) * u[i]).sum();
        for i in 0..u.len() {
            let ju = if i == 0 { u[0] } else { -u[i] };
            out[i] = (2.0 * jv(i) * vju - ju) / self.beta;
        }
    }
}

fn det(u: &[f64]) -> f64 {
    let tail: f64 = u[1..].iter().map(|v| v * v).sum();
    // (u₀ − |ū|)(u₀ + |ū|) is kinder to cancellation than u₀² − |ū|²
    let t = tail.sqrt();
    (u[0] - t) * (u[0] + t)
}

struct Scaling {
    nonneg: Vec<f64>,
    soc: Vec<SocScaling>,
}

impl Scaling {
    fn new(cone: &Cone, x: &[f64], s: &[f64]) -> Self {
        let nonneg = (0..cone.nonneg).map(|i| (x[i] / s[i]).sqrt()).collect();
        let soc = cone.blocks().map(|(o, q)| SocScaling::new(&x[o..o + q], &s[o..o + q])).collect();
        Scaling { nonneg, soc }
    }

    fn apply(&self, cone: &Cone, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        for i in 0..cone.nonneg {
            out[i] = self.nonneg[i] * u[i];
        }
        for ((o, q), w) in cone.blocks().zip(&self.soc) {
            w.apply(&u[o..o + q], &mut out[o..o + q]);
        }
        out
    }

    fn apply_inv(&self, cone: &Cone, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        for i in 0..cone.nonneg {
            out[i] = u[i] / self.nonneg[i];
        }
        for ((o, q), w) in cone.blocks().zip(&self.soc) {
            w.apply_inv(&u[o..o + q], &mut out[o..o + q]);
        }
        out
    }
}

/// Jordan product `u ∘ v`.
fn jordan(cone: &Cone, u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    for i in 0..cone.nonneg {
        out[i] = u[i] * v[i];
    }
    for (o, q) in cone.blocks() {
        let (ub, vb) = (&u[o..o + q], &v[o..o + q]);
        out[o] = dot(ub, vb);
        for i in 1..q {
            out[o + i] = ub[0] * vb[i] + vb[0] * ub[i];
        }
    }
    out
}

/// Solve `λ ∘ u = r` for `u`.
fn jordan_solve(cone: &Cone, lambda: &[f64], r: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; r.len()];
    for i in 0..cone.nonneg {
        out[i] = r[i] / lambda[i];
    }
    for (o, q) in cone.blocks() {
        let (l, rb) = (&lambda[o..o + q], &r[o..o + q]);
        let lr: f64 = (1..q).map(|i| l[i] * rb[i]).sum();
        let u0 = (l[0] * rb[0] - lr) / det(l);
        out[o] = u0;
        for i in 1..q {
            out[o + i] = (rb[i] - u0 * l[i]) / l[0];
        }
    }
    out
}

/// Identity element `e` scaled by `t`.
fn identity(cone: &Cone, t: f64) -> Vec<f64> {
    let mut e = vec![0.0; cone.dim()];
    e[..cone.nonneg].iter_mut().for_each(|v| *v = t);
    for (o, _) in cone.blocks() {
        e[o] = t;
    }
    e
}

/// Smallest "eigenvalue" of `u` with respect to the cone.
fn min_eigenvalue(cone: &Cone, u: &[f64]) -> f64 {
    let mut m = f64::INFINITY;
    for v in &u[..cone.nonneg] {
        m = m.min(*v);
    }
    for (o, q) in cone.blocks() {
        let t: f64 = u[o + 1..o + q].iter().map(|v| v * v).sum::<f64>().sqrt();
        m = m.min(u[o] - t);
    }
    m
}

/// Largest `α ≥ 0` with `u + α d ∈ K` (may be infinite).
fn max_step(cone: &Cone, u: &[f64], d: &[f64]) -> f64 {
    let mut alpha = f64::INFINITY;
    for i in 0..cone.nonneg {
        if d[i] < 0.0 {
            alpha = alpha.min(-u[i] / d[i]);
        }
    }
    for (o, q) in cone.blocks() {
        let (ub, db) = (&u[o..o + q], &d[o..o + q]);
        // det(u + αd) = aα² + 2bα + c
        let a = db[0] * db[0] - db[1..].iter().map(|v| v * v).sum::<f64>();
        let b = ub[0] * db[0] - (1..q).map(|i| ub[i] * db[i]).sum::<f64>();
        let c = det(ub).max(0.0);
        let mut root = f64::INFINITY;
        if a.abs() <= f64::EPSILON * (b.abs() + c.abs()) {
            if b < 0.0 {
                root = -c / (2.0 * b);
            }
        } else {
            let disc = b * b - a * c;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let qq = -(b + if b >= 0.0 { sq } else { -sq });
                for r in [qq / a, if qq != 0.0 { c / qq } else { f64::INFINITY }] {
                    if r > 0.0 {
                        root = root.min(r);
                    }
                }
            }
        }
        // Leaving through the apex happens only if x₀ + αd₀ hits zero first.
        if db[0] < 0.0 {
            root = root.min(-ub[0] / db[0]);
        }
        alpha = alpha.min(root);
    }
    alpha
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Solve the cone program. `a` must have full row rank.
pub fn solve(c: &[f64], a: &DMatrix, b: &[f64], cone: &Cone, settings: &Settings) -> Result<Solution> {
    let (m, n) = (a.rows(), a.cols());
    if c.len() != n || b.len() != m || cone.dim() != n || cone.soc.iter().any(|&q| q < 2) {
        return Err(Error::Shape("cone program dimensions do not match"));
    }

    // Initial point: least-norm solutions pushed into the interior.
    let mut aat = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = dot(a.row(i), a.row(j));
            aat[(i, j)] = v;
            aat[(j, i)] = v;
        }
    }
    let chol = aat.cholesky_regularized().ok_or(Error::Solver("constraint matrix is rank deficient"))?;
    let mut x = a.tmul_vec(&chol.solve(b));
    let mut y = chol.solve(&a.mul_vec(c));
    let mut s = sub(c, &a.tmul_vec(&y));
    for v in [&mut x, &mut s] {
        let shift = 1.0 + (-min_eigenvalue(cone, v)).max(0.0);
        *v = axpy(shift, &identity(cone, 1.0), v);
    }

    let (nb, nc) = (1.0 + norm_inf(b), 1.0 + norm_inf(c));
    let degree = cone.degree();
    let mut iterations = 0;
    let mut best = (f64::INFINITY, Vec::new(), Vec::new(), Vec::new());

    for iter in 0..settings.max_iter {
        iterations = iter;
        let rp = sub(b, &a.mul_vec(&x));
        let rd = sub(&sub(c, &a.tmul_vec(&y)), &s);
        let gap = dot(&x, &s);
        let (pobj, dobj) = (dot(c, &x), dot(b, &y));
        let accuracy = (norm_inf(&rp) / nb).max(norm_inf(&rd) / nc).max(gap / (1.0 + pobj.abs().min(dobj.abs())));
        if accuracy <= settings.tol {
            return Ok(Solution { x, y, s, primal_objective: pobj, dual_objective: dobj, iterations: iter, accuracy });
        }
        if accuracy < best.0 {
            best = (accuracy, x.clone(), y.clone(), s.clone());
        }
        let mu = gap / degree;

        let w = Scaling::new(cone, &x, &s);
        let lambda = w.apply(cone, &s);
        let lambda_sq = jordan(cone, &lambda, &lambda);

        // Normal-equation matrix (AW)(AW)ᵀ; W is symmetric blockwise.
        let mut aw = DMatrix::zeros(m, n);
        for i in 0..m {
            let row = w.apply(cone, a.row(i));
            for (j, v) in row.into_iter().enumerate() {
                aw[(i, j)] = v;
            }
        }
        // (AW)(AW)ᵀ = L Lᵀ via an orthogonal factorisation of AW; a stalled
        // or degenerate scaling falls through to the stall check.
        let Some(chol) = aw.gram_factor(1e-13) else { break };
        let w_rd = w.apply(cone, &rd);

        // λ ∘ (W⁻¹dx + W ds) = r_c
        let newton = |rc: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
            let u = jordan_solve(cone, &lambda, rc);
            let rhs = sub(&axpy(1.0, &aw.mul_vec(&w_rd), &rp), &aw.mul_vec(&u));
            let dy = chol.solve(&rhs);
            let ds = sub(&rd, &a.tmul_vec(&dy));
            let dx = w.apply(cone, &sub(&u, &w.apply(cone, &ds)));
            (dx, dy, ds)
        };

        // Predictor.
        let rc_aff: Vec<f64> = lambda_sq.iter().map(|v| -v).collect();
        let (dx_a, _, ds_a) = newton(&rc_aff);
        let alpha_a = max_step(cone, &x, &dx_a).min(max_step(cone, &s, &ds_a)).min(1.0);
        let gap_a = dot(&axpy(alpha_a, &dx_a, &x), &axpy(alpha_a, &ds_a, &s));
        let sigma = (gap_a / gap).max(0.0).powi(3).min(1.0);

        // Corrector with the second-order term.
        let cross = jordan(cone, &w.apply_inv(cone, &dx_a), &w.apply(cone, &ds_a));
        let e = identity(cone, sigma * mu);
        let rc: Vec<f64> = (0..n).map(|i| e[i] - lambda_sq[i] - cross[i]).collect();
        let (dx, dy, ds) = newton(&rc);
        let alpha = (settings.step_fraction * max_step(cone, &x, &dx).min(max_step(cone, &s, &ds))).min(1.0);
        if !(alpha > 0.0) || !alpha.is_finite() {
            break;
        }
        x = axpy(alpha, &dx, &x);
        y = axpy(alpha, &dy, &y);
        s = axpy(alpha, &ds, &s);
        if x.iter().chain(&y).chain(&s).any(|v| !v.is_finite()) {
            return Err(Error::Solver("iterates diverged"));
        }
    }
    let (accuracy, x, y, s) = best;
    if accuracy <= settings.tol.sqrt() * 1e-3 {
        // Stalled close to the target: good enough to report.
        let (pobj, dobj) = (dot(c, &x), dot(b, &y));
        return Ok(Solution { x, y, s, primal_objective: pobj, dual_objective: dobj, iterations, accuracy });
    }
    Err(Error::Solver("interior-point method did not converge"))
}
