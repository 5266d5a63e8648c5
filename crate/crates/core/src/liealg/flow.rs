//! Numeric zero-curvature demo for vector fields (floating point).
//!
//! `F_{s,t}` is the flow of `Y_{s,t}` in `s`, defined through
//! `(Y f)∘F^{−1} = ∂_s(f∘F^{−1})`, `F_{0,t} = id`. Writing `G = F^{−1}`
//! this says `∂_s G = Y(G)`, so `G` is an ordinary flow and `X` is given by
//! `X(G) = ∂_t G`. Differentiating gives
//!
//! `∂_s X − ∂_t Y + [X, Y] = 0`, with `[X, Y] = (Y·∇)X − (X·∇)Y`,
//!
//! i.e. the bracket is minus the commutator of `X, Y` as derivations. The
//! flow is integrated with classical RK4 using a fixed number of steps, so
//! the discretization error is smooth in `s`, `t` and the start point;
//! derivatives in `s`, `t` and space use 7-point central differences.

use rayon::prelude::*;
use serde::Serialize;

use num_traits::ToPrimitive;

use super::StructLie;
use crate::error::{Error, Result};
use crate::scalar::Poly;

/// `Y_{s,t}(x)^k = Σ_terms c(s,t) (Σ_j A[k][j] x_j + Σ_{i,j} Q[k][i][j] x_i x_j)`.
#[derive(Clone, Debug)]
pub struct FieldTerm {
    pub coeff: Poly,
    pub linear: Vec<Vec<f64>>,
    pub quadratic: Vec<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug)]
pub struct VectorFamily {
    pub dim: usize,
    pub terms: Vec<FieldTerm>,
}

impl VectorFamily {
    pub fn zero(dim: usize) -> Self {
        VectorFamily { dim, terms: Vec::new() }
    }

    /// `Y_{s,t}(x) = c(s,t)·X^{ξ0 + Mx}(x)` with the adjoint vector fields
    /// `X^ξ(x) = [ξ, x]`.
    pub fn adjoint(g: &StructLie, coeff: Poly, xi0: &[f64], m: &[Vec<f64>]) -> Result<Self> {
        let d = g.dim();
        if xi0.len() != d || m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension { expected: d, got: xi0.len() });
        }
        let c = |i: usize, j: usize, k: usize| g.structure_constant(i, j, k).to_f64().unwrap_or(0.0);
        let mut linear = vec![vec![0.0; d]; d];
        let mut quadratic = vec![vec![vec![0.0; d]; d]; d];
        for k in 0..d {
            for j in 0..d {
                for i in 0..d {
                    // [ξ0, x]^k = Σ ξ0_i x_j c^k_{ij}
                    linear[k][j] += xi0[i] * c(i, j, k);
                    // [Mx, x]^k = Σ M_{il} x_l x_j c^k_{ij}
                    for l in 0..d {
                        quadratic[k][l][j] += m[i][l] * c(i, j, k);
                    }
                }
            }
        }
        Ok(VectorFamily {
            dim: d,
            terms: vec![FieldTerm { coeff, linear, quadratic }],
        })
    }

    /// The reference example on `solvable2`: `γ_{s,t}(x) = s·t·Mx`.
    pub fn solvable2_example(g: &StructLie) -> Result<Self> {
        let m = vec![vec![6.0, 1.0], vec![-4.0, -2.0]];
        Self::adjoint(g, Poly::s() * Poly::t(), &[0.0, 0.0], &m)
    }

    fn coeffs(&self, s: f64, t: f64) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .map(|term| (term.coeff.eval_f64(s, t), term.coeff.deriv_t().eval_f64(s, t)))
            .collect()
    }

    fn apply(&self, weights: &[f64], x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for (term, &w) in self.terms.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            for k in 0..d {
                let mut v = 0.0;
                for j in 0..d {
                    v += term.linear[k][j] * x[j];
                    for i in 0..d {
                        v += term.quadratic[k][i][j] * x[i] * x[j];
                    }
                }
                out[k] += w * v;
            }
        }
        out
    }

    pub fn eval(&self, s: f64, t: f64, x: &[f64]) -> Vec<f64> {
        let w: Vec<f64> = self.coeffs(s, t).into_iter().map(|c| c.0).collect();
        self.apply(&w, x)
    }

    pub fn eval_dt(&self, s: f64, t: f64, x: &[f64]) -> Vec<f64> {
        let w: Vec<f64> = self.coeffs(s, t).into_iter().map(|c| c.1).collect();
        self.apply(&w, x)
    }

    /// Jacobian `∂Y^k/∂x_j`.
    pub fn jacobian(&self, s: f64, t: f64, x: &[f64]) -> Vec<Vec<f64>> {
        let d = self.dim;
        let mut out = vec![vec![0.0; d]; d];
        for (term, (w, _)) in self.terms.iter().zip(self.coeffs(s, t)) {
            for k in 0..d {
                for j in 0..d {
                    let mut v = term.linear[k][j];
                    for i in 0..d {
                        v += (term.quadratic[k][i][j] + term.quadratic[k][j][i]) * x[i];
                    }
                    out[k][j] += w * v;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct FlowOptions {
    /// RK4 step bound; the flow to `s` uses `ceil(1/h)` steps of size `s/steps`.
    pub h: f64,
    /// Finite-difference spacing in `s`, `t` and space.
    pub delta: f64,
    pub radius: f64,
    pub threshold: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            h: 1e-3,
            delta: 1e-2,
            radius: 0.1,
            threshold: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub h: f64,
    pub steps: usize,
    pub delta: f64,
    pub samples: usize,
    pub max_residual: f64,
    pub max_x: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub runs: Vec<FlowReport>,
    pub orders: Vec<f64>,
    pub observed_order: f64,
}

struct Integrator<'a> {
    y: &'a VectorFamily,
    steps: usize,
}

impl Integrator<'_> {
    fn rk4(&self, t: f64, from: f64, to: f64, p: &[f64]) -> Vec<f64> {
        let h = (to - from) / self.steps as f64;
        let mut x = p.to_vec();
        let axpy = |x: &[f64], k: &[f64], a: f64| -> Vec<f64> { x.iter().zip(k).map(|(u, v)| u + a * v).collect() };
        for n in 0..self.steps {
            let s = from + n as f64 * h;
            let k1 = self.y.eval(s, t, &x);
            let k2 = self.y.eval(s + h / 2.0, t, &axpy(&x, &k1, h / 2.0));
            let k3 = self.y.eval(s + h / 2.0, t, &axpy(&x, &k2, h / 2.0));
            let k4 = self.y.eval(s + h, t, &axpy(&x, &k3, h));
            for i in 0..x.len() {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        x
    }

    /// `G_{s,t}(p)`.
    fn flow(&self, s: f64, t: f64, p: &[f64]) -> Vec<f64> {
        self.rk4(t, 0.0, s, p)
    }

    /// `G_{s,t}^{−1}(p)`, by integrating backwards.
    fn inverse(&self, s: f64, t: f64, p: &[f64]) -> Vec<f64> {
        self.rk4(t, s, 0.0, p)
    }

    fn x_field(&self, s: f64, t: f64, p: &[f64], delta: f64) -> Vec<f64> {
        let q = self.inverse(s, t, p);
        derivative(delta, |e| self.flow(s, t + e, &q))
    }
}

const STENCIL: [(f64, f64); 3] = [(1.0, 3.0 / 4.0), (2.0, -3.0 / 20.0), (3.0, 1.0 / 60.0)];

/// 7-point central difference, summed as antisymmetric pairs so constant
/// inputs give exactly zero.
fn derivative(delta: f64, f: impl Fn(f64) -> Vec<f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for (k, w) in STENCIL {
        let plus = f(k * delta);
        let minus = f(-k * delta);
        if out.is_empty() {
            out = vec![0.0; plus.len()];
        }
        for ((o, a), b) in out.iter_mut().zip(plus).zip(minus) {
            *o += w * (a - b) / delta;
        }
    }
    out
}

fn sample_points(dim: usize, radius: f64) -> Vec<Vec<f64>> {
    let r = radius / 2.0;
    let mut pts = vec![vec![0.0; dim]];
    for i in 0..dim {
        for sign in [-1.0, 1.0] {
            let mut p = vec![0.0; dim];
            p[i] = sign * r;
            pts.push(p);
        }
    }
    pts.push((0..dim).map(|i| if i % 2 == 0 { r } else { -r }).collect());
    pts.push((0..dim).map(|i| r * (0.7 - 0.3 * i as f64)).collect());
    pts
}

const PARAMS: [(f64, f64); 4] = [(0.25, 0.5), (0.5, 0.25), (0.75, 0.75), (0.5, 0.9)];

/// Max-norm of the zero-curvature residual over sample points in the box
/// of the given radius and a few `(s, t)`.
pub fn flow_demo(y: &VectorFamily, opts: &FlowOptions) -> Result<FlowReport> {
    if !(opts.h > 0.0 && opts.h <= 1.0) || !(opts.delta > 0.0) {
        return Err(Error::Invalid("step sizes must be positive and h ≤ 1".into()));
    }
    let steps = (1.0 / opts.h).ceil() as usize;
    let integ = Integrator { y, steps };
    let delta = opts.delta;
    let d = y.dim;
    let points = sample_points(d, opts.radius);
    let jobs: Vec<(f64, f64, Vec<f64>)> = PARAMS
        .iter()
        .flat_map(|&(s, t)| points.iter().map(move |p| (s, t, p.clone())))
        .collect();
    let results: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|(s, t, p)| {
            let (s, t) = (*s, *t);
            let x = integ.x_field(s, t, p, delta);
            let ds_x = derivative(delta, |e| integ.x_field(s + e, t, p, delta));
            let jac_x: Vec<Vec<f64>> = (0..d)
                .map(|j| {
                    derivative(delta, |e| {
                        let mut q = p.clone();
                        q[j] += e;
                        integ.x_field(s, t, &q, delta)
                    })
                })
                .collect(); // jac_x[j][k] = ∂X^k/∂x_j
            let yv = y.eval(s, t, p);
            let dt_y = y.eval_dt(s, t, p);
            let jac_y = y.jacobian(s, t, p);
            let mut worst: f64 = 0.0;
            for k in 0..d {
                let y_grad_x: f64 = (0..d).map(|j| yv[j] * jac_x[j][k]).sum();
                let x_grad_y: f64 = (0..d).map(|j| x[j] * jac_y[k][j]).sum();
                let r = ds_x[k] - dt_y[k] + y_grad_x - x_grad_y;
                worst = worst.max(r.abs());
            }
            let xn = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            (worst, xn)
        })
        .collect();
    let max_residual = results.iter().fold(0.0f64, |a, r| a.max(r.0));
    let max_x = results.iter().fold(0.0f64, |a, r| a.max(r.1));
    Ok(FlowReport {
        h: opts.h,
        steps,
        delta,
        samples: results.len(),
        max_residual,
        max_x,
        threshold: opts.threshold,
        passed: max_residual.is_finite() && max_residual < opts.threshold,
    })
}

/// Runs `flow_demo` at `h, h/2, h/4, …` and reports `log2` of successive
/// residual ratios; `observed_order` is the smallest of them.
pub fn convergence_study(y: &VectorFamily, opts: &FlowOptions, refinements: usize) -> Result<ConvergenceReport> {
    let mut runs = Vec::new();
    let mut h = opts.h;
    for _ in 0..=refinements {
        runs.push(flow_demo(y, &FlowOptions { h, ..opts.clone() })?);
        h /= 2.0;
    }
    let orders: Vec<f64> = runs
        .windows(2)
        .map(|w| (w[0].max_residual / w[1].max_residual).log2())
        .collect();
    let observed_order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ConvergenceReport {
        runs,
        orders,
        observed_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::builtin;

    #[test]
    fn zero_field_gives_zero() {
        let y = VectorFamily::zero(2);
        let r = flow_demo(&y, &FlowOptions { h: 0.1, ..Default::default() }).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.max_x, 0.0);
    }

    #[test]
    fn t_independent_field_gives_zero_x() {
        let g = builtin("solvable2").unwrap();
        let m = vec![vec![1.0, 0.5], vec![-2.0, 1.0]];
        let y = VectorFamily::adjoint(&g, Poly::s(), &[0.3, -0.2], &m).unwrap();
        let r = flow_demo(&y, &FlowOptions { h: 0.05, ..Default::default() }).unwrap();
        assert!(r.max_x < 1e-12, "{r:?}");
        assert!(r.max_residual < 1e-10, "{r:?}");
    }

    #[test]
    fn solvable2_converges() {
        let g = builtin("solvable2").unwrap();
        let y = VectorFamily::solvable2_example(&g).unwrap();
        let r = flow_demo(&y, &FlowOptions { h: 0.02, ..Default::default() }).unwrap();
        assert!(r.max_x > 1e-4);
        assert!(r.passed, "{r:?}");
    }
}
