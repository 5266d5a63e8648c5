//! Lie derivatives on distributions at the origin of `g²`, the operator
//! `V(β) = Σ_i β^i ∘ L_i` and the version I residual
//! `∂_t m_t(w) + m_t(V(β_t) w)`.
//!
//! The basis vector `e_i` of `g²` generates the vector field
//! `X^{e_i}(x) = [x, e_i]` on its factor, which matches the free-Lie
//! convention `x ↦ [x, β¹]` used by the solver. On distributions
//! `L_i u = −u ∘ X^{e_i}`, so `[L_i, L_j] = L_{[e_i, e_j]}`.

use num_traits::Zero;

use super::duflo::{m_t_tensor, mul_by_function};
use super::{Envelope, SymElement};
use crate::error::{Error, Result};
use crate::freelie::TangentPair;
use crate::liealg::{eval_lie_symbolic, StructLie, TruncatedFunction};
use crate::scalar::Poly;

/// `L_i w` for `w ∈ S(g²)` and `0 ≤ i < 2d`:
/// `−Σ_{a,j} c^a_{j i'} x_{a} ∂_{x_j} w` in the block of `i`.
pub fn lie_derivative(g: &StructLie, i: usize, w: &SymElement) -> SymElement {
    let d = g.dim();
    let (block, idx) = (i / d, i % d);
    let mut out = SymElement::zero(w.nvars(), w.cap());
    for j in 0..d {
        let dj = w.partial(block * d + j);
        if dj.is_zero() {
            continue;
        }
        for a in 0..d {
            let c = g.structure_constant(j, idx, a);
            if c.is_zero() {
                continue;
            }
            let xa = TruncatedFunction::var(block * d + a, w.nvars(), w.cap());
            out = out.sub(&xa.mul(&dj).scale_rat(c));
        }
    }
    out
}

/// `X^{e_i} f` for a function on `g²`.
pub fn vector_field(g: &StructLie, i: usize, f: &TruncatedFunction) -> TruncatedFunction {
    let d = g.dim();
    let (block, idx) = (i / d, i % d);
    let mut out = TruncatedFunction::zero(f.nvars(), f.cap());
    for a in 0..d {
        let da = f.partial(block * d + a);
        if da.is_zero() {
            continue;
        }
        for j in 0..d {
            let c = g.structure_constant(j, idx, a);
            if c.is_zero() {
                continue;
            }
            let xj = TruncatedFunction::var(block * d + j, f.nvars(), f.cap());
            out = out.add(&xj.mul(&da).scale_rat(c));
        }
    }
    out
}

/// The `2d` coordinate functions of `β = (β¹, β²)` on `g²`.
pub fn beta_functions(g: &StructLie, beta: &TangentPair, cap: usize) -> Vec<TruncatedFunction> {
    let mut out = eval_lie_symbolic(&beta.beta1, g, cap);
    out.extend(eval_lie_symbolic(&beta.beta2, g, cap));
    out
}

/// `V(β) w = Σ_i β^i · L_i w`.
pub fn v_operator(g: &StructLie, beta: &[TruncatedFunction], w: &SymElement) -> Result<SymElement> {
    let mut out = SymElement::zero(w.nvars(), w.cap());
    for (i, b) in beta.iter().enumerate() {
        out = out.add(&mul_by_function(b, &lie_derivative(g, i, w))?);
    }
    Ok(out)
}

/// `L(X^β) w = Σ_i L_i(β^i · w)`.
pub fn lx_beta(g: &StructLie, beta: &[TruncatedFunction], w: &SymElement) -> Result<SymElement> {
    let mut out = SymElement::zero(w.nvars(), w.cap());
    for (i, b) in beta.iter().enumerate() {
        out = out.add(&lie_derivative(g, i, &mul_by_function(b, w)?));
    }
    Ok(out)
}

/// `−Σ_i X^{e_i} β^i`, the function by which `V(β)` and `L(X^β)` differ.
pub fn tau_function(g: &StructLie, beta: &[TruncatedFunction]) -> TruncatedFunction {
    let proto = &beta[0];
    beta.iter()
        .enumerate()
        .fold(TruncatedFunction::zero(proto.nvars(), proto.cap()), |acc, (i, b)| {
            acc.sub(&vector_field(g, i, b))
        })
}

fn max_degree(w: &SymElement) -> usize {
    w.terms()
        .map(|(m, _)| m.iter().map(|&e| e as usize).sum::<usize>())
        .max()
        .unwrap_or(0)
}

/// `∂_t m_t(w) + m_t(V(β_t) w)` with `β_t = t^{−1} r_t^* β`. The pair must
/// be truncated beyond the degree of `w` (degrees `≤ deg w` of `β` enter).
pub fn version1_residual(env: &Envelope, beta: &TangentPair, w: &SymElement) -> Result<SymElement> {
    let cap = max_degree(w).max(1);
    if beta.truncation() < cap + 1 {
        return Err(Error::Truncation {
            required: cap + 1,
            available: beta.truncation(),
        });
    }
    let g = env.algebra();
    let beta_t = beta.rescale(-1)?;
    let fns = beta_functions(g, &beta_t, cap);
    let w = w.with_cap(cap);
    let lhs = m_t_tensor(env, &w, cap)?.deriv_t();
    let rhs = m_t_tensor(env, &v_operator(g, &fns, &w)?, cap)?;
    Ok(lhs.add(&rhs))
}

/// Monomials of total degree `≤ d` in `n` variables.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &out {
            let last = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in last..n {
                let mut m2 = m.clone();
                m2[i] += 1;
                next.push(m2);
            }
        }
        out.extend(next.into_iter().filter(|m| m.iter().sum::<u32>() as usize <= d));
        out.sort();
        out.dedup();
    }
    out
}

/// `w` as the single monomial `x^α`.
pub fn monomial(alpha: &[u32], cap: usize) -> SymElement {
    let mut w = SymElement::zero(alpha.len(), cap);
    w.add_term(alpha.to_vec(), &Poly::one());
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::LieSeries;
    use crate::kvsolve::solve_kv;
    use crate::liealg::builtin;

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(6, 3).len(), 84);
        assert_eq!(monomials(2, 2).len(), 6);
    }

    #[test]
    fn delta_is_annihilated() {
        let g = builtin("heisenberg3").unwrap();
        let env = Envelope::new(g.clone());
        let beta = solve_kv(4).unwrap();
        let w = monomial(&[0; 6], 3);
        assert!(version1_residual(&env, &beta, &w).unwrap().is_zero());
        let fns = beta_functions(&g, &beta, 3);
        assert!(v_operator(&g, &fns, &w).unwrap().is_zero());
    }

    #[test]
    fn zero_beta_is_detected() {
        let env = Envelope::new(builtin("heisenberg3").unwrap());
        let zero = TangentPair::new(LieSeries::zero(2, 4), LieSeries::zero(2, 4)).unwrap();
        let w = monomial(&[1, 0, 0, 0, 1, 0], 2);
        let r = version1_residual(&env, &zero, &w).unwrap();
        assert!(!r.is_zero());
        assert!(r.terms().all(|(_, c)| c.degree_t().unwrap_or(0) <= 1));
    }

    #[test]
    fn short_truncation_is_an_error() {
        let env = Envelope::new(builtin("heisenberg3").unwrap());
        let beta = solve_kv(3).unwrap();
        let w = monomial(&[1, 1, 0, 0, 1, 0], 3);
        assert!(matches!(
            version1_residual(&env, &beta, &w),
            Err(Error::Truncation { required: 4, available: 3 })
        ));
    }
}
