//! Duflo map and the products `m_t(u, v) = Duf_t^{−1}(Duf_t u · Duf_t v)`.

use std::collections::BTreeMap;

use super::{Envelope, PbwElement, SymElement};
use crate::error::{Error, Result};
use crate::liealg::{log_j_function, TruncatedFunction};
use crate::scalar::{rat, rat_int, Rational};

fn falling(a: u32, g: u32) -> Rational {
    (0..g).fold(rat(1, 1), |acc, k| acc * rat_int((a - k) as i64))
}

fn total(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// Multiplication of a distribution at the origin by a function:
/// `x^α ↦ Σ_{γ ≤ α} f_γ α!/(α−γ)! x^{α−γ}`.
pub fn mul_by_function(f: &TruncatedFunction, w: &SymElement) -> Result<SymElement> {
    if f.nvars() != w.nvars() {
        return Err(Error::Dimension {
            expected: w.nvars(),
            got: f.nvars(),
        });
    }
    let mut out = SymElement::zero(w.nvars(), w.cap());
    for (alpha, c) in w.terms() {
        for (gamma, fc) in f.terms() {
            if gamma.iter().zip(alpha).any(|(g, a)| g > a) {
                continue;
            }
            let coeff = gamma
                .iter()
                .zip(alpha)
                .fold(rat(1, 1), |acc, (&g, &a)| acc * falling(a, g));
            let m: Vec<u32> = alpha.iter().zip(gamma).map(|(a, g)| a - g).collect();
            out.add_term(m, &(c * fc).scale(&coeff));
        }
    }
    Ok(out)
}

/// `J_t^{1/2}(x) = J(tx)^{1/2}` through degree `cap`, as `exp(½ log J)`.
pub fn j_sqrt_t(env: &Envelope, cap: usize, power: Rational) -> TruncatedFunction {
    log_j_function(env.algebra(), cap)
        .scale_rat(&power)
        .exp()
        .expect("log J vanishes at the origin")
        .rescale_vars()
}

/// `Duf_t = sym_t ∘ Ĵ_t^{1/2}`.
pub fn duflo_map(env: &Envelope, u: &SymElement, cap: usize) -> Result<PbwElement> {
    let j = j_sqrt_t(env, cap, rat(1, 2));
    env.symmetrize(&mul_by_function(&j, &u.with_cap(cap))?, cap)
}

pub fn duflo_inverse(env: &Envelope, p: &PbwElement) -> Result<SymElement> {
    let j = j_sqrt_t(env, p.cap(), rat(-1, 2));
    mul_by_function(&j, &env.symmetrize_inverse(p)?)
}

fn max_degree(u: &SymElement) -> usize {
    u.terms().map(|(m, _)| total(m)).max().unwrap_or(0)
}

/// `m_t(u, v)`; the combined degree must fit in `cap`.
pub fn m_t_product(env: &Envelope, u: &SymElement, v: &SymElement, cap: usize) -> Result<SymElement> {
    let need = max_degree(u) + max_degree(v);
    if need > cap {
        return Err(Error::CapOverflow { cap, degree: need });
    }
    let a = duflo_map(env, u, cap)?;
    let b = duflo_map(env, v, cap)?;
    duflo_inverse(env, &env.product(&a, &b)?)
}

/// `m_t` on `S(g²) = S(g) ⊗ S(g)`: the first `d` variables feed the left
/// factor, the last `d` the right one.
pub fn m_t_tensor(env: &Envelope, w: &SymElement, cap: usize) -> Result<SymElement> {
    let d = env.dim();
    if w.nvars() != 2 * d {
        return Err(Error::Dimension {
            expected: 2 * d,
            got: w.nvars(),
        });
    }
    let mut images: BTreeMap<Vec<u32>, PbwElement> = BTreeMap::new();
    let mut image = |alpha: &[u32]| -> Result<PbwElement> {
        if let Some(p) = images.get(alpha) {
            return Ok(p.clone());
        }
        let mut mono = SymElement::zero(d, cap);
        mono.add_term(alpha.to_vec(), &crate::scalar::Poly::one());
        let p = duflo_map(env, &mono, cap)?;
        images.insert(alpha.to_vec(), p.clone());
        Ok(p)
    };
    let mut acc = PbwElement::zero(cap);
    for (m, c) in w.terms() {
        if total(m) > cap {
            return Err(Error::CapOverflow { cap, degree: total(m) });
        }
        let a = image(&m[..d])?;
        let b = image(&m[d..])?;
        acc = acc.add(&env.product(&a, &b)?.scale(c));
    }
    duflo_inverse(env, &acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::builtin;
    use crate::scalar::Poly;

    fn mono(alpha: &[u32], cap: usize) -> SymElement {
        let mut u = SymElement::zero(alpha.len(), cap);
        u.add_term(alpha.to_vec(), &Poly::one());
        u
    }

    #[test]
    fn multiplication_by_function_composes() {
        let x = TruncatedFunction::var(0, 2, 3);
        let y = TruncatedFunction::var(1, 2, 3);
        let f = TruncatedFunction::one(2, 3).add(&x).add(&y.mul(&x));
        let g = TruncatedFunction::one(2, 3).sub(&y.scale_rat(&rat(2, 1)));
        let w = mono(&[2, 1], 3);
        let lhs = mul_by_function(&f, &mul_by_function(&g, &w).unwrap()).unwrap();
        let rhs = mul_by_function(&f.mul(&g), &w).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn duflo_is_symmetrization_when_j_is_one() {
        for name in ["abelian(2)", "heisenberg3"] {
            let env = Envelope::new(builtin(name).unwrap());
            let d = env.dim();
            let mut u = mono(&vec![1; d], 3);
            u.add_term(vec![0; d], &Poly::int(5));
            assert_eq!(duflo_map(&env, &u, 3).unwrap(), env.symmetrize(&u, 3).unwrap());
        }
    }

    #[test]
    fn m_t_at_zero_is_commutative_product() {
        let env = Envelope::new(builtin("sl2").unwrap());
        let u = mono(&[1, 0, 1], 4);
        let v = mono(&[0, 1, 1], 4);
        let p = m_t_product(&env, &u, &v, 4).unwrap().subs_t(&rat(0, 1));
        assert_eq!(p, u.mul(&v));
    }

    #[test]
    fn heisenberg_m_t_of_generators() {
        // m_t(e1, e2) = e1e2 + t/2 e3
        let env = Envelope::new(builtin("heisenberg3").unwrap());
        let p = m_t_product(&env, &mono(&[1, 0, 0], 2), &mono(&[0, 1, 0], 2), 2).unwrap();
        let mut want = mono(&[1, 1, 0], 2);
        want.add_term(vec![0, 0, 1], &Poly::t().scale(&rat(1, 2)));
        assert_eq!(p, want);
    }

    #[test]
    fn cap_overflow() {
        let env = Envelope::new(builtin("sl2").unwrap());
        let u = mono(&[1, 1, 0], 2);
        assert!(matches!(m_t_product(&env, &u, &u, 3), Err(Error::CapOverflow { .. })));
    }
}
