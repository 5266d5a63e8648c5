//! The enveloping algebra `U(g_t)` with `[e_i, e_j]_t = t Σ c^k_{ij} e_k`,
//! symmetrization, the Duflo map, the products `m_t` on `S(g)` and the
//! version I residual.
//!
//! Elements of `S(g)` double as distributions on `g` supported at the
//! origin: the monomial `x^α` is the functional `φ ↦ ∂^α φ(0)`. Under this
//! reading convolution is the polynomial product, multiplication by a
//! function `f` is `Σ_γ f_γ ∂^γ` with `f_γ` the Taylor coefficients, and
//! the distributional derivative `∂_a` is multiplication by `−x_a`.

pub mod duflo;
pub mod version1;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::{StructLie, TruncatedFunction};
use crate::scalar::{rat, Poly, Rational};

pub use duflo::{duflo_inverse, duflo_map, j_sqrt_t, m_t_product, m_t_tensor, mul_by_function};
pub use version1::{lie_derivative, lx_beta, v_operator, version1_residual};

/// Elements of `S(g)` and `S(g²)` share the representation of truncated
/// polynomials; see the module docs for the distribution reading.
pub type SymElement = TruncatedFunction;

/// Weakly increasing index word.
pub type PbwMonomial = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PbwElement {
    cap: usize,
    terms: BTreeMap<PbwMonomial, Poly>,
}

impl PbwElement {
    pub fn zero(cap: usize) -> Self {
        PbwElement {
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cap: usize) -> Self {
        let mut out = Self::zero(cap);
        out.terms.insert(Vec::new(), Poly::one());
        out
    }

    pub fn generator(i: usize, cap: usize) -> Self {
        let mut out = Self::zero(cap);
        out.terms.insert(vec![i], Poly::one());
        out
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[usize]) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length with a nonzero coefficient.
    pub fn filtration_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Adds `c·m`; `m` must already be weakly increasing.
    pub fn add_term(&mut self, m: PbwMonomial, c: &Poly) -> Result<()> {
        debug_assert!(m.windows(2).all(|w| w[0] <= w[1]));
        if c.is_zero() {
            return Ok(());
        }
        if m.len() > self.cap {
            return Err(Error::CapOverflow {
                cap: self.cap,
                degree: m.len(),
            });
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.cap = self.cap.max(other.cap);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c).expect("within the larger cap");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Poly::int(-1)))
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero(self.cap);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &(v * c)).expect("same cap");
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.cap);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &f(v)).expect("same cap");
        }
        out
    }

    pub fn subs_t(&self, t: &Rational) -> Self {
        self.map(|c| c.subs_t(t))
    }
}

/// `U(g_t)` for a fixed algebra, with memoized straightening of words.
pub struct Envelope {
    g: StructLie,
    memo: Mutex<HashMap<Vec<usize>, BTreeMap<PbwMonomial, Poly>>>,
}

impl Envelope {
    pub fn new(g: StructLie) -> Self {
        Envelope {
            g,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &StructLie {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Rewrites an arbitrary word in the PBW basis using
    /// `e_j e_i = e_i e_j + t[e_j, e_i]` for `j > i`.
    pub fn straighten(&self, word: &[usize]) -> BTreeMap<PbwMonomial, Poly> {
        if word.windows(2).all(|w| w[0] <= w[1]) {
            return BTreeMap::from([(word.to_vec(), Poly::one())]);
        }
        if let Some(hit) = self.memo.lock().unwrap().get(word) {
            return hit.clone();
        }
        let p = word.windows(2).position(|w| w[0] > w[1]).unwrap();
        let (j, i) = (word[p], word[p + 1]);
        let mut out: BTreeMap<PbwMonomial, Poly> = BTreeMap::new();
        let mut acc = |m: BTreeMap<PbwMonomial, Poly>, c: &Poly| {
            for (k, v) in m {
                let e = out.entry(k.clone()).or_default();
                *e += &(&v * c);
                if e.is_zero() {
                    out.remove(&k);
                }
            }
        };
        let mut swapped = word.to_vec();
        swapped.swap(p, p + 1);
        acc(self.straighten(&swapped), &Poly::one());
        for k in 0..self.dim() {
            let c = self.g.structure_constant(j, i, k);
            if c.is_zero() {
                continue;
            }
            let mut shorter = word[..p].to_vec();
            shorter.push(k);
            shorter.extend_from_slice(&word[p + 2..]);
            acc(self.straighten(&shorter), &Poly::monomial((0, 1), c.clone()));
        }
        self.memo.lock().unwrap().insert(word.to_vec(), out.clone());
        out
    }

    /// Product in `U(g_t)`; words longer than the cap are an error.
    pub fn product(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        let cap = a.cap.max(b.cap);
        let mut out = PbwElement::zero(cap);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if ma.len() + mb.len() > cap {
                    return Err(Error::CapOverflow {
                        cap,
                        degree: ma.len() + mb.len(),
                    });
                }
                let mut w = ma.clone();
                w.extend_from_slice(mb);
                let c = ca * cb;
                for (m, v) in self.straighten(&w) {
                    out.add_term(m, &(&v * &c))?;
                }
            }
        }
        Ok(out)
    }

    /// Symmetrization: `x^α` goes to the average over all orderings of the
    /// corresponding word, straightened.
    pub fn symmetrize(&self, u: &SymElement, cap: usize) -> Result<PbwElement> {
        if u.nvars() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: u.nvars(),
            });
        }
        let mut out = PbwElement::zero(cap);
        for (alpha, c) in u.terms() {
            let word: Vec<usize> = alpha
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect();
            if word.len() > cap {
                return Err(Error::CapOverflow {
                    cap,
                    degree: word.len(),
                });
            }
            let perms = distinct_permutations(&word);
            let weight = c.scale(&rat(1, perms.len() as i64));
            for p in &perms {
                for (m, v) in self.straighten(p) {
                    out.add_term(m, &(&v * &weight))?;
                }
            }
        }
        Ok(out)
    }

    /// Inverse of `symmetrize`, peeling the top filtration degree.
    pub fn symmetrize_inverse(&self, p: &PbwElement) -> Result<SymElement> {
        let d = self.dim();
        let cap = p.cap;
        let mut rest = p.clone();
        let mut out = SymElement::zero(d, cap);
        while let Some(top) = rest.filtration_degree() {
            let mut layer = SymElement::zero(d, cap);
            for (m, c) in rest.terms.iter().filter(|(m, _)| m.len() == top) {
                let mut alpha = vec![0u32; d];
                for &i in m {
                    alpha[i] += 1;
                }
                layer.add_term(alpha, c);
            }
            rest = rest.sub(&self.symmetrize(&layer, cap)?);
            out = out.add(&layer);
        }
        Ok(out)
    }
}

fn distinct_permutations(word: &[usize]) -> Vec<Vec<usize>> {
    let mut w = word.to_vec();
    w.sort_unstable();
    let mut out = vec![w.clone()];
    // lexicographic successor
    loop {
        let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
            return out;
        };
        let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).unwrap();
        w.swap(i - 1, j);
        w[i..].reverse();
        out.push(w.clone());
    }
}

/// `pbw_product` with a throwaway envelope.
pub fn pbw_product(a: &PbwElement, b: &PbwElement, g: &StructLie) -> Result<PbwElement> {
    Envelope::new(g.clone()).product(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::builtin;

    fn gen(i: usize) -> PbwElement {
        PbwElement::generator(i, 4)
    }

    #[test]
    fn heisenberg_straightening() {
        let env = Envelope::new(builtin("heisenberg3").unwrap());
        let p = env.product(&gen(1), &gen(0)).unwrap();
        let mut want = PbwElement::zero(4);
        want.add_term(vec![0, 1], &Poly::one()).unwrap();
        want.add_term(vec![2], &Poly::t().scale(&rat(-1, 1))).unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn abelian_product_is_commutative() {
        let env = Envelope::new(builtin("abelian(3)").unwrap());
        let a = env.product(&gen(2), &gen(0)).unwrap();
        assert_eq!(a, env.product(&gen(0), &gen(2)).unwrap());
        assert_eq!(a.terms().count(), 1);
    }

    #[test]
    fn small_associativity_instance() {
        let env = Envelope::new(builtin("heisenberg3").unwrap());
        let ab = env.product(&gen(0), &gen(1)).unwrap();
        let ba = env.product(&gen(1), &gen(0)).unwrap();
        let l = env.product(&ab, &gen(0)).unwrap();
        let r = env.product(&gen(0), &ba).unwrap();
        // (e1 e2) e1 = e1 (e2 e1) = e1² e2 − t e1 e3
        assert_eq!(l, r);
    }

    #[test]
    fn cap_overflow_is_reported() {
        let env = Envelope::new(builtin("sl2").unwrap());
        let a = PbwElement::generator(0, 1);
        assert!(matches!(env.product(&a, &a), Err(Error::CapOverflow { cap: 1, degree: 2 })));
    }

    #[test]
    fn symmetrization_examples() {
        let g = builtin("solvable2").unwrap();
        let env = Envelope::new(g);
        let mut u = SymElement::zero(2, 3);
        u.add_term(vec![1, 1], &Poly::one());
        // e0e1 + e1e0 = 2 e0e1 − t e1, halved
        let s = env.symmetrize(&u, 3).unwrap();
        let mut want = PbwElement::zero(3);
        want.add_term(vec![0, 1], &Poly::one()).unwrap();
        want.add_term(vec![1], &Poly::t().scale(&rat(-1, 2))).unwrap();
        assert_eq!(s, want);
        assert_eq!(env.symmetrize_inverse(&s).unwrap(), u);
    }

    #[test]
    fn permutations_are_distinct() {
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
