//! Version IV, `∂_t M_t = −M_t ∘ [d, ι(β_t)]` with `M_t = m_t ⊗ ψ*`, and
//! the higher homotopies `h_t`, `h̃_t` on `C(g³, S(g³))`.
//!
//! All modules are distributions at the origin of `g^k` truncated at total
//! degree `cap`; every operator involved preserves or lowers that degree.

use std::collections::HashMap;

use serde::Serialize;

use super::{add_cochain, basis_cochain, tensor_map, CeComplex, ChainOperator, Cochain, Key, ModOp, ModuleSpec, SparseVec};
use crate::envelope::version1::{beta_functions, lie_derivative, monomials};
use crate::envelope::{m_t_tensor, mul_by_function, Envelope, SymElement};
use crate::error::{Error, Result};
use crate::freelie::TangentPair;
use crate::liealg::{StructLie, TruncatedFunction};
use crate::scalar::{rat, Poly, Rational};

/// `g^k` as a direct sum.
pub fn power_algebra(g: &StructLie, k: usize) -> Result<StructLie> {
    let d = g.dim();
    let mut entries = Vec::new();
    for b in 0..k {
        for i in 0..d {
            for j in i + 1..d {
                for l in 0..d {
                    let c = g.structure_constant(i, j, l);
                    if !num_traits::Zero::is_zero(c) {
                        entries.push((b * d + i, b * d + j, b * d + l, c.clone()));
                    }
                }
            }
        }
    }
    StructLie::new(format!("{}^{k}", g.name), k * d, &entries)
}

/// `S(g^k)` truncated at degree `cap`, with its monomial basis.
pub struct SymModule {
    pub g: StructLie,
    pub copies: usize,
    pub cap: usize,
    pub monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SymModule {
    pub fn new(g: &StructLie, copies: usize, cap: usize) -> Self {
        let monomials = monomials(copies * g.dim(), cap);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        SymModule {
            g: g.clone(),
            copies,
            cap,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.copies * self.g.dim()
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn element(&self, i: usize) -> SymElement {
        let mut w = SymElement::zero(self.nvars(), self.cap);
        w.add_term(self.monomials[i].clone(), &Poly::one());
        w
    }

    pub fn to_sparse(&self, w: &SymElement) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (m, c) in w.terms() {
            let i = *self.index.get(m).ok_or_else(|| Error::CapOverflow {
                cap: self.cap,
                degree: m.iter().sum::<u32>() as usize,
            })?;
            out.insert(i, c.clone());
        }
        Ok(out)
    }

    pub fn spec(&self) -> Result<ModuleSpec> {
        let action = (0..self.nvars())
            .map(|i| {
                (0..self.dim())
                    .map(|m| self.to_sparse(&lie_derivative(&self.g, i, &self.element(m))))
                    .collect::<Result<ModOp>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleSpec {
            labels: self.monomials.clone(),
            action,
        })
    }

    pub fn complex(&self) -> Result<CeComplex> {
        CeComplex::new(power_algebra(&self.g, self.copies)?, self.spec()?)
    }

    /// Multiplication by a function on `g^k`.
    pub fn mult_op(&self, f: &TruncatedFunction) -> Result<ModOp> {
        (0..self.dim())
            .map(|m| self.to_sparse(&mul_by_function(f, &self.element(m))?))
            .collect()
    }
}

/// `f` on `g²` placed on the copies `offset/d, offset/d + 1` of `g^k`.
fn shift_vars(f: &TruncatedFunction, nvars: usize, offset: usize) -> TruncatedFunction {
    let mut out = TruncatedFunction::zero(nvars, f.cap());
    for (m, c) in f.terms() {
        let mut m2 = vec![0u32; nvars];
        m2[offset..offset + m.len()].copy_from_slice(m);
        out.add_term(m2, c);
    }
    out
}

/// Exterior pullback images of `(copy, a) ↦ (copy_map[copy], a)`.
fn copy_images(d: usize, copy_map: &[usize]) -> Vec<Vec<(usize, Rational)>> {
    copy_map
        .iter()
        .flat_map(|&c| (0..d).map(move |a| vec![(c * d + a, rat(1, 1))]))
        .collect()
}

fn map_op(op: &ModOp, f: impl Fn(&Poly) -> Poly) -> ModOp {
    op.iter()
        .map(|col| {
            col.iter()
                .map(|(i, c)| (*i, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect()
}

/// Shared data for the operators on `C(g^k, S(g^k))`.
struct Tables {
    d: usize,
    s1: SymModule,
    s2: SymModule,
    c1: CeComplex,
    c2: CeComplex,
    /// `m_t : S(g²) → S(g)`.
    mt: ModOp,
    /// `β_t^i` as multiplication operators on `S(g²)`.
    beta2: Vec<ModOp>,
    diag: Vec<Vec<(usize, Rational)>>,
}

impl Tables {
    fn new(env: &Envelope, beta: &TangentPair, cap: usize) -> Result<Self> {
        if beta.truncation() < cap + 1 {
            return Err(Error::Truncation {
                required: cap + 1,
                available: beta.truncation(),
            });
        }
        let g = env.algebra();
        let d = g.dim();
        let s1 = SymModule::new(g, 1, cap);
        let s2 = SymModule::new(g, 2, cap);
        let mt = (0..s2.dim())
            .map(|m| s1.to_sparse(&m_t_tensor(env, &s2.element(m), cap)?))
            .collect::<Result<ModOp>>()?;
        let beta_t = beta.rescale(-1)?;
        let beta2 = beta_functions(g, &beta_t, cap)
            .iter()
            .map(|f| s2.mult_op(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tables {
            d,
            c1: s1.complex()?,
            c2: s2.complex()?,
            s1,
            s2,
            mt,
            beta2,
            diag: copy_images(d, &[0, 0]),
        })
    }

    fn m_t(&self, c: &Cochain) -> Cochain {
        tensor_map(&self.mt, &self.diag, c)
    }
}

/// `∂_t M_t + M_t ∘ [d, ι(β_t)]` on `C(g², S(g²)_{≤cap})`. Zero when `β`
/// solves the KV problem through degree `cap + 1`.
pub fn version4_residual(env: &Envelope, beta: &TangentPair, cap: usize) -> Result<ChainOperator> {
    let tb = Tables::new(env, beta, cap)?;
    let dmt = map_op(&tb.mt, Poly::deriv_t);
    Ok(ChainOperator::from_fn(
        0,
        &tb.c2.basis(),
        tb.s2.monomials.clone(),
        tb.s1.monomials.clone(),
        |key| {
            let c = basis_cochain(key);
            let mut out = tensor_map(&dmt, &tb.diag, &c);
            add_cochain(&mut out, &tb.m_t(&tb.c2.d_iota(&tb.beta2, &c)), &Poly::one());
            out
        },
    ))
}

/// `d ∘ M_t − M_t ∘ d`, which vanishes by equivariance of `m_t`.
pub fn m_t_chain_map(env: &Envelope, cap: usize) -> Result<ChainOperator> {
    let g = env.algebra();
    let s1 = SymModule::new(g, 1, cap);
    let s2 = SymModule::new(g, 2, cap);
    let c1 = s1.complex()?;
    let c2 = s2.complex()?;
    let mt = (0..s2.dim())
        .map(|m| s1.to_sparse(&m_t_tensor(env, &s2.element(m), cap)?))
        .collect::<Result<ModOp>>()?;
    let diag = copy_images(g.dim(), &[0, 0]);
    Ok(ChainOperator::from_fn(
        1,
        &c2.basis(),
        s2.monomials.clone(),
        s1.monomials.clone(),
        |key| {
            let c = basis_cochain(key);
            let mut out = c1.d(&tensor_map(&mt, &diag, &c));
            add_cochain(&mut out, &tensor_map(&mt, &diag, &c2.d(&c)), &Poly::int(-1));
            out
        },
    ))
}

#[derive(Serialize)]
pub struct HomotopyReport {
    pub algebra: String,
    pub cap: usize,
    /// Degree of `h̃ − h` read off its entries.
    pub degree: Option<i32>,
    pub difference_entries: usize,
    pub defect_entries: usize,
    pub is_cochain_map: bool,
    #[serde(skip)]
    pub difference: ChainOperator,
    #[serde(skip)]
    pub defect: ChainOperator,
}

/// Operators on `C(g³, S(g³)_{≤cap})` built from `m_t` and `β_t`.
struct Triple {
    tb: Tables,
    s3: SymModule,
    c3: CeComplex,
    mt_1: ModOp,
    one_mt: ModOp,
    dmt: ModOp,
    dmt_1: ModOp,
    img_mt_1: Vec<Vec<(usize, Rational)>>,
    img_one_mt: Vec<Vec<(usize, Rational)>>,
    beta_left: Vec<ModOp>,
    beta_right: Vec<ModOp>,
}

/// `table ⊗ 1` (`left`) or `1 ⊗ table` as a module map `S(g³) → S(g²)`.
fn split(tb: &Tables, s3: &SymModule, table: &ModOp, left: bool) -> Result<ModOp> {
    let d = tb.d;
    let single = |m: Vec<u32>| -> Result<usize> {
        let mut w = SymElement::zero(2 * d, tb.s2.cap);
        w.add_term(m, &Poly::one());
        Ok(*tb.s2.to_sparse(&w)?.keys().next().expect("monomial"))
    };
    s3.monomials
        .iter()
        .map(|m| {
            let (pair, rest) = if left {
                ([&m[..d], &m[d..2 * d]].concat(), &m[2 * d..])
            } else {
                ([&m[d..2 * d], &m[2 * d..]].concat(), &m[..d])
            };
            let mut out = SparseVec::new();
            for (i, c) in &table[single(pair)?] {
                let prod = tb.s1.monomials[*i].as_slice();
                let full = if left { [prod, rest].concat() } else { [rest, prod].concat() };
                out.insert(single(full)?, c.clone());
            }
            Ok(out)
        })
        .collect()
}

impl Triple {
    fn new(env: &Envelope, beta: &TangentPair, cap: usize) -> Result<Self> {
        let tb = Tables::new(env, beta, cap)?;
        let d = tb.d;
        let s3 = SymModule::new(env.algebra(), 3, cap);
        let c3 = s3.complex()?;
        let dmt = map_op(&tb.mt, Poly::deriv_t);
        let mt_1 = split(&tb, &s3, &tb.mt, true)?;
        let one_mt = split(&tb, &s3, &tb.mt, false)?;
        let dmt_1 = split(&tb, &s3, &dmt, true)?;
        let fns = beta_functions(env.algebra(), &beta.rescale(-1)?, cap);
        let zero_op: ModOp = vec![SparseVec::new(); s3.dim()];
        let mut beta_left = Vec::new();
        let mut beta_right = vec![zero_op.clone(); d];
        for f in &fns {
            beta_left.push(s3.mult_op(&shift_vars(f, 3 * d, 0))?);
            beta_right.push(s3.mult_op(&shift_vars(f, 3 * d, d))?);
        }
        beta_left.extend(std::iter::repeat(zero_op).take(d));
        Ok(Triple {
            img_mt_1: copy_images(d, &[0, 0, 1]),
            img_one_mt: copy_images(d, &[0, 1, 1]),
            tb,
            s3,
            c3,
            mt_1,
            one_mt,
            dmt,
            dmt_1,
            beta_left,
            beta_right,
        })
    }

    /// `M_t^{(3)} = M_t ∘ (M_t ⊗ 1)`.
    fn m3(&self, c: &Cochain) -> Cochain {
        self.tb.m_t(&tensor_map(&self.mt_1, &self.img_mt_1, c))
    }

    fn dm3(&self, c: &Cochain) -> Cochain {
        let mut out = tensor_map(&self.dmt, &self.tb.diag, &tensor_map(&self.mt_1, &self.img_mt_1, c));
        add_cochain(&mut out, &self.tb.m_t(&tensor_map(&self.dmt_1, &self.img_mt_1, c)), &Poly::one());
        out
    }

    /// `h_t`, or `h̃_t` when `tilde`.
    fn h(&self, c: &Cochain, tilde: bool) -> Cochain {
        let (beta, op, img) = if tilde {
            (&self.beta_right, &self.one_mt, &self.img_one_mt)
        } else {
            (&self.beta_left, &self.mt_1, &self.img_mt_1)
        };
        let mut out = self.m3(&self.c3.iota(beta, c));
        let inner = tensor_map(op, img, c);
        add_cochain(&mut out, &self.tb.m_t(&self.tb.c2.iota(&self.tb.beta2, &inner)), &Poly::one());
        out
    }

    fn diff(&self, c: &Cochain) -> Cochain {
        let mut out = self.h(c, true);
        add_cochain(&mut out, &self.h(c, false), &Poly::int(-1));
        out
    }

    fn operator(&self, degree: i32, f: impl Fn(Key) -> Cochain + Sync) -> ChainOperator {
        ChainOperator::from_fn(degree, &self.c3.basis(), self.s3.monomials.clone(), self.tb.s1.monomials.clone(), f)
    }
}

/// `h̃_t − h_t` on `C(g³, S(g³)_{≤cap})` and its commutator with `d`.
pub fn higher_homotopy_defect(env: &Envelope, beta: &TangentPair, cap: usize) -> Result<HomotopyReport> {
    let tr = Triple::new(env, beta, cap)?;
    let difference = tr.operator(-1, |k| tr.diff(&basis_cochain(k)));
    let defect = tr.operator(0, |k| {
        let mut out = tr.tb.c1.d(difference.columns.get(&k).unwrap_or(&Cochain::new()));
        add_cochain(&mut out, &tr.diff(&tr.c3.d(&basis_cochain(k))), &Poly::one());
        out
    });
    Ok(HomotopyReport {
        algebra: env.algebra().name.clone(),
        cap,
        degree: difference.observed_degree(),
        difference_entries: difference.num_entries(),
        defect_entries: defect.num_entries(),
        is_cochain_map: defect.is_zero(),
        difference,
        defect,
    })
}

/// `[d, h_t] + ∂_t M_t^{(3)}` (or with `h̃_t`), zero when `β` solves KV.
pub fn homotopy_residual(env: &Envelope, beta: &TangentPair, cap: usize, tilde: bool) -> Result<ChainOperator> {
    let tr = Triple::new(env, beta, cap)?;
    Ok(tr.operator(0, |k| {
        let c = basis_cochain(k);
        let mut out = tr.tb.c1.d(&tr.h(&c, tilde));
        add_cochain(&mut out, &tr.h(&tr.c3.d(&c), tilde), &Poly::one());
        add_cochain(&mut out, &tr.dm3(&c), &Poly::one());
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kvsolve::solve_kv;
    use crate::liealg::builtin;

    #[test]
    fn sym_module_is_representation() {
        for name in ["heisenberg3", "sl2"] {
            let g = builtin(name).unwrap();
            SymModule::new(&g, 2, 2).complex().unwrap();
        }
    }

    #[test]
    fn d_squared_on_sym() {
        let g = builtin("solvable2").unwrap();
        let cx = SymModule::new(&g, 2, 2).complex().unwrap();
        for k in cx.basis() {
            assert!(cx.d(&cx.d(&basis_cochain(k))).is_empty());
        }
    }

    #[test]
    fn m_t_is_chain_map() {
        let env = Envelope::new(builtin("heisenberg3").unwrap());
        assert!(m_t_chain_map(&env, 2).unwrap().is_zero());
    }

    #[test]
    fn version4_vanishes_on_solvable2() {
        let env = Envelope::new(builtin("solvable2").unwrap());
        let beta = solve_kv(4).unwrap();
        assert!(version4_residual(&env, &beta, 3).unwrap().is_zero());
    }

    #[test]
    fn version4_detects_wrong_beta() {
        let env = Envelope::new(builtin("solvable2").unwrap());
        let beta = solve_kv(3).unwrap().scale(&Poly::int(-1));
        assert!(!version4_residual(&env, &beta, 2).unwrap().is_zero());
    }
}
