//! Degree-by-degree solution of the KV equations
//!
//! ```text
//! (1 − e^{−ad_x}) β¹ + (e^{ad_y} − 1) β² = x + y − log(e^y e^x)
//! tr(ad_x ∂_x β¹ + ad_y ∂_y β²) = ½ tr(f(ad_x) + f(ad_y) − f(ad_z) − 1)
//! ```
//!
//! with `f(u) = u/(e^u − 1)`, and the equivalent `t`-dependent form.
//!
//! The trace equation is imposed with a plus sign on the left. With a
//! leading minus the two equations already contradict each other in degree
//! 2: for `β = (a[x,y], b[x,y])` on top of the degree-1 solution the Lie
//! equation forces `a − b = 1/12` and the signed trace equation
//! `a − b = −1/12`. In terms of [`divergence`] (which carries the minus)
//! the residual is `divergence(β) + rhs`.
//!
//! Degree alignment: the degree-`n` part of `β` enters the Lie equation
//! first in degree `n + 1` and the trace equation in degree `n`. A pair
//! truncated at order `N` is therefore checked in Lie degrees `≤ N` and
//! trace degrees `≤ N − 1`, and [`solve_kv`]`(N)` produces `β` in degrees
//! `1..N−1`.

use std::collections::BTreeMap;

use crate::assoc::AssocSeries;
use crate::bch;
use crate::cyclic::{self, analytic_of_ad, cyclic_derivation, divergence, CyclicSeries};
use crate::error::{Error, Result};
use crate::freelie::{tangential_derivation, LieSeries, TangentPair};
use crate::linalg::{self, Matrix};
use crate::scalar::{rat, Poly, Rational};
use crate::series::AnalyticFn;
use crate::words::{lyndon_basis, Word};

/// Defects of the two equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KvResidual {
    pub lie_part: LieSeries,
    pub trace_part: CyclicSeries,
}

impl KvResidual {
    pub fn is_zero(&self) -> bool {
        self.lie_part.is_zero() && self.trace_part.is_zero()
    }
}

fn apply_op(op: &AssocSeries, target: &LieSeries) -> Result<LieSeries> {
    let n = target.truncation();
    let gens = [AssocSeries::letter(0, 2, n), AssocSeries::letter(1, 2, n)];
    LieSeries::from_assoc(&op.apply_ad_words(&gens, &target.to_assoc())?)
}

/// `(1 − e^{−ad_x}) β¹ + (e^{ad_y} − 1) β²`.
pub fn kv3a_lhs(beta: &TangentPair) -> Result<LieSeries> {
    let n = beta.truncation();
    let x = LieSeries::letter(0, 2, n);
    let y = LieSeries::letter(1, 2, n);
    let a = apply_op(&analytic_of_ad(AnalyticFn::OneMinusExpNeg, &x)?, &beta.beta1)?;
    let b = apply_op(&analytic_of_ad(AnalyticFn::ExpMinusOne, &y)?, &beta.beta2)?;
    Ok(a.add(&b))
}

pub fn kv3a_residual(beta: &TangentPair) -> Result<LieSeries> {
    Ok(kv3a_lhs(beta)?.sub(&bch::kv3a_rhs(beta.truncation())))
}

/// Trace defect in degrees `≤ N − 1` for a pair truncated at `N`.
pub fn kv3b_residual(beta: &TangentPair) -> Result<CyclicSeries> {
    let n = beta.truncation();
    let rhs = cyclic::kv3b_rhs(n)?;
    Ok(divergence(beta).add(&rhs).with_truncation(n.saturating_sub(1)))
}

pub fn kv_residual(beta: &TangentPair) -> Result<KvResidual> {
    Ok(KvResidual {
        lie_part: kv3a_residual(beta)?,
        trace_part: kv3b_residual(beta)?,
    })
}

/// `(β¹(x,y), β²(x,y)) ↦ (½(β¹ + β²(−y,−x)), ½(β² + β¹(−y,−x)))`.
pub fn symmetrize(beta: &TangentPair) -> Result<TangentPair> {
    let swapped = swap_negate(beta)?;
    let half = Poly::constant(rat(1, 2));
    TangentPair::new(
        beta.beta1.add(&swapped.beta2).scale(&half),
        beta.beta2.add(&swapped.beta1).scale(&half),
    )
}

/// Both components under `x ↦ −y, y ↦ −x`.
pub fn swap_negate(beta: &TangentPair) -> Result<TangentPair> {
    let n = beta.truncation();
    let images = [
        LieSeries::letter(1, 2, n).neg(),
        LieSeries::letter(0, 2, n).neg(),
    ];
    beta.try_map(|l| l.substitute(&images))
}

/// Order in which unknowns are eliminated; free unknowns are set to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColumnOrder {
    /// `β¹` Lyndon words, then `β²` Lyndon words, each lexicographic.
    #[default]
    Lyndon,
    /// The reverse of [`ColumnOrder::Lyndon`].
    Reversed,
}

impl ColumnOrder {
    pub fn tag(self) -> &'static str {
        match self {
            ColumnOrder::Lyndon => "lyndon-lex, free=0",
            ColumnOrder::Reversed => "reversed-lyndon-lex, free=0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub symmetrize: bool,
    pub order: ColumnOrder,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            symmetrize: true,
            order: ColumnOrder::Lyndon,
        }
    }
}

/// Linear-algebra summary of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct KvSolution {
    pub beta: TangentPair,
    pub degrees: Vec<DegreeReport>,
    pub options: SolveOptions,
}

pub fn solve_kv(n: usize) -> Result<TangentPair> {
    Ok(solve_kv_with(n, SolveOptions::default())?.beta)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Row {
    Lie(Word),
    Trace(Word),
}

fn rows_of(lie: &LieSeries, tr: &CyclicSeries, out: &mut BTreeMap<Row, Rational>) -> Result<()> {
    for (w, c) in lie.terms() {
        let v = c
            .as_constant()
            .ok_or_else(|| Error::Invalid("parameter-dependent KV system".into()))?;
        out.insert(Row::Lie(w.letters().to_vec()), v);
    }
    for (w, c) in tr.terms() {
        let v = c
            .as_constant()
            .ok_or_else(|| Error::Invalid("parameter-dependent KV system".into()))?;
        out.insert(Row::Trace(w.clone()), v);
    }
    Ok(())
}

/// Solves for `β` in degrees `1..n` (`n ≥ 2`), jointly imposing the Lie
/// equation in degree `d + 1` and the trace equation in degree `d` for the
/// unknown degree-`d` part.
pub fn solve_kv_with(n: usize, options: SolveOptions) -> Result<KvSolution> {
    if n < 2 {
        return Err(Error::Invalid("solve_kv needs truncation N ≥ 2".into()));
    }
    let mut beta = TangentPair::zero(n);
    let mut degrees = Vec::new();
    for d in 1..n {
        let basis = lyndon_basis(d, 2);
        let k = basis.len();
        let cut = d + 1;
        let current = beta.with_truncation(cut);
        let base_lie = kv3a_residual(&current)?.homogeneous(cut);
        let base_tr = divergence(&current)
            .add(&cyclic::kv3b_rhs(cut)?)
            .homogeneous(d);
        let mut base = BTreeMap::new();
        rows_of(&base_lie, &base_tr, &mut base)?;

        let mut columns: Vec<BTreeMap<Row, Rational>> = Vec::with_capacity(2 * k);
        for comp in 0..2 {
            for w in &basis {
                let e = LieSeries::basis_element(w.clone(), 2, cut);
                let z = LieSeries::zero(2, cut);
                let unit = if comp == 0 {
                    TangentPair::new(e, z)?
                } else {
                    TangentPair::new(z, e)?
                };
                let mut col = BTreeMap::new();
                rows_of(
                    &kv3a_lhs(&unit)?.homogeneous(cut),
                    &divergence(&unit).homogeneous(d),
                    &mut col,
                )?;
                columns.push(col);
            }
        }
        let mut row_keys: Vec<&Row> = base.keys().collect();
        for c in &columns {
            row_keys.extend(c.keys());
        }
        row_keys.sort();
        row_keys.dedup();
        let index: BTreeMap<&Row, usize> = row_keys.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let mut a = Matrix::zeros(row_keys.len(), 2 * k);
        for (j, col) in columns.iter().enumerate() {
            for (r, v) in col {
                a.set(index[r], j, v.clone());
            }
        }
        let mut b = vec![Rational::from_integer(0.into()); row_keys.len()];
        for (r, v) in &base {
            b[index[r]] = -v.clone();
        }
        let order: Vec<usize> = match options.order {
            ColumnOrder::Lyndon => (0..2 * k).collect(),
            ColumnOrder::Reversed => (0..2 * k).rev().collect(),
        };
        let sol = linalg::solve(&a, &b, Some(&order)).ok_or(Error::Inconsistent(d))?;
        degrees.push(DegreeReport {
            degree: d,
            unknowns: 2 * k,
            equations: row_keys.len(),
            rank: sol.rank,
        });
        let mut b1 = beta.beta1.clone();
        let mut b2 = beta.beta2.clone();
        for (j, v) in sol.x.iter().enumerate() {
            let c = Poly::constant(v.clone());
            if j < k {
                b1.add_term(basis[j].clone(), &c);
            } else {
                b2.add_term(basis[j - k].clone(), &c);
            }
        }
        beta = TangentPair::new(b1, b2)?;
    }
    if options.symmetrize {
        beta = symmetrize(&beta)?;
    }
    Ok(KvSolution {
        beta,
        degrees,
        options,
    })
}

/// `½ (log J(x) + log J(y) − log J(Φ))`.
pub fn log_kappa(n: usize) -> Result<CyclicSeries> {
    let x = LieSeries::letter(0, 2, n);
    let y = LieSeries::letter(1, 2, n);
    let phi = bch::dynkin_bch(n);
    Ok(cyclic::log_j(&x)?
        .add(&cyclic::log_j(&y)?)
        .sub(&cyclic::log_j(&phi)?)
        .scale_rat(&rat(1, 2)))
}

/// `(∂_t Φ_t − L_{β_t} Φ_t, ∂_t log κ_t − L_{β_t} log κ_t + div(β_t))` with
/// `β_t = t^{−1} r_t^* β`, `κ_t = r_t^* κ`; the trace part is cut at
/// degree `N − 1`. The sign of the divergence term matches the sign of the
/// trace equation above.
pub fn kv2_residuals(beta: &TangentPair) -> Result<(LieSeries, CyclicSeries)> {
    let n = beta.truncation();
    let beta_t = beta.rescale(-1)?;
    let phi_t = bch::phi_t(n);
    let first = phi_t.deriv_t().sub(&tangential_derivation(&beta_t, &phi_t)?);
    let kappa_t = log_kappa(n)?.rescale();
    let second = kappa_t
        .deriv_t()
        .sub(&cyclic_derivation(&beta_t, &kappa_t)?)
        .add(&divergence(&beta_t))
        .with_truncation(n.saturating_sub(1));
    Ok((first, second))
}
