//! Zero-curvature transfer: from a family `γ_{s,t}` of tangent pairs to the
//! solution `β_{s,t}` of `∂_s β − ∂_t γ + [β, γ] = 0` with `β_{0,t} = 0`,
//! given by the iterated-integral series
//!
//! ```text
//! β_{s,t} = Σ_k ∫_{0 ≤ s_0 ≤ … ≤ s_k ≤ s} ad_{γ_{s_k,t}} ⋯ ad_{γ_{s_1,t}} ∂_t γ_{s_0,t}
//! ```
//!
//! Families are polynomial in `s` so the simplex integrals are exact. The
//! `k`-th term is built by iterated antidifferentiation,
//! `T_0(s) = ∫_0^s ∂_t γ`, `T_k(s) = ∫_0^s [γ(σ), T_{k−1}(σ)] dσ`.
//!
//! Norm estimates are checked on explicit presentations: sums of Lie words
//! (bracket trees) with coefficients, built alongside the Lyndon
//! coordinates by the same rules the estimates are proved with. The norm of
//! a degree-`n` part is the smaller of its Lyndon coefficient sum and its
//! tracked presentation sum, both upper bounds for the minimal presentation
//! norm.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::assoc::AssocSeries;
use crate::error::{Error, Result};
use crate::freelie::{tangential_bracket, LieSeries, TangentPair};
use crate::scalar::{fmt_rational, pow_rat, rat, rat_int, Poly, Rational};

/// `γ_{s,t} = r_t^* γ_s`: degree-`n` part times `t^n`.
pub fn scale_family(gamma: &TangentPair) -> TangentPair {
    gamma.rescale(0).expect("nonnegative offset")
}

fn check_polynomial(gamma: &TangentPair) -> Result<()> {
    // coefficients are polynomials by construction; reject a degree-0 part
    let n0 = gamma.beta1.homogeneous(0).is_zero() && gamma.beta2.homogeneous(0).is_zero();
    if !n0 {
        return Err(Error::Invalid("family must vanish in degree 0".into()));
    }
    Ok(())
}

/// The iterated-integral series as a polynomial in `s` and `t`.
pub fn zc_series(gamma: &TangentPair) -> Result<TangentPair> {
    check_polynomial(gamma)?;
    let n = gamma.truncation();
    let mut term = gamma.deriv_t().map(LieSeries::integrate_s);
    let mut total = term.clone();
    for _ in 1..n {
        if term.is_zero() {
            break;
        }
        term = tangential_bracket(gamma, &term)?.map(LieSeries::integrate_s);
        total = total.add(&term);
    }
    Ok(total)
}

/// [`zc_series`] evaluated at `s = s_upper`.
pub fn zc_series_at(gamma: &TangentPair, s_upper: &Rational) -> Result<TangentPair> {
    if *s_upper < Rational::zero() || *s_upper > Rational::one() {
        return Err(Error::Invalid(format!("s = {} outside [0,1]", fmt_rational(s_upper))));
    }
    Ok(zc_series(gamma)?.subs_s(s_upper))
}

/// `∂_s β − ∂_t γ + [β, γ]`.
pub fn flatness_residual(beta: &TangentPair, gamma: &TangentPair) -> Result<TangentPair> {
    Ok(beta
        .deriv_s()
        .sub(&gamma.deriv_t())
        .add(&tangential_bracket(beta, gamma)?))
}

/// True iff every degree-`n` coefficient is homogeneous of degree `n − 1`
/// in `t`, i.e. `β_{s,t} = t^{−1} r_t^* β_{s,1}`.
pub fn scaling_check(beta: &TangentPair) -> bool {
    [&beta.beta1, &beta.beta2].iter().all(|l| {
        l.terms().all(|(w, c)| {
            c.terms().all(|((_, dt), _)| *dt as usize + 1 == w.len())
        })
    })
}

/// A Lie word: a bracket tree with letters at the leaves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(u8),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn degree(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(a, b) => a.degree() + b.degree(),
        }
    }

    /// `[a, b]` in canonical order, with the sign from antisymmetry; `None`
    /// when `a = b`.
    fn bracket(a: &Tree, b: &Tree) -> Option<(Tree, i64)> {
        match a.cmp(b) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some((Tree::Node(Box::new(a.clone()), Box::new(b.clone())), 1)),
            std::cmp::Ordering::Greater => {
                Some((Tree::Node(Box::new(b.clone()), Box::new(a.clone())), -1))
            }
        }
    }

    fn to_assoc(&self, truncation: usize) -> AssocSeries {
        match self {
            Tree::Leaf(i) => AssocSeries::letter(*i, 2, truncation),
            Tree::Node(a, b) => a.to_assoc(truncation).commutator(&b.to_assoc(truncation)),
        }
    }

    /// All trees obtained by replacing one leaf with letter `i` by
    /// `[leaf, p]`, for `p` drawn from `images[i]`.
    fn derive(&self, images: &[&Presentation; 2], out: &mut Vec<(Tree, Poly)>) {
        match self {
            Tree::Leaf(i) => {
                for (p, c) in &images[*i as usize].terms {
                    if let Some((t, sign)) = Tree::bracket(self, p) {
                        out.push((t, c.scale(&rat_int(sign))));
                    }
                }
            }
            Tree::Node(a, b) => {
                let mut left = Vec::new();
                a.derive(images, &mut left);
                for (t, c) in left {
                    if let Some((u, sign)) = Tree::bracket(&t, b) {
                        out.push((u, c.scale(&rat_int(sign))));
                    }
                }
                let mut right = Vec::new();
                b.derive(images, &mut right);
                for (t, c) in right {
                    if let Some((u, sign)) = Tree::bracket(a, &t) {
                        out.push((u, c.scale(&rat_int(sign))));
                    }
                }
            }
        }
    }
}

/// A Lie series presented as a combination of Lie words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    truncation: usize,
    terms: BTreeMap<Tree, Poly>,
}

fn lyndon_tree(w: &crate::words::LyndonWord) -> Tree {
    match w.factorization() {
        None => Tree::Leaf(w.letters()[0]),
        Some((u, v)) => Tree::Node(Box::new(lyndon_tree(&u)), Box::new(lyndon_tree(&v))),
    }
}

impl Presentation {
    pub fn zero(truncation: usize) -> Self {
        Presentation {
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_lie(l: &LieSeries) -> Self {
        let mut out = Self::zero(l.truncation());
        for (w, c) in l.terms() {
            out.add_term(lyndon_tree(w), c);
        }
        out
    }

    pub fn add_term(&mut self, t: Tree, c: &Poly) {
        if t.degree() > self.truncation || c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.truncation = self.truncation.min(other.truncation);
        out.terms.retain(|t, _| t.degree() <= out.truncation);
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.truncation);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), &f(c));
        }
        out
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sum of coefficient sizes in degree `n`; a polynomial coefficient
    /// counts with the absolute sum of its coefficients, which bounds its
    /// values on `[0,1]²`.
    pub fn norm(&self, n: usize) -> Rational {
        self.terms
            .iter()
            .filter(|(t, _)| t.degree() == n)
            .fold(Rational::zero(), |acc, (_, c)| acc + c.abs_sum())
    }

    pub fn expand(&self) -> Result<LieSeries> {
        let mut a = AssocSeries::zero(2, self.truncation);
        for (t, c) in &self.terms {
            a = a.add(&t.to_assoc(self.truncation).scale(c));
        }
        LieSeries::from_assoc(&a)
    }

    pub fn bracket0(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.truncation.min(other.truncation));
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.degree() + b.degree() > out.truncation {
                    continue;
                }
                if let Some((t, sign)) = Tree::bracket(a, b) {
                    out.add_term(t, &(ca * cb).scale(&rat_int(sign)));
                }
            }
        }
        out
    }

    /// `L_β` with `L_β x = [x, β¹]`, `L_β y = [y, β²]`, word by word.
    pub fn derivation(&self, beta: &PairPresentation) -> Self {
        let images = [&beta.p1, &beta.p2];
        let n = self.truncation.min(beta.truncation());
        let mut out = Self::zero(n);
        for (t, c) in &self.terms {
            let mut new = Vec::new();
            t.derive(&images, &mut new);
            for (u, d) in new {
                if u.degree() <= n {
                    out.add_term(u, &(c * &d));
                }
            }
        }
        out
    }
}

/// Presentations of both components of a tangent pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPresentation {
    pub p1: Presentation,
    pub p2: Presentation,
}

impl PairPresentation {
    pub fn from_pair(beta: &TangentPair) -> Self {
        PairPresentation {
            p1: Presentation::from_lie(&beta.beta1),
            p2: Presentation::from_lie(&beta.beta2),
        }
    }

    pub fn truncation(&self) -> usize {
        self.p1.truncation.min(self.p2.truncation)
    }

    pub fn map(&self, f: impl Fn(&Presentation) -> Presentation) -> Self {
        PairPresentation {
            p1: f(&self.p1),
            p2: f(&self.p2),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        PairPresentation {
            p1: self.p1.add(&other.p1),
            p2: self.p2.add(&other.p2),
        }
    }

    /// `max` of the component norms in degree `n`.
    pub fn norm(&self, n: usize) -> Rational {
        self.p1.norm(n).max(self.p2.norm(n))
    }

    pub fn expand(&self) -> Result<TangentPair> {
        TangentPair::new(self.p1.expand()?, self.p2.expand()?)
    }

    pub fn derivation(&self, beta: &PairPresentation) -> Self {
        self.map(|p| p.derivation(beta))
    }

    /// Presentation of `[a, b] = L_a b − L_b a + [a, b]₀`.
    pub fn bracket(a: &Self, b: &Self) -> Self {
        let zero = PairPresentation {
            p1: a.p1.bracket0(&b.p1),
            p2: a.p2.bracket0(&b.p2),
        };
        b.derivation(a).add(&a.derivation(b).map(Presentation::neg)).add(&zero)
    }
}

/// Presentation-tracked version of [`zc_series`].
pub fn zc_series_presented(gamma: &TangentPair) -> Result<(TangentPair, PairPresentation)> {
    let beta = zc_series(gamma)?;
    let g = PairPresentation::from_pair(gamma);
    let integrate = |p: &Presentation| p.map(Poly::integrate_s);
    let mut term = PairPresentation::from_pair(&gamma.deriv_t()).map(integrate);
    let mut total = term.clone();
    for _ in 1..gamma.truncation() {
        term = PairPresentation::bracket(&g, &term).map(integrate);
        if term.p1.num_terms() + term.p2.num_terms() == 0 {
            break;
        }
        total = total.add(&term);
    }
    Ok((beta, total))
}

/// Norm of the degree-`n` part: the smaller of the Lyndon coefficient sum
/// and the tracked presentation sum.
pub fn proxy_norm(value: &TangentPair, presentation: &PairPresentation, n: usize) -> Rational {
    value.norm_proxy(n).min(presentation.norm(n))
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateLine {
    pub label: String,
    pub degree: usize,
    pub value: String,
    pub bound: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    /// Inputs satisfy `C_n ≤ Dⁿ` in the proxy sense.
    pub hypothesis_holds: bool,
    /// Every tracked presentation expands to the element it presents.
    pub presentations_consistent: bool,
    pub lines: Vec<EstimateLine>,
}

impl EstimateReport {
    pub fn all_hold(&self) -> bool {
        self.presentations_consistent && self.lines.iter().all(|l| l.holds)
    }

    fn push(&mut self, label: impl Into<String>, degree: usize, value: Rational, bound: Rational) {
        self.lines.push(EstimateLine {
            label: label.into(),
            degree,
            holds: value <= bound,
            value: fmt_rational(&value),
            bound: fmt_rational(&bound),
        });
    }
}

fn double_factorial_odd(k: usize) -> Rational {
    // (2k − 1)!!, equal to 1 for k = 0
    (1..=k).fold(Rational::one(), |acc, j| acc * rat_int(2 * j as i64 - 1))
}

/// Checks the bracket estimates on homogeneous parts of `betas[0]` and
/// `gamma`, and the iterated bound
/// `C_n(ad_{β_k}⋯ad_{β_1}γ) ≤ (2n²)^k/(2k−1)!! Dⁿ` for every prefix of
/// `betas`.
pub fn estimate_check(betas: &[TangentPair], gamma: &TangentPair, d: &Rational) -> Result<EstimateReport> {
    let n_max = betas
        .iter()
        .map(TangentPair::truncation)
        .chain(std::iter::once(gamma.truncation()))
        .min()
        .unwrap_or(0);
    let mut report = EstimateReport {
        hypothesis_holds: true,
        presentations_consistent: true,
        lines: Vec::new(),
    };
    for p in betas.iter().chain(std::iter::once(gamma)) {
        for n in 1..=n_max {
            if p.norm_proxy(n) > pow_rat(d, n as u32) {
                report.hypothesis_holds = false;
            }
        }
    }

    if let Some(beta) = betas.first() {
        for n1 in 1..=n_max {
            for n2 in 1..=n_max.saturating_sub(n1) {
                let b = beta.homogeneous(n1);
                let g = gamma.homogeneous(n2);
                if b.is_zero() || g.is_zero() {
                    continue;
                }
                let n = n1 + n2;
                let cb = b.norm_proxy(n1);
                let cg = g.norm_proxy(n2);
                let pb = PairPresentation::from_pair(&b);
                let pg = PairPresentation::from_pair(&g);

                let l_pres = pg.derivation(&pb);
                let l_val = crate::freelie::tangential_derivation_pair(&b, &g)?;
                report.presentations_consistent &= l_pres.expand()? == l_val;
                report.push(
                    format!("L_beta gamma (n1={n1}, n2={n2})"),
                    n,
                    proxy_norm(&l_val, &l_pres, n),
                    rat_int(n2 as i64) * &cb * &cg,
                );

                let z_val = TangentPair::new(b.beta1.bracket(&g.beta1)?, b.beta2.bracket(&g.beta2)?)?;
                let z_pres = PairPresentation {
                    p1: pb.p1.bracket0(&pg.p1),
                    p2: pb.p2.bracket0(&pg.p2),
                };
                report.presentations_consistent &= z_pres.expand()? == z_val;
                report.push(
                    format!("[beta,gamma]_0 (n1={n1}, n2={n2})"),
                    n,
                    proxy_norm(&z_val, &z_pres, n),
                    &cb * &cg,
                );

                let br_val = tangential_bracket(&b, &g)?;
                let br_pres = PairPresentation::bracket(&pb, &pg);
                report.presentations_consistent &= br_pres.expand()? == br_val;
                report.push(
                    format!("[beta,gamma] (n1={n1}, n2={n2})"),
                    n,
                    proxy_norm(&br_val, &br_pres, n),
                    rat_int(n as i64 + 1) * &cb * &cg,
                );
            }
        }
        let br_val = tangential_bracket(beta, gamma)?;
        let br_pres = PairPresentation::bracket(
            &PairPresentation::from_pair(beta),
            &PairPresentation::from_pair(gamma),
        );
        for n in 1..=n_max {
            report.push(
                "[beta,gamma] <= n^2 D^n",
                n,
                proxy_norm(&br_val, &br_pres, n),
                rat_int((n * n) as i64) * pow_rat(d, n as u32),
            );
        }
    }

    let mut val = gamma.clone();
    let mut pres = PairPresentation::from_pair(gamma);
    for (k, beta) in betas.iter().enumerate() {
        let k = k + 1;
        val = tangential_bracket(beta, &val)?;
        pres = PairPresentation::bracket(&PairPresentation::from_pair(beta), &pres);
        report.presentations_consistent &= pres.expand()? == val;
        for n in 1..=n_max {
            let nn = rat_int(2 * (n * n) as i64);
            let bound = pow_rat(&nn, k as u32) / double_factorial_odd(k) * pow_rat(d, n as u32);
            report.push(format!("ad chain k={k}"), n, proxy_norm(&val, &pres, n), bound);
        }
    }
    Ok(report)
}

/// Rational stand-in for `e² ≈ 7.389056`, slightly below it.
pub fn e_squared_lower() -> Rational {
    rat(7389, 1000)
}

/// Checks `C_n(β_{s,t}) ≤ (e² D)ⁿ` for the series built from `gamma`, where
/// `D ≥ 1` bounds the norms of `γ_{s,t}` and `∂_t γ_{s,t}` in every degree.
pub fn growth_check(gamma: &TangentPair) -> Result<EstimateReport> {
    let (beta, pres) = zc_series_presented(gamma)?;
    let mut report = EstimateReport {
        hypothesis_holds: true,
        presentations_consistent: pres.expand()? == beta,
        lines: Vec::new(),
    };
    let dot = gamma.deriv_t();
    let mut d = Rational::one();
    for n in 1..=gamma.truncation() {
        d = d.max(gamma.norm_proxy(n)).max(dot.norm_proxy(n));
    }
    let base = e_squared_lower() * d;
    for n in 1..=gamma.truncation() {
        report.push("beta_{s,t} <= (e^2 D)^n", n, proxy_norm(&beta, &pres, n), pow_rat(&base, n as u32));
    }
    Ok(report)
}
