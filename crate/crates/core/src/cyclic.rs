//! Operator words in `ad_x, ad_y` and their formal traces.
//!
//! An operator series is an [`AssocSeries`] whose letters stand for
//! `A_x = ad_x`, `A_y = ad_y`; since `ad` is a Lie homomorphism into the
//! commutator algebra, `ad_z` is just the associative expansion of `z` read
//! as an operator. Traces live on necklaces (words up to rotation); the
//! empty necklace is the trace of the identity, i.e. the dimension.

use std::collections::BTreeMap;
use std::fmt;

use crate::assoc::AssocSeries;
use crate::bch;
use crate::error::{Error, Result};
use crate::freelie::{LieSeries, TangentPair};
use crate::scalar::{rat, Poly, Rational};
use crate::series::AnalyticFn;
use crate::words::{min_rotation, parse_word, word_to_string, Word};

pub type OperatorSeries = AssocSeries;

/// `ad_z` as an operator series.
pub fn ad_expand(z: &LieSeries) -> OperatorSeries {
    z.to_assoc()
}

/// Substitutes `ad_z` into the Taylor series of `f`.
pub fn analytic_of_ad(f: AnalyticFn, z: &LieSeries) -> Result<OperatorSeries> {
    let op = ad_expand(z);
    op.compose_power_series(&f.taylor(op.truncation()).coeffs)
}

#[derive(Clone, PartialEq, Eq)]
pub struct CyclicSeries {
    alphabet: usize,
    truncation: usize,
    terms: BTreeMap<Word, Poly>,
}

impl CyclicSeries {
    pub fn zero(alphabet: usize, truncation: usize) -> Self {
        CyclicSeries {
            alphabet,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c` times the necklace of `w` (any rotation accepted).
    pub fn add_term(&mut self, w: &[u8], c: &Poly) {
        if w.len() > self.truncation || c.is_zero() {
            return;
        }
        let key = min_rotation(w);
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, w: &[u8]) -> Poly {
        self.terms.get(&min_rotation(w)).cloned().unwrap_or_default()
    }

    /// Coefficient of the necklace spelled by `text`.
    pub fn coeff_of(&self, text: &str) -> Poly {
        parse_word(text, self.alphabet)
            .map(|w| self.coeff(&w))
            .unwrap_or_default()
    }

    pub fn homogeneous(&self, degree: usize) -> Self {
        self.filter(|w| w.len() == degree)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        CyclicSeries {
            alphabet: self.alphabet,
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn with_truncation(&self, n: usize) -> Self {
        let mut out = self.filter(|w| w.len() <= n);
        out.truncation = n;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut out = self.with_truncation(self.truncation.min(other.truncation));
        for (w, c) in &other.terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        self.map_graded(|_, c| f(c))
    }

    pub fn map_graded(&self, f: impl Fn(usize, &Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            out.add_term(w, &f(w.len(), c));
        }
        out
    }

    /// Multiplies the degree-`n` part by `t^n` (pullback along `r_t`).
    pub fn rescale(&self) -> Self {
        self.map_graded(|n, c| c.shift(0, n as u32))
    }

    pub fn deriv_t(&self) -> Self {
        self.map_coeffs(Poly::deriv_t)
    }

    pub fn subs_t(&self, t: &Rational) -> Self {
        self.map_coeffs(|c| c.subs_t(t))
    }

    /// Induced action of a derivation of the associative algebra given on
    /// letters; well defined because derivations map commutators to
    /// commutators.
    pub fn derivation(&self, images: &[AssocSeries]) -> Result<Self> {
        let mut op = AssocSeries::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            op.add_term(w.clone(), c);
        }
        Ok(trace(&op.derive(images)?).with_truncation(self.truncation))
    }
}

impl fmt::Display for CyclicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let name = if w.is_empty() { "tr(1)".to_string() } else { format!("({})", word_to_string(w)) };
                format!("({c})·{name}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for CyclicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicSeries[N={}]({self})", self.truncation)
    }
}

pub fn trace(op: &OperatorSeries) -> CyclicSeries {
    let mut out = CyclicSeries::zero(op.alphabet(), op.truncation());
    for (w, c) in op.terms() {
        out.add_term(w, c);
    }
    out
}

/// `log J(z) = tr log((1 − e^{−ad_z})/ad_z)`.
pub fn log_j(z: &LieSeries) -> Result<CyclicSeries> {
    Ok(trace(&analytic_of_ad(AnalyticFn::LogJ, z)?))
}

/// `tr(ad_{e} ∘ ∂_e l)` for the letter `e`: the operator `∂_e l` is read off
/// from the associative words of `l` whose last letter is `e`, because
/// `ad_{a_1}⋯ad_{a_k} ξ` contains `a_1⋯a_k ξ` as its only word ending in the
/// marker `ξ`. Composing with `ad_e` rotates such a word back into itself.
fn trace_ad_partial(l: &LieSeries, letter: u8) -> CyclicSeries {
    let a = l.to_assoc();
    let mut out = CyclicSeries::zero(l.alphabet(), l.truncation());
    for (w, c) in a.terms() {
        if w.last() == Some(&letter) {
            out.add_term(w, c);
        }
    }
    out
}

/// The operator `∂_e l` as a series of `ad`-words (see [`trace_ad_partial`]).
pub fn partial_operator(l: &LieSeries, letter: u8) -> OperatorSeries {
    let a = l.to_assoc();
    let mut out = AssocSeries::zero(l.alphabet(), l.truncation());
    for (w, c) in a.terms() {
        if let Some((&last, head)) = w.split_last() {
            if last == letter {
                out.add_term(head.to_vec(), c);
            }
        }
    }
    out
}

/// `−tr(ad_x ∘ ∂_x β¹ + ad_y ∘ ∂_y β²)`, the left side of the trace KV
/// equation.
pub fn divergence(beta: &TangentPair) -> CyclicSeries {
    trace_ad_partial(&beta.beta1, 0)
        .add(&trace_ad_partial(&beta.beta2, 1))
        .neg()
}

/// `L_β` on cyclic words, with `L_β x = [x, β¹]`, `L_β y = [y, β²]`.
pub fn cyclic_derivation(beta: &TangentPair, c: &CyclicSeries) -> Result<CyclicSeries> {
    if c.alphabet() != 2 {
        return Err(Error::AlphabetMismatch(2, c.alphabet()));
    }
    let images = beta.generator_images()?;
    let imgs = [images[0].to_assoc(), images[1].to_assoc()];
    let n = c.truncation().min(beta.truncation());
    c.with_truncation(n).derivation(&imgs)
}

/// `div([β,γ]) − L_β div(γ) + L_γ div(β)`; vanishes identically.
pub fn cocycle_check(beta: &TangentPair, gamma: &TangentPair) -> Result<CyclicSeries> {
    let br = crate::freelie::tangential_bracket(beta, gamma)?;
    let lhs = divergence(&br);
    let a = cyclic_derivation(beta, &divergence(gamma))?;
    let b = cyclic_derivation(gamma, &divergence(beta))?;
    Ok(lhs.sub(&a).add(&b))
}

/// `½ tr(f(ad_x) + f(ad_y) − f(ad_z) − 1)` with `f(u) = u/(e^u − 1)` and
/// `z = log(e^x e^y)`, through degree `n`.
pub fn kv3b_rhs(n: usize) -> Result<CyclicSeries> {
    kv3b_rhs_for(&bch::dynkin_bch(n))
}

/// As [`kv3b_rhs`] for a supplied `z`.
pub fn kv3b_rhs_for(z: &LieSeries) -> Result<CyclicSeries> {
    let n = z.truncation();
    let x = LieSeries::letter(0, 2, n);
    let y = LieSeries::letter(1, 2, n);
    let f = AnalyticFn::UOverExpMinusOne;
    let total = analytic_of_ad(f, &x)?
        .add(&analytic_of_ad(f, &y)?)
        .sub(&analytic_of_ad(f, z)?)
        .sub(&AssocSeries::one(2, n));
    Ok(trace(&total).scale_rat(&rat(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::to_lyndon_coordinates;
    use crate::freelie::BracketExpr;

    fn lie(s: &str) -> LieSeries {
        to_lyndon_coordinates(&BracketExpr::parse(s).unwrap(), 2)
            .unwrap()
            .with_truncation(6)
    }

    fn op(words: &[(&str, i64)]) -> OperatorSeries {
        let mut o = AssocSeries::zero(2, 6);
        for (w, c) in words {
            o.add_term(parse_word(w, 2).unwrap(), &Poly::int(*c));
        }
        o
    }

    #[test]
    fn ad_expand_examples() {
        assert_eq!(ad_expand(&lie("x")), op(&[("x", 1)]));
        assert_eq!(ad_expand(&lie("[x,y]")), op(&[("xy", 1), ("yx", -1)]));
        assert_eq!(
            ad_expand(&lie("[x,[x,y]]")),
            op(&[("xxy", 1), ("xyx", -2), ("yxx", 1)])
        );
    }

    #[test]
    fn trace_examples() {
        assert!(trace(&op(&[("xy", 1), ("yx", -1)])).is_zero());
        assert_eq!(trace(&op(&[("x", 1)])).coeff_of("x"), Poly::one());
        assert_eq!(trace(&op(&[("xyx", 1)])).coeff_of("xxy"), Poly::one());
    }

    #[test]
    fn analytic_examples() {
        let x = LieSeries::letter(0, 2, 4);
        let f = analytic_of_ad(AnalyticFn::OneMinusExpNegOverU, &x).unwrap();
        assert_eq!(f.constant_term(), Poly::one());
        let b = analytic_of_ad(AnalyticFn::UOverExpMinusOne, &x).unwrap();
        let mut want = op(&[("", 1)]).with_truncation(4);
        want.add_term(vec![0], &Poly::frac(-1, 2));
        want.add_term(vec![0, 0], &Poly::frac(1, 12));
        want.add_term(vec![0, 0, 0, 0], &Poly::frac(-1, 720));
        assert_eq!(b, want);
        let l = analytic_of_ad(AnalyticFn::LogJ, &x).unwrap();
        assert_eq!(l.coeff(&[0]), Poly::frac(-1, 2));
    }

    #[test]
    fn log_j_examples() {
        let x = LieSeries::letter(0, 2, 3);
        assert_eq!(log_j(&x).unwrap().homogeneous(1).coeff_of("x"), Poly::frac(-1, 2));
        assert!(log_j(&LieSeries::zero(2, 3)).unwrap().is_zero());
    }

    #[test]
    fn divergence_examples() {
        let n = 4;
        let z = LieSeries::zero(2, n);
        let y = LieSeries::letter(1, 2, n);
        let x = LieSeries::letter(0, 2, n);
        assert!(divergence(&TangentPair::new(y.clone(), z.clone()).unwrap()).is_zero());
        let d = divergence(&TangentPair::new(x.clone(), z.clone()).unwrap());
        assert_eq!(d.coeff_of("x"), Poly::int(-1));
        assert_eq!(d.num_terms(), 1);
        let d = divergence(&TangentPair::new(lie("[x,y]").with_truncation(n), z).unwrap());
        assert_eq!(d.coeff_of("xy"), Poly::one());
        assert_eq!(d.num_terms(), 1);
    }

    #[test]
    fn partial_operator_reconstructs_linearization() {
        // marker ξ is the third letter; ∂_x l applied to ξ must equal the
        // part of l(x + ξ, y) linear in ξ
        let l = lie("[[x,y],[x,[x,y]]]").add(&lie("[x,[y,[x,y]]]"));
        let d = partial_operator(&l, 0);
        let n = 6;
        let gens3: Vec<AssocSeries> = (0..2).map(|i| AssocSeries::letter(i, 3, n)).collect();
        let xi = AssocSeries::letter(2, 3, n);
        let mut d3 = AssocSeries::zero(2, n);
        for (w, c) in d.terms() {
            d3.add_term(w.clone(), c);
        }
        let applied = d3.apply_ad_words(&gens3, &xi).unwrap();
        let a = l.to_assoc();
        let x_plus = gens3[0].add(&xi);
        let shifted = a.substitute(&[x_plus, gens3[1].clone()]).unwrap();
        let orig = a.substitute(&gens3).unwrap();
        let linear = shifted
            .sub(&orig)
            .terms()
            .filter(|(w, _)| w.iter().filter(|&&c| c == 2).count() == 1)
            .fold(AssocSeries::zero(3, n), |mut acc, (w, c)| {
                acc.add_term(w.clone(), c);
                acc
            });
        assert_eq!(applied, linear);
    }

    #[test]
    fn cyclic_derivation_of_dimension_is_zero() {
        let mut c = CyclicSeries::zero(2, 3);
        c.add_term(&[], &Poly::int(5));
        let beta = TangentPair::new(lie("y").with_truncation(3), lie("x").with_truncation(3)).unwrap();
        assert!(cyclic_derivation(&beta, &c).unwrap().is_zero());
    }

    #[test]
    fn kv3b_rhs_low_degrees() {
        let r = kv3b_rhs(3).unwrap();
        assert!(r.homogeneous(0).is_zero());
        assert!(r.homogeneous(1).is_zero());
    }
}
