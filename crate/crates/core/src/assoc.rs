//! Truncated free associative algebra on a finite alphabet.
//!
//! Elements are finite sums of words with [`Poly`] coefficients, cut off
//! above a fixed truncation degree. The same type doubles as the algebra of
//! operator words in `ad_x, ad_y` (the product is composition).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat, rat_int, Poly, Rational};
use crate::words::{word_to_string, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AssocSeries {
    alphabet: usize,
    truncation: usize,
    terms: BTreeMap<Word, Poly>,
}

impl AssocSeries {
    pub fn zero(alphabet: usize, truncation: usize) -> Self {
        AssocSeries {
            alphabet,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: usize, truncation: usize) -> Self {
        let mut out = Self::zero(alphabet, truncation);
        out.add_term(Vec::new(), &Poly::one());
        out
    }

    pub fn letter(i: u8, alphabet: usize, truncation: usize) -> Self {
        let mut out = Self::zero(alphabet, truncation);
        out.add_term(vec![i], &Poly::one());
        out
    }

    pub fn word(w: Word, alphabet: usize, truncation: usize) -> Self {
        let mut out = Self::zero(alphabet, truncation);
        out.add_term(w, &Poly::one());
        out
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Poly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &Poly) {
        if w.len() > self.truncation || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_term_rat(&mut self, w: Word, c: &Rational) {
        self.add_term(w, &Poly::constant(c.clone()));
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        AssocSeries {
            alphabet: self.alphabet,
            truncation,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= truncation)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous(&self, degree: usize) -> Self {
        AssocSeries {
            alphabet: self.alphabet,
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> Poly {
        self.coeff(&[])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_truncation(self.truncation.min(other.truncation));
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &Poly) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet, self.truncation);
        }
        self.map_coeffs(|v| v * c)
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet, self.truncation);
        }
        self.map_coeffs(|v| v.scale(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    /// Concatenation product, truncated at the smaller truncation order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.alphabet, n);
        for (u, a) in &self.terms {
            if u.len() > n {
                continue;
            }
            for (v, b) in &other.terms {
                if u.len() + v.len() > n {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &(a * b));
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.alphabet, self.truncation);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn require_no_constant(&self, what: &str) -> Result<()> {
        if !self.constant_term().is_zero() {
            return Err(Error::Invalid(format!("{what} needs a series without constant term")));
        }
        Ok(())
    }

    /// `Σ_k c_k X^k` for a univariate coefficient list; `X` must have no
    /// constant term so that only `k ≤ truncation` contribute.
    pub fn compose_power_series(&self, coeffs: &[Rational]) -> Result<Self> {
        self.require_no_constant("power-series substitution")?;
        let mut out = Self::zero(self.alphabet, self.truncation);
        let mut power = Self::one(self.alphabet, self.truncation);
        for (k, c) in coeffs.iter().enumerate().take(self.truncation + 1) {
            if k > 0 {
                power = power.mul(self);
            }
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale_rat(c));
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<Self> {
        let mut coeffs = vec![Rational::one()];
        let mut fact = Rational::one();
        for k in 1..=self.truncation {
            fact *= rat_int(k as i64);
            coeffs.push(Rational::one() / &fact);
        }
        self.compose_power_series(&coeffs)
    }

    /// `log(1 + self)`.
    pub fn log1p(&self) -> Result<Self> {
        let mut coeffs = vec![Rational::zero()];
        for k in 1..=self.truncation {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            coeffs.push(rat(sign, k as i64));
        }
        self.compose_power_series(&coeffs)
    }

    /// `log(self)` for a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != Poly::one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        self.sub(&Self::one(self.alphabet, self.truncation)).log1p()
    }

    /// Algebra homomorphism sending letter `i` to `images[i]`.
    pub fn substitute(&self, images: &[AssocSeries]) -> Result<Self> {
        if images.len() != self.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, images.len()));
        }
        let target_alphabet = images.first().map_or(self.alphabet, |s| s.alphabet);
        let n = images
            .iter()
            .map(|s| s.truncation)
            .min()
            .unwrap_or(self.truncation)
            .min(self.truncation);
        let mut out = Self::zero(target_alphabet, n);
        // memoize prefixes through a trie walk over the sorted keys
        let mut cache: BTreeMap<Word, AssocSeries> = BTreeMap::new();
        cache.insert(Vec::new(), Self::one(target_alphabet, n));
        for (w, c) in &self.terms {
            let prod = self.prefix_product(w, images, &mut cache, n);
            out = out.add(&prod.scale(c));
        }
        Ok(out)
    }

    fn prefix_product(
        &self,
        w: &[u8],
        images: &[AssocSeries],
        cache: &mut BTreeMap<Word, AssocSeries>,
        n: usize,
    ) -> AssocSeries {
        if let Some(v) = cache.get(w) {
            return v.clone();
        }
        let (head, last) = w.split_at(w.len() - 1);
        let prefix = self.prefix_product(head, images, cache, n);
        let value = prefix.mul(&images[last[0] as usize].with_truncation(n));
        cache.insert(w.to_vec(), value.clone());
        value
    }

    /// Derivation extending `letter i ↦ images[i]`.
    pub fn derive(&self, images: &[AssocSeries]) -> Result<Self> {
        if images.len() != self.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, images.len()));
        }
        let n = images
            .iter()
            .map(|s| s.truncation)
            .min()
            .unwrap_or(self.truncation)
            .min(self.truncation);
        let mut out = Self::zero(self.alphabet, n);
        for (w, c) in &self.terms {
            for p in 0..w.len() {
                for (u, d) in &images[w[p] as usize].terms {
                    if w.len() - 1 + u.len() > n {
                        continue;
                    }
                    let mut nw = Vec::with_capacity(w.len() - 1 + u.len());
                    nw.extend_from_slice(&w[..p]);
                    nw.extend_from_slice(u);
                    nw.extend_from_slice(&w[p + 1..]);
                    out.add_term(nw, &(c * d));
                }
            }
        }
        Ok(out)
    }

    /// Treats `self` as a series of operator words in `ad_{g_i}` and applies
    /// it to `target`: the word `i_1 … i_k` acts as
    /// `ad_{g_{i_1}} ∘ … ∘ ad_{g_{i_k}}`, where `g_i = generators[i]`.
    pub fn apply_ad_words(&self, generators: &[AssocSeries], target: &AssocSeries) -> Result<Self> {
        if generators.len() != self.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, generators.len()));
        }
        let n = target.truncation;
        let mut out = AssocSeries::zero(target.alphabet, n);
        // group by first letter: op = c·1 + Σ_i A_i · op_i
        let mut rest: Vec<AssocSeries> =
            vec![AssocSeries::zero(self.alphabet, self.truncation); self.alphabet];
        for (w, c) in &self.terms {
            match w.split_first() {
                None => out = out.add(&target.scale(c)),
                Some((&first, tail)) => rest[first as usize].add_term(tail.to_vec(), c),
            }
        }
        for (i, op) in rest.iter().enumerate() {
            if op.is_zero() {
                continue;
            }
            let inner = op.apply_ad_words(generators, target)?;
            if inner.is_zero() {
                continue;
            }
            let g = generators[i].with_truncation(n);
            out = out.add(&g.commutator(&inner));
        }
        Ok(out)
    }

    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let w = if w.is_empty() { "1".into() } else { word_to_string(w) };
                format!("({c})·{w}")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> AssocSeries {
        AssocSeries::letter(0, 2, 4)
    }
    fn y() -> AssocSeries {
        AssocSeries::letter(1, 2, 4)
    }

    #[test]
    fn exp_log_round_trip() {
        let a = x().add(&y().scale_rat(&rat(1, 3)));
        let back = a.exp().unwrap().log().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn truncation_drops_long_words() {
        let p = x().pow(5);
        assert!(p.is_zero());
        assert_eq!(x().pow(4).len(), 1);
    }

    #[test]
    fn derivation_obeys_leibniz() {
        let d = vec![y().mul(&x()), x().scale_rat(&rat(2, 1))];
        let a = x().mul(&y());
        let b = y().add(&x().mul(&x()));
        let lhs = a.mul(&b).derive(&d).unwrap();
        let rhs = a.derive(&d).unwrap().mul(&b).add(&a.mul(&b.derive(&d).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ad_words_act_as_nested_commutators() {
        let gens = vec![x(), y()];
        let op = AssocSeries::word(vec![0, 1], 2, 4);
        let got = op.apply_ad_words(&gens, &x()).unwrap();
        let want = x().commutator(&y().commutator(&x()));
        assert_eq!(got, want);
    }
}
