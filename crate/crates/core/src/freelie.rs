//! Free Lie algebra in the Lyndon basis, with Lie series truncated at a
//! fixed degree, the tangential derivations `L_β` and the tangential bracket
//! on pairs of Lie series.
//!
//! Coordinates are extracted by expanding into the free associative algebra
//! and peeling off Lyndon leading words: the standard bracketing of a Lyndon
//! word `w` has `w` as its lexicographically smallest associative word, with
//! coefficient 1.
//!
//! Sign convention: `L_β` acts on generators by `L_β x = [x, β¹]`,
//! `L_β y = [y, β²]`, i.e. along the fundamental vector fields of the
//! adjoint action. With this choice `β ↦ L_β` is a Lie homomorphism for
//! `[β, γ] = L_β γ − L_γ β + [β, γ]₀`, and the lowest-degree KV solution
//! `(¼y, −¼x)` also solves the `t`-derivative form of the first KV equation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::assoc::AssocSeries;
use crate::error::{Error, Result};
use crate::scalar::{rat_int, Poly, Rational};
use crate::words::{letter_name, lyndon_basis, parse_word, word_to_string, LyndonWord, Word};

type Expansion = Arc<Vec<(Word, i64)>>;

fn expansion_cache() -> &'static Mutex<HashMap<Word, Expansion>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Expansion>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Associative expansion of the standard bracketing of a Lyndon word.
pub fn bracketing_expansion(w: &LyndonWord) -> Expansion {
    if let Some(hit) = expansion_cache().lock().unwrap().get(w.letters()) {
        return hit.clone();
    }
    let value: Vec<(Word, i64)> = match w.factorization() {
        None => vec![(w.letters().to_vec(), 1)],
        Some((u, v)) => {
            let eu = bracketing_expansion(&u);
            let ev = bracketing_expansion(&v);
            let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
            for (a, ca) in eu.iter() {
                for (b, cb) in ev.iter() {
                    let mut ab = a.clone();
                    ab.extend_from_slice(b);
                    *acc.entry(ab).or_default() += ca * cb;
                    let mut ba = b.clone();
                    ba.extend_from_slice(a);
                    *acc.entry(ba).or_default() -= ca * cb;
                }
            }
            acc.into_iter().filter(|(_, c)| *c != 0).collect()
        }
    };
    let value = Arc::new(value);
    expansion_cache()
        .lock()
        .unwrap()
        .insert(w.letters().to_vec(), value.clone());
    value
}

/// Truncated Lie series in Lyndon coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct LieSeries {
    alphabet: usize,
    truncation: usize,
    terms: BTreeMap<LyndonWord, Poly>,
}

impl LieSeries {
    pub fn zero(alphabet: usize, truncation: usize) -> Self {
        LieSeries {
            alphabet,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn letter(i: u8, alphabet: usize, truncation: usize) -> Self {
        let mut out = Self::zero(alphabet, truncation);
        out.add_term(LyndonWord::new(vec![i]).expect("letters are Lyndon"), &Poly::one());
        out
    }

    /// The standard bracketing of a Lyndon word as a series.
    pub fn basis_element(w: LyndonWord, alphabet: usize, truncation: usize) -> Self {
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

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonWord, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &LyndonWord) -> Poly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Coefficient on the Lyndon word spelled by `text` (zero if absent).
    pub fn coeff_of(&self, text: &str) -> Poly {
        match parse_word(text, self.alphabet).ok().and_then(|w| LyndonWord::new(w).ok()) {
            Some(w) => self.coeff(&w),
            None => Poly::zero(),
        }
    }

    pub fn add_term(&mut self, w: LyndonWord, c: &Poly) {
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

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        let mut ds: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds.into_iter()
    }

    pub fn homogeneous(&self, degree: usize) -> Self {
        self.filter(|w| w.len() == degree)
    }

    pub fn filter(&self, keep: impl Fn(&LyndonWord) -> bool) -> Self {
        LieSeries {
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

    pub fn with_truncation(&self, truncation: usize) -> Self {
        let mut out = self.filter(|w| w.len() <= truncation);
        out.truncation = truncation;
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    /// Like [`map_coeffs`](Self::map_coeffs) with access to the degree.
    pub fn map_graded(&self, f: impl Fn(usize, &Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(w.len(), c));
        }
        out
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, other.alphabet));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
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
        self.map_coeffs(|v| v * c)
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.map_coeffs(|v| v.scale(c))
    }

    pub fn to_assoc(&self) -> AssocSeries {
        let mut out = AssocSeries::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            for (word, k) in bracketing_expansion(w).iter() {
                out.add_term(word.clone(), &c.scale(&rat_int(*k)));
            }
        }
        out
    }

    /// Lyndon coordinates of an associative element; fails unless the
    /// element is a Lie element with zero degree-0 part.
    pub fn from_assoc(a: &AssocSeries) -> Result<Self> {
        let mut out = LieSeries::zero(a.alphabet(), a.truncation());
        let mut rest: BTreeMap<Word, Poly> =
            a.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        // words sort by letters, so the first key is the smallest word of
        // its length only within one degree: walk degrees separately
        let mut by_degree: BTreeMap<usize, BTreeMap<Word, Poly>> = BTreeMap::new();
        for (w, c) in std::mem::take(&mut rest) {
            by_degree.entry(w.len()).or_default().insert(w, c);
        }
        for (degree, mut part) in by_degree {
            if degree == 0 {
                return Err(Error::NotLie("(empty word)".into()));
            }
            while let Some((w, c)) = part.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
                let lw = LyndonWord::new(w.clone()).map_err(|_| Error::NotLie(word_to_string(&w)))?;
                for (word, k) in bracketing_expansion(&lw).iter() {
                    let entry = part.entry(word.clone()).or_default();
                    *entry -= &c.scale(&rat_int(*k));
                    if entry.is_zero() {
                        part.remove(word);
                    }
                }
                out.add_term(lw, &c);
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        Self::from_assoc(&self.to_assoc().commutator(&other.to_assoc()))
    }

    /// Derivation of the free Lie algebra extending `letter i ↦ images[i]`.
    pub fn derivation(&self, images: &[LieSeries]) -> Result<Self> {
        let imgs: Vec<AssocSeries> = images.iter().map(|l| l.to_assoc()).collect();
        let n = images.iter().map(|l| l.truncation).min().unwrap_or(self.truncation);
        let out = Self::from_assoc(&self.with_truncation(n.min(self.truncation)).to_assoc().derive(&imgs)?)?;
        Ok(out.with_truncation(n.min(self.truncation)))
    }

    /// Substitutes a Lie series for each letter.
    pub fn substitute(&self, images: &[LieSeries]) -> Result<Self> {
        if images.len() != self.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, images.len()));
        }
        let imgs: Vec<AssocSeries> = images.iter().map(|l| l.to_assoc()).collect();
        Self::from_assoc(&self.to_assoc().substitute(&imgs)?)
    }

    /// Multiplies the degree-`n` part by `t^(n + power_offset)`.
    pub fn rescale(&self, power_offset: i64) -> Result<Self> {
        let mut out = Self::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            let p = w.len() as i64 + power_offset;
            if p < 0 {
                return Err(Error::NegativePower { degree: w.len() });
            }
            out.add_term(w.clone(), &c.shift(0, p as u32));
        }
        Ok(out)
    }

    /// Sum of absolute values of the degree-`n` Lyndon coefficients: the
    /// value of one particular presentation, hence an upper bound for the
    /// minimal presentation norm. Parameter-dependent coefficients
    /// contribute the absolute sum of their polynomial coefficients, which
    /// bounds the value anywhere on `[0,1]²`.
    pub fn norm_proxy(&self, n: usize) -> Rational {
        self.terms
            .iter()
            .filter(|(w, _)| w.len() == n)
            .fold(Rational::zero(), |acc, (_, c)| acc + c.abs_sum())
    }

    pub fn deriv_t(&self) -> Self {
        self.map_coeffs(Poly::deriv_t)
    }

    pub fn deriv_s(&self) -> Self {
        self.map_coeffs(Poly::deriv_s)
    }

    pub fn integrate_s(&self) -> Self {
        self.map_coeffs(Poly::integrate_s)
    }

    pub fn subs_s(&self, s: &Rational) -> Self {
        self.map_coeffs(|c| c.subs_s(s))
    }

    pub fn subs_t(&self, t: &Rational) -> Self {
        self.map_coeffs(|c| c.subs_t(t))
    }

    /// True when no coefficient depends on `s` or `t`.
    pub fn is_parameter_free(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs_sum())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }
}

impl fmt::Display for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c})·{w}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieSeries[{}; N={}]({self})", self.alphabet, self.truncation)
    }
}

/// Formal bracket expression over named letters.
#[derive(Clone, Debug, PartialEq)]
pub enum BracketExpr {
    Letter(char),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
    Scaled(Rational, Box<BracketExpr>),
    Sum(Vec<BracketExpr>),
}

impl BracketExpr {
    pub fn letter(c: char) -> Self {
        BracketExpr::Letter(c)
    }

    pub fn bracket(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn degree_bound(&self) -> usize {
        match self {
            BracketExpr::Letter(_) => 1,
            BracketExpr::Bracket(a, b) => a.degree_bound() + b.degree_bound(),
            BracketExpr::Scaled(_, e) => e.degree_bound(),
            BracketExpr::Sum(es) => es.iter().map(|e| e.degree_bound()).max().unwrap_or(1),
        }
    }

    /// Parses expressions such as `[[x,y],x]`.
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (expr, rest) = parse_expr(&chars)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing input in {text:?}")));
        }
        Ok(expr)
    }

    fn to_assoc(&self, alphabet: usize, truncation: usize) -> Result<AssocSeries> {
        Ok(match self {
            BracketExpr::Letter(c) => {
                let w = parse_word(&c.to_string(), alphabet)?;
                AssocSeries::word(w, alphabet, truncation)
            }
            BracketExpr::Bracket(a, b) => a
                .to_assoc(alphabet, truncation)?
                .commutator(&b.to_assoc(alphabet, truncation)?),
            BracketExpr::Scaled(r, e) => e.to_assoc(alphabet, truncation)?.scale_rat(r),
            BracketExpr::Sum(es) => {
                let mut out = AssocSeries::zero(alphabet, truncation);
                for e in es {
                    out = out.add(&e.to_assoc(alphabet, truncation)?);
                }
                out
            }
        })
    }
}

fn parse_expr(chars: &[char]) -> Result<(BracketExpr, &[char])> {
    match chars.first() {
        Some('[') => {
            let (a, rest) = parse_expr(&chars[1..])?;
            if rest.first() != Some(&',') {
                return Err(Error::Parse("expected ',' in bracket".into()));
            }
            let (b, rest) = parse_expr(&rest[1..])?;
            if rest.first() != Some(&']') {
                return Err(Error::Parse("expected ']'".into()));
            }
            Ok((BracketExpr::bracket(a, b), &rest[1..]))
        }
        Some(c) if c.is_alphabetic() => Ok((BracketExpr::Letter(*c), &chars[1..])),
        other => Err(Error::Parse(format!("unexpected {other:?} in bracket expression"))),
    }
}

/// Lyndon coordinates of a bracket expression.
pub fn to_lyndon_coordinates(expr: &BracketExpr, alphabet: usize) -> Result<LieSeries> {
    let n = expr.degree_bound();
    LieSeries::from_assoc(&expr.to_assoc(alphabet, n)?)
}

/// Standard bracketing of a Lyndon word as an expression.
pub fn standard_bracketing(w: &LyndonWord) -> BracketExpr {
    match w.factorization() {
        None => BracketExpr::Letter(letter_name(w.letters()[0])),
        Some((u, v)) => BracketExpr::bracket(standard_bracketing(&u), standard_bracketing(&v)),
    }
}

/// Basis of the degree-`n` part, in Lyndon order.
pub fn lyndon_coordinates_basis(n: usize, alphabet: usize) -> Vec<LyndonWord> {
    lyndon_basis(n, alphabet)
}

/// A pair `(β¹, β²)` of Lie series in `x, y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentPair {
    pub beta1: LieSeries,
    pub beta2: LieSeries,
}

impl TangentPair {
    pub fn new(beta1: LieSeries, beta2: LieSeries) -> Result<Self> {
        if beta1.alphabet() != 2 || beta2.alphabet() != 2 {
            return Err(Error::AlphabetMismatch(2, beta1.alphabet().max(beta2.alphabet())));
        }
        let n = beta1.truncation().min(beta2.truncation());
        Ok(TangentPair {
            beta1: beta1.with_truncation(n),
            beta2: beta2.with_truncation(n),
        })
    }

    pub fn zero(truncation: usize) -> Self {
        TangentPair {
            beta1: LieSeries::zero(2, truncation),
            beta2: LieSeries::zero(2, truncation),
        }
    }

    pub fn truncation(&self) -> usize {
        self.beta1.truncation()
    }

    pub fn is_zero(&self) -> bool {
        self.beta1.is_zero() && self.beta2.is_zero()
    }

    pub fn map(&self, f: impl Fn(&LieSeries) -> LieSeries) -> Self {
        TangentPair {
            beta1: f(&self.beta1),
            beta2: f(&self.beta2),
        }
    }

    pub fn try_map(&self, f: impl Fn(&LieSeries) -> Result<LieSeries>) -> Result<Self> {
        Ok(TangentPair {
            beta1: f(&self.beta1)?,
            beta2: f(&self.beta2)?,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        TangentPair {
            beta1: self.beta1.add(&other.beta1),
            beta2: self.beta2.add(&other.beta2),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TangentPair {
            beta1: self.beta1.sub(&other.beta1),
            beta2: self.beta2.sub(&other.beta2),
        }
    }

    pub fn scale(&self, c: &Poly) -> Self {
        self.map(|l| l.scale(c))
    }

    pub fn homogeneous(&self, degree: usize) -> Self {
        self.map(|l| l.homogeneous(degree))
    }

    pub fn with_truncation(&self, n: usize) -> Self {
        self.map(|l| l.with_truncation(n))
    }

    pub fn rescale(&self, power_offset: i64) -> Result<Self> {
        self.try_map(|l| l.rescale(power_offset))
    }

    pub fn deriv_t(&self) -> Self {
        self.map(LieSeries::deriv_t)
    }

    pub fn deriv_s(&self) -> Self {
        self.map(LieSeries::deriv_s)
    }

    pub fn subs_s(&self, s: &Rational) -> Self {
        self.map(|l| l.subs_s(s))
    }

    pub fn subs_t(&self, t: &Rational) -> Self {
        self.map(|l| l.subs_t(t))
    }

    /// `C_n(β)` proxy: maximum over the two components.
    pub fn norm_proxy(&self, n: usize) -> Rational {
        let a = self.beta1.norm_proxy(n);
        let b = self.beta2.norm_proxy(n);
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn max_degree(&self) -> usize {
        self.beta1
            .degrees()
            .chain(self.beta2.degrees())
            .max()
            .unwrap_or(0)
    }

    /// Images of the generators under `L_β`: `x ↦ [x, β¹]`, `y ↦ [y, β²]`.
    pub fn generator_images(&self) -> Result<[LieSeries; 2]> {
        let n = self.truncation();
        let x = LieSeries::letter(0, 2, n);
        let y = LieSeries::letter(1, 2, n);
        Ok([x.bracket(&self.beta1)?, y.bracket(&self.beta2)?])
    }
}

/// `L_β target`, the derivation with `L_β x = [x, β¹]`, `L_β y = [y, β²]`.
pub fn tangential_derivation(beta: &TangentPair, target: &LieSeries) -> Result<LieSeries> {
    if target.alphabet() != 2 {
        return Err(Error::AlphabetMismatch(2, target.alphabet()));
    }
    let images = beta.generator_images()?;
    let n = beta.truncation().min(target.truncation());
    Ok(target.with_truncation(n).derivation(&images)?.with_truncation(n))
}

pub fn tangential_derivation_pair(beta: &TangentPair, target: &TangentPair) -> Result<TangentPair> {
    target.try_map(|l| tangential_derivation(beta, l))
}

/// `[β, γ] = L_β γ − L_γ β + [β, γ]₀`.
pub fn tangential_bracket(a: &TangentPair, b: &TangentPair) -> Result<TangentPair> {
    let lab = tangential_derivation_pair(a, b)?;
    let lba = tangential_derivation_pair(b, a)?;
    let zero_bracket = TangentPair {
        beta1: a.beta1.bracket(&b.beta1)?,
        beta2: a.beta2.bracket(&b.beta2)?,
    };
    Ok(lab.sub(&lba).add(&zero_bracket))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(n: usize) -> LieSeries {
        LieSeries::letter(0, 2, n)
    }
    fn y(n: usize) -> LieSeries {
        LieSeries::letter(1, 2, n)
    }
    fn lw(s: &str) -> LyndonWord {
        LyndonWord::new(parse_word(s, 2).unwrap()).unwrap()
    }

    #[test]
    fn coordinates_of_small_brackets() {
        let xy = to_lyndon_coordinates(&BracketExpr::parse("[x,y]").unwrap(), 2).unwrap();
        assert_eq!(xy.coeff(&lw("xy")), Poly::one());
        let yx = to_lyndon_coordinates(&BracketExpr::parse("[y,x]").unwrap(), 2).unwrap();
        assert_eq!(yx.coeff(&lw("xy")), Poly::int(-1));
        let e = to_lyndon_coordinates(&BracketExpr::parse("[[x,y],x]").unwrap(), 2).unwrap();
        assert_eq!(e.num_terms(), 1);
        assert_eq!(e.coeff(&lw("xxy")), Poly::int(-1));
    }

    #[test]
    fn unknown_letters_are_rejected() {
        let e = BracketExpr::parse("[x,q]").unwrap();
        assert!(matches!(to_lyndon_coordinates(&e, 2), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn standard_bracketing_round_trip() {
        for n in 1..=6 {
            for w in lyndon_basis(n, 2) {
                let l = to_lyndon_coordinates(&standard_bracketing(&w), 2).unwrap();
                assert_eq!(l, LieSeries::basis_element(w.clone(), 2, n), "word {w}");
            }
        }
    }

    #[test]
    fn non_lie_elements_are_detected() {
        let a = AssocSeries::word(vec![0, 1], 2, 3);
        assert!(matches!(LieSeries::from_assoc(&a), Err(Error::NotLie(_))));
    }

    #[test]
    fn bracket_examples() {
        let n = 4;
        let xy = x(n).bracket(&y(n)).unwrap();
        assert_eq!(xy.coeff(&lw("xy")), Poly::one());
        let s = x(n).add(&y(n));
        assert!(s.bracket(&s).unwrap().is_zero());
        let lhs = s.bracket(&xy).unwrap();
        let rhs = x(n).bracket(&xy).unwrap().add(&y(n).bracket(&xy).unwrap());
        assert_eq!(lhs, rhs);
        // [x+y,[x,y]] = [x,[x,y]] − [y,[y,x]]... in Lyndon terms: xxy − xyy
        assert_eq!(lhs.coeff(&lw("xxy")), Poly::one());
        assert_eq!(lhs.coeff(&lw("xyy")), Poly::int(-1));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = LieSeries::letter(0, 2, 3);
        let b = LieSeries::letter(0, 3, 3);
        assert!(matches!(a.bracket(&b), Err(Error::AlphabetMismatch(2, 3))));
    }

    #[test]
    fn bracket_truncates_at_smaller_order() {
        let a = LieSeries::letter(0, 2, 2);
        let b = x(5).bracket(&y(5)).unwrap();
        assert!(a.bracket(&b).unwrap().is_zero());
    }

    #[test]
    fn derivation_generator_rule() {
        let beta = TangentPair::new(y(3), LieSeries::zero(2, 3)).unwrap();
        let got = tangential_derivation(&beta, &x(3)).unwrap();
        assert_eq!(got, x(3).bracket(&y(3)).unwrap());
        let zero = TangentPair::zero(3);
        assert!(tangential_derivation(&zero, &x(3).bracket(&y(3)).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn derivation_on_a_bracket() {
        // β = (y, x): L_β x = [x,y], L_β y = [y,x]
        let n = 3;
        let beta = TangentPair::new(y(n), x(n)).unwrap();
        let target = x(n).bracket(&y(n)).unwrap();
        let got = tangential_derivation(&beta, &target).unwrap();
        let xy = x(n).bracket(&y(n)).unwrap();
        let yx = y(n).bracket(&x(n)).unwrap();
        let want = xy.bracket(&y(n)).unwrap().add(&x(n).bracket(&yx).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn tangential_bracket_small_cases() {
        let n = 3;
        let b = TangentPair::new(y(n), LieSeries::zero(2, n)).unwrap();
        let g = TangentPair::new(LieSeries::zero(2, n), x(n)).unwrap();
        assert!(tangential_bracket(&b, &b).unwrap().is_zero());
        assert!(tangential_bracket(&b, &TangentPair::zero(n)).unwrap().is_zero());
        // L_β γ = (0, L_β x) = (0, [x,y]); L_γ β = ([y,x], 0); [β,γ]₀ = 0
        let got = tangential_bracket(&b, &g).unwrap();
        let xy = x(n).bracket(&y(n)).unwrap();
        assert_eq!(got.beta1, xy.clone());
        assert_eq!(got.beta2, xy);
    }

    #[test]
    fn rescale_examples() {
        let s = x(3).add(&y(3));
        assert_eq!(s.rescale(-1).unwrap(), s);
        let half = x(3).bracket(&y(3)).unwrap().scale_rat(&rat(1, 2));
        let r = half.rescale(-1).unwrap();
        assert_eq!(r.coeff(&lw("xy")), Poly::t().scale(&rat(1, 2)));
        assert_eq!(half.rescale(0).unwrap().subs_t(&rat(1, 1)), half);
        assert!(matches!(x(3).rescale(-2), Err(Error::NegativePower { degree: 1 })));
    }

    #[test]
    fn norm_proxy_examples() {
        let half = x(3).bracket(&y(3)).unwrap().scale_rat(&rat(1, 2));
        assert_eq!(half.norm_proxy(2), rat(1, 2));
        assert_eq!(LieSeries::zero(2, 3).norm_proxy(2), rat(0, 1));
    }
}
