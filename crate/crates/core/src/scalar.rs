//! Exact scalars: rationals, and polynomials over the rationals in the two
//! commuting formal parameters `s` and `t`.
//!
//! Every series in the crate carries [`Poly`] coefficients. A plain rational
//! is a constant polynomial, so `t`-families such as the rescaled
//! Campbell-Hausdorff series are exact polynomial identities rather than
//! sampled curves.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `num/den` (or `num` when integral).
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if text.is_empty() || text.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(text).map_err(|_| bad())?,
        )),
    }
}

/// Exponent pair `(s_exp, t_exp)`.
pub type Mono = (u32, u32);

/// Polynomial in `s`, `t` with exact rational coefficients; zero terms are
/// never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial((0, 0), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Poly::constant(rat(n, d))
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn s() -> Self {
        Poly::monomial((1, 0), Rational::one())
    }

    pub fn t() -> Self {
        Poly::monomial((0, 1), Rational::one())
    }

    pub fn t_pow(k: u32) -> Self {
        Poly::monomial((0, k), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Mono) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value when the polynomial is free of `s` and `t`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn add_term(&mut self, m: Mono, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(*m, &(v * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Multiplies by `s^ds t^dt`.
    pub fn shift(&self, ds: u32, dt: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), v)| ((a + ds, b + dt), v.clone()))
                .collect(),
        }
    }

    pub fn deriv_s(&self) -> Poly {
        let mut out = Poly::zero();
        for ((a, b), v) in &self.terms {
            if *a > 0 {
                out.add_term((a - 1, *b), &(v * rat_int(*a as i64)));
            }
        }
        out
    }

    pub fn deriv_t(&self) -> Poly {
        let mut out = Poly::zero();
        for ((a, b), v) in &self.terms {
            if *b > 0 {
                out.add_term((*a, b - 1), &(v * rat_int(*b as i64)));
            }
        }
        out
    }

    /// `∫_0^s p(σ, t) dσ`.
    pub fn integrate_s(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), v)| ((a + 1, *b), v / rat_int(*a as i64 + 1)))
                .collect(),
        }
    }

    pub fn degree_s(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0).max()
    }

    pub fn degree_t(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.1).max()
    }

    pub fn min_degree_t(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.1).min()
    }

    /// Substitutes a rational value for `s`.
    pub fn subs_s(&self, s: &Rational) -> Poly {
        let mut out = Poly::zero();
        for ((a, b), v) in &self.terms {
            out.add_term((0, *b), &(v * pow_rat(s, *a)));
        }
        out
    }

    /// Substitutes a rational value for `t`.
    pub fn subs_t(&self, t: &Rational) -> Poly {
        let mut out = Poly::zero();
        for ((a, b), v) in &self.terms {
            out.add_term((*a, 0), &(v * pow_rat(t, *b)));
        }
        out
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|((a, b), v)| v * pow_rat(s, *a) * pow_rat(t, *b))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn eval_f64(&self, s: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|((a, b), v)| {
                v.to_f64().unwrap_or(f64::NAN) * s.powi(*a as i32) * t.powi(*b as i32)
            })
            .sum()
    }

    /// Sum of absolute values of the coefficients. For a constant this is
    /// its absolute value.
    pub fn abs_sum(&self) -> Rational {
        self.terms
            .values()
            .fold(Rational::zero(), |acc, v| acc + v.abs())
    }
}

pub fn pow_rat(r: &Rational, k: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= r;
    }
    out
}

impl From<Rational> for Poly {
    fn from(r: Rational) -> Self {
        Poly::constant(r)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, v) in &rhs.terms {
            self.add_term(*m, v);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, v) in &rhs.terms {
            self.add_term(*m, &-v);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, -v)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // constant fast paths
        if let Some(c) = self.terms.get(&(0, 0)).filter(|_| self.terms.len() == 1) {
            return rhs.scale(c);
        }
        if let Some(c) = rhs.terms.get(&(0, 0)).filter(|_| rhs.terms.len() == 1) {
            return self.scale(c);
        }
        let mut out = Poly::zero();
        for ((a1, b1), v1) in &self.terms {
            for ((a2, b2), v2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), &(v1 * v2));
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((a, b), v) in &self.terms {
            let neg = v.is_negative();
            let mag = v.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !mag.is_one() || (*a == 0 && *b == 0) {
                factors.push(fmt_rational(&mag));
            }
            for (name, e) in [("s", *a), ("t", *b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Accepts sums of terms such as `1/2*t^2 - s*t + 3`.
    fn from_str(text: &str) -> Result<Poly> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        let mut out = Poly::zero();
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'-') => (-1, &piece[1..]),
                Some(b'+') => (1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {text:?}")));
            }
            let mut coeff = rat_int(sign);
            let mut mono = (0u32, 0u32);
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (
                        b,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?,
                    ),
                    None => (factor, 1),
                };
                match base {
                    "s" => mono.0 += exp,
                    "t" => mono.1 += exp,
                    _ => coeff *= pow_rat(&parse_rational(base)?, exp),
                }
            }
            out.add_term(mono, &coeff);
        }
        Ok(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Poly, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_agree() {
        let p = &(&Poly::frac(1, 2) * &Poly::t_pow(2)) - &(&Poly::s() * &Poly::t());
        let text = p.to_string();
        assert_eq!(text, "1/2*t^2 - s*t");
        assert_eq!(text.parse::<Poly>().unwrap(), p);
        assert_eq!("3".parse::<Poly>().unwrap(), Poly::int(3));
        assert_eq!("-2/4*s^2".parse::<Poly>().unwrap(), Poly::monomial((2, 0), rat(-1, 2)));
    }

    #[test]
    fn floats_are_rejected() {
        assert!("0.5".parse::<Poly>().is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn calculus_in_s_and_t() {
        let p = &Poly::s() * &Poly::t_pow(3);
        assert_eq!(p.deriv_t(), Poly::monomial((1, 2), rat_int(3)));
        assert_eq!(p.integrate_s(), Poly::monomial((2, 3), rat(1, 2)));
        assert_eq!(p.integrate_s().deriv_s(), p);
        assert_eq!(p.eval(&rat(1, 2), &rat(2, 1)), rat_int(4));
    }

    #[test]
    fn zero_terms_are_pruned() {
        let p = &Poly::t() - &Poly::t();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }
}
