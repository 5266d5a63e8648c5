//! Truncated Taylor polynomials in finitely many variables, with
//! coefficients polynomial in `s, t`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{pow_rat, Poly, Rational};

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedFunction {
    nvars: usize,
    cap: usize,
    terms: BTreeMap<Monomial, Poly>,
}

fn degree(m: &Monomial) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

impl TruncatedFunction {
    pub fn zero(nvars: usize, cap: usize) -> Self {
        TruncatedFunction {
            nvars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Poly, nvars: usize, cap: usize) -> Self {
        let mut out = Self::zero(nvars, cap);
        out.add_term(vec![0; nvars], &c);
        out
    }

    pub fn one(nvars: usize, cap: usize) -> Self {
        Self::constant(Poly::one(), nvars, cap)
    }

    pub fn var(i: usize, nvars: usize, cap: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut out = Self::zero(nvars, cap);
        out.add_term(m, &Poly::one());
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Poly {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, m: Monomial, c: &Poly) {
        if degree(&m) > self.cap || c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        let mut out = Self::zero(self.nvars, cap);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn homogeneous(&self, d: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.cap);
        for (m, c) in self.terms.iter().filter(|(m, _)| degree(m) == d) {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_cap(self.cap.min(other.cap));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.nvars, self.cap);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> Self {
        self.map(|v| v * c)
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.map(|v| v.scale(r))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(self.nvars, cap);
        for (a, ca) in &self.terms {
            let da = degree(a);
            if da > cap {
                continue;
            }
            for (b, cb) in &other.terms {
                if da + degree(b) > cap {
                    continue;
                }
                let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }

    /// `Σ_k coeffs[k] f^k` for `f` without constant term.
    pub fn compose_series(&self, coeffs: &[Rational]) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Invalid("series substitution needs f(0) = 0".into()));
        }
        let mut out = Self::zero(self.nvars, self.cap);
        let mut power = Self::one(self.nvars, self.cap);
        for (k, c) in coeffs.iter().enumerate().take(self.cap + 1) {
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
        let coeffs = crate::series::UniSeries::exp_series(self.cap).coeffs;
        self.compose_series(&coeffs)
    }

    /// Logarithm of a function with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != Poly::one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        let g = self.sub(&Self::one(self.nvars, self.cap));
        let coeffs: Vec<Rational> = (0..=self.cap)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    let s = if k % 2 == 1 { 1 } else { -1 };
                    crate::scalar::rat(s, k as i64)
                }
            })
            .collect();
        g.compose_series(&coeffs)
    }

    pub fn deriv_t(&self) -> Self {
        self.map(Poly::deriv_t)
    }

    pub fn subs_t(&self, t: &Rational) -> Self {
        self.map(|c| c.subs_t(t))
    }

    /// `f(t·z)`: each monomial of degree `d` picks up `t^d`.
    pub fn rescale_vars(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.cap);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.shift(0, degree(m) as u32));
        }
        out
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.cap);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut d = m.clone();
            d[i] -= 1;
            out.add_term(d, &c.scale(&Rational::from_integer((m[i] as i64).into())));
        }
        out
    }

    /// Value at a rational point (coefficients stay polynomial in `s, t`).
    pub fn eval(&self, point: &[Rational]) -> Result<Poly> {
        if point.len() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let v = m
                .iter()
                .zip(point)
                .fold(Rational::from_integer(1.into()), |acc, (&e, x)| acc * pow_rat(x, e));
            out += &c.scale(&v);
        }
        Ok(out)
    }
}

impl fmt::Debug for TruncatedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})·x^{m:?}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub type FnMatrix = Vec<Vec<TruncatedFunction>>;

pub fn mat_mul(a: &FnMatrix, b: &FnMatrix) -> FnMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let proto = &a[0][0];
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..inner).fold(
                        TruncatedFunction::zero(proto.nvars(), proto.cap()),
                        |acc, k| acc.add(&a[i][k].mul(&b[k][j])),
                    )
                })
                .collect()
        })
        .collect()
}

pub fn mat_trace(a: &FnMatrix) -> TruncatedFunction {
    let proto = &a[0][0];
    (0..a.len()).fold(TruncatedFunction::zero(proto.nvars(), proto.cap()), |acc, i| {
        acc.add(&a[i][i])
    })
}

pub fn mat_vec(a: &FnMatrix, v: &[TruncatedFunction]) -> Vec<TruncatedFunction> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(TruncatedFunction::zero(v[0].nvars(), v[0].cap()), |acc, (m, x)| {
                    acc.add(&m.mul(x))
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exp_log_round_trip() {
        let x = TruncatedFunction::var(0, 2, 5);
        let y = TruncatedFunction::var(1, 2, 5);
        let f = x.add(&y.mul(&x)).scale_rat(&rat(1, 3));
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn product_truncates() {
        let x = TruncatedFunction::var(0, 1, 2);
        assert!(x.mul(&x).mul(&x).is_zero());
        assert_eq!(x.mul(&x).eval(&[rat(3, 1)]).unwrap(), Poly::int(9));
    }

    #[test]
    fn rescale_and_partial() {
        let x = TruncatedFunction::var(0, 2, 3);
        let f = x.mul(&x);
        assert_eq!(f.rescale_vars().coeff(&[2, 0]), Poly::t_pow(2));
        assert_eq!(f.partial(0), x.scale_rat(&rat(2, 1)));
    }
}
