//! Univariate power series with rational coefficients, and the handful of
//! analytic functions whose Taylor expansions get substituted into `ad`.

use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_int, Rational};

/// Truncated power series `Σ c_k u^k`, `coeffs[k] = c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniSeries {
    pub coeffs: Vec<Rational>,
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat_int(k))
}

impl UniSeries {
    pub fn from_fn(order: usize, f: impl Fn(usize) -> Rational) -> Self {
        UniSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn exp_series(order: usize) -> Self {
        Self::from_fn(order, |k| factorial(k).recip())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| {
            (0..=k).fold(Rational::zero(), |acc, i| acc + self.coeff(i) * other.coeff(k - i))
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.order(), |k| self.coeff(k) * c)
    }

    /// `f ∘ g` for `g` without constant term.
    pub fn compose(&self, g: &Self) -> Self {
        assert!(g.coeff(0).is_zero(), "inner series must vanish at 0");
        let n = self.order().min(g.order());
        let mut out = Self::from_fn(n, |_| Rational::zero());
        let mut power = Self::from_fn(n, |k| if k == 0 { Rational::one() } else { Rational::zero() });
        for k in 0..=n {
            for (i, c) in power.coeffs.iter().enumerate() {
                out.coeffs[i] += self.coeff(k) * c;
            }
            power = power.mul(g);
        }
        out
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Self {
        assert!(self.coeff(0).is_one(), "log needs constant term 1");
        let n = self.order();
        let log1p = Self::from_fn(n, |k| {
            if k == 0 {
                Rational::zero()
            } else if k % 2 == 1 {
                Rational::new(1.into(), (k as i64).into())
            } else {
                Rational::new((-1).into(), (k as i64).into())
            }
        });
        let mut g = self.clone();
        g.coeffs[0] = Rational::zero();
        log1p.compose(&g)
    }

    /// Exponential of a series without constant term.
    pub fn exp(&self) -> Self {
        Self::exp_series(self.order()).compose(self)
    }

    /// Reciprocal of a series with nonzero constant term.
    pub fn recip(&self) -> Self {
        let n = self.order();
        let a0 = self.coeff(0);
        assert!(!a0.is_zero(), "reciprocal needs a unit");
        let mut out: Vec<Rational> = vec![a0.recip()];
        for k in 1..=n {
            let s = (1..=k).fold(Rational::zero(), |acc, i| acc + self.coeff(i) * &out[k - i]);
            out.push(-s / &a0);
        }
        UniSeries { coeffs: out }
    }
}

/// Bernoulli numbers with `B₁ = −½`, i.e. `u/(e^u − 1) = Σ B_n uⁿ/n!`.
pub fn bernoulli(n: usize) -> Rational {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        let m = b.len();
        // Σ_{k<m} C(m+1, k) B_k = −(m+1) B_m
        let mut s = Rational::zero();
        let mut binom = Rational::one();
        for (k, bk) in b.iter().enumerate() {
            s += &binom * bk;
            binom = binom * rat_int((m + 1 - k) as i64) / rat_int(k as i64 + 1);
        }
        b.push(-s / rat_int(m as i64 + 1));
    }
    b[n].clone()
}

/// The named analytic functions used with `ad` arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticFn {
    /// `(1 − e^{−u})/u`
    OneMinusExpNegOverU,
    /// `u/(e^u − 1)`
    UOverExpMinusOne,
    /// `e^u − 1`
    ExpMinusOne,
    /// `1 − e^{−u}`
    OneMinusExpNeg,
    /// `log((1 − e^{−u})/u)`
    LogJ,
}

impl AnalyticFn {
    pub const ALL: [AnalyticFn; 5] = [
        AnalyticFn::OneMinusExpNegOverU,
        AnalyticFn::UOverExpMinusOne,
        AnalyticFn::ExpMinusOne,
        AnalyticFn::OneMinusExpNeg,
        AnalyticFn::LogJ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalyticFn::OneMinusExpNegOverU => "(1-e^-u)/u",
            AnalyticFn::UOverExpMinusOne => "u/(e^u-1)",
            AnalyticFn::ExpMinusOne => "e^u-1",
            AnalyticFn::OneMinusExpNeg => "1-e^-u",
            AnalyticFn::LogJ => "log((1-e^-u)/u)",
        }
    }

    pub fn taylor(self, order: usize) -> UniSeries {
        let sign = |k: usize| if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        match self {
            AnalyticFn::OneMinusExpNegOverU => {
                UniSeries::from_fn(order, |k| sign(k) / factorial(k + 1))
            }
            AnalyticFn::UOverExpMinusOne => UniSeries::from_fn(order, |k| bernoulli(k) / factorial(k)),
            AnalyticFn::ExpMinusOne => UniSeries::from_fn(order, |k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    factorial(k).recip()
                }
            }),
            AnalyticFn::OneMinusExpNeg => UniSeries::from_fn(order, |k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    -sign(k) / factorial(k)
                }
            }),
            AnalyticFn::LogJ => AnalyticFn::OneMinusExpNegOverU.taylor(order).log(),
        }
    }
}

impl FromStr for AnalyticFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let alias = match key.as_str() {
            "one_minus_exp_neg_over_u" => Some(AnalyticFn::OneMinusExpNegOverU),
            "u_over_exp_minus_one" | "bernoulli" => Some(AnalyticFn::UOverExpMinusOne),
            "exp_minus_one" => Some(AnalyticFn::ExpMinusOne),
            "one_minus_exp_neg" => Some(AnalyticFn::OneMinusExpNeg),
            "log_j" | "logJ" => Some(AnalyticFn::LogJ),
            _ => None,
        };
        alias
            .or_else(|| {
                AnalyticFn::ALL
                    .into_iter()
                    .find(|f| f.name().replace('−', "-") == key.replace('−', "-"))
            })
            .ok_or(Error::UnknownSeries(s.to_string()))
    }
}
