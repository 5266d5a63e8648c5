//! The Campbell-Hausdorff series `Φ(x,y) = log(e^x e^y)`.
//!
//! [`dynkin_bch`] sums Dynkin's formula over block sequences; the
//! associative logarithm in [`assoc_log_bch`] is an independent check.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use num_traits::One;

use crate::assoc::AssocSeries;
use crate::error::Result;
use crate::freelie::LieSeries;
use crate::scalar::{rat_int, Poly, Rational};
use crate::words::Word;

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat_int(k))
}

fn cache() -> &'static Mutex<Option<LieSeries>> {
    static CACHE: OnceLock<Mutex<Option<LieSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(None))
}

/// `Φ` through degree `n` by Dynkin's formula
/// `Σ_k (−1)^{k−1}/k Σ 1/(|w| ∏ p_i! q_i!) θ(x^{p_1} y^{q_1} ⋯ x^{p_k} y^{q_k})`
/// with `θ` the right-nested bracketing.
pub fn dynkin_bch(n: usize) -> LieSeries {
    {
        let guard = cache().lock().unwrap();
        if let Some(phi) = guard.as_ref() {
            if phi.truncation() >= n {
                return phi.with_truncation(n);
            }
        }
    }
    let phi = compute_dynkin(n);
    *cache().lock().unwrap() = Some(phi.clone());
    phi
}

fn compute_dynkin(n: usize) -> LieSeries {
    // word → Σ (−1)^{k−1}/(k ∏ p!q!)
    let mut words: BTreeMap<Word, Rational> = BTreeMap::new();
    fn blocks(
        remaining: usize,
        k: usize,
        word: &mut Word,
        denom: Rational,
        out: &mut BTreeMap<Word, Rational>,
    ) {
        if !word.is_empty() {
            let sign = if k % 2 == 1 { rat_int(1) } else { rat_int(-1) };
            *out.entry(word.clone()).or_insert_with(|| rat_int(0)) +=
                sign / (rat_int(k as i64) * &denom);
        }
        for size in 1..=remaining {
            for p in 0..=size {
                let q = size - p;
                let len = word.len();
                word.extend(std::iter::repeat(0).take(p));
                word.extend(std::iter::repeat(1).take(q));
                blocks(
                    remaining - size,
                    k + 1,
                    word,
                    &denom * factorial(p) * factorial(q),
                    out,
                );
                word.truncate(len);
            }
        }
    }
    blocks(n, 0, &mut Vec::new(), Rational::one(), &mut words);

    let mut phi = LieSeries::zero(2, n);
    let gens = [AssocSeries::letter(0, 2, n), AssocSeries::letter(1, 2, n)];
    for degree in 1..=n {
        let mut ops = [AssocSeries::zero(2, n), AssocSeries::zero(2, n)];
        for (w, c) in words.iter().filter(|(w, _)| w.len() == degree) {
            let (last, head) = w.split_last().expect("nonempty");
            ops[*last as usize].add_term_rat(head.to_vec(), c);
        }
        let mut theta = AssocSeries::zero(2, n);
        for (i, op) in ops.iter().enumerate() {
            theta = theta.add(&op.apply_ad_words(&gens, &gens[i]).expect("two letters"));
        }
        let part = LieSeries::from_assoc(&theta).expect("Dynkin sums are Lie elements");
        phi = phi.add(&part.scale_rat(&rat_int(degree as i64).recip()));
    }
    phi
}

/// `Φ` as the Lie coordinates of `log(exp(x) exp(y))` in the truncated
/// associative algebra.
pub fn assoc_log_bch(n: usize) -> Result<LieSeries> {
    let x = AssocSeries::letter(0, 2, n);
    let y = AssocSeries::letter(1, 2, n);
    LieSeries::from_assoc(&x.exp()?.mul(&y.exp()?).log()?)
}

/// `Φ_t = t^{−1} r_t^* Φ`: degree-`n` part times `t^{n−1}`.
pub fn phi_t(n: usize) -> LieSeries {
    dynkin_bch(n)
        .rescale(-1)
        .expect("Φ has no degree-0 part")
}

/// Exchanges `x` and `y`.
pub fn swap_letters(l: &LieSeries) -> Result<LieSeries> {
    let n = l.truncation();
    l.substitute(&[LieSeries::letter(1, 2, n), LieSeries::letter(0, 2, n)])
}

/// `x + y − Φ(y, x)`.
pub fn kv3a_rhs(n: usize) -> LieSeries {
    let sum = LieSeries::letter(0, 2, n).add(&LieSeries::letter(1, 2, n));
    sum.sub(&swap_letters(&dynkin_bch(n)).expect("two letters"))
}

/// Coefficient accessor used in reports: `Φ` degree-`d` part as
/// `(word, coeff)` pairs.
pub fn degree_part(phi: &LieSeries, d: usize) -> Vec<(String, Poly)> {
    phi.homogeneous(d)
        .terms()
        .map(|(w, c)| (w.to_string(), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{to_lyndon_coordinates, BracketExpr};
    use crate::scalar::rat;

    fn lie(s: &str, n: usize) -> LieSeries {
        to_lyndon_coordinates(&BracketExpr::parse(s).unwrap(), 2)
            .unwrap()
            .with_truncation(n)
    }

    #[test]
    fn low_degrees() {
        let phi = dynkin_bch(3);
        let mut want = lie("x", 3).add(&lie("y", 3)).add(&lie("[x,y]", 3).scale_rat(&rat(1, 2)));
        want = want
            .add(&lie("[x,[x,y]]", 3).scale_rat(&rat(1, 12)))
            .add(&lie("[y,[y,x]]", 3).scale_rat(&rat(1, 12)));
        assert_eq!(phi, want);
        assert_eq!(phi.norm_proxy(3), rat(1, 6));
    }

    #[test]
    fn matches_associative_log() {
        for n in 1..=5 {
            assert_eq!(compute_dynkin(n), assoc_log_bch(n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn phi_t_values() {
        let p = phi_t(3);
        assert_eq!(p.subs_t(&rat(0, 1)), lie("x", 3).add(&lie("y", 3)));
        assert_eq!(p.subs_t(&rat(1, 1)), dynkin_bch(3));
        assert_eq!(p.coeff_of("xy"), Poly::t().scale(&rat(1, 2)));
    }

    #[test]
    fn kv3a_rhs_values() {
        let r = kv3a_rhs(3);
        assert!(r.homogeneous(1).is_zero());
        assert_eq!(r.homogeneous(2), lie("[x,y]", 3).scale_rat(&rat(1, 2)));
        let want3 = lie("[y,[y,x]]", 3)
            .add(&lie("[x,[x,y]]", 3))
            .scale_rat(&rat(-1, 12));
        assert_eq!(r.homogeneous(3), want3);
    }
}
