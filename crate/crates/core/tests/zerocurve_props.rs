mod common;

use kvforge::freelie::{LieSeries, TangentPair};
use kvforge::kvsolve::solve_kv;
use kvforge::scalar::{rat, Poly, Rational};
use kvforge::words::lyndon_basis;
use kvforge::zerocurve::{
    estimate_check, flatness_residual, growth_check, scale_family, scaling_check, zc_series, zc_series_at,
};
use proptest::prelude::*;

/// Lie series in degrees `1..=max_deg` with coefficients `a + b s + c s²`.
fn s_family(max_deg: usize) -> impl Strategy<Value = LieSeries> {
    let words: Vec<_> = (1..=max_deg).flat_map(|d| lyndon_basis(d, 2)).collect();
    let k = words.len();
    proptest::collection::vec((-2i64..=2, -2i64..=2, -1i64..=1), k).prop_map(move |cs| {
        let mut l = LieSeries::zero(2, max_deg + 1);
        for (w, (a, b, c)) in words.iter().zip(cs) {
            let p = Poly::int(a) + Poly::s().scale(&rat(b, 1)) + (Poly::s() * Poly::s()).scale(&rat(c, 2));
            l.add_term(w.clone(), &p);
        }
        l
    })
}

fn gamma_family() -> impl Strategy<Value = TangentPair> {
    (s_family(4), s_family(4)).prop_map(|(a, b)| scale_family(&TangentPair::new(a, b).unwrap()))
}

/// `D` with `C_n ≤ Dⁿ` for every input in every degree.
fn norm_bound(pairs: &[&TangentPair]) -> Rational {
    let mut d = rat(1, 1);
    for p in pairs {
        for n in 1..=p.truncation() {
            let c = p.norm_proxy(n);
            // smallest integer D with c ≤ Dⁿ
            while kvforge::scalar::pow_rat(&d, n as u32) < c {
                d += rat(1, 1);
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn zc_series_is_flat_and_scaled(gamma in gamma_family()) {
        let beta = zc_series(&gamma).unwrap();
        prop_assert!(flatness_residual(&beta, &gamma).unwrap().is_zero());
        prop_assert!(scaling_check(&beta));
        // β_{0,t} = 0
        prop_assert!(beta.subs_s(&rat(0, 1)).is_zero());
    }

    #[test]
    fn growth_bound(gamma in gamma_family()) {
        prop_assert!(growth_check(&gamma).unwrap().all_hold());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn estimate_lemma_on_random_samples(
        b1 in common::tangent_pair(1, 2, 5),
        b2 in common::tangent_pair(1, 1, 5),
        b3 in common::tangent_pair(1, 1, 5),
        gamma in common::tangent_pair(1, 2, 5),
    ) {
        let d = norm_bound(&[&b1, &b2, &b3, &gamma]);
        let report = estimate_check(&[b1, b2, b3], &gamma, &d).unwrap();
        prop_assert!(report.hypothesis_holds);
        prop_assert!(report.all_hold(), "{:?}", report.lines.iter().filter(|l| !l.holds).collect::<Vec<_>>());
    }
}

#[test]
fn kv_solution_family_is_flat() {
    // γ_s = s·β: the series reproduces a flat family through degree 4
    let beta = solve_kv(5).unwrap();
    let gamma = beta.scale(&Poly::s());
    let out = zc_series(&gamma).unwrap();
    assert!(flatness_residual(&out, &gamma).unwrap().is_zero());
}

#[test]
fn endpoint_bounds() {
    let gamma = TangentPair::new(LieSeries::letter(0, 2, 3), LieSeries::letter(1, 2, 3))
        .unwrap()
        .scale(&Poly::s());
    assert!(zc_series_at(&scale_family(&gamma), &rat(1, 2)).is_ok());
    assert!(zc_series_at(&gamma, &rat(3, 2)).is_err());
}

#[test]
fn broken_family_fails_scaling() {
    let gamma = scale_family(&TangentPair::new(LieSeries::letter(0, 2, 4), LieSeries::letter(1, 2, 4)).unwrap().scale(&Poly::s()));
    let beta = zc_series(&gamma).unwrap();
    assert!(scaling_check(&beta));
    let broken = beta.scale(&Poly::t());
    assert!(!scaling_check(&broken));
}
