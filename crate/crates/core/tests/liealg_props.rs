mod common;

use kvforge::bch;
use kvforge::freelie::{LieSeries, TangentPair};
use kvforge::kvsolve::{kv3a_residual, solve_kv};
use kvforge::liealg::flow::{convergence_study, flow_demo, FlowOptions, VectorFamily};
use kvforge::liealg::{
    builtin, eval_lie, eval_lie_symbolic, j_function, mat_mul, mat_vec, FnMatrix, StructLie, TruncatedFunction,
};
use kvforge::scalar::{rat, Rational};
use proptest::prelude::*;

fn vector() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eval_is_homomorphism(
        a in common::lie_series(1, 3, 5),
        b in common::lie_series(1, 2, 5),
        x in vector(),
        y in vector(),
    ) {
        for name in ["heisenberg3", "sl2"] {
            let g = builtin(name).unwrap();
            let pt = [x.clone(), y.clone()];
            let lhs = eval_lie(&a.bracket(&b).unwrap(), &g, &pt).unwrap();
            let ea: Vec<Rational> = eval_lie(&a, &g, &pt).unwrap().iter().map(|p| p.as_constant().unwrap()).collect();
            let eb: Vec<Rational> = eval_lie(&b, &g, &pt).unwrap().iter().map(|p| p.as_constant().unwrap()).collect();
            let rhs: Vec<Rational> = g.bracket(&ea, &eb);
            let lhs: Vec<Rational> = lhs.iter().map(|p| p.as_constant().unwrap()).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

/// Matrix realization used to build `log(e^Y e^X)` without any series in
/// the free Lie algebra.
struct Realization {
    size: usize,
    /// `(row, col)` of the matrix unit representing each basis vector.
    units: Vec<(usize, usize)>,
}

fn realization(name: &str) -> Realization {
    match name {
        // e1 = E11, e2 = E12
        "solvable2" => Realization { size: 2, units: vec![(0, 0), (0, 1)] },
        // e1 = E12, e2 = E23, e3 = E13
        "heisenberg3" => Realization { size: 3, units: vec![(0, 1), (1, 2), (0, 2)] },
        _ => unreachable!(),
    }
}

fn to_matrix(r: &Realization, v: &[TruncatedFunction]) -> FnMatrix {
    let z = TruncatedFunction::zero(v[0].nvars(), v[0].cap());
    let mut m = vec![vec![z; r.size]; r.size];
    for (&(i, j), c) in r.units.iter().zip(v) {
        m[i][j] = m[i][j].add(c);
    }
    m
}

fn from_matrix(r: &Realization, m: &FnMatrix) -> Vec<TruncatedFunction> {
    r.units.iter().map(|&(i, j)| m[i][j].clone()).collect()
}

fn mat_add(a: &FnMatrix, b: &FnMatrix, c: &Rational) -> FnMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(&y.scale_rat(c))).collect())
        .collect()
}

fn identity(n: usize, nvars: usize, cap: usize) -> FnMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        TruncatedFunction::one(nvars, cap)
                    } else {
                        TruncatedFunction::zero(nvars, cap)
                    }
                })
                .collect()
        })
        .collect()
}

/// `Σ_k coeffs[k] A^k` (`A` has entries vanishing at the origin).
fn mat_series(a: &FnMatrix, coeffs: impl Fn(usize) -> Rational, cap: usize) -> FnMatrix {
    let (n, nvars) = (a.len(), a[0][0].nvars());
    let mut out = mat_add(&identity(n, nvars, cap), &identity(n, nvars, cap), &rat(-1, 1));
    let mut power = identity(n, nvars, cap);
    for k in 0..=cap {
        out = mat_add(&out, &power, &coeffs(k));
        power = mat_mul(&power, a);
    }
    out
}

fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(rat(1, 1), |acc, i| acc * rat(i, 1))
}

fn apply_series(ad: &FnMatrix, v: &[TruncatedFunction], coeffs: impl Fn(usize) -> Rational, cap: usize) -> Vec<TruncatedFunction> {
    mat_vec(&mat_series(ad, coeffs, cap), v)
}

/// `(1 − e^{−ad_X})B¹ + (e^{ad_Y} − 1)B² − (X + Y − log(e^Y e^X))`, computed
/// in `g` with `X, Y` symbolic.
fn concrete_kv3a(g: &StructLie, beta: &TangentPair, cap: usize) -> Vec<TruncatedFunction> {
    let d = g.dim();
    let nvars = 2 * d;
    let x: Vec<_> = (0..d).map(|i| TruncatedFunction::var(i, nvars, cap)).collect();
    let y: Vec<_> = (0..d).map(|i| TruncatedFunction::var(d + i, nvars, cap)).collect();
    let b1 = eval_lie_symbolic(&beta.beta1, g, cap);
    let b2 = eval_lie_symbolic(&beta.beta2, g, cap);
    let ad_x = g.ad_symbolic(nvars, 0, cap);
    let ad_y = g.ad_symbolic(nvars, d, cap);
    let one_minus_exp_neg = |k: usize| {
        if k == 0 {
            rat(0, 1)
        } else {
            rat(if k % 2 == 1 { 1 } else { -1 }, 1) / factorial(k)
        }
    };
    let exp_minus_one = |k: usize| if k == 0 { rat(0, 1) } else { rat(1, 1) / factorial(k) };
    let lhs1 = apply_series(&ad_x, &b1, one_minus_exp_neg, cap);
    let lhs2 = apply_series(&ad_y, &b2, exp_minus_one, cap);

    let r = realization(&g.name);
    let exp = |k: usize| rat(1, 1) / factorial(k);
    let ey = mat_series(&to_matrix(&r, &y), exp, cap);
    let ex = mat_series(&to_matrix(&r, &x), exp, cap);
    let prod = mat_mul(&ey, &ex);
    let z = mat_add(&prod, &identity(r.size, nvars, cap), &rat(-1, 1));
    let log = |k: usize| if k == 0 { rat(0, 1) } else { rat(if k % 2 == 1 { 1 } else { -1 }, k as i64) };
    let phi = from_matrix(&r, &mat_series(&z, log, cap));

    (0..d)
        .map(|k| lhs1[k].add(&lhs2[k]).sub(&x[k].add(&y[k]).sub(&phi[k])))
        .collect()
}

fn check_consistency(beta: &TangentPair, name: &str) {
    let g = builtin(name).unwrap();
    let cap = beta.truncation();
    let universal = eval_lie_symbolic(&kv3a_residual(beta).unwrap(), &g, cap);
    let concrete = concrete_kv3a(&g, beta, cap);
    assert_eq!(universal, concrete, "{name}");
}

#[test]
fn universal_matches_concrete_on_solution() {
    let beta = solve_kv(4).unwrap();
    for name in ["heisenberg3", "solvable2"] {
        check_consistency(&beta, name);
        let g = builtin(name).unwrap();
        assert!(eval_lie_symbolic(&kv3a_residual(&beta).unwrap(), &g, 4).iter().all(|f| f.is_zero()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn universal_matches_concrete_on_random_pairs(beta in common::tangent_pair(1, 2, 4)) {
        for name in ["heisenberg3", "solvable2"] {
            check_consistency(&beta, name);
        }
    }
}

#[test]
fn concrete_bch_agrees_with_series() {
    // the matrix side alone reproduces the Dynkin series in solvable2
    let g = builtin("solvable2").unwrap();
    let zero = TangentPair::new(LieSeries::zero(2, 5), LieSeries::zero(2, 5)).unwrap();
    let concrete = concrete_kv3a(&g, &zero, 5);
    let rhs = eval_lie_symbolic(&bch::kv3a_rhs(5), &g, 5);
    let neg: Vec<_> = rhs.iter().map(TruncatedFunction::neg).collect();
    assert_eq!(concrete, neg);
}

#[test]
fn j_constant_term_is_one() {
    for name in ["abelian(3)", "heisenberg3", "solvable2", "sl2"] {
        let g = builtin(name).unwrap();
        let j = j_function(&g, 4);
        assert_eq!(j.constant_term(), kvforge::scalar::Poly::one(), "{name}");
    }
}

#[test]
fn flow_demo_meets_tolerance_and_order() {
    let g = builtin("solvable2").unwrap();
    let y = VectorFamily::solvable2_example(&g).unwrap();
    let fine = flow_demo(&y, &FlowOptions::default()).unwrap();
    assert!(fine.passed, "{fine:?}");
    let study = convergence_study(&y, &FlowOptions { h: 0.25, ..Default::default() }, 2).unwrap();
    assert!(study.observed_order >= 3.5, "{:?}", study.orders);
}

#[test]
fn coarse_flow_is_flagged() {
    let g = builtin("solvable2").unwrap();
    let y = VectorFamily::solvable2_example(&g).unwrap();
    let r = flow_demo(&y, &FlowOptions { h: 1.0, threshold: 1e-12, ..Default::default() }).unwrap();
    assert!(!r.passed);
}
