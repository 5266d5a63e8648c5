#![allow(dead_code)]

use kvforge::freelie::{LieSeries, TangentPair};
use kvforge::scalar::{rat, Poly};
use kvforge::words::lyndon_basis;
use proptest::prelude::*;

/// Random Lie series with small integer-ratio coefficients in degrees
/// `min_deg..=max_deg`.
pub fn lie_series(min_deg: usize, max_deg: usize, truncation: usize) -> impl Strategy<Value = LieSeries> {
    let words: Vec<_> = (min_deg..=max_deg).flat_map(|d| lyndon_basis(d, 2)).collect();
    let k = words.len();
    proptest::collection::vec((-3i64..=3, 1i64..=3), k).prop_map(move |cs| {
        let mut l = LieSeries::zero(2, truncation);
        for (w, (n, d)) in words.iter().zip(cs) {
            l.add_term(w.clone(), &Poly::constant(rat(n, d)));
        }
        l
    })
}

pub fn tangent_pair(min_deg: usize, max_deg: usize, truncation: usize) -> impl Strategy<Value = TangentPair> {
    (lie_series(min_deg, max_deg, truncation), lie_series(min_deg, max_deg, truncation))
        .prop_map(|(a, b)| TangentPair::new(a, b).unwrap())
}
