//! Helpers shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use num_bigint::BigInt;
use oinf::coxeter::{Family, GroupElement};
use oinf::weights::{Algebra, Rational, Weight};

pub fn gl(text: &str) -> Weight {
    Weight::parse(text, Algebra::Gl).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn sl(text: &str) -> Weight {
    Weight::parse(text, Algebra::Sl).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn a(images: &[i32]) -> GroupElement {
    GroupElement::from_images(Family::A, images.to_vec()).unwrap()
}

pub fn word(family: Family, letters: &[u32]) -> GroupElement {
    GroupElement::from_word(family, letters).unwrap()
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// A regular antidominant gl weight with `λ + ρ = (1, 2, 3, …)`.
pub fn regular_base() -> Weight {
    gl("[] ++ lin 2,-1")
}

/// The gl₃ example weight `(1, 0, −1)` extended by `4, 5, 6, …`.
pub fn gl3_lambda() -> Weight {
    gl("[1,0,-1] ++ lin 1,0")
}

/// Places the values `p` into positions `1..=p.len()` of `λ + ρ` for `ρ_k = 1 − k`.
pub fn from_shifted(template: &Weight, p: &[i64]) -> Weight {
    template.with_values(
        p.iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, q(v + i as i64)))
            .collect::<Vec<_>>(),
    )
}

/// The values of `λ + ρ` on positions `1..=n`.
pub fn shifted(lambda: &Weight, n: u64) -> Vec<Rational> {
    (1..=n).map(|k| lambda.value(k) + q(1 - k as i64)).collect()
}

/// Every permutation of `1..=n` as a group element.
pub fn sym(n: usize) -> Vec<GroupElement> {
    (1..=n as i32)
        .permutations(n)
        .map(|p| GroupElement::from_images(Family::A, p).unwrap())
        .collect()
}
