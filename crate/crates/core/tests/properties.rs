mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use oinf::category_o::CategoryO;
use oinf::coxeter::GroupElement;
use oinf::weights::{
    classify, format_weight, inversion_pairs, order_leq, Algebra, BorelOrder, Classification,
    Rational, TailClass, Weight,
};
use proptest::prelude::*;

fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

prop_compose! {
    /// A gl weight with a short head and one or two affine tail classes with integer slopes.
    fn any_weight()(
        head in prop::collection::vec((-5i64..=5, prop::sample::select(vec![1i64, 1, 1, 2])), 0..5),
        classes in prop::collection::vec((-1i64..=2, -4i64..=4, prop::sample::select(vec![1i64, 1, 2])), 1..=2),
    ) -> Weight {
        let head = head.into_iter().map(|(n, d)| rational(n, d)).collect();
        let classes = classes.into_iter().map(|(s, n, d)| TailClass::new(q(s), rational(n, d))).collect();
        Weight::new(Algebra::Gl, head, classes, None).unwrap()
    }
}

prop_compose! {
    /// An almost antidominant weight: arbitrary head over the increasing tail `λ_k = 2k + c`.
    fn almost_antidominant()(
        head in prop::collection::vec((-6i64..=6, prop::sample::select(vec![1i64, 1, 1, 2])), 1..7),
        c in -2i64..=2,
    ) -> Weight {
        let head = head.into_iter().map(|(n, d)| rational(n, d)).collect();
        Weight::new(Algebra::Gl, head, vec![TailClass::new(q(2), q(c))], None).unwrap()
    }
}

/// Pair counts over `i < j ≤ n` of `λ + ρ` with `ρ_k = 1 − k`.
#[derive(Debug, PartialEq, Eq, Default)]
struct PairCounts {
    positive: usize,
    negative: usize,
    equal: usize,
    non_integral: usize,
}

fn pair_counts(lambda: &Weight, n: u64) -> PairCounts {
    let p = shifted(lambda, n);
    let mut c = PairCounts::default();
    for (i, j) in (0..n as usize).tuple_combinations() {
        let d = &p[i] - &p[j];
        if !d.is_integer() {
            c.non_integral += 1;
        } else if d.is_zero() {
            c.equal += 1;
        } else if d > Rational::zero() {
            c.positive += 1;
        } else {
            c.negative += 1;
        }
    }
    c
}

fn windowed_classification(lambda: &Weight) -> Classification {
    let (a, b) = (pair_counts(lambda, 60), pair_counts(lambda, 120));
    Classification {
        integral: b.non_integral == 0,
        antidominant: b.positive == 0,
        almost_antidominant: a.positive == b.positive,
        dominant: b.negative == 0,
        almost_dominant: a.negative == b.negative,
        regular: b.equal == 0,
    }
}

/// Sorts `λ + ρ` within each class modulo ℤ on positions `1..=n` and subtracts ρ.
fn sort_oracle(lambda: &Weight, n: u64) -> Weight {
    let p = shifted(lambda, n);
    let mut classes: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (i, v) in p.iter().enumerate() {
        classes.entry(v - v.floor()).or_default().push(i);
    }
    let mut sorted = p.clone();
    for positions in classes.values() {
        let mut vals: Vec<Rational> = positions.iter().map(|&i| p[i].clone()).collect();
        vals.sort();
        for (&i, v) in positions.iter().zip(vals) {
            sorted[i] = v;
        }
    }
    lambda.with_values(
        sorted
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v - q(-(i as i64))))
            .collect::<Vec<_>>(),
    )
}

fn from_vector(v: &[i64]) -> Weight {
    Weight::zero(Algebra::Gl).with_values(
        v.iter()
            .enumerate()
            .map(|(i, &x)| (i as u64 + 1, q(x)))
            .collect::<Vec<_>>(),
    )
}

fn add_roots(v: &[i64], roots: &[(usize, usize)]) -> Vec<i64> {
    let mut out = v.to_vec();
    for &(i, j) in roots {
        let (i, j) = (i.min(j), i.max(j));
        if i != j {
            out[i] += 1;
            out[j] -= 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classification_matches_windowed_enumeration(lambda in any_weight()) {
        let got = classify(&lambda, &BorelOrder::OneSided).unwrap();
        prop_assert_eq!(got, windowed_classification(&lambda), "{}", lambda);
    }

    #[test]
    fn inversion_count_is_window_stable(lambda in any_weight()) {
        if let Ok(pairs) = inversion_pairs(&lambda, &BorelOrder::OneSided) {
            let (a, b) = (pair_counts(&lambda, 60), pair_counts(&lambda, 120));
            prop_assert_eq!(a.positive, b.positive);
            prop_assert_eq!(pairs.len(), b.positive);
        }
    }

    #[test]
    fn slope_one_antidominance_is_strict_increase(
        head in prop::collection::vec(-6i64..=6, 0..6),
        c in -3i64..=3,
    ) {
        let head = head.into_iter().map(q).collect();
        let lambda = Weight::new(Algebra::Gl, head, vec![TailClass::new(q(1), q(c))], None).unwrap();
        let values = lambda.prefix(20);
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        prop_assert_eq!(classify(&lambda, &BorelOrder::OneSided).unwrap().antidominant, increasing);
    }

    #[test]
    fn literal_and_json_round_trip(lambda in any_weight()) {
        let text = format_weight(&lambda);
        prop_assert_eq!(&Weight::parse(&text, Algebra::Gl).unwrap(), &lambda);
        let json = serde_json::to_string(&lambda).unwrap();
        prop_assert_eq!(serde_json::from_str::<Weight>(&json).unwrap(), lambda);
    }

    #[test]
    fn dot_action_is_a_group_action(
        lambda in any_weight(),
        v in 0usize..120,
        w in 0usize..120,
    ) {
        let group = sym(5);
        let o = CategoryO::new();
        let (v, w) = (&group[v], &group[w]);
        let vw = v.multiply(w).unwrap();
        let lhs = o.dot_act(&vw, &lambda).unwrap();
        let rhs = o.dot_act(v, &o.dot_act(w, &lambda).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(o.dot_act(&GroupElement::identity(v.family()), &lambda).unwrap(), lambda);
    }

    #[test]
    fn rho_shift_leaves_dot_action_unchanged(lambda in any_weight(), v in 0usize..120, c in -5i64..=5) {
        let group = sym(5);
        let shifted = CategoryO::new().with_rho_shift(rational(c, 3));
        prop_assert_eq!(
            CategoryO::new().dot_act(&group[v], &lambda).unwrap(),
            shifted.dot_act(&group[v], &lambda).unwrap()
        );
    }

    #[test]
    fn interval_enumeration_matches_brute_force(
        base in prop::collection::vec(-2i64..=2, 5),
        roots in prop::collection::vec((0usize..5, 0usize..5), 0..3),
    ) {
        let upper_v = add_roots(&base, &roots);
        let (lower, upper) = (from_vector(&base), from_vector(&upper_v));
        let o = CategoryO::new();
        let got: BTreeSet<Weight> = o.interval_weights(&lower, &upper).unwrap().into_iter().collect();
        let spread = 3i64;
        let mut expected = BTreeSet::new();
        for delta in (0..5).map(|_| -spread..=spread).multi_cartesian_product() {
            if delta.iter().sum::<i64>() != 0 {
                continue;
            }
            let xi: Vec<i64> = base.iter().zip(&delta).map(|(a, b)| a + b).collect();
            let xi = from_vector(&xi);
            if order_leq(&lower, &xi, o.order()) && order_leq(&xi, &upper, o.order()) {
                expected.insert(xi);
            }
        }
        prop_assert_eq!(&got, &expected);
        for xi in &got {
            let inner: BTreeSet<Weight> = o.interval_weights(&lower, xi).unwrap().into_iter().collect();
            prop_assert!(inner.is_subset(&got));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn antidominant_reduction_matches_sort_oracle(lambda in almost_antidominant()) {
        let o = CategoryO::new();
        let (xi, chain) = o.to_antidominant(&lambda).unwrap();
        let n = lambda.head().len() as u64 + 14;
        prop_assert_eq!(&xi, &sort_oracle(&lambda, n));
        prop_assert!(classify(&xi, o.order()).unwrap().antidominant);
        prop_assert_eq!(chain.is_empty(), classify(&lambda, o.order()).unwrap().antidominant);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn root_order_is_a_partial_order(
        x in prop::collection::vec(-2i64..=2, 8),
        up1 in prop::collection::vec((0usize..8, 0usize..8), 0..4),
        up2 in prop::collection::vec((0usize..8, 0usize..8), 0..4),
        noise in prop::collection::vec(-1i64..=1, 8),
        perturb in any::<bool>(),
    ) {
        let one = BorelOrder::OneSided;
        let y = add_roots(&x, &up1);
        let mut z = add_roots(&y, &up2);
        if perturb {
            z = z.iter().zip(&noise).map(|(a, b)| a + b).collect();
        }
        let (x, y, z) = (from_vector(&x), from_vector(&y), from_vector(&z));
        prop_assert!(order_leq(&x, &x, &one));
        prop_assert!(order_leq(&x, &y, &one));
        if order_leq(&y, &x, &one) {
            prop_assert_eq!(&x, &y);
        }
        if order_leq(&z, &y, &one) && order_leq(&y, &z, &one) {
            prop_assert_eq!(&y, &z);
        }
        if order_leq(&y, &z, &one) {
            prop_assert!(order_leq(&x, &z, &one));
        }
    }
}
