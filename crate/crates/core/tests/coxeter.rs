mod common;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use common::*;
use oinf::coxeter::{
    bruhat_interval, bruhat_leq, longest_element, parabolic_closure, strong_exchange_index,
    CoxeterError, Family, GroupElement, ReducedWord, Side,
};

fn generators(family: Family, n: usize) -> Vec<u32> {
    (family.first_generator()..n as u32).collect()
}

/// Word length by breadth-first search on the Cayley graph of `W_n`.
fn bfs_lengths(family: Family, n: usize) -> HashMap<GroupElement, usize> {
    let gens = generators(family, n);
    let mut dist = HashMap::from([(GroupElement::identity(family), 0)]);
    let mut queue = VecDeque::from([GroupElement::identity(family)]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        for &s in &gens {
            let h = g.mul_simple(s).unwrap();
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    dist
}

/// Every product of a subword of a reduced word for `y`.
fn subword_products(y: &GroupElement) -> HashSet<GroupElement> {
    let letters = y.reduced_word().letters;
    let mut out = HashSet::new();
    for mask in 0u32..1 << letters.len() {
        let chosen: Vec<u32> = letters
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &s)| s)
            .collect();
        out.insert(GroupElement::from_word(y.family(), &chosen).unwrap());
    }
    out
}

/// The image of `g ∈ S_n` under `s_i ↦ s_{i+1}`.
fn shift_up(g: &GroupElement) -> GroupElement {
    let mut images = vec![1];
    images.extend(g.images().iter().map(|v| v + 1));
    GroupElement::from_images(Family::A, images).unwrap()
}

#[test]
fn multiplication_examples() {
    let s1 = word(Family::A, &[1]);
    let s2 = word(Family::A, &[2]);
    assert!(s1.multiply(&s1).unwrap().is_identity());
    assert_eq!(s1.multiply(&s2).unwrap(), a(&[2, 3, 1]));
    let s0 = word(Family::B, &[0]);
    assert!(s0.multiply(&s0).unwrap().is_identity());
    assert!(matches!(
        s1.multiply(&s0),
        Err(CoxeterError::TypeMismatch { .. })
    ));
}

#[test]
fn composition_convention() {
    let x = a(&[2, 3, 1]);
    let y = a(&[3, 1, 2, 4]);
    let xy = x.multiply(&y).unwrap();
    for k in 1..=4 {
        assert_eq!(xy.image(k), x.image(y.image(k)));
    }
}

#[test]
fn length_examples() {
    assert_eq!(GroupElement::identity(Family::A).length(), 0);
    assert_eq!(a(&[3, 2, 1]).length(), 3);
    assert_eq!(a(&[3, 1, 2]).length(), 2);
}

#[test]
fn descent_examples() {
    assert!(GroupElement::identity(Family::A)
        .descents(Side::Right)
        .is_empty());
    assert_eq!(a(&[2, 1, 3]).descents(Side::Right), BTreeSet::from([1]));
    assert_eq!(a(&[3, 2, 1]).descents(Side::Right), BTreeSet::from([1, 2]));
}

#[test]
fn reduced_word_examples() {
    assert!(GroupElement::identity(Family::A).reduced_word().is_empty());
    let w0 = a(&[3, 2, 1]);
    let rw = w0.reduced_word();
    assert_eq!(rw.len(), 3);
    assert_eq!(rw.product(Family::A).unwrap(), w0);
    let s0 = word(Family::B, &[0]);
    assert_eq!(s0.reduced_word().letters, vec![0]);
}

#[test]
fn bruhat_examples() {
    let e = GroupElement::identity(Family::A);
    let s1 = word(Family::A, &[1]);
    let s2 = word(Family::A, &[2]);
    let s12 = word(Family::A, &[1, 2]);
    assert!(bruhat_leq(&e, &s12).unwrap());
    assert!(!bruhat_leq(&s1, &s2).unwrap() && !bruhat_leq(&s2, &s1).unwrap());
    assert!(bruhat_leq(&s1, &s12).unwrap());
}

#[test]
fn interval_examples() {
    let e = GroupElement::identity(Family::A);
    let s1 = word(Family::A, &[1]);
    let s2 = word(Family::A, &[2]);
    let s12 = word(Family::A, &[1, 2]);
    assert_eq!(
        bruhat_interval(&e, &s12).unwrap(),
        BTreeSet::from([e.clone(), s1, s2, s12.clone()])
    );
    assert_eq!(
        bruhat_interval(&e, &e).unwrap(),
        BTreeSet::from([e.clone()])
    );
    for w in sym(4) {
        assert!(bruhat_interval(&e, &w).unwrap().len() <= 1 << w.length());
    }
    assert!(bruhat_interval(&s12, &e).unwrap().is_empty());
}

#[test]
fn strong_exchange_examples() {
    let w = ReducedWord::new(vec![1, 2, 1]);
    assert_eq!(
        strong_exchange_index(&w, &word(Family::A, &[1])).unwrap(),
        1
    );
    assert_eq!(
        strong_exchange_index(&w, &word(Family::A, &[1, 2, 1])).unwrap(),
        2
    );
    let err = strong_exchange_index(&ReducedWord::new(vec![1]), &word(Family::A, &[2]));
    assert!(matches!(err, Err(CoxeterError::NotShortening(_))));
    let err = strong_exchange_index(&w, &word(Family::A, &[1, 2]));
    assert!(matches!(err, Err(CoxeterError::NotReflection(_))));
}

#[test]
fn strong_exchange_deletion_shortens() {
    for family in [Family::A, Family::B] {
        let n = if family == Family::A { 4 } else { 3 };
        let all = GroupElement::all(family, n);
        let reflections: Vec<&GroupElement> = all.iter().filter(|t| t.is_reflection()).collect();
        for g in &all {
            let rw = g.reduced_word();
            for t in &reflections {
                let tg = t.multiply(g).unwrap();
                if tg.length() >= g.length() {
                    continue;
                }
                let i = strong_exchange_index(&rw, t).unwrap();
                let mut letters = rw.letters.clone();
                letters.remove(i - 1);
                let h = GroupElement::from_word(family, &letters).unwrap();
                assert_eq!(h, tg);
                assert!(h.length() < g.length());
                assert_eq!((g.length() - h.length()) % 2, 1);
                if t.length() == 1 {
                    assert_eq!(h.length(), g.length() - 1);
                }
            }
        }
    }
}

#[test]
fn parabolic_closure_examples() {
    let (m, w0) = parabolic_closure(&word(Family::A, &[1]), &word(Family::A, &[2])).unwrap();
    assert_eq!((m, w0), (3, a(&[3, 2, 1])));
    let e = GroupElement::identity(Family::A);
    let (m, w0) = parabolic_closure(&e, &e).unwrap();
    assert_eq!(m, 1);
    assert!(w0.is_identity());
    let (m, w0) = parabolic_closure(&word(Family::A, &[3]), &e).unwrap();
    assert_eq!((m, w0), (4, a(&[4, 3, 2, 1])));
}

#[test]
fn longest_element_lengths() {
    assert_eq!(longest_element(Family::A, 5).length(), 10);
    assert_eq!(longest_element(Family::B, 3).length(), 9);
    assert_eq!(longest_element(Family::D, 4).length(), 12);
}

#[test]
fn length_matches_cayley_graph_distance() {
    for (family, n, order) in [(Family::A, 4, 24), (Family::B, 3, 48), (Family::D, 4, 192)] {
        let dist = bfs_lengths(family, n);
        assert_eq!(dist.len(), order);
        for (g, d) in dist {
            assert_eq!(g.length(), d, "{g}");
            assert_eq!(g.reduced_word().len(), d);
            assert_eq!(g.reduced_word().product(family).unwrap(), g);
        }
    }
}

#[test]
fn bruhat_matches_subword_oracle() {
    for (family, n) in [(Family::A, 4), (Family::B, 3)] {
        let all = GroupElement::all(family, n);
        for y in &all {
            let below = subword_products(y);
            for x in &all {
                assert_eq!(bruhat_leq(x, y).unwrap(), below.contains(x), "{x} <= {y}");
            }
        }
    }
}

#[test]
fn length_parity_and_sign() {
    for (family, n) in [(Family::A, 4), (Family::B, 3)] {
        let all = GroupElement::all(family, n);
        for x in &all {
            for y in &all {
                let xy = x.multiply(y).unwrap();
                assert_eq!(xy.length() % 2, (x.length() + y.length()) % 2);
                assert_eq!(xy.sign(), x.sign() * y.sign());
            }
        }
    }
}

#[test]
fn inverse_preserves_length() {
    for w in sym(5) {
        assert_eq!(w.inverse().length(), w.length());
        assert!(w.multiply(&w.inverse()).unwrap().is_identity());
    }
}

#[test]
fn simple_steps_change_length_by_one() {
    for w in sym(4) {
        for s in 1..4 {
            let l = w.mul_simple(s).unwrap().length() as i64;
            let d = l - w.length() as i64;
            assert!(d == 1 || d == -1);
            assert_eq!(d == -1, w.is_right_descent(s));
            let l = w.simple_mul(s).unwrap().length() as i64 - w.length() as i64;
            assert_eq!(l == -1, w.is_left_descent(s));
        }
    }
}

#[test]
fn parabolic_stability_of_length_and_order() {
    let small = sym(4);
    for x in &small {
        let xs = shift_up(x);
        assert_eq!(xs.length(), x.length());
        for y in &small {
            let ys = shift_up(y);
            assert_eq!(bruhat_leq(x, y).unwrap(), bruhat_leq(&xs, &ys).unwrap());
        }
    }
    let big: Vec<GroupElement> = sym(5);
    let embedded: HashSet<GroupElement> = small.iter().cloned().collect();
    for x in big.iter().filter(|g| embedded.contains(g)) {
        for y in big.iter().filter(|g| embedded.contains(g)) {
            let below = subword_products(y);
            assert_eq!(bruhat_leq(x, y).unwrap(), below.contains(x));
        }
    }
}

#[test]
fn serialization_round_trip() {
    for family in [Family::A, Family::B, Family::D] {
        for g in GroupElement::all(family, 3) {
            let text = g.to_string();
            assert_eq!(text.parse::<GroupElement>().unwrap(), g);
            let json = serde_json::to_string(&g).unwrap();
            assert_eq!(json, format!("\"{text}\""));
        }
    }
    assert!("A:[2,2]".parse::<GroupElement>().is_err());
    assert!("D:[-1]".parse::<GroupElement>().is_err());
    assert!("A:[-1]".parse::<GroupElement>().is_err());
}
