//! Weyl groups of types A, B (= C) and D as finitary signed permutations.
//!
//! An element is stored by its one-line notation `w(1), …, w(n)` with trailing fixed
//! points removed, so an element of `W_n` and its image in `W_{n+1}` are the same value.
//! Simple reflections are `s_i = (i, i+1)` for `i ≥ 1`; type B adds `s_0: 1 ↦ −1` and
//! type D adds `s_0: 1 ↦ −2, 2 ↦ −1`. Products compose as functions: `(x·y)(k) = x(y(k))`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by group operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("cannot combine elements of types {0} and {1}")]
    TypeMismatch(Family, Family),
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("no simple reflection s_{index} in type {family}")]
    InvalidGenerator { family: Family, index: u32 },
    #[error("{0} is not a reflection")]
    NotReflection(String),
    #[error("left multiplication by {0} does not shorten the word")]
    NotShortening(String),
}

impl CoxeterError {
    /// Stable identifier used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            CoxeterError::TypeMismatch(..) => "TypeMismatch",
            CoxeterError::InvalidElement(_) => "InvalidElement",
            CoxeterError::InvalidGenerator { .. } => "InvalidGenerator",
            CoxeterError::NotReflection(_) => "NotReflection",
            CoxeterError::NotShortening(_) => "NotShortening",
        }
    }
}

/// The Coxeter family. `B` serves for both `B∞` and `C∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
}

impl Family {
    /// Index of the first simple reflection.
    pub fn first_generator(self) -> u32 {
        match self {
            Family::A => 1,
            Family::B | Family::D => 0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = CoxeterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" | "C" | "c" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(CoxeterError::InvalidElement(format!(
                "unknown type `{other}`"
            ))),
        }
    }
}

/// Left or right side for descents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A finitary (signed) permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    family: Family,
    images: Vec<i32>,
}

impl GroupElement {
    pub fn identity(family: Family) -> Self {
        GroupElement {
            family,
            images: Vec::new(),
        }
    }

    /// Builds an element from its one-line notation on `1..=n`.
    pub fn from_images(family: Family, images: Vec<i32>) -> Result<Self, CoxeterError> {
        let n = images.len() as i32;
        let mut seen = vec![false; images.len()];
        for &v in &images {
            let a = v.unsigned_abs() as i32;
            if v == 0 || a > n || seen[(a - 1) as usize] {
                return Err(CoxeterError::InvalidElement(format!(
                    "{images:?} is not a signed permutation of 1..{n}"
                )));
            }
            seen[(a - 1) as usize] = true;
        }
        let negatives = images.iter().filter(|v| **v < 0).count();
        match family {
            Family::A if negatives > 0 => {
                return Err(CoxeterError::InvalidElement(
                    "type A elements are unsigned".into(),
                ))
            }
            Family::D if negatives % 2 == 1 => {
                return Err(CoxeterError::InvalidElement(
                    "type D elements change an even number of signs".into(),
                ))
            }
            _ => {}
        }
        Ok(Self::trimmed(family, images))
    }

    fn trimmed(family: Family, mut images: Vec<i32>) -> Self {
        while images.last().is_some_and(|&v| v == images.len() as i32) {
            images.pop();
        }
        GroupElement { family, images }
    }

    /// The simple reflection `s_i`.
    pub fn simple(family: Family, i: u32) -> Result<Self, CoxeterError> {
        if i < family.first_generator() {
            return Err(CoxeterError::InvalidGenerator { family, index: i });
        }
        let images = match (family, i) {
            (Family::B, 0) => vec![-1],
            (Family::D, 0) => vec![-2, -1],
            _ => {
                let mut v: Vec<i32> = (1..=i as i32 + 1).collect();
                v.swap((i - 1) as usize, i as usize);
                v
            }
        };
        Ok(GroupElement { family, images })
    }

    /// The product of the simple reflections in `word`, left to right.
    pub fn from_word(family: Family, word: &[u32]) -> Result<Self, CoxeterError> {
        let mut g = Self::identity(family);
        for &i in word {
            g = g.mul_simple(i)?;
        }
        Ok(g)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The one-line notation with trailing fixed points removed.
    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// The largest position moved (0 for the identity).
    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// `w(k)` for `k ≠ 0`, extended by `w(−k) = −w(k)`.
    pub fn image(&self, k: i32) -> i32 {
        let a = k.unsigned_abs() as usize;
        let v = if a <= self.images.len() {
            self.images[a - 1]
        } else {
            a as i32
        };
        if k < 0 {
            -v
        } else {
            v
        }
    }

    /// The one-line notation padded to length `n ≥ rank`.
    pub fn one_line(&self, n: usize) -> Vec<i32> {
        (1..=n.max(self.rank()) as i32)
            .map(|k| self.image(k))
            .collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            let k = i as i32 + 1;
            inv[(v.unsigned_abs() - 1) as usize] = if v < 0 { -k } else { k };
        }
        GroupElement {
            family: self.family,
            images: inv,
        }
    }

    /// `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self, CoxeterError> {
        if self.family != other.family {
            return Err(CoxeterError::TypeMismatch(self.family, other.family));
        }
        Ok(self.compose(other))
    }

    fn compose(&self, other: &Self) -> Self {
        let n = self.rank().max(other.rank()) as i32;
        let images = (1..=n).map(|k| self.image(other.image(k))).collect();
        Self::trimmed(self.family, images)
    }

    /// `self · s_i`.
    pub fn mul_simple(&self, i: u32) -> Result<Self, CoxeterError> {
        Ok(self.compose(&Self::simple(self.family, i)?))
    }

    /// `s_i · self`.
    pub fn simple_mul(&self, i: u32) -> Result<Self, CoxeterError> {
        Ok(Self::simple(self.family, i)?.compose(self))
    }

    /// The Coxeter length.
    pub fn length(&self) -> usize {
        let w = &self.images;
        let n = w.len();
        let mut len = 0;
        for i in 0..n {
            for j in i + 1..n {
                if w[i] > w[j] {
                    len += 1;
                }
                if self.family != Family::A && w[i] + w[j] < 0 {
                    len += 1;
                }
            }
            if self.family == Family::B && w[i] < 0 {
                len += 1;
            }
        }
        len
    }

    /// `(−1)^{ℓ(w)}`.
    pub fn sign(&self) -> i32 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Whether `ℓ(w·s_i) < ℓ(w)`.
    pub fn is_right_descent(&self, i: u32) -> bool {
        match (self.family, i) {
            (Family::A, 0) => false,
            (Family::B, 0) => self.image(1) < 0,
            (Family::D, 0) => self.image(1) + self.image(2) < 0,
            _ => self.image(i as i32) > self.image(i as i32 + 1),
        }
    }

    /// Whether `ℓ(s_i·w) < ℓ(w)`.
    pub fn is_left_descent(&self, i: u32) -> bool {
        self.inverse().is_right_descent(i)
    }

    /// The descent set on the given side.
    pub fn descents(&self, side: Side) -> BTreeSet<u32> {
        let first = self.family.first_generator();
        let top = self.rank().max(2) as u32;
        (first..top)
            .filter(|&i| match side {
                Side::Right => self.is_right_descent(i),
                Side::Left => self.is_left_descent(i),
            })
            .collect()
    }

    /// The smallest right descent, if any.
    pub fn first_right_descent(&self) -> Option<u32> {
        let first = self.family.first_generator();
        let top = self.rank().max(2) as u32;
        (first..top).find(|&i| self.is_right_descent(i))
    }

    /// A reduced word, obtained by repeatedly stripping the smallest right descent.
    pub fn reduced_word(&self) -> ReducedWord {
        let mut letters = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while let Some(i) = w.first_right_descent() {
            letters.push(i);
            w = w.mul_simple(i).expect("descents are valid generators");
        }
        letters.reverse();
        ReducedWord { letters }
    }

    /// Whether this element is a reflection, i.e. conjugate to a simple reflection.
    pub fn is_reflection(&self) -> bool {
        let moved: Vec<i32> = (1..=self.rank() as i32)
            .filter(|&k| self.image(k) != k)
            .collect();
        match moved.as_slice() {
            [i] => self.family == Family::B && self.image(*i) == -*i,
            [i, j] => {
                let (a, b) = (self.image(*i), self.image(*j));
                (a == *j && b == *i) || (self.family != Family::A && a == -*j && b == -*i)
            }
            _ => false,
        }
    }

    /// Every element of `W_n`.
    pub fn all(family: Family, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for perm in (1..=n as i32).permutations(n) {
            let sign_patterns: Vec<u32> = match family {
                Family::A => vec![0],
                Family::B => (0..1u32 << n).collect(),
                Family::D => (0..1u32 << n).filter(|m| m.count_ones() % 2 == 0).collect(),
            };
            for mask in sign_patterns {
                let images = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if mask >> i & 1 == 1 { -v } else { v })
                    .collect();
                out.push(Self::trimmed(family, images));
            }
        }
        out
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[{}]", self.family, self.images.iter().join(","))
    }
}

impl FromStr for GroupElement {
    type Err = CoxeterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoxeterError::InvalidElement(format!("cannot parse `{s}`"));
        let (fam, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let family: Family = fam.trim().parse()?;
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let images = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().replace('−', "-").parse::<i32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::from_images(family, images)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A word in the simple reflections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedWord {
    pub letters: Vec<u32>,
}

impl ReducedWord {
    pub fn new(letters: Vec<u32>) -> Self {
        ReducedWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn product(&self, family: Family) -> Result<GroupElement, CoxeterError> {
        GroupElement::from_word(family, &self.letters)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        write!(
            f,
            "{}",
            self.letters.iter().map(|i| format!("s{i}")).join("")
        )
    }
}

fn check_same(x: &GroupElement, y: &GroupElement) -> Result<(), CoxeterError> {
    if x.family != y.family {
        Err(CoxeterError::TypeMismatch(x.family, y.family))
    } else {
        Ok(())
    }
}

/// Bruhat order `x ⪯ y`, by the descent recursion on `y`.
pub fn bruhat_leq(x: &GroupElement, y: &GroupElement) -> Result<bool, CoxeterError> {
    check_same(x, y)?;
    let (mut x, mut y) = (x.clone(), y.clone());
    loop {
        if x.is_identity() {
            return Ok(true);
        }
        if x.length() > y.length() {
            return Ok(false);
        }
        let Some(s) = y.first_right_descent() else {
            return Ok(false);
        };
        if x.is_right_descent(s) {
            x = x.mul_simple(s)?;
        }
        y = y.mul_simple(s)?;
    }
}

/// Every element of the lower interval `[e, y]`, by subword closure of a reduced word.
pub fn lower_interval(y: &GroupElement) -> HashSet<GroupElement> {
    let mut set = HashSet::from([GroupElement::identity(y.family)]);
    for &s in &y.reduced_word().letters {
        let extra: Vec<GroupElement> = set
            .iter()
            .map(|z| z.mul_simple(s).expect("valid generator"))
            .collect();
        set.extend(extra);
    }
    set
}

/// The Bruhat interval `[x, y]`.
pub fn bruhat_interval(
    x: &GroupElement,
    y: &GroupElement,
) -> Result<BTreeSet<GroupElement>, CoxeterError> {
    check_same(x, y)?;
    let mut out = BTreeSet::new();
    for z in lower_interval(y) {
        if bruhat_leq(x, &z)? {
            out.insert(z);
        }
    }
    Ok(out)
}

/// The 1-based position `i` such that `t·g` equals `word` with letter `i` deleted.
pub fn strong_exchange_index(word: &ReducedWord, t: &GroupElement) -> Result<usize, CoxeterError> {
    if !t.is_reflection() {
        return Err(CoxeterError::NotReflection(t.to_string()));
    }
    let g = word.product(t.family)?;
    let tg = t.compose(&g);
    if tg.length() >= g.length() {
        return Err(CoxeterError::NotShortening(t.to_string()));
    }
    for i in 0..word.len() {
        let mut letters = word.letters.clone();
        letters.remove(i);
        if GroupElement::from_word(t.family, &letters)? == tg {
            return Ok(i + 1);
        }
    }
    Err(CoxeterError::NotShortening(format!(
        "{t} (word {word} is not reduced)"
    )))
}

/// The longest element of `W_m`.
pub fn longest_element(family: Family, m: usize) -> GroupElement {
    let m = m as i32;
    let images = match family {
        Family::A => (1..=m).rev().collect(),
        Family::B => (1..=m).map(|k| -k).collect(),
        Family::D if m % 2 == 0 => (1..=m).map(|k| -k).collect(),
        Family::D => (1..=m).map(|k| if k == 1 { 1 } else { -k }).collect(),
    };
    GroupElement::trimmed(family, images)
}

/// The smallest `m ≥ 1` with `x, y ∈ W_m`, and the longest element of `W_m`.
pub fn parabolic_closure(
    x: &GroupElement,
    y: &GroupElement,
) -> Result<(usize, GroupElement), CoxeterError> {
    check_same(x, y)?;
    let m = x.rank().max(y.rank()).max(1);
    Ok((m, longest_element(x.family, m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(v: &[i32]) -> GroupElement {
        GroupElement::from_images(Family::A, v.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let w: GroupElement = "A:[3,1,2]".parse().unwrap();
        assert_eq!(w, a(&[3, 1, 2]));
        assert_eq!(w.to_string(), "A:[3,1,2]");
        let b: GroupElement = "B:[−2,1,3]".parse().unwrap();
        assert_eq!(b.to_string(), "B:[-2,1]");
        assert!("D:[-1,2]".parse::<GroupElement>().is_err());
        assert!("A:[1,1]".parse::<GroupElement>().is_err());
        assert_eq!(GroupElement::identity(Family::A).to_string(), "A:[]");
    }

    #[test]
    fn longest_element_lengths() {
        for m in 1..=5 {
            assert_eq!(longest_element(Family::A, m).length(), m * (m - 1) / 2);
            assert_eq!(longest_element(Family::B, m).length(), m * m);
            assert_eq!(longest_element(Family::D, m).length(), m * (m - 1));
        }
    }

    #[test]
    fn reflections() {
        assert!(a(&[3, 2, 1]).is_reflection());
        assert!(!a(&[2, 3, 1]).is_reflection());
        let b: GroupElement = "B:[1,-2]".parse().unwrap();
        assert!(b.is_reflection());
        let d: GroupElement = "D:[-2,-1]".parse().unwrap();
        assert!(d.is_reflection());
    }
}
