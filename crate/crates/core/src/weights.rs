//! Weights of `gl∞` and `sl∞` as eventually periodic-affine rational sequences.
//!
//! A [`Weight`] stores finitely many explicit leading coordinates (the head) and a
//! [`TailSpec`] describing every later coordinate by an affine formula per residue class,
//! optionally plus a reciprocal term `r/(k+o)`. This module also provides the splitting
//! Borel orders on the index set, the ρ constructors, the root order `⪯` and the exact
//! (anti)dominance classification of `λ + ρ`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational coordinates.
pub type Rational = BigRational;

/// Errors raised while building or analysing weights.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("override at position {position} is not below the tail start {start}")]
    OverrideBeyondTail { position: u64, start: u64 },
    #[error("unsupported tail: {0}")]
    UnsupportedTail(String),
    #[error("weights live in different algebras ({0} and {1})")]
    AlgebraMismatch(Algebra, Algebra),
    #[error("infinitely many positive roots pair to a positive integer with λ+ρ")]
    InfiniteInversionSet,
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("invalid Borel order: {0}")]
    InvalidOrder(String),
    #[error("integer overflow while analysing the tail")]
    Overflow,
}

impl WeightError {
    /// Stable identifier used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            WeightError::Syntax { .. } => "SyntaxError",
            WeightError::OverrideBeyondTail { .. } => "OverrideBeyondTail",
            WeightError::UnsupportedTail(_) => "UnsupportedTail",
            WeightError::AlgebraMismatch(..) => "AlgebraMismatch",
            WeightError::InfiniteInversionSet => "InfiniteInversionSet",
            WeightError::NotARoot(_) => "NotARoot",
            WeightError::InvalidOrder(_) => "InvalidOrder",
            WeightError::Overflow => "Overflow",
        }
    }
}

/// The ambient Lie algebra. In `Sl` mode weights are compared modulo constant sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Gl,
    Sl,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::Gl => "gl",
            Algebra::Sl => "sl",
        })
    }
}

impl FromStr for Algebra {
    type Err = WeightError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gl" | "GL" => Ok(Algebra::Gl),
            "sl" | "SL" => Ok(Algebra::Sl),
            other => Err(WeightError::Syntax {
                offset: 0,
                message: format!("unknown algebra `{other}`"),
            }),
        }
    }
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn frac_part(x: &Rational) -> Rational {
    x - x.floor()
}

/// Parses `a`, `-a` or `a/b` (also accepting the Unicode minus sign).
pub fn parse_rational(text: &str) -> Result<Rational, WeightError> {
    let mut cur = Cursor::new(text);
    let r = cur.rational()?;
    cur.finish()?;
    Ok(r)
}

/// Formats a rational as `a` or `a/b`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// One residue class of a tail: `slope·k + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailClass {
    pub slope: Rational,
    pub intercept: Rational,
}

impl TailClass {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        TailClass { slope, intercept }
    }

    fn at(&self, k: u64) -> Rational {
        &self.slope * int(k as i64) + &self.intercept
    }
}

/// A reciprocal correction `coeff/(k + offset)` shared by all residue classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Recip {
    pub coeff: Rational,
    pub offset: i64,
}

/// The eventual pattern of a weight: for `k ≥ start` the coordinate is
/// `slope_r·k + intercept_r (+ coeff/(k+offset))` with `r = k mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailSpec {
    start: u64,
    classes: Vec<TailClass>,
    recip: Option<Recip>,
}

impl TailSpec {
    pub fn new(
        start: u64,
        classes: Vec<TailClass>,
        recip: Option<Recip>,
    ) -> Result<Self, WeightError> {
        if start == 0 {
            return Err(WeightError::UnsupportedTail(
                "tail start must be at least 1".into(),
            ));
        }
        if classes.is_empty() {
            return Err(WeightError::UnsupportedTail(
                "tail modulus must be at least 1".into(),
            ));
        }
        let recip = recip.filter(|r| !r.coeff.is_zero());
        if let Some(r) = &recip {
            if start as i64 + r.offset < 1 {
                return Err(WeightError::UnsupportedTail(format!(
                    "reciprocal term 1/(k{:+}) is undefined inside the tail",
                    r.offset
                )));
            }
        }
        Ok(TailSpec {
            start,
            classes,
            recip,
        })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn modulus(&self) -> u64 {
        self.classes.len() as u64
    }

    pub fn classes(&self) -> &[TailClass] {
        &self.classes
    }

    pub fn recip(&self) -> Option<&Recip> {
        self.recip.as_ref()
    }

    /// The class governing position `k`.
    pub fn class_of(&self, k: u64) -> &TailClass {
        &self.classes[(k % self.modulus()) as usize]
    }

    /// The tail formula evaluated at `k`; the caller guarantees `k + offset ≠ 0`.
    pub fn value(&self, k: u64) -> Rational {
        let mut v = self.class_of(k).at(k);
        if let Some(r) = &self.recip {
            v += &r.coeff / int(k as i64 + r.offset);
        }
        v
    }

    fn defined_at(&self, k: u64) -> bool {
        self.recip.as_ref().is_none_or(|r| k as i64 + r.offset != 0)
    }

    fn reduce_period(&mut self) {
        let m = self.classes.len();
        for d in 1..m {
            if m.is_multiple_of(d) && (0..m).all(|r| self.classes[r] == self.classes[r % d]) {
                self.classes.truncate(d);
                return;
            }
        }
    }
}

/// A weight `λ = (λ¹, λ², …)` stored in canonical form: the head is as short as possible
/// and the tail period is minimal, so structural equality is sequence equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    algebra: Algebra,
    head: Vec<Rational>,
    tail: TailSpec,
}

impl Weight {
    /// Builds a weight from explicit leading coordinates and the tail pattern that
    /// starts right after them.
    pub fn new(
        algebra: Algebra,
        head: Vec<Rational>,
        classes: Vec<TailClass>,
        recip: Option<Recip>,
    ) -> Result<Self, WeightError> {
        let tail = TailSpec::new(head.len() as u64 + 1, classes, recip)?;
        let mut w = Weight {
            algebra,
            head,
            tail,
        };
        w.canonicalize();
        Ok(w)
    }

    /// The constant weight `(c, c, c, …)`.
    pub fn constant(algebra: Algebra, c: Rational) -> Self {
        Weight {
            algebra,
            head: Vec::new(),
            tail: TailSpec {
                start: 1,
                classes: vec![TailClass::new(Rational::zero(), c)],
                recip: None,
            },
        }
    }

    /// The zero weight.
    pub fn zero(algebra: Algebra) -> Self {
        Self::constant(algebra, Rational::zero())
    }

    /// Parses a weight literal such as `[1,0,-1] ++ lin 1,0`.
    pub fn parse(text: &str, algebra: Algebra) -> Result<Self, WeightError> {
        parse_weight(text, algebra)
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn head(&self) -> &[Rational] {
        &self.head
    }

    pub fn tail(&self) -> &TailSpec {
        &self.tail
    }

    /// The same coordinates regarded in another algebra.
    pub fn with_algebra(&self, algebra: Algebra) -> Weight {
        Weight {
            algebra,
            ..self.clone()
        }
    }

    /// The coordinate at position `k ≥ 1`.
    pub fn value(&self, k: u64) -> Rational {
        assert!(k >= 1, "positions start at 1");
        if k < self.tail.start {
            self.head[(k - 1) as usize].clone()
        } else {
            self.tail.value(k)
        }
    }

    /// The first `n` coordinates.
    pub fn prefix(&self, n: u64) -> Vec<Rational> {
        (1..=n).map(|k| self.value(k)).collect()
    }

    /// A copy with the given coordinates replaced.
    pub fn with_values<I>(&self, updates: I) -> Weight
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        let updates: BTreeMap<u64, Rational> = updates.into_iter().collect();
        let mut w = self.clone();
        if let Some((&last, _)) = updates.iter().next_back() {
            while w.tail.start <= last {
                let k = w.tail.start;
                w.head.push(w.tail.value(k));
                w.tail.start += 1;
            }
            for (k, v) in updates {
                w.head[(k - 1) as usize] = v;
            }
        }
        w.canonicalize();
        w
    }

    fn canonicalize(&mut self) {
        self.tail.reduce_period();
        while let Some(last) = self.head.last() {
            let k = self.head.len() as u64;
            if self.tail.defined_at(k) && self.tail.value(k) == *last {
                self.head.pop();
                self.tail.start -= 1;
            } else {
                break;
            }
        }
    }

    fn combine(&self, other: &Weight, sign: i64) -> Result<Weight, WeightError> {
        if self.algebra != other.algebra {
            return Err(WeightError::AlgebraMismatch(self.algebra, other.algebra));
        }
        let s = int(sign);
        let start = self.tail.start.max(other.tail.start);
        let m1 = self.tail.modulus();
        let m2 = other.tail.modulus();
        let m = m1.lcm(&m2);
        let classes = (0..m)
            .map(|r| {
                let a = &self.tail.classes[(r % m1) as usize];
                let b = &other.tail.classes[(r % m2) as usize];
                TailClass::new(&a.slope + &b.slope * &s, &a.intercept + &b.intercept * &s)
            })
            .collect();
        let recip = match (&self.tail.recip, &other.tail.recip) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(Recip {
                coeff: &b.coeff * &s,
                offset: b.offset,
            }),
            (Some(a), Some(b)) if a.offset == b.offset => Some(Recip {
                coeff: &a.coeff + &b.coeff * &s,
                offset: a.offset,
            }),
            (Some(_), Some(_)) => {
                return Err(WeightError::UnsupportedTail(
                    "reciprocal tails with different offsets do not combine".into(),
                ))
            }
        };
        let head = (1..start)
            .map(|k| self.value(k) + other.value(k) * &s)
            .collect();
        let tail = TailSpec::new(start, classes, recip)?;
        let mut w = Weight {
            algebra: self.algebra,
            head,
            tail,
        };
        w.canonicalize();
        Ok(w)
    }

    /// Coordinate-wise sum.
    pub fn checked_add(&self, other: &Weight) -> Result<Weight, WeightError> {
        self.combine(other, 1)
    }

    /// Coordinate-wise difference `self − other`.
    pub fn checked_sub(&self, other: &Weight) -> Result<Weight, WeightError> {
        self.combine(other, -1)
    }

    /// Adds the constant `c` to every coordinate.
    pub fn shifted(&self, c: &Rational) -> Weight {
        self.checked_add(&Weight::constant(self.algebra, c.clone()))
            .expect("constant shift never fails")
    }

    /// `Some(c)` when this is the constant sequence `(c, c, …)`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.head.is_empty() && self.tail.recip.is_none() && self.tail.classes.len() == 1 {
            let c = &self.tail.classes[0];
            if c.slope.is_zero() {
                return Some(c.intercept.clone());
            }
        }
        None
    }

    /// The nonzero coordinates, when all but finitely many vanish.
    pub fn finite_support(&self) -> Option<BTreeMap<u64, Rational>> {
        let zero_tail = self.tail.recip.is_none()
            && self
                .tail
                .classes
                .iter()
                .all(|c| c.slope.is_zero() && c.intercept.is_zero());
        if !zero_tail {
            return None;
        }
        Some(
            self.head
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u64 + 1, v.clone()))
                .collect(),
        )
    }

    /// In `Sl` mode, the representative of `self` that differs from `reference` by a
    /// sequence vanishing eventually. Returns `self` unchanged in `Gl` mode or when the
    /// difference is not eventually constant.
    pub fn aligned_to(&self, reference: &Weight) -> Weight {
        if self.algebra != Algebra::Sl {
            return self.clone();
        }
        match self.checked_sub(reference) {
            Ok(d) => match eventual_constant(&d) {
                Some(c) if !c.is_zero() => self.shifted(&-c),
                _ => self.clone(),
            },
            Err(_) => self.clone(),
        }
    }

    /// The textual literal in canonical form.
    pub fn literal(&self) -> String {
        format_weight(self)
    }
}

fn eventual_constant(w: &Weight) -> Option<Rational> {
    let t = &w.tail;
    if t.recip.is_none() && t.classes.len() == 1 && t.classes[0].slope.is_zero() {
        Some(t.classes[0].intercept.clone())
    } else {
        None
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_weight(self))
    }
}

/// Renders a weight as a literal accepted by [`parse_weight`].
pub fn format_weight(w: &Weight) -> String {
    let head: Vec<String> = w.head.iter().map(format_rational).collect();
    let t = &w.tail;
    let base = if t.classes.len() == 1 {
        let c = &t.classes[0];
        if c.slope.is_zero() {
            format!("const {}", c.intercept)
        } else {
            format!("lin {},{}", c.slope, c.intercept)
        }
    } else {
        let cls: Vec<String> = t
            .classes
            .iter()
            .map(|c| format!("({},{})", c.slope, c.intercept))
            .collect();
        format!("mod {}: {}", t.classes.len(), cls.join(";"))
    };
    let recip = match &t.recip {
        Some(r) => format!(" + recip {},{}", r.coeff, r.offset),
        None => String::new(),
    };
    format!("[{}] ++ {}{}", head.join(","), base, recip)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, WeightError> {
        Err(WeightError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), WeightError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn digits(&mut self) -> Result<BigInt, WeightError> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected digits");
        }
        let n = self.rest()[..len].parse::<BigInt>().expect("ascii digits");
        self.pos += len;
        Ok(n)
    }

    fn integer(&mut self) -> Result<BigInt, WeightError> {
        self.skip_ws();
        let negative = if self.rest().starts_with('-') {
            self.pos += 1;
            true
        } else if self.rest().starts_with('−') {
            self.pos += '−'.len_utf8();
            true
        } else {
            if self.rest().starts_with('+') {
                self.pos += 1;
            }
            false
        };
        let n = self.digits()?;
        Ok(if negative { -n } else { n })
    }

    fn small_integer(&mut self) -> Result<i64, WeightError> {
        let n = self.integer()?;
        match n.to_i64() {
            Some(v) => Ok(v),
            None => self.err("integer out of range"),
        }
    }

    fn rational(&mut self) -> Result<Rational, WeightError> {
        let num = self.integer()?;
        if self.rest().starts_with('/') {
            self.pos += 1;
            let den = self.digits()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn finish(&mut self) -> Result<(), WeightError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

/// Parses the weight grammar
///
/// ```text
/// weight := "[" (rational ("," rational)*)? "]" "++" tail
/// tail   := base ("+" "recip" rational "," int)?
/// base   := "const" rational | "lin" rational "," rational
///         | "mod" int ":" "(" rational "," rational ")" (";" "(" rational "," rational ")")*
/// ```
///
/// The `mod` classes are listed for residues `0, 1, …, m−1` of the absolute position.
pub fn parse_weight(text: &str, algebra: Algebra) -> Result<Weight, WeightError> {
    let mut cur = Cursor::new(text);
    cur.expect("[")?;
    let mut head = Vec::new();
    if !cur.eat("]") {
        loop {
            head.push(cur.rational()?);
            if cur.eat("]") {
                break;
            }
            cur.expect(",")?;
        }
    }
    cur.expect("++")?;
    let classes = if cur.eat("const") {
        vec![TailClass::new(Rational::zero(), cur.rational()?)]
    } else if cur.eat("lin") {
        let s = cur.rational()?;
        cur.expect(",")?;
        vec![TailClass::new(s, cur.rational()?)]
    } else if cur.eat("mod") {
        let m = cur.small_integer()?;
        if m < 1 {
            return cur.err("modulus must be positive");
        }
        cur.expect(":")?;
        let mut classes = Vec::new();
        loop {
            cur.expect("(")?;
            let s = cur.rational()?;
            cur.expect(",")?;
            let c = cur.rational()?;
            cur.expect(")")?;
            classes.push(TailClass::new(s, c));
            if !cur.eat(";") {
                break;
            }
        }
        if classes.len() as i64 != m {
            return cur.err(format!(
                "modulus {m} needs {m} classes, found {}",
                classes.len()
            ));
        }
        classes
    } else {
        return cur.err("expected `const`, `lin` or `mod`");
    };
    let recip = if cur.eat("+") {
        cur.expect("recip")?;
        let coeff = cur.rational()?;
        cur.expect(",")?;
        let offset = cur.small_integer()?;
        if coeff.is_zero() {
            return cur.err("reciprocal coefficient must be nonzero");
        }
        Some(Recip { coeff, offset })
    } else {
        None
    };
    cur.finish()?;
    Weight::new(algebra, head, classes, recip)
}

impl FromStr for Weight {
    type Err = WeightError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_weight(s, Algebra::Gl)
    }
}

/// The serialized shape of a weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightJson {
    pub algebra: Algebra,
    pub overrides: Vec<(u64, String, String)>,
    pub tail: TailJson,
    pub literal: String,
}

/// The serialized shape of a tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailJson {
    pub start: u64,
    #[serde(rename = "mod")]
    pub modulus: u64,
    pub classes: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recip: Option<(String, i64)>,
}

impl From<&Weight> for WeightJson {
    fn from(w: &Weight) -> Self {
        WeightJson {
            algebra: w.algebra,
            overrides: w
                .head
                .iter()
                .enumerate()
                .map(|(i, v)| (i as u64 + 1, v.numer().to_string(), v.denom().to_string()))
                .collect(),
            tail: TailJson {
                start: w.tail.start,
                modulus: w.tail.modulus(),
                classes: w
                    .tail
                    .classes
                    .iter()
                    .map(|c| (c.slope.to_string(), c.intercept.to_string()))
                    .collect(),
                recip: w
                    .tail
                    .recip
                    .as_ref()
                    .map(|r| (r.coeff.to_string(), r.offset)),
            },
            literal: format_weight(w),
        }
    }
}

impl TryFrom<WeightJson> for Weight {
    type Error = WeightError;
    fn try_from(j: WeightJson) -> Result<Self, Self::Error> {
        let start = j.tail.start;
        let mut head = vec![None; start.saturating_sub(1) as usize];
        for (pos, num, den) in &j.overrides {
            if *pos == 0 || *pos >= start {
                return Err(WeightError::OverrideBeyondTail {
                    position: *pos,
                    start,
                });
            }
            let v = parse_rational(&format!("{num}/{den}"))?;
            head[(*pos - 1) as usize] = Some(v);
        }
        let classes = j
            .tail
            .classes
            .iter()
            .map(|(s, c)| Ok(TailClass::new(parse_rational(s)?, parse_rational(c)?)))
            .collect::<Result<Vec<_>, WeightError>>()?;
        if classes.len() as u64 != j.tail.modulus {
            return Err(WeightError::UnsupportedTail(
                "class count differs from modulus".into(),
            ));
        }
        let recip = match &j.tail.recip {
            Some((c, o)) => Some(Recip {
                coeff: parse_rational(c)?,
                offset: *o,
            }),
            None => None,
        };
        let tail = TailSpec::new(start, classes, recip)?;
        let head = head
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or_else(|| tail.value(i as u64 + 1)))
            .collect();
        let mut w = Weight {
            algebra: j.algebra,
            head,
            tail,
        };
        w.canonicalize();
        Ok(w)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WeightJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = WeightJson::deserialize(deserializer)?;
        Weight::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Equality of weights: coordinate-wise in `Gl` mode, modulo constant sequences in `Sl` mode.
pub fn weight_eq(a: &Weight, b: &Weight) -> bool {
    if a.algebra != b.algebra {
        return false;
    }
    match a.algebra {
        Algebra::Gl => a == b,
        Algebra::Sl => a.checked_sub(b).is_ok_and(|d| d.as_constant().is_some()),
    }
}

/// A finitely supported integer vector `Σ d_k ε_k`, typically an element of the root lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootDelta {
    entries: BTreeMap<u64, i64>,
}

impl RootDelta {
    pub fn from_entries<I: IntoIterator<Item = (u64, i64)>>(entries: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            *map.entry(k).or_insert(0) += v;
        }
        map.retain(|_, v| *v != 0);
        RootDelta { entries: map }
    }

    /// The root `ε_i − ε_j`.
    pub fn root(i: u64, j: u64) -> Self {
        Self::from_entries([(i, 1), (j, -1)])
    }

    pub fn entries(&self) -> &BTreeMap<u64, i64> {
        &self.entries
    }

    pub fn get(&self, k: u64) -> i64 {
        self.entries.get(&k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.entries.values().sum()
    }

    /// `(i, j)` when this equals `ε_i − ε_j`.
    pub fn as_root(&self) -> Option<(u64, u64)> {
        if self.entries.len() != 2 {
            return None;
        }
        let mut it = self.entries.iter();
        let (&a, &va) = it.next()?;
        let (&b, &vb) = it.next()?;
        match (va, vb) {
            (1, -1) => Some((a, b)),
            (-1, 1) => Some((b, a)),
            _ => None,
        }
    }

    /// The weight with these coordinates.
    pub fn to_weight(&self, algebra: Algebra) -> Weight {
        let n = self.entries.keys().next_back().copied().unwrap_or(0);
        let head = (1..=n).map(|k| int(self.get(k))).collect();
        Weight::new(
            algebra,
            head,
            vec![TailClass::new(Rational::zero(), Rational::zero())],
            None,
        )
        .expect("finite vectors are valid weights")
    }
}

impl fmt::Display for RootDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, v)) in self.entries.iter().enumerate() {
            let sign = if *v < 0 {
                "-"
            } else if n > 0 {
                "+"
            } else {
                ""
            };
            let mag = v.abs();
            if mag == 1 {
                write!(f, "{sign}e{k}")?;
            } else {
                write!(f, "{sign}{mag}e{k}")?;
            }
        }
        Ok(())
    }
}

/// The integer vector `upper − lower` when it is finitely supported (modulo constants in
/// `Sl` mode) with integer entries summing to zero.
pub fn root_difference(upper: &Weight, lower: &Weight) -> Option<RootDelta> {
    let mut d = upper.checked_sub(lower).ok()?;
    if d.algebra == Algebra::Sl {
        if let Some(c) = eventual_constant(&d) {
            d = d.shifted(&-c);
        }
    }
    let support = d.finite_support()?;
    let mut entries = Vec::with_capacity(support.len());
    for (k, v) in support {
        if !v.is_integer() {
            return None;
        }
        entries.push((k, v.to_integer().to_i64()?));
    }
    let delta = RootDelta::from_entries(entries);
    (delta.sum() == 0).then_some(delta)
}

/// A monotone chain `start, start+step, start+2·step, …` listed in order or in reverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub start: u64,
    pub step: u64,
    pub descending: bool,
}

impl Chain {
    pub fn new(start: u64, step: u64, descending: bool) -> Self {
        Chain {
            start,
            step,
            descending,
        }
    }

    pub fn contains(&self, k: u64) -> bool {
        k >= self.start && (k - self.start).is_multiple_of(self.step)
    }

    fn index(&self, k: u64) -> u64 {
        (k - self.start) / self.step
    }

    fn position(&self, u: u64) -> u64 {
        self.start + self.step * u
    }
}

/// A total order `≺` on the positive integers defining a splitting Borel subalgebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BorelOrder {
    /// `1 ≺ 2 ≺ 3 ≺ …`
    OneSided,
    /// `… ≺ 5 ≺ 3 ≺ 1 ≺ 2 ≺ 4 ≺ 6 ≺ …`
    TwoSided,
    /// Chains placed one after another; roots between different chains have infinite length.
    Layered(Vec<Chain>),
}

impl BorelOrder {
    /// A validated layered order; the chains must partition the positive integers.
    pub fn layered(chains: Vec<Chain>) -> Result<Self, WeightError> {
        if chains.is_empty() {
            return Err(WeightError::InvalidOrder("no chains given".into()));
        }
        if chains.iter().any(|c| c.start == 0 || c.step == 0) {
            return Err(WeightError::InvalidOrder(
                "chain start and step must be positive".into(),
            ));
        }
        let period = chains.iter().fold(1u64, |acc, c| acc.lcm(&c.step));
        let max_start = chains.iter().map(|c| c.start).max().unwrap_or(1);
        for k in 1..=max_start + period {
            let hits = chains.iter().filter(|c| c.contains(k)).count();
            if hits != 1 {
                return Err(WeightError::InvalidOrder(format!(
                    "position {k} lies in {hits} chains"
                )));
            }
        }
        Ok(BorelOrder::Layered(chains))
    }

    /// The simplest ideal order `1 ≺ 3 ≺ 5 ≺ … ≺ 6 ≺ 4 ≺ 2`.
    pub fn simplest_ideal() -> Self {
        BorelOrder::Layered(vec![Chain::new(1, 2, false), Chain::new(2, 2, true)])
    }

    /// The chains of this order, listed in order.
    pub fn chains(&self) -> Vec<Chain> {
        match self {
            BorelOrder::OneSided => vec![Chain::new(1, 1, false)],
            BorelOrder::TwoSided => vec![Chain::new(1, 2, true), Chain::new(2, 2, false)],
            BorelOrder::Layered(chains) => chains.clone(),
        }
    }

    /// Index of the chain containing `k`.
    pub fn chain_of(&self, k: u64) -> usize {
        match self {
            BorelOrder::OneSided => 0,
            BorelOrder::TwoSided => usize::from(k.is_multiple_of(2)),
            BorelOrder::Layered(chains) => chains
                .iter()
                .position(|c| c.contains(k))
                .expect("chains partition ℤ>0"),
        }
    }

    /// Sort key realizing `≺`.
    pub fn key(&self, k: u64) -> (usize, i64) {
        let c = self.chain_of(k);
        let chain = &self.chains()[c];
        let u = chain.index(k) as i64;
        (c, if chain.descending { -u } else { u })
    }

    /// `i ≺ j`.
    pub fn precedes(&self, i: u64, j: u64) -> bool {
        self.key(i) < self.key(j)
    }

    /// Compares two positions under `≺`.
    pub fn cmp_positions(&self, i: u64, j: u64) -> Ordering {
        self.key(i).cmp(&self.key(j))
    }

    /// Whether roots joining different chains have finite length.
    pub fn cross_chain_finite(&self) -> bool {
        !matches!(self, BorelOrder::Layered(_))
    }

    /// Whether `ε_i − ε_j` has finite length.
    pub fn finite_length(&self, i: u64, j: u64) -> bool {
        self.cross_chain_finite() || self.chain_of(i) == self.chain_of(j)
    }

    /// Least common multiple of the chain steps.
    pub fn period(&self) -> u64 {
        self.chains().iter().fold(1u64, |acc, c| acc.lcm(&c.step))
    }

    fn max_chain_start(&self) -> u64 {
        self.chains().iter().map(|c| c.start).max().unwrap_or(1)
    }

    /// The positions strictly between `a ≺ b`, in order, or `None` if there are infinitely
    /// many.
    pub fn positions_between(&self, a: u64, b: u64) -> Option<Vec<u64>> {
        let (a, b) = if self.precedes(a, b) { (a, b) } else { (b, a) };
        let chains = self.chains();
        let (ca, cb) = (self.chain_of(a), self.chain_of(b));
        let (ua, ub) = (chains[ca].index(a), chains[cb].index(b));
        let mut out = Vec::new();
        if ca == cb {
            let ch = &chains[ca];
            if ch.descending {
                out.extend((ub + 1..ua).rev().map(|u| ch.position(u)));
            } else {
                out.extend((ua + 1..ub).map(|u| ch.position(u)));
            }
            return Some(out);
        }
        if cb != ca + 1 || !chains[ca].descending || chains[cb].descending {
            return None;
        }
        out.extend((0..ua).rev().map(|u| chains[ca].position(u)));
        out.extend((0..ub).map(|u| chains[cb].position(u)));
        Some(out)
    }
}

impl fmt::Display for BorelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorelOrder::OneSided => f.write_str("one-sided"),
            BorelOrder::TwoSided => f.write_str("two-sided"),
            BorelOrder::Layered(chains) => {
                let parts: Vec<String> = chains
                    .iter()
                    .map(|c| {
                        format!(
                            "{}/{}/{}",
                            c.start,
                            c.step,
                            if c.descending { "desc" } else { "asc" }
                        )
                    })
                    .collect();
                write!(f, "layered:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for BorelOrder {
    type Err = WeightError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| WeightError::InvalidOrder(m.to_string());
        match s {
            "one-sided" => return Ok(BorelOrder::OneSided),
            "two-sided" => return Ok(BorelOrder::TwoSided),
            "layered:si" => return Ok(BorelOrder::simplest_ideal()),
            _ => {}
        }
        let spec = s
            .strip_prefix("layered:")
            .ok_or_else(|| bad("unknown order"))?;
        let mut chains = Vec::new();
        for part in spec.split(',') {
            let fields: Vec<&str> = part.trim().split('/').collect();
            if fields.len() != 3 {
                return Err(bad("chains are written start/step/asc|desc"));
            }
            let start = fields[0].parse().map_err(|_| bad("bad chain start"))?;
            let step = fields[1].parse().map_err(|_| bad("bad chain step"))?;
            let descending = match fields[2] {
                "asc" => false,
                "desc" => true,
                _ => return Err(bad("chain direction must be asc or desc")),
            };
            chains.push(Chain::new(start, step, descending));
        }
        BorelOrder::layered(chains)
    }
}

/// Dynkin diagrams (and layered orders) for which a half sum of positive roots is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagram {
    A1Sided,
    A2Sided,
    Binf,
    Cinf,
    Dinf,
    GlInf1Sided,
    Layered(BorelOrder),
}

impl FromStr for Diagram {
    type Err = WeightError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A1sided" | "a1" => Diagram::A1Sided,
            "A2sided" | "a2" => Diagram::A2Sided,
            "Binf" | "b" => Diagram::Binf,
            "Cinf" | "c" => Diagram::Cinf,
            "Dinf" | "d" => Diagram::Dinf,
            "GLinf1sided" | "gl" => Diagram::GlInf1Sided,
            other => Diagram::Layered(other.parse()?),
        })
    }
}

fn affine(algebra: Algebra, slope: i64, intercept: Rational) -> Weight {
    Weight::new(
        algebra,
        Vec::new(),
        vec![TailClass::new(int(slope), intercept)],
        None,
    )
    .expect("affine weights are valid")
}

/// The half sum of positive roots attached to a diagram, in ε-coordinates.
pub fn rho(diagram: &Diagram) -> Result<Weight, WeightError> {
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    Ok(match diagram {
        Diagram::A1Sided | Diagram::Dinf => affine(Algebra::Sl, -1, int(1)),
        Diagram::GlInf1Sided => affine(Algebra::Gl, -1, int(1)),
        Diagram::A2Sided => Weight::new(
            Algebra::Sl,
            Vec::new(),
            vec![
                TailClass::new(half.clone(), Rational::zero()),
                TailClass::new(-half.clone(), half),
            ],
            None,
        )?,
        Diagram::Binf => affine(Algebra::Sl, -1, half),
        Diagram::Cinf => affine(Algebra::Sl, -1, Rational::zero()),
        Diagram::Layered(order) => chain_rho(order, Algebra::Sl),
    })
}

/// ρ̃ for an order: along each chain `−1, −2, −3, …` in ascending chains and
/// `+1, +2, +3, …` in descending chains, indexed from the chain's first listed position.
fn chain_rho(order: &BorelOrder, algebra: Algebra) -> Weight {
    let chains = order.chains();
    let value = |k: u64| -> Rational {
        let ch = &chains[order.chain_of(k)];
        let u = ch.index(k) as i64 + 1;
        int(if ch.descending { u } else { -u })
    };
    let start = order.max_chain_start();
    let period = order.period();
    let head = (1..start).map(value).collect();
    let classes = (0..period)
        .map(|r| {
            let k = start + (r + period - start % period) % period;
            let ch = &chains[order.chain_of(k)];
            let step = int(ch.step as i64);
            let sign = if ch.descending { 1 } else { -1 };
            let slope = int(sign) / &step;
            let intercept = value(k) - &slope * int(k as i64);
            TailClass::new(slope, intercept)
        })
        .collect();
    Weight::new(algebra, head, classes, None).expect("chain ρ is a valid weight")
}

/// The ρ used to pair with coroots for `order`: `1 − k` for the one-sided order, minus the
/// rank within `… ≺ 3 ≺ 1 ≺ 2 ≺ 4 ≺ …` for the two-sided order, and ρ̃ for layered orders.
pub fn pairing_rho(order: &BorelOrder, algebra: Algebra) -> Weight {
    match order {
        BorelOrder::OneSided => affine(algebra, -1, int(1)),
        BorelOrder::TwoSided | BorelOrder::Layered(_) => chain_rho(order, algebra),
    }
}

/// Whether `mu ⪯ lambda`, i.e. `lambda − mu` is a nonnegative integer combination of
/// positive roots.
pub fn order_leq(mu: &Weight, lambda: &Weight, order: &BorelOrder) -> bool {
    match root_difference(lambda, mu) {
        Some(d) => is_nonnegative(&d, order),
        None => false,
    }
}

/// Whether a root-lattice element lies in `Λ⁺` for `order`.
pub fn is_nonnegative(d: &RootDelta, order: &BorelOrder) -> bool {
    if d.sum() != 0 {
        return false;
    }
    let mut items: Vec<((usize, i64), i64)> = d
        .entries()
        .iter()
        .map(|(&k, &v)| (order.key(k), v))
        .collect();
    items.sort();
    let mut acc = 0i64;
    items.iter().all(|(_, v)| {
        acc += v;
        acc >= 0
    })
}

/// Whether `α = ±(ε_i − ε_j)` has only finitely many decompositions into positive roots.
pub fn finite_length_root(alpha: &RootDelta, order: &BorelOrder) -> Result<bool, WeightError> {
    let (i, j) = alpha
        .as_root()
        .ok_or_else(|| WeightError::NotARoot(alpha.to_string()))?;
    Ok(order.finite_length(i, j))
}

/// The weight-type flags of `λ` relative to a Borel order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classification {
    pub integral: bool,
    pub antidominant: bool,
    pub almost_antidominant: bool,
    pub dominant: bool,
    pub almost_dominant: bool,
    pub regular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Extent {
    Empty,
    Finite,
    Infinite,
}

#[derive(Clone, Copy)]
enum Sign {
    Pos,
    Neg,
}

fn to_i128(r: &Rational) -> Result<i128, WeightError> {
    debug_assert!(r.is_integer());
    r.to_integer().to_i128().ok_or(WeightError::Overflow)
}

/// Extent of `{v ≥ 0 : a·v + b > 0}` (or `< 0`).
fn line_extent(a: i128, b: i128, sign: Sign) -> Extent {
    let (a, b) = match sign {
        Sign::Pos => (a, b),
        Sign::Neg => (-a, -b),
    };
    if a > 0 || (a == 0 && b > 0) {
        Extent::Infinite
    } else if b > 0 {
        Extent::Finite
    } else {
        Extent::Empty
    }
}

fn line_zero_extent(a: i128, b: i128) -> Extent {
    if a == 0 {
        if b == 0 {
            Extent::Infinite
        } else {
            Extent::Empty
        }
    } else if (-b) % a == 0 && (-b) / a >= 0 {
        Extent::Finite
    } else {
        Extent::Empty
    }
}

/// Extent of `{(u, w) ∈ ℕ² : P·u − Q·w + R > 0}` (or `< 0`).
fn quadrant_extent(p: i128, q: i128, r: i128, sign: Sign) -> Extent {
    let (p, q, r) = match sign {
        Sign::Pos => (p, q, r),
        Sign::Neg => (-p, -q, -r),
    };
    if p > 0 || q < 0 || ((p == 0 || q == 0) && r > 0) {
        Extent::Infinite
    } else if r > 0 {
        Extent::Finite
    } else {
        Extent::Empty
    }
}

/// Extent of `{(u, w) ∈ ℕ² : P·u − Q·w + R = 0}`.
fn quadrant_zero_extent(p: i128, q: i128, r: i128) -> Extent {
    if p == 0 && q == 0 {
        return if r == 0 {
            Extent::Infinite
        } else {
            Extent::Empty
        };
    }
    if p == 0 {
        return if r % q == 0 && r / q >= 0 {
            Extent::Infinite
        } else {
            Extent::Empty
        };
    }
    if q == 0 {
        return if (-r) % p == 0 && (-r) / p >= 0 {
            Extent::Infinite
        } else {
            Extent::Empty
        };
    }
    if r % p.gcd(&q) != 0 {
        return Extent::Empty;
    }
    if (p > 0) == (q > 0) {
        return Extent::Infinite;
    }
    // a·u + b·w = c with a, b > 0 has finitely many solutions.
    let (a, b, c) = if p > 0 { (p, -q, -r) } else { (-p, q, r) };
    if c < 0 {
        return Extent::Empty;
    }
    let found = (0..=c / a).any(|u| (c - a * u) % b == 0);
    if found {
        Extent::Finite
    } else {
        Extent::Empty
    }
}

struct Ray {
    first: u64,
    alpha: i128,
    beta: Rational,
    link: Rational,
    chain: usize,
}

struct Profile {
    order: BorelOrder,
    step: u64,
    head: Vec<(u64, Rational, Rational)>,
    rays: Vec<Ray>,
    isolated_tail: bool,
}

impl Profile {
    fn build(lambda: &Weight, order: &BorelOrder, rho: &Weight) -> Result<Self, WeightError> {
        let t = lambda.tail();
        if t.classes.iter().any(|c| !c.slope.is_integer()) {
            return Err(WeightError::UnsupportedTail(
                "classification needs integer tail slopes".into(),
            ));
        }
        let rho = rho.with_algebra(lambda.algebra());
        let p = lambda.checked_add(&rho)?;
        let step = t.modulus().lcm(&p.tail().modulus()).lcm(&order.period());
        let mut bound = t
            .start
            .max(p.tail().start)
            .max(order.max_chain_start())
            .max(2);
        if let Some(rc) = &t.recip {
            bound = bound.max(isolation_bound(t, rc));
            let mut extra = bound;
            for k in 1..bound {
                let v = lambda.value(k);
                for (r, class) in t.classes.iter().enumerate() {
                    let mut d = frac_part(&(&v - &class.intercept));
                    if d > Rational::new(1.into(), 2.into()) {
                        d -= int(1);
                    }
                    if d.is_zero() {
                        continue;
                    }
                    let j = &rc.coeff / &d - int(rc.offset);
                    if j.is_integer() && j >= int(bound as i64) {
                        let j = j.to_integer().to_u64().ok_or(WeightError::Overflow)?;
                        if j % t.modulus() == r as u64 {
                            extra = extra.max(j + 1);
                        }
                    }
                }
            }
            bound = extra;
        }
        let head = (1..bound)
            .map(|k| (k, p.value(k), frac_part(&lambda.value(k))))
            .collect();
        let mut rays = Vec::new();
        if t.recip.is_none() {
            for first in bound..bound + step {
                let beta = p.value(first);
                let alpha = p.value(first + step) - &beta;
                if !alpha.is_integer() {
                    return Err(WeightError::UnsupportedTail(
                        "λ+ρ does not grow by integers along residue classes".into(),
                    ));
                }
                rays.push(Ray {
                    first,
                    alpha: to_i128(&alpha)?,
                    beta,
                    link: frac_part(&lambda.value(first)),
                    chain: order.chain_of(first),
                });
            }
        }
        Ok(Profile {
            order: order.clone(),
            step,
            head,
            rays,
            isolated_tail: t.recip.is_some(),
        })
    }

    fn integral(&self) -> bool {
        if self.isolated_tail {
            return false;
        }
        let mut links: BTreeMap<usize, BTreeSet<&Rational>> = BTreeMap::new();
        let group = |k: u64| {
            if self.order.cross_chain_finite() {
                0
            } else {
                self.order.chain_of(k)
            }
        };
        for (k, _, link) in &self.head {
            links.entry(group(*k)).or_default().insert(link);
        }
        for ray in &self.rays {
            links.entry(group(ray.first)).or_default().insert(&ray.link);
        }
        links.values().all(|s| s.len() <= 1)
    }

    /// Calls `visit` with every family of finite-length linked positive roots, described as
    /// the value `(λ+ρ)(h_α)` along the family.
    fn families(
        &self,
        visit: &mut dyn FnMut(Family<'_>) -> Result<(), WeightError>,
    ) -> Result<(), WeightError> {
        let order = &self.order;
        let chains = order.chains();
        for (a, pa, la) in &self.head {
            for (b, pb, lb) in &self.head {
                if a != b && la == lb && order.precedes(*a, *b) && order.finite_length(*a, *b) {
                    visit(Family::Single {
                        i: *a,
                        j: *b,
                        value: to_i128(&(pa - pb))?,
                    })?;
                }
            }
        }
        for (h, ph, lh) in &self.head {
            for ray in &self.rays {
                if *lh != ray.link || !order.finite_length(*h, ray.first) {
                    continue;
                }
                let diff = to_i128(&(ph - &ray.beta))?;
                if order.precedes(*h, ray.first) {
                    visit(Family::Line {
                        fixed: *h,
                        fixed_first: true,
                        ray,
                        a: -ray.alpha,
                        b: diff,
                    })?;
                } else {
                    visit(Family::Line {
                        fixed: *h,
                        fixed_first: false,
                        ray,
                        a: ray.alpha,
                        b: -diff,
                    })?;
                }
            }
        }
        for ra in &self.rays {
            for rb in &self.rays {
                if ra.link != rb.link {
                    continue;
                }
                let r0 = to_i128(&(&ra.beta - &rb.beta))?;
                if ra.chain == rb.chain {
                    let delta = i128::from(ra.first >= rb.first);
                    let (p, q, r) = (ra.alpha - rb.alpha, rb.alpha, r0 - rb.alpha * delta);
                    let desc = chains[ra.chain].descending;
                    let (p, q, r) = if desc { (-p, -q, -r) } else { (p, q, r) };
                    visit(Family::Plane {
                        ra,
                        rb,
                        delta: delta as u64,
                        swapped: desc,
                        p,
                        q,
                        r,
                    })?;
                } else if order.cross_chain_finite() && ra.chain < rb.chain {
                    visit(Family::Plane {
                        ra,
                        rb,
                        delta: 0,
                        swapped: false,
                        p: ra.alpha,
                        q: rb.alpha,
                        r: r0,
                    })?;
                }
            }
        }
        Ok(())
    }
}

fn isolation_bound(t: &TailSpec, rc: &Recip) -> u64 {
    let mut eps = int(1);
    for a in &t.classes {
        for b in &t.classes {
            let f = frac_part(&(&a.intercept - &b.intercept));
            if !f.is_zero() {
                let dist = f.clone().min(int(1) - f);
                eps = eps.min(dist);
            }
        }
    }
    let need = (int(2) * rc.coeff.abs() / eps).floor().to_integer();
    let k: BigInt = need - BigInt::from(rc.offset) + BigInt::one();
    k.to_u64().unwrap_or(1).max(1)
}

enum Family<'a> {
    /// A single root `ε_i − ε_j`.
    Single { i: u64, j: u64, value: i128 },
    /// Roots joining a fixed position to the ray positions `first + step·v`, with value
    /// `a·v + b`.
    Line {
        fixed: u64,
        fixed_first: bool,
        ray: &'a Ray,
        a: i128,
        b: i128,
    },
    /// Roots joining `i = ra.first + step·u` and `j = rb.first + step·(u·[same] + delta + w)`
    /// with value `p·u − q·w + r`; `swapped` means the root is `ε_j − ε_i`.
    Plane {
        ra: &'a Ray,
        rb: &'a Ray,
        delta: u64,
        swapped: bool,
        p: i128,
        q: i128,
        r: i128,
    },
}

fn sign_extent(f: &Family<'_>, sign: Option<Sign>) -> Extent {
    match (f, sign) {
        (Family::Single { value, .. }, Some(Sign::Pos)) => {
            if *value > 0 {
                Extent::Finite
            } else {
                Extent::Empty
            }
        }
        (Family::Single { value, .. }, Some(Sign::Neg)) => {
            if *value < 0 {
                Extent::Finite
            } else {
                Extent::Empty
            }
        }
        (Family::Single { value, .. }, None) => {
            if *value == 0 {
                Extent::Finite
            } else {
                Extent::Empty
            }
        }
        (Family::Line { a, b, .. }, Some(s)) => line_extent(*a, *b, s),
        (Family::Line { a, b, .. }, None) => line_zero_extent(*a, *b),
        (Family::Plane { p, q, r, .. }, Some(s)) => quadrant_extent(*p, *q, *r, s),
        (Family::Plane { p, q, r, .. }, None) => quadrant_zero_extent(*p, *q, *r),
    }
}

/// Classifies `λ` with the default pairing ρ of the order.
pub fn classify(lambda: &Weight, order: &BorelOrder) -> Result<Classification, WeightError> {
    classify_with_rho(lambda, order, &pairing_rho(order, lambda.algebra()))
}

/// Classifies `λ` against an explicitly supplied ρ.
pub fn classify_with_rho(
    lambda: &Weight,
    order: &BorelOrder,
    rho: &Weight,
) -> Result<Classification, WeightError> {
    let profile = Profile::build(lambda, order, rho)?;
    let (mut pos, mut neg, mut zero) = (Extent::Empty, Extent::Empty, Extent::Empty);
    profile.families(&mut |f| {
        pos = pos.max(sign_extent(&f, Some(Sign::Pos)));
        neg = neg.max(sign_extent(&f, Some(Sign::Neg)));
        zero = zero.max(sign_extent(&f, None));
        Ok(())
    })?;
    Ok(Classification {
        integral: profile.integral(),
        antidominant: pos == Extent::Empty,
        almost_antidominant: pos != Extent::Infinite,
        dominant: neg == Extent::Empty,
        almost_dominant: neg != Extent::Infinite,
        regular: zero == Extent::Empty,
    })
}

/// `Ξ(λ)`: the positive roots `α` with `(λ+ρ)(h_α) ∈ ℤ>0`, as pairs `(i, j)` for `ε_i − ε_j`.
pub fn inversion_pairs(
    lambda: &Weight,
    order: &BorelOrder,
) -> Result<BTreeSet<(u64, u64)>, WeightError> {
    inversion_pairs_with_rho(lambda, order, &pairing_rho(order, lambda.algebra()))
}

/// [`inversion_pairs`] against an explicitly supplied ρ.
pub fn inversion_pairs_with_rho(
    lambda: &Weight,
    order: &BorelOrder,
    rho: &Weight,
) -> Result<BTreeSet<(u64, u64)>, WeightError> {
    let profile = Profile::build(lambda, order, rho)?;
    let step = profile.step;
    let mut out = BTreeSet::new();
    profile.families(&mut |f| {
        match sign_extent(&f, Some(Sign::Pos)) {
            Extent::Empty => return Ok(()),
            Extent::Infinite => return Err(WeightError::InfiniteInversionSet),
            Extent::Finite => {}
        }
        match f {
            Family::Single { i, j, .. } => {
                out.insert((i, j));
            }
            Family::Line {
                fixed,
                fixed_first,
                ray,
                a,
                b,
            } => {
                let mut v = 0i128;
                while a * v + b > 0 {
                    let k = ray.first + step * v as u64;
                    out.insert(if fixed_first { (fixed, k) } else { (k, fixed) });
                    v += 1;
                }
            }
            Family::Plane {
                ra,
                rb,
                delta,
                swapped,
                p,
                q,
                r,
            } => {
                let same = ra.chain == rb.chain;
                let mut u = 0i128;
                while p * u + r > 0 {
                    let mut w = 0i128;
                    while p * u - q * w + r > 0 {
                        let i = ra.first + step * u as u64;
                        let jw = if same {
                            u as u64 + delta + w as u64
                        } else {
                            w as u64
                        };
                        let j = rb.first + step * jw;
                        out.insert(if swapped { (j, i) } else { (i, j) });
                        w += 1;
                    }
                    u += 1;
                }
            }
        }
        Ok(())
    })?;
    Ok(out)
}

/// `Ξ(λ)` as root-lattice elements.
pub fn inversion_roots(lambda: &Weight, order: &BorelOrder) -> Result<Vec<RootDelta>, WeightError> {
    Ok(inversion_pairs(lambda, order)?
        .into_iter()
        .map(|(i, j)| RootDelta::root(i, j))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        parse_weight(s, Algebra::Gl).unwrap()
    }

    #[test]
    fn literal_round_trip() {
        for lit in [
            "[1,0,-1] ++ lin 1,0",
            "[] ++ const 0",
            "[2,2] ++ lin 1,0",
            "[0,2] ++ const 0 + recip 1,-1",
            "[1/2] ++ mod 2: (1,0);(-1,1/3)",
        ] {
            let a = w(lit);
            assert_eq!(w(&a.literal()), a, "{lit}");
        }
        assert_eq!(w("[1,2,3] ++ lin 1,0").literal(), "[] ++ lin 1,0");
        assert_eq!(w("[] ++ mod 2: (1,0);(1,0)").literal(), "[] ++ lin 1,0");
        assert_eq!(w("[−1] ++ const 0").value(1), int(-1));
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_weight("[1,2", Algebra::Gl).is_err());
        assert!(parse_weight("[1] ++ mod 2: (1,0)", Algebra::Gl).is_err());
        assert!(parse_weight("[1] ++ const 1/0", Algebra::Gl).is_err());
        assert!(parse_weight("[] ++ const 0 + recip 1,-1", Algebra::Gl).is_err());
    }

    #[test]
    fn quadrant_extents_match_brute_force() {
        for p in -3i128..=3 {
            for q in -3i128..=3 {
                for r in -6i128..=6 {
                    let count = |pred: &dyn Fn(i128) -> bool, n: i128| {
                        (0..n)
                            .flat_map(|u| (0..n).map(move |w| (u, w)))
                            .filter(|&(u, w)| pred(p * u - q * w + r))
                            .count()
                    };
                    for (sign, pred) in [
                        (Some(Sign::Pos), &(|x: i128| x > 0) as &dyn Fn(i128) -> bool),
                        (Some(Sign::Neg), &|x: i128| x < 0),
                        (None, &|x: i128| x == 0),
                    ] {
                        let (a, b) = (count(pred, 40), count(pred, 80));
                        let expected = if a == 0 && b == 0 {
                            Extent::Empty
                        } else if a == b {
                            Extent::Finite
                        } else {
                            Extent::Infinite
                        };
                        let got = match sign {
                            Some(s) => quadrant_extent(p, q, r, s),
                            None => quadrant_zero_extent(p, q, r),
                        };
                        assert_eq!(got, expected, "p={p} q={q} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn two_sided_key_order() {
        let o = BorelOrder::TwoSided;
        let mut v: Vec<u64> = (1..=7).collect();
        v.sort_by(|a, b| o.cmp_positions(*a, *b));
        assert_eq!(v, vec![7, 5, 3, 1, 2, 4, 6]);
        assert_eq!(o.positions_between(3, 4), Some(vec![1, 2]));
        assert_eq!(BorelOrder::simplest_ideal().positions_between(1, 2), None);
        assert_eq!(
            BorelOrder::simplest_ideal().positions_between(1, 5),
            Some(vec![3])
        );
    }

    #[test]
    fn invalid_layered_orders() {
        assert!(BorelOrder::layered(vec![Chain::new(1, 2, false)]).is_err());
        assert!(
            BorelOrder::layered(vec![Chain::new(1, 1, false), Chain::new(2, 2, true)]).is_err()
        );
        assert!("layered:1/2/asc,2/2/desc".parse::<BorelOrder>().is_ok());
    }
}
