//! Category O computations for `gl∞` and `sl∞` with the one-sided Dynkin Borel order.
//!
//! Every weight in an integral dot orbit is written `x·base`, where `base` is the
//! antidominant representative and `x` is the shortest finitary permutation producing it.
//! Composition multiplicities then come from Kazhdan-Lusztig polynomials of the smallest
//! parabolic `S_m` containing the permutations involved.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{lower_interval, parabolic_closure, CoxeterError, Family, GroupElement};
use crate::hecke::{HeckeError, KlTable};
use crate::weights::{
    classify_with_rho, int, inversion_pairs_with_rho, is_nonnegative, order_leq, root_difference,
    weight_eq, Algebra, BorelOrder, Classification, Rational, RootDelta, TailClass, Weight,
    WeightError,
};

/// Default cap on the number of weights enumerated in a window.
pub const DEFAULT_WINDOW_LIMIT: usize = 100_000;

/// Errors raised by category O operations.
#[derive(Debug, Error)]
pub enum OError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error("{0} is not almost antidominant, so its orbit has no antidominant anchor")]
    NotAlmostAntidominant(String),
    #[error("the dot orbit of {0} is singular; no multiplicity algorithm is available")]
    SingularOrbit(String),
    #[error("category O operations support only the one-sided order, not {0}")]
    UnsupportedOrder(String),
    #[error("only type A elements act on gl/sl weights, got {0}")]
    NotTypeA(String),
    #[error("{0} is not in the dot orbit of {1}")]
    NotInOrbit(String, String),
    #[error("window bounds {0} and {1} do not differ by a root-lattice element")]
    UnboundedWindow(String, String),
    #[error("window exceeds the limit of {0} weights")]
    WindowLimit(usize),
    #[error("{0} is not below the cap {1}")]
    NotBelowCap(String, String),
    #[error("Kostant partition count of {0} is infinite for this order")]
    InfinitePartition(String),
    #[error("no simple character supplied for {0} covering {1}")]
    MissingSimple(String, String),
    #[error("negative residual dimension at {0}")]
    Inconsistent(String),
}

impl OError {
    /// Stable identifier used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            OError::Weight(e) => e.name(),
            OError::Coxeter(e) => e.name(),
            OError::Hecke(e) => e.name(),
            OError::NotAlmostAntidominant(_) => "NotAlmostAntidominant",
            OError::SingularOrbit(_) => "SingularOrbit",
            OError::UnsupportedOrder(_) => "UnsupportedOrder",
            OError::NotTypeA(_) => "NotTypeA",
            OError::NotInOrbit(..) => "NotInOrbit",
            OError::UnboundedWindow(..) => "UnboundedWindow",
            OError::WindowLimit(_) => "WindowLimit",
            OError::NotBelowCap(..) => "NotBelowCap",
            OError::InfinitePartition(_) => "InfinitePartition",
            OError::MissingSimple(..) => "MissingSimple",
            OError::Inconsistent(_) => "Inconsistent",
        }
    }
}

pub type Result<T> = std::result::Result<T, OError>;

/// A Grothendieck group generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "basis", content = "weight")]
pub enum BasisSymbol {
    /// `[M(λ)]`
    Verma(Weight),
    /// `[L(λ)]`
    Simple(Weight),
}

impl BasisSymbol {
    pub fn weight(&self) -> &Weight {
        match self {
            BasisSymbol::Verma(w) | BasisSymbol::Simple(w) => w,
        }
    }
}

/// Which basis to expand into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Verma,
    Simple,
}

/// A finite integer combination of basis symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<BasisSymbol, BigInt>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(symbol: BasisSymbol) -> Self {
        let mut s = Self::new();
        s.add(symbol, BigInt::one());
        s
    }

    pub fn add(&mut self, symbol: BasisSymbol, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(symbol.clone())
            .or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&symbol);
        }
    }

    pub fn terms(&self) -> &BTreeMap<BasisSymbol, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, symbol: &BasisSymbol) -> BigInt {
        self.terms.get(symbol).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Weight multiplicities of a module on a window `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterWindow {
    pub lower: Weight,
    pub upper: Weight,
    pub dims: BTreeMap<Weight, BigInt>,
}

impl CharacterWindow {
    /// The dimension at `xi`, matching keys up to [`weight_eq`].
    pub fn dim(&self, xi: &Weight) -> Option<BigInt> {
        if let Some(d) = self.dims.get(xi) {
            return Some(d.clone());
        }
        self.dims
            .iter()
            .find(|(k, _)| weight_eq(k, xi))
            .map(|(_, d)| d.clone())
    }

    /// Every dimension multiplied by `c`.
    pub fn scaled(&self, c: &BigInt) -> CharacterWindow {
        CharacterWindow {
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            dims: self.dims.iter().map(|(k, d)| (k.clone(), d * c)).collect(),
        }
    }
}

/// Orbit elements `x·base` inside a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitWindow {
    pub base: Weight,
    pub lower: Weight,
    pub upper: Weight,
    pub elements: BTreeMap<Weight, GroupElement>,
}

/// Structure of a Verma module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VermaStatus {
    pub simple: bool,
    pub finite_length: bool,
    pub socle_highest_weight: Option<Weight>,
    pub chain_to_antidominant: Option<Vec<RootDelta>>,
}

/// Homological properties read off from the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomologicalFlags {
    pub has_injective_hull: bool,
    pub integrable_simple: bool,
}

/// One row of a multiplicity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityEntry {
    pub weight: Weight,
    pub x: GroupElement,
    pub mult: BigInt,
}

/// `[M(λ) : L(ν)]` for every orbit weight `ν` between the base and `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub base: Weight,
    pub elements: Vec<MultiplicityEntry>,
}

/// Entry point for category O computations. Holds the Borel order, the ρ normalization,
/// the shared KL memo table and the window size cap.
#[derive(Clone)]
pub struct CategoryO {
    order: BorelOrder,
    rho_shift: Rational,
    table: Arc<KlTable>,
    window_limit: usize,
}

impl Default for CategoryO {
    fn default() -> Self {
        Self::new()
    }
}

impl CategoryO {
    /// The one-sided order with `ρ = (0, −1, −2, …)`.
    pub fn new() -> Self {
        CategoryO {
            order: BorelOrder::OneSided,
            rho_shift: Rational::zero(),
            table: Arc::new(KlTable::new()),
            window_limit: DEFAULT_WINDOW_LIMIT,
        }
    }

    /// Uses `order`; only the one-sided order is supported.
    pub fn with_order(self, order: BorelOrder) -> Result<Self> {
        if order != BorelOrder::OneSided {
            return Err(OError::UnsupportedOrder(order.to_string()));
        }
        Ok(CategoryO { order, ..self })
    }

    /// Shares an existing KL memo table.
    pub fn with_table(self, table: Arc<KlTable>) -> Self {
        CategoryO { table, ..self }
    }

    /// Replaces ρ by `ρ + c`.
    pub fn with_rho_shift(self, c: Rational) -> Self {
        CategoryO {
            rho_shift: c,
            ..self
        }
    }

    /// Caps window enumerations at `limit` weights.
    pub fn with_window_limit(self, limit: usize) -> Self {
        CategoryO {
            window_limit: limit,
            ..self
        }
    }

    pub fn order(&self) -> &BorelOrder {
        &self.order
    }

    pub fn table(&self) -> &Arc<KlTable> {
        &self.table
    }

    /// The ρ in use.
    pub fn rho(&self, algebra: Algebra) -> Weight {
        Weight::new(
            algebra,
            Vec::new(),
            vec![TailClass::new(int(-1), int(1) + &self.rho_shift)],
            None,
        )
        .expect("affine ρ")
    }

    fn rho_at(&self, k: u64) -> Rational {
        int(1 - k as i64) + &self.rho_shift
    }

    fn shifted_value(&self, w: &Weight, k: u64) -> Rational {
        w.value(k) + self.rho_at(k)
    }

    pub fn classify(&self, lambda: &Weight) -> Result<Classification> {
        Ok(classify_with_rho(
            lambda,
            &self.order,
            &self.rho(lambda.algebra()),
        )?)
    }

    /// `Ξ(λ)` as pairs `(i, j)`.
    pub fn inversion_pairs(&self, lambda: &Weight) -> Result<BTreeSet<(u64, u64)>> {
        Ok(inversion_pairs_with_rho(
            lambda,
            &self.order,
            &self.rho(lambda.algebra()),
        )?)
    }

    /// `w·λ = w(λ+ρ) − ρ`, where `w` moves coordinates: `(w·p)_k = p_{w⁻¹(k)}`.
    pub fn dot_act(&self, w: &GroupElement, lambda: &Weight) -> Result<Weight> {
        if w.family() != Family::A {
            return Err(OError::NotTypeA(w.to_string()));
        }
        let inv = w.inverse();
        let n = w.rank() as u64;
        let updates: Vec<(u64, Rational)> = (1..=n)
            .map(|k| {
                let src = inv.image(k as i32) as u64;
                (k, self.shifted_value(lambda, src) - self.rho_at(k))
            })
            .collect();
        Ok(lambda.with_values(updates))
    }

    /// Applies the reflection `s_α` for `α = ε_i − ε_j`.
    fn reflect(&self, lambda: &Weight, i: u64, j: u64) -> Weight {
        let (pi, pj) = (self.shifted_value(lambda, i), self.shifted_value(lambda, j));
        lambda.with_values([(i, pj - self.rho_at(i)), (j, pi - self.rho_at(j))])
    }

    /// Reduces `λ` to the antidominant weight of its orbit by reflections in minimal roots
    /// of `Ξ`, returning the weight and the roots in application order.
    pub fn to_antidominant(&self, lambda: &Weight) -> Result<(Weight, Vec<RootDelta>)> {
        let pairs = match self.inversion_pairs(lambda) {
            Ok(p) => p,
            Err(OError::Weight(WeightError::InfiniteInversionSet)) => {
                return Err(OError::NotAlmostAntidominant(lambda.literal()))
            }
            Err(e) => return Err(e),
        };
        let n = pairs.iter().map(|&(_, j)| j).max().unwrap_or(0);
        let mut vals: Vec<Rational> = (1..=n).map(|k| self.shifted_value(lambda, k)).collect();
        let links: Vec<Rational> = (1..=n).map(|k| frac(&lambda.value(k))).collect();
        let mut chain = Vec::new();
        'outer: loop {
            for i in 0..n as usize {
                let next = (i + 1..n as usize).find(|&j| links[j] == links[i]);
                if let Some(j) = next {
                    if vals[i] > vals[j] {
                        vals.swap(i, j);
                        chain.push(RootDelta::root(i as u64 + 1, j as u64 + 1));
                        continue 'outer;
                    }
                }
            }
            break;
        }
        let xi = lambda.with_values(
            vals.into_iter()
                .enumerate()
                .map(|(i, v)| (i as u64 + 1, v - self.rho_at(i as u64 + 1))),
        );
        Ok((xi, chain))
    }

    /// Whether `μ ∈ W[λ]·λ`.
    pub fn same_block(&self, lambda: &Weight, mu: &Weight) -> bool {
        let mu = mu.aligned_to(lambda);
        let Some(d) = root_difference(&mu, lambda) else {
            return false;
        };
        let mut a: Vec<Rational> = d
            .entries()
            .keys()
            .map(|&k| self.shifted_value(lambda, k))
            .collect();
        let mut b: Vec<Rational> = d
            .entries()
            .keys()
            .map(|&k| self.shifted_value(&mu, k))
            .collect();
        a.sort();
        b.sort();
        a == b
    }

    /// The shortest `x` with `ξ = x·base`.
    pub fn orbit_rep(&self, base: &Weight, xi: &Weight) -> Result<GroupElement> {
        let xi_al = xi.aligned_to(base);
        let not_in = || OError::NotInOrbit(xi.literal(), base.literal());
        let d = root_difference(&xi_al, base).ok_or_else(not_in)?;
        let n = d.entries().keys().next_back().copied().unwrap_or(0);
        let mut by_value: BTreeMap<Rational, (Vec<u64>, Vec<u64>)> = BTreeMap::new();
        for k in 1..=n {
            by_value
                .entry(self.shifted_value(base, k))
                .or_default()
                .0
                .push(k);
            by_value
                .entry(self.shifted_value(&xi_al, k))
                .or_default()
                .1
                .push(k);
        }
        let mut images = vec![0i32; n as usize];
        for (src, dst) in by_value.values() {
            if src.len() != dst.len() {
                return Err(not_in());
            }
            for (b, t) in src.iter().zip(dst) {
                images[(*b - 1) as usize] = *t as i32;
            }
        }
        Ok(GroupElement::from_images(Family::A, images)?)
    }

    fn check_regular(&self, base: &Weight, m: usize) -> Result<()> {
        let vals: BTreeSet<Rational> = (1..=m as u64)
            .map(|k| self.shifted_value(base, k))
            .collect();
        if vals.len() < m {
            return Err(OError::SingularOrbit(base.literal()));
        }
        Ok(())
    }

    fn antidominant_base(&self, lambda: &Weight) -> Result<Weight> {
        if !self.classify(lambda)?.almost_antidominant {
            return Err(OError::NotAlmostAntidominant(lambda.literal()));
        }
        Ok(self.to_antidominant(lambda)?.0)
    }

    /// `P_{x,y}(1)` computed in `S_m` with `m ≥ rank`.
    fn kl_at_one(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        rank: usize,
        w0_side: bool,
    ) -> Result<BigInt> {
        let (m, _) = parabolic_closure(x, y)?;
        let m = m.max(rank);
        let w0 = crate::coxeter::longest_element(Family::A, m);
        let p = if w0_side {
            self.table.kl_poly(&w0.multiply(x)?, &w0.multiply(y)?)?
        } else {
            self.table.kl_poly(x, y)?
        };
        Ok(p.eval_one())
    }

    /// `[M(λ) : L(μ)]`.
    pub fn verma_multiplicity(&self, lambda: &Weight, mu: &Weight) -> Result<BigInt> {
        self.verma_multiplicity_at_rank(lambda, mu, 0)
    }

    /// `[M(λ) : L(μ)]` evaluated in `S_n` for `n = max(rank, m(x, y))`.
    pub fn verma_multiplicity_at_rank(
        &self,
        lambda: &Weight,
        mu: &Weight,
        rank: usize,
    ) -> Result<BigInt> {
        let mu = mu.aligned_to(lambda);
        if !order_leq(&mu, lambda, &self.order) || !self.same_block(lambda, &mu) {
            return Ok(BigInt::zero());
        }
        let base = self.antidominant_base(lambda)?;
        let x = self.orbit_rep(&base, lambda)?;
        let y = self.orbit_rep(&base, &mu)?;
        let (m, _) = parabolic_closure(&x, &y)?;
        self.check_regular(&base, m.max(rank))?;
        self.kl_at_one(&x, &y, rank, true)
    }

    /// Expands `[M(λ)]` or `[L(λ)]` in the requested basis.
    pub fn grothendieck_decompose(&self, symbol: &BasisSymbol, target: Basis) -> Result<FormalSum> {
        let lambda = symbol.weight();
        match (symbol, target) {
            (BasisSymbol::Verma(_), Basis::Verma) | (BasisSymbol::Simple(_), Basis::Simple) => {
                return Ok(FormalSum::single(symbol.clone()))
            }
            _ => {}
        }
        let base = self.antidominant_base(lambda)?;
        let x = self.orbit_rep(&base, lambda)?;
        self.check_regular(&base, x.rank().max(1))?;
        let mut out = FormalSum::new();
        let mut below: Vec<GroupElement> = lower_interval(&x).into_iter().collect();
        below.sort();
        for y in below {
            let nu = self.dot_act(&y, &base)?;
            let nu = if weight_eq(&nu, lambda) {
                lambda.clone()
            } else {
                nu
            };
            match target {
                Basis::Simple => {
                    let c = self.kl_at_one(&x, &y, 0, true)?;
                    out.add(BasisSymbol::Simple(nu), c);
                }
                Basis::Verma => {
                    let c = self.kl_at_one(&y, &x, 0, false)?;
                    let sign = (x.length() - y.length()) % 2 == 1;
                    out.add(BasisSymbol::Verma(nu), if sign { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Expands every term of a formal sum in the requested basis.
    pub fn convert(&self, sum: &FormalSum, target: Basis) -> Result<FormalSum> {
        let mut out = FormalSum::new();
        for (sym, c) in sum.terms() {
            for (s2, c2) in self.grothendieck_decompose(sym, target)?.terms() {
                out.add(s2.clone(), c * c2);
            }
        }
        Ok(out)
    }

    /// `℘(δ)` for the current order.
    pub fn kostant_partition(&self, delta: &RootDelta) -> Result<BigInt> {
        kostant_partition(delta, &self.order)
    }

    /// `dim M(λ)^μ` or `dim L(λ)^μ`.
    pub fn weight_dim(&self, module: &BasisSymbol, mu: &Weight) -> Result<BigInt> {
        match module {
            BasisSymbol::Verma(lambda) => {
                let mu = mu.aligned_to(lambda);
                match root_difference(lambda, &mu) {
                    Some(d) => self.kostant_partition(&d),
                    None => Ok(BigInt::zero()),
                }
            }
            BasisSymbol::Simple(_) => {
                let expansion = self.grothendieck_decompose(module, Basis::Verma)?;
                let mut total = BigInt::zero();
                for (sym, c) in expansion.terms() {
                    total += c * self.weight_dim(sym, mu)?;
                }
                Ok(total)
            }
        }
    }

    /// Every weight `ξ` with `lower ⪯ ξ ⪯ upper`.
    pub fn interval_weights(&self, lower: &Weight, upper: &Weight) -> Result<Vec<Weight>> {
        let lower_al = lower.aligned_to(upper);
        let d = root_difference(upper, &lower_al)
            .ok_or_else(|| OError::UnboundedWindow(lower.literal(), upper.literal()))?;
        if !is_nonnegative(&d, &self.order) {
            return Ok(Vec::new());
        }
        let (a, b) = match (d.entries().keys().next(), d.entries().keys().next_back()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Ok(vec![upper.clone()]),
        };
        let positions: Vec<u64> = (a..=b).collect();
        let mut caps = Vec::with_capacity(positions.len());
        let mut acc = 0i64;
        for &k in &positions {
            acc += d.get(k);
            caps.push(acc);
        }
        let mut out = Vec::new();
        let mut prefix = vec![0i64; positions.len()];
        self.interval_dfs(upper, &positions, &caps, 0, 0, &mut prefix, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn interval_dfs(
        &self,
        upper: &Weight,
        positions: &[u64],
        caps: &[i64],
        idx: usize,
        prev: i64,
        prefix: &mut Vec<i64>,
        out: &mut Vec<Weight>,
    ) -> Result<()> {
        if idx == positions.len() {
            if prev != 0 {
                return Ok(());
            }
            if out.len() >= self.window_limit {
                return Err(OError::WindowLimit(self.window_limit));
            }
            let updates = positions.iter().enumerate().map(|(i, &k)| {
                let before = if i == 0 { 0 } else { prefix[i - 1] };
                (k, upper.value(k) - int(prefix[i] - before))
            });
            out.push(upper.with_values(updates.collect::<Vec<_>>()));
            return Ok(());
        }
        let hi = if idx + 1 == positions.len() {
            0
        } else {
            caps[idx]
        };
        for s in 0..=hi {
            prefix[idx] = s;
            self.interval_dfs(upper, positions, caps, idx + 1, s, prefix, out)?;
        }
        Ok(())
    }

    /// The character of a Verma or simple module on `[lower, upper]`.
    pub fn character_window(
        &self,
        module: &BasisSymbol,
        lower: &Weight,
        upper: &Weight,
    ) -> Result<CharacterWindow> {
        let lambda = module.weight();
        let upper = upper.aligned_to(lambda);
        let lower = lower.aligned_to(lambda);
        let mut dims = BTreeMap::new();
        for xi in self.interval_weights(&lower, &upper)? {
            let d = self.weight_dim(module, &xi)?;
            dims.insert(xi, d);
        }
        Ok(CharacterWindow { lower, upper, dims })
    }

    /// All orbit elements of `λ` in `[lower, upper]`, each with its `x`.
    pub fn orbit_window(
        &self,
        lambda: &Weight,
        lower: &Weight,
        upper: &Weight,
    ) -> Result<OrbitWindow> {
        let base = if self.classify(lambda)?.almost_antidominant {
            self.to_antidominant(lambda)?.0
        } else {
            lambda.clone()
        };
        let lower = lower.aligned_to(&base);
        let upper = upper.aligned_to(&base);
        let mut window = OrbitWindow {
            base: base.clone(),
            lower: lower.clone(),
            upper: upper.clone(),
            elements: BTreeMap::new(),
        };
        let (Some(d), Some(off)) = (
            root_difference(&upper, &lower),
            root_difference(&upper, &base),
        ) else {
            return Ok(window);
        };
        if !is_nonnegative(&d, &self.order) {
            return Ok(window);
        }
        let hull: Vec<u64> = match (d.entries().keys().next(), d.entries().keys().next_back()) {
            (Some(&a), Some(&b)) => (a..=b).collect(),
            _ => Vec::new(),
        };
        let hull_set: BTreeSet<u64> = hull.iter().copied().collect();
        let mut pool: BTreeMap<Rational, usize> = BTreeMap::new();
        let touched: BTreeSet<u64> = hull
            .iter()
            .copied()
            .chain(off.entries().keys().copied())
            .collect();
        for &k in &touched {
            *pool.entry(self.shifted_value(&base, k)).or_insert(0) += 1;
        }
        for &k in touched.difference(&hull_set) {
            let v = self.shifted_value(&upper, k);
            match pool.get_mut(&v) {
                Some(c) if *c > 0 => *c -= 1,
                _ => return Ok(window),
            }
        }
        let mut caps = Vec::with_capacity(hull.len());
        let mut acc = 0i64;
        for &k in &hull {
            acc += d.get(k);
            caps.push(acc);
        }
        let mut chosen = Vec::with_capacity(hull.len());
        let mut found = Vec::new();
        self.orbit_dfs(
            &upper,
            &hull,
            &caps,
            &mut pool,
            0,
            0,
            &mut chosen,
            &mut found,
        )?;
        for xi in found {
            let x = self.orbit_rep(&base, &xi)?;
            window.elements.insert(xi, x);
        }
        Ok(window)
    }

    #[allow(clippy::too_many_arguments)]
    fn orbit_dfs(
        &self,
        upper: &Weight,
        hull: &[u64],
        caps: &[i64],
        pool: &mut BTreeMap<Rational, usize>,
        idx: usize,
        prefix: i64,
        chosen: &mut Vec<Rational>,
        found: &mut Vec<Weight>,
    ) -> Result<()> {
        if idx == hull.len() {
            if prefix != 0 {
                return Ok(());
            }
            if found.len() >= self.window_limit {
                return Err(OError::WindowLimit(self.window_limit));
            }
            let updates: Vec<(u64, Rational)> = hull
                .iter()
                .zip(chosen.iter())
                .map(|(&k, v)| (k, v - self.rho_at(k)))
                .collect();
            found.push(upper.with_values(updates));
            return Ok(());
        }
        let k = hull[idx];
        let top = self.shifted_value(upper, k);
        let candidates: Vec<Rational> = pool
            .iter()
            .filter(|(_, c)| **c > 0)
            .map(|(v, _)| v.clone())
            .collect();
        for v in candidates {
            let step = &top - &v;
            if !step.is_integer() {
                continue;
            }
            let Some(step) = step.to_integer().to_i64() else {
                continue;
            };
            let s = prefix + step;
            if s < 0 || s > caps[idx] {
                continue;
            }
            *pool.get_mut(&v).expect("candidate") -= 1;
            chosen.push(v.clone());
            self.orbit_dfs(upper, hull, caps, pool, idx + 1, s, chosen, found)?;
            chosen.pop();
            *pool.get_mut(&v).expect("candidate") += 1;
        }
        Ok(())
    }

    /// A chain of positive roots `α₁, …, α_l` with `μ = s_{α_l}⋯s_{α₁}·λ` descending
    /// through `⪯`. The search stays inside `[μ, λ]` and returns a longest such chain.
    pub fn strongly_linked(&self, mu: &Weight, lambda: &Weight) -> Result<Option<Vec<RootDelta>>> {
        let mu = mu.aligned_to(lambda);
        if weight_eq(&mu, lambda) {
            return Ok(Some(Vec::new()));
        }
        let Some(d) = root_difference(lambda, &mu) else {
            return Ok(None);
        };
        if !is_nonnegative(&d, &self.order) || !self.same_block(lambda, &mu) {
            return Ok(None);
        }
        let (a, b) = (
            *d.entries().keys().next().expect("nonzero"),
            *d.entries().keys().next_back().expect("nonzero"),
        );
        let mut edges: HashMap<Weight, Vec<(Weight, RootDelta)>> = HashMap::new();
        let mut queue = VecDeque::from([lambda.clone()]);
        edges.insert(lambda.clone(), Vec::new());
        while let Some(nu) = queue.pop_front() {
            let mut out = Vec::new();
            for i in a..=b {
                for j in i + 1..=b {
                    let diff = self.shifted_value(&nu, i) - self.shifted_value(&nu, j);
                    if !diff.is_integer() || !diff.is_positive() {
                        continue;
                    }
                    let next = self.reflect(&nu, i, j);
                    if !order_leq(&mu, &next, &self.order) {
                        continue;
                    }
                    if !edges.contains_key(&next) {
                        if edges.len() >= self.window_limit {
                            return Err(OError::WindowLimit(self.window_limit));
                        }
                        edges.insert(next.clone(), Vec::new());
                        queue.push_back(next.clone());
                    }
                    out.push((next, RootDelta::root(i, j)));
                }
            }
            edges.insert(nu, out);
        }
        if !edges.contains_key(&mu) {
            return Ok(None);
        }
        let mut best: HashMap<Weight, Option<usize>> = HashMap::new();
        longest_path(lambda, &mu, &edges, &mut best);
        let mut chain = Vec::new();
        let mut cur = lambda.clone();
        while cur != mu {
            let target = best[&cur].expect("reachable") - 1;
            let (next, root) = edges[&cur]
                .iter()
                .find(|(n, _)| best.get(n).copied().flatten() == Some(target))
                .expect("successor on a longest path");
            chain.push(root.clone());
            cur = next.clone();
        }
        Ok(Some(chain))
    }

    /// Simplicity, finite length and socle of `M(λ)`.
    pub fn verma_status(&self, lambda: &Weight) -> Result<VermaStatus> {
        let c = self.classify(lambda)?;
        if !c.almost_antidominant {
            return Ok(VermaStatus {
                simple: false,
                finite_length: false,
                socle_highest_weight: None,
                chain_to_antidominant: None,
            });
        }
        let (xi, chain) = self.to_antidominant(lambda)?;
        Ok(VermaStatus {
            simple: c.antidominant,
            finite_length: true,
            socle_highest_weight: Some(xi),
            chain_to_antidominant: Some(chain),
        })
    }

    /// `[M(ν) : L(μ)]` for every orbit weight `ν` with `μ ⪯ ν ⪯ cap`, omitting zeros.
    pub fn trunc_reciprocity(&self, mu: &Weight, cap: &Weight) -> Result<BTreeMap<Weight, BigInt>> {
        let mu_al = mu.aligned_to(cap);
        if !order_leq(&mu_al, cap, &self.order) {
            return Err(OError::NotBelowCap(mu.literal(), cap.literal()));
        }
        let window = self.orbit_window(&mu_al, &mu_al, cap)?;
        let mut out = BTreeMap::new();
        for nu in window.elements.keys() {
            let m = self.verma_multiplicity(nu, &mu_al)?;
            if m.is_zero() {
                continue;
            }
            let key = if weight_eq(nu, mu) {
                mu.clone()
            } else if weight_eq(nu, cap) {
                cap.clone()
            } else {
                nu.clone()
            };
            out.insert(key, m);
        }
        Ok(out)
    }

    pub fn homological_flags(&self, lambda: &Weight) -> Result<HomologicalFlags> {
        let c = self.classify(lambda)?;
        Ok(HomologicalFlags {
            has_injective_hull: c.almost_dominant,
            integrable_simple: c.integral && c.dominant,
        })
    }

    /// `[M(λ) : L(ν)]` for all orbit weights between the antidominant base and `λ`.
    pub fn multiplicity_report(&self, lambda: &Weight) -> Result<MultiplicityReport> {
        let base = self.antidominant_base(lambda)?;
        let window = self.orbit_window(lambda, &base, lambda)?;
        let mut elements = Vec::with_capacity(window.elements.len());
        for (nu, x) in &window.elements {
            elements.push(MultiplicityEntry {
                weight: nu.clone(),
                x: x.clone(),
                mult: self.verma_multiplicity(lambda, nu)?,
            });
        }
        elements.sort_by(|a, b| a.x.length().cmp(&b.x.length()).then_with(|| a.x.cmp(&b.x)));
        Ok(MultiplicityReport { base, elements })
    }

    /// The weights `ν_k = (k, k+1)·ν_{k−1}` starting from `ν₀ = (2, 2, 3, 4, …)`, each paired
    /// with whether `M(ν_k)` embeds in `M(ν_{k−1})`.
    pub fn demo_verma_chain(&self, algebra: Algebra, steps: usize) -> Result<Vec<(Weight, bool)>> {
        let mut nu = Weight::new(
            algebra,
            vec![int(2)],
            vec![TailClass::new(int(1), int(0))],
            None,
        )?;
        let mut out = vec![(nu.clone(), true)];
        for k in 1..=steps as u32 {
            let s = GroupElement::simple(Family::A, k)?;
            let next = self.dot_act(&s, &nu)?;
            let linked = self.strongly_linked(&next, &nu)?.is_some();
            out.push((next.clone(), linked));
            nu = next;
        }
        Ok(out)
    }
}

/// Length of a longest path from `from` to `to`, memoized in `best`.
fn longest_path(
    from: &Weight,
    to: &Weight,
    edges: &HashMap<Weight, Vec<(Weight, RootDelta)>>,
    best: &mut HashMap<Weight, Option<usize>>,
) -> Option<usize> {
    if from == to {
        best.insert(from.clone(), Some(0));
        return Some(0);
    }
    if let Some(v) = best.get(from) {
        return *v;
    }
    let mut result = None;
    for (next, _) in &edges[from] {
        if let Some(l) = longest_path(next, to, edges, best) {
            result = result.max(Some(l + 1));
        }
    }
    best.insert(from.clone(), result);
    result
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// The number of ways to write `δ` as a sum of positive roots.
pub fn kostant_partition(delta: &RootDelta, order: &BorelOrder) -> Result<BigInt> {
    if delta.is_zero() {
        return Ok(BigInt::one());
    }
    if !is_nonnegative(delta, order) {
        return Ok(BigInt::zero());
    }
    let mut support: Vec<u64> = delta.entries().keys().copied().collect();
    support.sort_by(|a, b| order.cmp_positions(*a, *b));
    let (first, last) = (support[0], *support.last().expect("nonempty"));
    let between = order
        .positions_between(first, last)
        .ok_or_else(|| OError::InfinitePartition(delta.to_string()))?;
    let positions: Vec<u64> = std::iter::once(first)
        .chain(between)
        .chain(std::iter::once(last))
        .collect();
    let vector: Vec<i64> = positions.iter().map(|&k| delta.get(k)).collect();
    let mut memo = HashMap::new();
    Ok(partition_count(&vector, &mut memo))
}

fn partition_count(v: &[i64], memo: &mut HashMap<Vec<i64>, BigInt>) -> BigInt {
    match v {
        [] => return BigInt::one(),
        [x] => {
            return if *x == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
        _ => {}
    }
    if v[0] < 0 {
        return BigInt::zero();
    }
    if let Some(c) = memo.get(v) {
        return c.clone();
    }
    let mut total = BigInt::zero();
    let mut rest = v[1..].to_vec();
    distribute(v[0], 0, &mut rest, memo, &mut total);
    memo.insert(v.to_vec(), total.clone());
    total
}

fn distribute(
    units: i64,
    idx: usize,
    rest: &mut Vec<i64>,
    memo: &mut HashMap<Vec<i64>, BigInt>,
    total: &mut BigInt,
) {
    if idx + 1 == rest.len() {
        rest[idx] += units;
        *total += partition_count(rest, memo);
        rest[idx] -= units;
        return;
    }
    for c in 0..=units {
        rest[idx] += c;
        distribute(units - c, idx + 1, rest, memo, total);
        rest[idx] -= c;
    }
}

/// Recovers composition multiplicities from a character by the triangular solve that
/// peels off simple characters from the top of the window downwards.
pub fn mults_from_character(
    character: &CharacterWindow,
    simples: &BTreeMap<Weight, CharacterWindow>,
    order: &BorelOrder,
) -> Result<BTreeMap<Weight, BigInt>> {
    let upper = &character.upper;
    let mut weights: Vec<(i64, &Weight)> = Vec::with_capacity(character.dims.len());
    for xi in character.dims.keys() {
        let d = root_difference(upper, xi)
            .ok_or_else(|| OError::UnboundedWindow(xi.literal(), upper.literal()))?;
        weights.push((height(&d, order), xi));
    }
    weights.sort();
    let lookup = |top: &Weight| {
        simples.get(top).or_else(|| {
            simples
                .iter()
                .find(|(k, _)| weight_eq(k, top))
                .map(|(_, v)| v)
        })
    };
    let mut found: Vec<(Weight, BigInt)> = Vec::new();
    for (_, xi) in weights {
        let mut residual = character.dims[xi].clone();
        for (top, m) in &found {
            if !order_leq(xi, top, order) {
                continue;
            }
            let simple =
                lookup(top).ok_or_else(|| OError::MissingSimple(top.literal(), xi.literal()))?;
            let d = simple
                .dim(xi)
                .ok_or_else(|| OError::MissingSimple(top.literal(), xi.literal()))?;
            residual -= m * d;
        }
        if residual.is_negative() {
            return Err(OError::Inconsistent(xi.literal()));
        }
        if !residual.is_zero() {
            found.push((xi.clone(), residual));
        }
    }
    Ok(found.into_iter().collect())
}

fn height(d: &RootDelta, order: &BorelOrder) -> i64 {
    let mut items: Vec<((usize, i64), i64)> = d
        .entries()
        .iter()
        .map(|(&k, &v)| (order.key(k), v))
        .collect();
    items.sort();
    let mut acc = 0;
    let mut h = 0;
    for w in items.windows(2) {
        acc += w[0].1;
        let gap = match order {
            BorelOrder::OneSided => (w[1].0 .1 - w[0].0 .1).abs(),
            _ => 1,
        };
        h += acc * gap;
    }
    h
}
