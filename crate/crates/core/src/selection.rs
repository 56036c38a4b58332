//! Selection functions `f: A × at(A) → A` and their frame properties.
//!
//! A selection function is stored as a dense table of `2^n × n` events,
//! indexed by `(antecedent, atom)`. Cells are ordered antecedent-major, so the
//! flattened table of `f` is `f(⊥,α1), …, f(⊥,αn), f({α1},α1), …`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AtomIndex, Event};
use crate::error::{Error, Result};

/// Properties a selection function may satisfy, quantified over all
/// antecedents `a, b` and atoms `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameProperty {
    /// `f(⊥, α) = ⊥`.
    Emptiness,
    /// `a ≠ ⊥ ⇒ f(a, α) ≠ ⊥`.
    Normality,
    /// `f(a, α) ⊆ a`.
    Identity,
    /// `α ∈ a ⇒ α ∈ f(a, α)`.
    Centering1,
    /// `α ∈ a ⇒ f(a, α) ⊆ {α}`.
    Centering2,
    /// `α ∈ a ⇒ f(a, α) = {α}`.
    Centering,
    /// `|f(a, α)| ≤ 1`.
    UniquenessWeak,
    /// `|f(a, α)| = 1` for every `a ≠ ⊥`, and `|f(⊥, α)| ≤ 1`; that is,
    /// weak uniqueness together with normality.
    UniquenessStrict,
    /// `f(a,α) ⊆ b ∧ f(b,α) ⊆ a ⇒ f(a,α) = f(b,α)`.
    WellOrder,
    /// `f(a∨b,α) ⊆ a ∨ f(a∨b,α) ⊆ b ∨ f(a∨b,α) = f(a,α) ∨ f(b,α)`.
    Nesting,
}

impl FrameProperty {
    pub const ALL: [FrameProperty; 10] = [
        FrameProperty::Emptiness,
        FrameProperty::Normality,
        FrameProperty::Identity,
        FrameProperty::Centering1,
        FrameProperty::Centering2,
        FrameProperty::Centering,
        FrameProperty::UniquenessWeak,
        FrameProperty::UniquenessStrict,
        FrameProperty::WellOrder,
        FrameProperty::Nesting,
    ];

    /// Properties that relate several cells and cannot be enforced cell by cell.
    pub fn is_global(self) -> bool {
        matches!(self, FrameProperty::WellOrder | FrameProperty::Nesting)
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::Emptiness => "emptiness",
            FrameProperty::Normality => "normality",
            FrameProperty::Identity => "identity",
            FrameProperty::Centering1 => "centering1",
            FrameProperty::Centering2 => "centering2",
            FrameProperty::Centering => "centering",
            FrameProperty::UniquenessWeak => "uniqueness-weak",
            FrameProperty::UniquenessStrict => "uniqueness-strict",
            FrameProperty::WellOrder => "well-order",
            FrameProperty::Nesting => "nesting",
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let prop = match key.as_str() {
            "emptiness" | "emptyness" => FrameProperty::Emptiness,
            "normality" => FrameProperty::Normality,
            "identity" => FrameProperty::Identity,
            "centering1" | "centering-1" => FrameProperty::Centering1,
            "centering2" | "centering-2" => FrameProperty::Centering2,
            "centering" => FrameProperty::Centering,
            "uniqueness-weak" | "uniqueness" => FrameProperty::UniquenessWeak,
            "uniqueness-strict" => FrameProperty::UniquenessStrict,
            "well-order" | "wellorder" => FrameProperty::WellOrder,
            "nesting" => FrameProperty::Nesting,
            _ => return Err(format!("unknown frame property `{s}`")),
        };
        Ok(prop)
    }
}

/// Conditional classes determined by frame properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionalClass {
    /// Identity, well-order and nesting.
    VariablyStrict,
    /// Variably strict plus centering.
    Counterfactual,
    /// Counterfactual plus uniqueness.
    Stalnaker,
    Unclassified,
}

/// Every property holding of a selection function, plus the classes it falls into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub properties: BTreeSet<FrameProperty>,
    pub classes: BTreeSet<ConditionalClass>,
}

impl Classification {
    pub fn strongest(&self) -> ConditionalClass {
        *self
            .classes
            .iter()
            .next_back()
            .expect("classification is never empty")
    }

    pub fn has(&self, p: FrameProperty) -> bool {
        self.properties.contains(&p)
    }
}

/// A total selection function over a finite algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectionFunction {
    algebra: Arc<Algebra>,
    table: Vec<Event>,
}

impl SelectionFunction {
    /// Builds a selection function from its flattened table.
    pub fn new(algebra: Arc<Algebra>, table: Vec<Event>) -> Result<Self> {
        let expected = algebra.size() * algebra.atom_count();
        if table.len() != expected {
            return Err(Error::TableSize {
                got: table.len(),
                expected,
            });
        }
        for &e in &table {
            algebra.check(e)?;
        }
        Ok(Self { algebra, table })
    }

    pub fn from_fn(
        algebra: Arc<Algebra>,
        mut cell: impl FnMut(Event, AtomIndex) -> Event,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(algebra.size() * algebra.atom_count());
        for a in algebra.events() {
            for alpha in algebra.atoms() {
                table.push(cell(a, alpha));
            }
        }
        Self::new(algebra, table)
    }

    /// `f(a, α) = a` for every cell: the selection function behind conditionalization.
    pub fn total(algebra: Arc<Algebra>) -> Self {
        Self::from_fn(algebra, |a, _| a).expect("total table is valid")
    }

    /// `{α}` when `α ∈ a`, otherwise the least atom of `a` (and `⊥` at `⊥`).
    ///
    /// A Stalnaker selection function: every world ranks itself first and
    /// then the remaining worlds by index.
    pub fn nearest_singleton(algebra: Arc<Algebra>) -> Self {
        Self::from_fn(algebra, |a, alpha| {
            if a.contains(alpha) {
                alpha.event()
            } else {
                a.least_atom().map_or(Event::BOTTOM, AtomIndex::event)
            }
        })
        .expect("nearest-singleton table is valid")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn table(&self) -> &[Event] {
        &self.table
    }

    fn cell_index(&self, a: Event, alpha: AtomIndex) -> usize {
        a.bits() as usize * self.algebra.atom_count() + alpha.index()
    }

    /// `f(a, α)`.
    pub fn get(&self, a: Event, alpha: AtomIndex) -> Event {
        self.table[self.cell_index(a, alpha)]
    }

    /// The cells `f(a, α1), …, f(a, αn)` for a fixed antecedent.
    pub fn row(&self, a: Event) -> &[Event] {
        let n = self.algebra.atom_count();
        let start = a.bits() as usize * n;
        &self.table[start..start + n]
    }

    /// Returns a copy with one cell replaced.
    pub fn with_cell(&self, a: Event, alpha: AtomIndex, value: Event) -> Result<Self> {
        let value = self.algebra.check(value)?;
        let mut out = self.clone();
        let i = out.cell_index(a, alpha);
        out.table[i] = value;
        Ok(out)
    }

    pub fn is_normal(&self) -> bool {
        self.check_property(FrameProperty::Normality)
    }

    /// Whether every cell at antecedent `a` is a singleton.
    pub fn is_unique_at(&self, a: Event) -> bool {
        self.row(a).iter().all(|e| e.cardinality() == 1)
    }

    /// Whether every cell at a non-empty antecedent is a singleton.
    pub fn is_unique_on_nonempty(&self) -> bool {
        self.algebra.nonempty_events().all(|a| self.is_unique_at(a))
    }

    /// First antecedent at which normality fails, with the offending atom.
    pub fn normality_violation(&self) -> Option<(Event, AtomIndex)> {
        self.algebra.nonempty_events().find_map(|a| {
            self.row(a)
                .iter()
                .position(|e| e.is_bottom())
                .map(|i| (a, AtomIndex(i)))
        })
    }

    pub fn check_property(&self, p: FrameProperty) -> bool {
        let alg = &*self.algebra;
        match p {
            FrameProperty::WellOrder => alg.atoms().all(|alpha| {
                alg.events().all(|a| {
                    let fa = self.get(a, alpha);
                    alg.events().all(|b| {
                        let fb = self.get(b, alpha);
                        !(fa.leq(b) && fb.leq(a)) || fa == fb
                    })
                })
            }),
            FrameProperty::Nesting => alg.atoms().all(|alpha| {
                alg.events().all(|a| {
                    alg.events().all(|b| {
                        let fab = self.get(a.join(b), alpha);
                        fab.leq(a)
                            || fab.leq(b)
                            || fab == self.get(a, alpha).join(self.get(b, alpha))
                    })
                })
            }),
            local => alg.events().all(|a| {
                alg.atoms()
                    .all(|alpha| local_holds(local, a, alpha, self.get(a, alpha)))
            }),
        }
    }

    pub fn properties(&self) -> BTreeSet<FrameProperty> {
        FrameProperty::ALL
            .into_iter()
            .filter(|&p| self.check_property(p))
            .collect()
    }

    pub fn classify(&self) -> Classification {
        let properties = self.properties();
        let has = |p| properties.contains(&p);
        let mut classes = BTreeSet::new();
        let variably_strict = has(FrameProperty::Identity)
            && has(FrameProperty::WellOrder)
            && has(FrameProperty::Nesting);
        if variably_strict {
            classes.insert(ConditionalClass::VariablyStrict);
            if has(FrameProperty::Centering) {
                classes.insert(ConditionalClass::Counterfactual);
                if has(FrameProperty::UniquenessWeak) {
                    classes.insert(ConditionalClass::Stalnaker);
                }
            }
        } else {
            classes.insert(ConditionalClass::Unclassified);
        }
        Classification {
            properties,
            classes,
        }
    }

    pub fn satisfies_all(&self, constraints: &BTreeSet<FrameProperty>) -> bool {
        constraints.iter().all(|&p| self.check_property(p))
    }
}

/// Checks a cell-local property on a single cell value.
fn local_holds(p: FrameProperty, a: Event, alpha: AtomIndex, value: Event) -> bool {
    let inside = a.contains(alpha);
    match p {
        FrameProperty::Emptiness => !a.is_bottom() || value.is_bottom(),
        FrameProperty::Normality => a.is_bottom() || !value.is_bottom(),
        FrameProperty::Identity => value.leq(a),
        FrameProperty::Centering1 => !inside || value.contains(alpha),
        FrameProperty::Centering2 => !inside || value.leq(alpha.event()),
        FrameProperty::Centering => !inside || value == alpha.event(),
        FrameProperty::UniquenessWeak => value.cardinality() <= 1,
        FrameProperty::UniquenessStrict => {
            if a.is_bottom() {
                value.cardinality() <= 1
            } else {
                value.cardinality() == 1
            }
        }
        FrameProperty::WellOrder | FrameProperty::Nesting => unreachable!("global property"),
    }
}

/// The events a single cell may take under the local constraints:
/// `lower ⊆ value ⊆ upper` with `min_card ≤ |value| ≤ max_card`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellDomain {
    pub lower: Event,
    pub upper: Event,
    pub min_card: u32,
    pub max_card: u32,
}

impl CellDomain {
    pub fn new(
        algebra: &Algebra,
        constraints: &BTreeSet<FrameProperty>,
        a: Event,
        alpha: AtomIndex,
    ) -> Self {
        let mut d = CellDomain {
            lower: Event::BOTTOM,
            upper: algebra.top(),
            min_card: 0,
            max_card: algebra.atom_count() as u32,
        };
        let inside = a.contains(alpha);
        for &p in constraints {
            match p {
                FrameProperty::Emptiness if a.is_bottom() => d.upper = Event::BOTTOM,
                FrameProperty::Normality if !a.is_bottom() => d.min_card = d.min_card.max(1),
                FrameProperty::Identity => d.upper = d.upper.meet(a),
                FrameProperty::Centering1 if inside => d.lower = d.lower.join(alpha.event()),
                FrameProperty::Centering2 if inside => d.upper = d.upper.meet(alpha.event()),
                FrameProperty::Centering if inside => {
                    d.lower = d.lower.join(alpha.event());
                    d.upper = d.upper.meet(alpha.event());
                }
                FrameProperty::UniquenessWeak => d.max_card = d.max_card.min(1),
                FrameProperty::UniquenessStrict => {
                    d.max_card = d.max_card.min(1);
                    if !a.is_bottom() {
                        d.min_card = d.min_card.max(1);
                    }
                }
                _ => {}
            }
        }
        d
    }

    fn free(&self) -> Event {
        Event(self.upper.bits() & !self.lower.bits())
    }

    fn card_range(&self) -> Option<(u32, u32)> {
        if !self.lower.leq(self.upper) {
            return None;
        }
        let fixed = self.lower.cardinality();
        let lo = self.min_card.max(fixed);
        let hi = self.max_card.min(fixed + self.free().cardinality());
        (lo <= hi).then_some((lo, hi))
    }

    /// Number of admissible values.
    pub fn count(&self) -> u128 {
        let Some((lo, hi)) = self.card_range() else {
            return 0;
        };
        let fixed = self.lower.cardinality();
        let free = self.free().cardinality();
        (lo..=hi).map(|k| binomial(free, k - fixed)).sum()
    }

    /// Admissible values, ascending by bits.
    pub fn values(&self) -> Vec<Event> {
        let Some((lo, hi)) = self.card_range() else {
            return Vec::new();
        };
        self.free()
            .subevents()
            .map(|s| s.join(self.lower))
            .filter(|v| (lo..=hi).contains(&v.cardinality()))
            .collect()
    }

    /// Uniform draw from the admissible values.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Event> {
        let (lo, hi) = self.card_range()?;
        let fixed = self.lower.cardinality();
        let free_atoms: Vec<AtomIndex> = self.free().atoms().collect();
        let free = free_atoms.len() as u32;
        let total: u128 = (lo..=hi).map(|k| binomial(free, k - fixed)).sum();
        let mut pick = rng.gen_range(0..total);
        let mut size = lo;
        for k in lo..=hi {
            let w = binomial(free, k - fixed);
            if pick < w {
                size = k;
                break;
            }
            pick -= w;
        }
        let chosen = free_atoms
            .choose_multiple(rng, (size - fixed) as usize)
            .fold(self.lower, |acc, a| acc.join(a.event()));
        Some(chosen)
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Upper bound on the number of candidate tables an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Budget {
    /// Environment variable overriding the default budget.
    pub const ENV_VAR: &'static str = "IMAGO_BUDGET";

    /// The default budget covers the unconstrained space at two atoms, `4^8`.
    pub const DEFAULT: Budget = Budget(65_536);

    pub fn from_env() -> Budget {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse().ok())
            .map_or(Self::DEFAULT, Budget)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The space of selection functions admitted by a constraint set.
///
/// Local constraints shrink each cell's codomain; global ones (well-order,
/// nesting) are applied as a filter. Candidates are ordered lexicographically
/// over the flattened table, the last cell varying fastest, so the space can
/// be split into disjoint index ranges.
#[derive(Debug, Clone)]
pub struct SelectionSpace {
    algebra: Arc<Algebra>,
    constraints: BTreeSet<FrameProperty>,
    domains: Vec<Vec<Event>>,
    size: u128,
}

impl SelectionSpace {
    pub fn new(
        algebra: Arc<Algebra>,
        constraints: &BTreeSet<FrameProperty>,
        budget: Budget,
    ) -> Result<Self> {
        let mut size: Option<u128> = Some(1);
        let mut log2 = 0f64;
        let mut cell_domains = Vec::with_capacity(algebra.size() * algebra.atom_count());
        for a in algebra.events() {
            for alpha in algebra.atoms() {
                let d = CellDomain::new(&algebra, constraints, a, alpha);
                let count = d.count();
                if count == 0 {
                    return Err(Error::Unsatisfiable(constraints.iter().copied().collect()));
                }
                size = size.and_then(|s| s.checked_mul(count));
                log2 += (count as f64).log2();
                cell_domains.push(d);
            }
        }
        let size = match size {
            Some(s) if s <= budget.0 => s,
            Some(s) => {
                return Err(Error::BudgetExceeded {
                    bound: s.to_string(),
                    budget: budget.0,
                })
            }
            None => {
                return Err(Error::BudgetExceeded {
                    bound: format!("2^{log2:.1}"),
                    budget: budget.0,
                })
            }
        };
        Ok(Self {
            domains: cell_domains.iter().map(CellDomain::values).collect(),
            constraints: constraints.clone(),
            algebra,
            size,
        })
    }

    /// Number of candidate tables before global constraints are applied.
    pub fn candidate_count(&self) -> u128 {
        self.size
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn constraints(&self) -> &BTreeSet<FrameProperty> {
        &self.constraints
    }

    /// The candidate at a given position, whether or not it passes the global constraints.
    pub fn candidate(&self, index: u128) -> SelectionFunction {
        assert!(index < self.size, "candidate index out of range");
        let mut table = vec![Event::BOTTOM; self.domains.len()];
        let mut rest = index;
        for (slot, dom) in table.iter_mut().zip(&self.domains).rev() {
            let radix = dom.len() as u128;
            *slot = dom[(rest % radix) as usize];
            rest /= radix;
        }
        SelectionFunction {
            algebra: self.algebra.clone(),
            table,
        }
    }

    fn admits(&self, f: &SelectionFunction) -> bool {
        self.constraints
            .iter()
            .filter(|p| p.is_global())
            .all(|&p| f.check_property(p))
    }

    /// Admitted functions with candidate index in `range`, paired with that index.
    pub fn iter_range(
        &self,
        range: std::ops::Range<u128>,
    ) -> impl Iterator<Item = (u128, SelectionFunction)> + '_ {
        let end = range.end.min(self.size);
        let start = range.start.min(end);
        let mut digits = vec![0usize; self.domains.len()];
        let mut rest = start;
        for (d, dom) in digits.iter_mut().zip(&self.domains).rev() {
            let radix = dom.len() as u128;
            *d = (rest % radix) as usize;
            rest /= radix;
        }
        let mut index = start;
        std::iter::from_fn(move || {
            while index < end {
                let table: Vec<Event> = digits
                    .iter()
                    .zip(&self.domains)
                    .map(|(&d, dom)| dom[d])
                    .collect();
                let current = index;
                index += 1;
                for (d, dom) in digits.iter_mut().zip(&self.domains).rev() {
                    *d += 1;
                    if *d < dom.len() {
                        break;
                    }
                    *d = 0;
                }
                let f = SelectionFunction {
                    algebra: self.algebra.clone(),
                    table,
                };
                if self.admits(&f) {
                    return Some((current, f));
                }
            }
            None
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = SelectionFunction> + '_ {
        self.iter_range(0..self.size).map(|(_, f)| f)
    }
}

/// Every selection function satisfying `constraints`, in lexicographic order.
pub fn enumerate_selection_functions(
    algebra: Arc<Algebra>,
    constraints: &BTreeSet<FrameProperty>,
    budget: Budget,
) -> Result<impl Iterator<Item = SelectionFunction>> {
    let space = SelectionSpace::new(algebra, constraints, budget)?;
    let size = space.size;
    Ok(space.into_iter_range(0..size))
}

impl SelectionSpace {
    fn into_iter_range(
        self,
        range: std::ops::Range<u128>,
    ) -> impl Iterator<Item = SelectionFunction> {
        let space = Arc::new(self);
        let mut index = range.start;
        let end = range.end;
        std::iter::from_fn(move || {
            while index < end {
                let f = space.candidate(index);
                index += 1;
                if space.admits(&f) {
                    return Some(f);
                }
            }
            None
        })
    }
}

/// Default retry cap for sampling under global constraints.
pub const DEFAULT_RETRY_CAP: usize = 10_000;

/// Draws a selection function satisfying `constraints`, deterministically in `seed`.
pub fn sample_selection_function(
    algebra: Arc<Algebra>,
    constraints: &BTreeSet<FrameProperty>,
    seed: u64,
) -> Result<SelectionFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(algebra, constraints, &mut rng, DEFAULT_RETRY_CAP)
}

pub fn sample_with_rng<R: Rng + ?Sized>(
    algebra: Arc<Algebra>,
    constraints: &BTreeSet<FrameProperty>,
    rng: &mut R,
    retry_cap: usize,
) -> Result<SelectionFunction> {
    let domains: Vec<CellDomain> = algebra
        .events()
        .flat_map(|a| {
            let alg = &algebra;
            alg.atoms()
                .map(move |alpha| CellDomain::new(alg, constraints, a, alpha))
        })
        .collect();
    if domains.iter().any(|d| d.count() == 0) {
        return Err(Error::Unsatisfiable(constraints.iter().copied().collect()));
    }
    let global = constraints.iter().any(|p| p.is_global());
    for attempt in 0..retry_cap.max(1) {
        // Uniform per-cell draws almost never satisfy well-order or nesting
        // beyond two atoms, so every other attempt under global constraints
        // builds f from random per-world rankings instead.
        let f = if global && attempt % 2 == 1 {
            ranked_selection(&algebra, constraints, rng)
        } else {
            let table = domains
                .iter()
                .map(|d| d.sample(rng).expect("non-empty domain"))
                .collect();
            SelectionFunction {
                algebra: algebra.clone(),
                table,
            }
        };
        if f.satisfies_all(constraints) {
            return Ok(f);
        }
    }
    Err(Error::RetryCapExhausted {
        constraints: constraints.iter().copied().collect(),
        retries: retry_cap,
    })
}

/// Selection function induced by one random ranking of accessible worlds per
/// atom: `f(a, α)` is the set of lowest-ranked atoms of `a` accessible from `α`.
///
/// Such functions always satisfy identity, emptiness, well-order and nesting.
fn ranked_selection<R: Rng + ?Sized>(
    algebra: &Arc<Algebra>,
    constraints: &BTreeSet<FrameProperty>,
    rng: &mut R,
) -> SelectionFunction {
    use FrameProperty::*;
    let n = algebra.atom_count();
    let has = |p| constraints.contains(&p);
    let all_accessible = has(Normality) || has(UniquenessStrict);
    let strict_order = has(UniquenessWeak) || has(UniquenessStrict);
    let self_first = has(Centering1) || has(Centering) || has(Centering2);
    let self_alone = has(Centering2) || has(Centering);

    let rankings: Vec<Vec<Option<usize>>> = algebra
        .atoms()
        .map(|alpha| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut rank = vec![None; n];
            for (pos, &beta) in order.iter().enumerate() {
                if !all_accessible && beta != alpha.index() && rng.gen_bool(0.5) {
                    continue;
                }
                let r = if strict_order {
                    pos + 1
                } else {
                    rng.gen_range(1..=n)
                };
                rank[beta] = Some(r);
            }
            if self_first {
                rank[alpha.index()] = Some(if self_alone || strict_order { 0 } else { 1 });
            }
            rank
        })
        .collect();

    let table = algebra
        .events()
        .flat_map(|a| {
            let rankings = &rankings;
            algebra.atoms().map(move |alpha| {
                let rank = &rankings[alpha.index()];
                let best = a.atoms().filter_map(|b| rank[b.index()]).min();
                match best {
                    None => Event::BOTTOM,
                    Some(r) => a
                        .atoms()
                        .filter(|b| rank[b.index()] == Some(r))
                        .fold(Event::BOTTOM, |acc, b| acc.join(b.event())),
                }
            })
        })
        .collect();
    SelectionFunction {
        algebra: algebra.clone(),
        table,
    }
}
