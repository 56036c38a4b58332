//! Probabilities on atoms, the probability of conditionals, and the imaged
//! mass and belief functions induced by a selection function.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Event};
use crate::conditional::{conditional, necessity, Accessibility};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::selection::SelectionFunction;

/// A strictly positive probability distribution over the atoms.
///
/// Besides the exact weights, the distribution keeps every weight as an
/// integer numerator over one common denominator, so sums over events are
/// integer additions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityDist {
    algebra: Arc<Algebra>,
    weights: Vec<Rational>,
    denominator: u128,
    numerators: Vec<u128>,
}

impl ProbabilityDist {
    pub fn new(algebra: Arc<Algebra>, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != algebra.atom_count() {
            return Err(Error::AtomCount(weights.len()));
        }
        for (atom, w) in weights.iter().enumerate() {
            if !rational::is_positive(w) {
                return Err(Error::NonPositiveProbability {
                    atom,
                    value: rational::format(w),
                });
            }
        }
        let sum: Rational = weights.iter().sum();
        if sum != rational::one() {
            return Err(Error::NotNormalized(rational::format(&sum)));
        }
        let lcm = weights
            .iter()
            .fold(BigInt::from(1), |acc, w| acc.lcm(w.denom()));
        let denominator = lcm.to_u128().ok_or(Error::DenominatorOverflow)?;
        let numerators = weights
            .iter()
            .map(|w| {
                (w.numer() * (&lcm / w.denom()))
                    .to_u128()
                    .ok_or(Error::DenominatorOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            algebra,
            weights,
            denominator,
            numerators,
        })
    }

    /// Normalizes positive integer weights.
    pub fn from_counts(algebra: Arc<Algebra>, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        let weights = counts
            .iter()
            .map(|&c| Rational::new(BigInt::from(c), BigInt::from(total.max(1))))
            .collect();
        Self::new(algebra, weights)
    }

    /// Uniform distribution.
    pub fn uniform(algebra: Arc<Algebra>) -> Self {
        let n = algebra.atom_count();
        Self::from_counts(algebra, &vec![1; n]).expect("uniform weights are valid")
    }

    /// Positive integer weights in `1..=1000` per atom, normalized exactly.
    pub fn random<R: Rng + ?Sized>(algebra: Arc<Algebra>, rng: &mut R) -> Self {
        let counts: Vec<u64> = (0..algebra.atom_count())
            .map(|_| rng.gen_range(1..=1000))
            .collect();
        Self::from_counts(algebra, &counts).expect("positive weights are valid")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Common denominator of the scaled representation.
    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    /// `P(x)` scaled by [`denominator`](Self::denominator).
    pub fn scaled(&self, x: Event) -> u128 {
        x.atoms().map(|a| self.numerators[a.index()]).sum()
    }

    pub fn scaled_atom(&self, atom: usize) -> u128 {
        self.numerators[atom]
    }

    /// `P(x)`, the sum of the weights of the atoms of `x`.
    pub fn prob(&self, x: Event) -> Rational {
        x.atoms().map(|a| &self.weights[a.index()]).sum()
    }

    fn assert_compatible(&self, f: &SelectionFunction) {
        assert_eq!(
            self.algebra.atom_count(),
            f.algebra().atom_count(),
            "probability and selection function over different algebras"
        );
    }
}

/// `P(a ▷_f b)`, the probability of the atoms satisfying the conditional.
pub fn prob_conditional(
    p: &ProbabilityDist,
    f: &SelectionFunction,
    a: Event,
    b: Event,
) -> Rational {
    p.assert_compatible(f);
    p.prob(conditional(f, a, b))
}

/// `P(□_a^f b)`.
pub fn prob_necessity(p: &ProbabilityDist, f: &SelectionFunction, a: Event, b: Event) -> Rational {
    p.assert_compatible(f);
    p.prob(necessity(f, a, b))
}

/// The mass each world sends to its selected event at a fixed antecedent:
/// `m_a(c) = Σ_{α : f(a,α) = c} P(α)`. Events with zero mass are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassDistribution {
    pub antecedent: Event,
    pub entries: BTreeMap<Event, Rational>,
}

impl MassDistribution {
    pub fn total(&self) -> Rational {
        self.entries.values().sum()
    }

    pub fn mass(&self, c: Event) -> Rational {
        self.entries.get(&c).cloned().unwrap_or_else(rational::zero)
    }

    /// `Bel(b) = Σ_{c ⊆ b} m(c)`.
    pub fn belief(&self, b: Event) -> Rational {
        self.entries
            .iter()
            .filter(|(c, _)| c.leq(b))
            .map(|(_, m)| m)
            .sum()
    }
}

pub fn imaged_mass(p: &ProbabilityDist, f: &SelectionFunction, a: Event) -> MassDistribution {
    p.assert_compatible(f);
    let mut entries: BTreeMap<Event, Rational> = BTreeMap::new();
    for (alpha, &selected) in f.row(a).iter().enumerate() {
        *entries.entry(selected).or_insert_with(rational::zero) += &p.weights[alpha];
    }
    entries.retain(|_, m| !m.is_zero());
    MassDistribution {
        antecedent: a,
        entries,
    }
}

/// `Bel_a(b)`, summed from the imaged mass.
pub fn imaged_belief(p: &ProbabilityDist, f: &SelectionFunction, a: Event, b: Event) -> Rational {
    imaged_mass(p, f, a).belief(b)
}

/// Why a set function fails to be a probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdditivityFailure {
    /// The function assigns positive value to `⊥`.
    BottomNonzero,
    /// The function does not assign `1` to `⊤`.
    TopNotOne,
    /// `F(x ∨ y) + F(x ∧ y) ≠ F(x) + F(y)`.
    Modular { x: Event, y: Event },
}

/// `Bel_a` on every event, as integers over the distribution's common denominator.
#[derive(Debug, Clone)]
pub struct BeliefTable {
    antecedent: Event,
    denominator: u128,
    values: Vec<u128>,
}

impl BeliefTable {
    pub fn new(p: &ProbabilityDist, f: &SelectionFunction, a: Event) -> Self {
        p.assert_compatible(f);
        let row = f.row(a);
        let values = f
            .algebra()
            .events()
            .map(|x| {
                row.iter()
                    .enumerate()
                    .filter(|(_, sel)| sel.leq(x))
                    .map(|(alpha, _)| p.scaled_atom(alpha))
                    .sum()
            })
            .collect();
        Self {
            antecedent: a,
            denominator: p.denominator(),
            values,
        }
    }

    pub fn antecedent(&self) -> Event {
        self.antecedent
    }

    pub fn scaled(&self, x: Event) -> u128 {
        self.values[x.bits() as usize]
    }

    pub fn value(&self, x: Event) -> Rational {
        Rational::new(BigInt::from(self.scaled(x)), BigInt::from(self.denominator))
    }

    fn events(&self) -> impl Iterator<Item = Event> + Clone {
        (0..self.values.len() as u32).map(Event)
    }

    /// First failure of the probability axioms, pairs `(x, y)` in
    /// lexicographic order.
    pub fn additivity_failure(&self) -> Option<AdditivityFailure> {
        let top = Event(self.values.len() as u32 - 1);
        if self.scaled(Event::BOTTOM) != 0 {
            return Some(AdditivityFailure::BottomNonzero);
        }
        if self.scaled(top) != self.denominator {
            return Some(AdditivityFailure::TopNotOne);
        }
        for x in self.events() {
            for y in self.events() {
                if self.scaled(x.join(y)) + self.scaled(x.meet(y))
                    != self.scaled(x) + self.scaled(y)
                {
                    return Some(AdditivityFailure::Modular { x, y });
                }
            }
        }
        None
    }

    /// `Bel(x ∨ y) + Bel(x ∧ y) ≥ Bel(x) + Bel(y)` for all pairs; returns the first violation.
    pub fn superadditivity_violation(&self) -> Option<(Event, Event)> {
        for x in self.events() {
            for y in self.events() {
                if self.scaled(x.join(y)) + self.scaled(x.meet(y)) < self.scaled(x) + self.scaled(y)
                {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// `x ⊆ y ⇒ Bel(x) ≤ Bel(y)`; returns the first violation.
    pub fn monotonicity_violation(&self) -> Option<(Event, Event)> {
        for y in self.events() {
            for x in y.subevents() {
                if self.scaled(x) > self.scaled(y) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// The four equivalent conditions for `P(a ▷_f ·)` to be a probability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition1Report {
    pub antecedent: Event,
    /// `P(a ▷_f ·)` is a probability function.
    pub additive: bool,
    /// `|f(a, α)| = 1` for every atom.
    pub unique: bool,
    /// `R_a^f` is a total function.
    pub functional: bool,
    /// `□_a^f x = ◇_a^f x` for every event.
    pub box_eq_diamond: bool,
    pub witness: Option<AdditivityFailure>,
}

impl Proposition1Report {
    pub fn agree(&self) -> bool {
        self.additive == self.unique
            && self.unique == self.functional
            && self.functional == self.box_eq_diamond
    }
}

pub fn proposition1_report(
    p: &ProbabilityDist,
    f: &SelectionFunction,
    a: Event,
) -> Proposition1Report {
    let witness = BeliefTable::new(p, f, a).additivity_failure();
    let relation = Accessibility::new(f, a);
    Proposition1Report {
        antecedent: a,
        additive: witness.is_none(),
        unique: f.is_unique_at(a),
        functional: relation.is_functional(),
        box_eq_diamond: f
            .algebra()
            .events()
            .all(|x| relation.necessity(x) == relation.possibility(x)),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT};
    use crate::rational::ratio;
    use crate::selection::FrameProperty;

    fn alg(n: usize) -> Arc<Algebra> {
        Arc::new(Algebra::new(n).unwrap())
    }

    #[test]
    fn event_probabilities() {
        let p = fixtures::example_probability();
        assert_eq!(p.prob(Event(0b110)), ratio(1, 2));
        assert_eq!(p.prob(Event(0b010)), ratio(1, 4));
        assert_eq!(p.prob(p.algebra().top()), ratio(1, 1));
        assert_eq!(p.prob(Event::BOTTOM), ratio(0, 1));
        assert_eq!(p.denominator(), 4);
        assert_eq!(p.scaled(Event(0b101)), 3);
    }

    #[test]
    fn distribution_validation() {
        let a = alg(2);
        assert!(matches!(
            ProbabilityDist::new(a.clone(), vec![ratio(1, 2), ratio(2, 5)]),
            Err(Error::NotNormalized(ref s)) if s == "9/10"
        ));
        assert!(matches!(
            ProbabilityDist::new(a.clone(), vec![ratio(1, 1), ratio(0, 1)]),
            Err(Error::NonPositiveProbability { atom: 1, .. })
        ));
        assert!(ProbabilityDist::new(a, vec![ratio(1, 1)]).is_err());
    }

    #[test]
    fn worked_example_conditional_probability() {
        let (p, f) = (
            fixtures::example_probability(),
            fixtures::example_selection(),
        );
        assert_eq!(
            prob_conditional(&p, &f, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT),
            ratio(1, 4)
        );
        for a in f.algebra().events() {
            assert_eq!(prob_conditional(&p, &f, a, f.algebra().top()), ratio(1, 1));
        }
        // Emptiness: ⊥ ▷ b is ⊤.
        assert!(f.check_property(FrameProperty::Emptiness));
        for b in f.algebra().events() {
            assert_eq!(prob_conditional(&p, &f, Event::BOTTOM, b), ratio(1, 1));
        }
    }

    #[test]
    fn worked_example_mass_and_belief() {
        let (p, f) = (
            fixtures::example_probability(),
            fixtures::example_selection(),
        );
        let m = imaged_mass(&p, &f, EXAMPLE_ANTECEDENT);
        let expected: BTreeMap<Event, Rational> = [
            (Event(0b110), ratio(1, 2)),
            (Event(0b010), ratio(1, 4)),
            (Event(0b100), ratio(1, 4)),
        ]
        .into_iter()
        .collect();
        assert_eq!(m.entries, expected);
        assert_eq!(m.total(), ratio(1, 1));
        assert_eq!(
            imaged_belief(&p, &f, EXAMPLE_ANTECEDENT, Event(0b010)),
            ratio(1, 4)
        );
        assert_eq!(
            imaged_belief(&p, &f, EXAMPLE_ANTECEDENT, Event(0b110)),
            ratio(1, 1)
        );
        assert_eq!(
            imaged_belief(&p, &f, EXAMPLE_ANTECEDENT, f.algebra().top()),
            ratio(1, 1)
        );
    }

    #[test]
    fn unique_selection_puts_mass_on_singletons() {
        let f = SelectionFunction::nearest_singleton(alg(3));
        let p = fixtures::example_probability();
        for a in f.algebra().nonempty_events() {
            let m = imaged_mass(&p, &f, a);
            assert!(m.entries.keys().all(|c| c.cardinality() == 1));
        }
    }

    #[test]
    fn constant_cell_mass() {
        let c = Event(0b101);
        let f = SelectionFunction::from_fn(alg(3), |_, _| c).unwrap();
        let m = imaged_mass(&fixtures::example_probability(), &f, Event(0b011));
        assert_eq!(m.entries, BTreeMap::from([(c, ratio(1, 1))]));
    }

    #[test]
    fn belief_of_bottom_tracks_normality() {
        let p = fixtures::example_probability();
        let f = fixtures::example_selection();
        let a = EXAMPLE_ANTECEDENT;
        assert_eq!(imaged_belief(&p, &f, a, Event::BOTTOM), ratio(0, 1));
        let g = f
            .with_cell(a, crate::algebra::AtomIndex(1), Event::BOTTOM)
            .unwrap();
        // P(α2) leaks to ⊥.
        assert_eq!(imaged_belief(&p, &g, a, Event::BOTTOM), ratio(1, 4));
    }

    #[test]
    fn worked_example_additivity_report() {
        let (p, f) = (
            fixtures::example_probability(),
            fixtures::example_selection(),
        );
        let r = proposition1_report(&p, &f, EXAMPLE_ANTECEDENT);
        assert!(!r.additive && !r.unique && !r.functional && !r.box_eq_diamond);
        assert_eq!(
            r.witness,
            Some(AdditivityFailure::Modular {
                x: Event(0b010),
                y: Event(0b100)
            })
        );
        // Bel({α2,α3}) = 1 > Bel({α2}) + Bel({α3}) = 1/2.
        let t = BeliefTable::new(&p, &f, EXAMPLE_ANTECEDENT);
        assert_eq!(t.value(Event(0b110)), ratio(1, 1));
        assert_eq!(t.value(Event(0b010)) + t.value(Event(0b100)), ratio(1, 2));
    }

    #[test]
    fn stalnaker_proposition1_report() {
        let f = SelectionFunction::nearest_singleton(alg(3));
        let p = fixtures::example_probability();
        for a in f.algebra().nonempty_events() {
            let r = proposition1_report(&p, &f, a);
            assert!(r.additive && r.unique && r.functional && r.box_eq_diamond);
            assert_eq!(r.witness, None);
        }
        let r = proposition1_report(&p, &f, Event::BOTTOM);
        assert_eq!(r.witness, Some(AdditivityFailure::BottomNonzero));
        assert!(r.agree());
    }

    #[test]
    fn belief_table_matches_mass_route() {
        let (p, f) = (
            fixtures::example_probability(),
            fixtures::example_selection(),
        );
        for a in f.algebra().events() {
            let t = BeliefTable::new(&p, &f, a);
            for b in f.algebra().events() {
                assert_eq!(t.value(b), imaged_belief(&p, &f, a, b));
            }
            assert_eq!(t.superadditivity_violation(), None);
            assert_eq!(t.monotonicity_violation(), None);
        }
    }
}
