//! The selection-function conditional `a ▷_f b` and the indexed modal
//! operators `□_a^f`, `◇_a^f` over the accessibility relation
//! `α R_a^f β ⇔ β ∈ f(a, α)`.
//!
//! All operators take events of the selection function's own algebra.

use crate::algebra::{Algebra, AtomIndex, Event};
use crate::selection::{FrameProperty, SelectionFunction};

/// The accessibility relation `R_a^f` for a fixed antecedent.
#[derive(Debug, Clone, Copy)]
pub struct Accessibility<'f> {
    f: &'f SelectionFunction,
    antecedent: Event,
}

impl<'f> Accessibility<'f> {
    pub fn new(f: &'f SelectionFunction, antecedent: Event) -> Self {
        Self { f, antecedent }
    }

    pub fn antecedent(&self) -> Event {
        self.antecedent
    }

    /// `R_a^f(α)`, the worlds accessible from `α`.
    pub fn successors(&self, alpha: AtomIndex) -> Event {
        self.f.get(self.antecedent, alpha)
    }

    pub fn relates(&self, alpha: AtomIndex, beta: AtomIndex) -> bool {
        self.successors(alpha).contains(beta)
    }

    /// Every related pair `(α, β)`, ordered by `α` then `β`.
    pub fn pairs(&self) -> impl Iterator<Item = (AtomIndex, AtomIndex)> + '_ {
        self.f.algebra().atoms().flat_map(move |alpha| {
            self.successors(alpha)
                .atoms()
                .map(move |beta| (alpha, beta))
        })
    }

    /// Whether every world has exactly one successor.
    pub fn is_functional(&self) -> bool {
        let n = self.f.algebra().atom_count();
        let mut out_degree = vec![0usize; n];
        for (alpha, _) in self.pairs() {
            out_degree[alpha.index()] += 1;
        }
        out_degree.iter().all(|&d| d == 1)
    }

    /// `□_a^f(b)`: worlds all of whose successors lie in `b`.
    pub fn necessity(&self, b: Event) -> Event {
        self.f
            .algebra()
            .atoms()
            .filter(|&alpha| self.successors(alpha).leq(b))
            .fold(Event::BOTTOM, |acc, alpha| acc.join(alpha.event()))
    }

    /// `◇_a^f(b)`: worlds with some successor in `b`.
    pub fn possibility(&self, b: Event) -> Event {
        self.f
            .algebra()
            .atoms()
            .filter(|&alpha| !self.successors(alpha).meet(b).is_bottom())
            .fold(Event::BOTTOM, |acc, alpha| acc.join(alpha.event()))
    }
}

/// `□_a^f(b)`.
pub fn necessity(f: &SelectionFunction, a: Event, b: Event) -> Event {
    Accessibility::new(f, a).necessity(b)
}

/// `◇_a^f(b)`.
pub fn possibility(f: &SelectionFunction, a: Event, b: Event) -> Event {
    Accessibility::new(f, a).possibility(b)
}

/// `a ▷_f b = {α | f(a, α) ⊆ b}`, which is `□_a^f(b)`.
pub fn conditional(f: &SelectionFunction, a: Event, b: Event) -> Event {
    necessity(f, a, b)
}

/// `a ▷_f b` for every pair of events, computed once.
#[derive(Debug, Clone)]
pub struct ConditionalTable {
    size: usize,
    values: Vec<Event>,
}

impl ConditionalTable {
    pub fn new(f: &SelectionFunction) -> Self {
        let alg = f.algebra();
        let size = alg.size();
        let mut values = Vec::with_capacity(size * size);
        for a in alg.events() {
            let row = f.row(a);
            for b in alg.events() {
                let bits = row
                    .iter()
                    .enumerate()
                    .filter(|(_, sel)| sel.leq(b))
                    .fold(0u32, |acc, (i, _)| acc | 1 << i);
                values.push(Event(bits));
            }
        }
        Self { size, values }
    }

    pub fn get(&self, a: Event, b: Event) -> Event {
        self.values[a.bits() as usize * self.size + b.bits() as usize]
    }
}

/// Both sides of one row of the correspondence between frame properties and
/// conditional identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fact1Check {
    /// The conditional identity, quantified over all events.
    pub lhs: bool,
    /// The frame property of `f`.
    pub rhs: bool,
}

impl Fact1Check {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn check_fact1_row(f: &SelectionFunction, row: FrameProperty) -> Fact1Check {
    let table = ConditionalTable::new(f);
    check_fact1_row_with(f.algebra(), &table, f, row)
}

/// Like [`check_fact1_row`] with a precomputed conditional table.
pub fn check_fact1_row_with(
    alg: &Algebra,
    t: &ConditionalTable,
    f: &SelectionFunction,
    row: FrameProperty,
) -> Fact1Check {
    Fact1Check {
        lhs: conditional_identity(alg, t, row),
        rhs: f.check_property(row),
    }
}

/// The conditional-side identity of a row, evaluated by brute force.
pub fn conditional_identity(alg: &Algebra, t: &ConditionalTable, row: FrameProperty) -> bool {
    let top = alg.top();
    let not = |x| alg.complement(x);
    let events = || alg.events();
    match row {
        FrameProperty::Emptiness => events().all(|b| t.get(Event::BOTTOM, b) == top),
        FrameProperty::Normality => alg
            .nonempty_events()
            .all(|d| events().all(|b| t.get(d, b).leq(not(t.get(d, not(b)))))),
        FrameProperty::Identity => events().all(|a| t.get(a, a) == top),
        FrameProperty::Centering1 => {
            events().all(|a| events().all(|b| t.get(a, b).leq(alg.implies(a, b))))
        }
        FrameProperty::Centering2 => events().all(|a| events().all(|b| a.meet(b).leq(t.get(a, b)))),
        FrameProperty::Centering => events().all(|a| {
            events().all(|b| {
                let c = t.get(a, b);
                a.meet(b).leq(c) && c.leq(alg.implies(a, b))
            })
        }),
        FrameProperty::UniquenessWeak => {
            events().all(|a| events().all(|b| t.get(a, not(b)).join(t.get(a, b)) == top))
        }
        FrameProperty::UniquenessStrict => {
            conditional_identity(alg, t, FrameProperty::Normality)
                && conditional_identity(alg, t, FrameProperty::UniquenessWeak)
        }
        FrameProperty::WellOrder => events().all(|a| {
            events().all(|b| {
                let both = t.get(a, b).meet(t.get(b, a));
                events().all(|c| both.leq(alg.iff(t.get(a, c), t.get(b, c))))
            })
        }),
        FrameProperty::Nesting => events().all(|a| {
            events().all(|b| {
                let ab = a.join(b);
                let either = t.get(ab, a).join(t.get(ab, b));
                events().all(|c| {
                    either.join(alg.iff(t.get(ab, c), t.get(a, c).meet(t.get(b, c)))) == top
                })
            })
        }),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::selection::{Budget, SelectionSpace};

    fn alg(n: usize) -> Arc<Algebra> {
        Arc::new(Algebra::new(n).unwrap())
    }

    #[test]
    fn worked_example_conditional() {
        let f = fixtures::example_selection();
        let a = Event(0b110);
        assert_eq!(conditional(&f, a, Event(0b010)), Event(0b010));
        assert_eq!(necessity(&f, a, Event(0b010)), Event(0b010));
        assert_eq!(possibility(&f, a, Event(0b010)), Event(0b011));
    }

    #[test]
    fn emptiness_makes_bottom_antecedent_trivial() {
        let f = SelectionFunction::nearest_singleton(alg(3));
        assert!(f.check_property(FrameProperty::Emptiness));
        for b in f.algebra().events() {
            assert_eq!(conditional(&f, Event::BOTTOM, b), f.algebra().top());
        }
    }

    #[test]
    fn vacuous_cases() {
        let f = fixtures::example_selection();
        let alg = f.algebra().clone();
        for a in alg.events() {
            assert_eq!(conditional(&f, a, alg.top()), alg.top());
            assert_eq!(necessity(&f, a, alg.top()), alg.top());
            assert_eq!(possibility(&f, a, Event::BOTTOM), Event::BOTTOM);
        }
    }

    #[test]
    fn strict_uniqueness_collapses_box_and_diamond() {
        let f = SelectionFunction::nearest_singleton(alg(3));
        for a in f.algebra().nonempty_events() {
            for x in f.algebra().events() {
                assert_eq!(necessity(&f, a, x), possibility(&f, a, x));
            }
        }
    }

    #[test]
    fn accessibility_relation() {
        let f = fixtures::example_selection();
        let r = Accessibility::new(&f, Event(0b110));
        let pairs: Vec<(usize, usize)> = r.pairs().map(|(x, y)| (x.index(), y.index())).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 1), (2, 2)]);
        assert!(!r.is_functional());
        assert!(r.relates(AtomIndex(0), AtomIndex(2)));
        assert!(Accessibility::new(&f, Event(0b011)).is_functional());
    }

    #[test]
    fn table_matches_operator() {
        let f = fixtures::example_selection();
        let t = ConditionalTable::new(&f);
        for a in f.algebra().events() {
            for b in f.algebra().events() {
                assert_eq!(t.get(a, b), conditional(&f, a, b));
            }
        }
    }

    #[test]
    fn fact1_rows_on_worked_example() {
        let f = fixtures::example_selection();
        assert_eq!(
            check_fact1_row(&f, FrameProperty::Normality),
            Fact1Check {
                lhs: true,
                rhs: true
            }
        );
        let weak = check_fact1_row(&f, FrameProperty::UniquenessWeak);
        assert_eq!(
            weak,
            Fact1Check {
                lhs: false,
                rhs: false
            }
        );
        for row in FrameProperty::ALL {
            assert!(check_fact1_row(&f, row).agrees(), "{row}");
        }
    }

    #[test]
    fn fact1_emptiness_row() {
        // ⊥ at ⊥, a itself elsewhere.
        let f = SelectionFunction::from_fn(alg(3), |a, _| a).unwrap();
        assert_eq!(
            check_fact1_row(&f, FrameProperty::Emptiness),
            Fact1Check {
                lhs: true,
                rhs: true
            }
        );
        let g = f
            .with_cell(Event::BOTTOM, AtomIndex(1), Event(0b100))
            .unwrap();
        assert_eq!(
            check_fact1_row(&g, FrameProperty::Emptiness),
            Fact1Check {
                lhs: false,
                rhs: false
            }
        );
    }

    #[test]
    fn fact1_rows_exhaustive_one_atom_and_sampled_two() {
        let space = SelectionSpace::new(alg(1), &Default::default(), Budget::DEFAULT).unwrap();
        for f in space.iter() {
            for row in FrameProperty::ALL {
                assert!(check_fact1_row(&f, row).agrees());
            }
        }
        let space = SelectionSpace::new(alg(2), &Default::default(), Budget::DEFAULT).unwrap();
        for i in (0..space.candidate_count()).step_by(97) {
            let f = space.candidate(i);
            for row in FrameProperty::ALL {
                assert!(check_fact1_row(&f, row).agrees(), "{row} at candidate {i}");
            }
        }
    }
}
