//! Distribution functions `λ` and the λ-imaging update `P_a^λ`.
//!
//! For a non-empty antecedent `a`, every world `α` splits its prior mass
//! `P(α)` across the worlds selected by `f(a, α)` according to the
//! distribution `λ(a, α)`. The result is a probability over the atoms.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AtomIndex, Event};
use crate::belief::ProbabilityDist;
use crate::conditional::conditional;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::selection::SelectionFunction;

/// Weights `λ(a, α)(β)` for one cell, keyed by `β`.
pub type LambdaCell = BTreeMap<AtomIndex, Rational>;

/// A distribution function for a selection function.
///
/// Cells are stored only for non-empty antecedents. Absent `β` entries are
/// zero weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionFunction {
    selection: SelectionFunction,
    cells: BTreeMap<(Event, AtomIndex), LambdaCell>,
}

/// A broken constraint on a distribution function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LambdaViolation {
    /// `f(a, α) = ⊥` at a non-empty antecedent, so no distribution exists on the cell.
    SelectionNotNormal {
        antecedent: Event,
        atom: AtomIndex,
    },
    MissingCell {
        antecedent: Event,
        atom: AtomIndex,
    },
    /// `β ∈ f(a, α)` but `λ(a, α)(β)` is zero or negative.
    NonPositiveOnSelected {
        antecedent: Event,
        atom: AtomIndex,
        target: AtomIndex,
    },
    /// `β ∉ f(a, α)` but `λ(a, α)(β) ≠ 0`.
    NonzeroOffSelection {
        antecedent: Event,
        atom: AtomIndex,
        target: AtomIndex,
    },
    /// `Σ_β λ(a, α)(β) ≠ 1`.
    NotNormalized {
        antecedent: Event,
        atom: AtomIndex,
        sum: String,
    },
}

impl std::fmt::Display for LambdaViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaViolation::SelectionNotNormal { antecedent, atom } => {
                write!(
                    f,
                    "f({antecedent}, {atom}) is empty; no distribution exists on it"
                )
            }
            LambdaViolation::MissingCell { antecedent, atom } => {
                write!(f, "missing cell λ({antecedent}, {atom})")
            }
            LambdaViolation::NonPositiveOnSelected {
                antecedent,
                atom,
                target,
            } => write!(
                f,
                "λ({antecedent}, {atom})({target}) must be positive since {target} is selected"
            ),
            LambdaViolation::NonzeroOffSelection {
                antecedent,
                atom,
                target,
            } => write!(
                f,
                "λ({antecedent}, {atom})({target}) must be zero since {target} is not selected"
            ),
            LambdaViolation::NotNormalized {
                antecedent,
                atom,
                sum,
            } => {
                write!(f, "λ({antecedent}, {atom}) sums to {sum}, not 1")
            }
        }
    }
}

/// Canonical distribution functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaKind {
    /// Equal weight on every selected world (general imaging).
    Uniform,
    /// All weight on the unique selected world (imaging).
    Lewis,
    /// `P(β) / P(a)` over `f(a, α) = a` (conditionalization).
    Bayes,
}

impl DistributionFunction {
    /// Wraps raw cells without validation. Cells at `⊥` are dropped.
    pub fn from_cells(
        selection: SelectionFunction,
        mut cells: BTreeMap<(Event, AtomIndex), LambdaCell>,
    ) -> Self {
        cells.retain(|(a, _), _| !a.is_bottom());
        Self { selection, cells }
    }

    /// Wraps raw cells and rejects them unless every constraint holds.
    pub fn new(
        selection: SelectionFunction,
        cells: BTreeMap<(Event, AtomIndex), LambdaCell>,
    ) -> Result<Self> {
        let lam = Self::from_cells(selection, cells);
        match lam.validate().first() {
            None => Ok(lam),
            Some(v) => Err(Error::InvalidLambda(v.to_string())),
        }
    }

    fn build(
        f: &SelectionFunction,
        mut cell: impl FnMut(Event, AtomIndex, Event) -> LambdaCell,
    ) -> Self {
        let mut cells = BTreeMap::new();
        for a in f.algebra().nonempty_events() {
            for alpha in f.algebra().atoms() {
                cells.insert((a, alpha), cell(a, alpha, f.get(a, alpha)));
            }
        }
        Self {
            selection: f.clone(),
            cells,
        }
    }

    fn require_normal(f: &SelectionFunction, kind: &'static str) -> Result<()> {
        match f.normality_violation() {
            None => Ok(()),
            Some((a, alpha)) => Err(Error::LambdaPrecondition {
                kind,
                requirement: format!("a normal selection function (f({a}, {alpha}) is empty)"),
            }),
        }
    }

    /// `λ(a, α)(β) = 1 / |f(a, α)|` on selected worlds.
    pub fn uniform(f: &SelectionFunction) -> Result<Self> {
        Self::require_normal(f, "uniform")?;
        Ok(Self::build(f, |_, _, sel| {
            let w = rational::ratio(1, i64::from(sel.cardinality()));
            sel.atoms().map(|b| (b, w.clone())).collect()
        }))
    }

    /// Weight `1` on the single selected world.
    pub fn lewis(f: &SelectionFunction) -> Result<Self> {
        Self::require_normal(f, "lewis")?;
        if !f.is_unique_on_nonempty() {
            return Err(Error::LambdaPrecondition {
                kind: "lewis",
                requirement: "a single selected world in every cell with non-empty antecedent"
                    .into(),
            });
        }
        Ok(Self::build(f, |_, _, sel| {
            sel.atoms().map(|b| (b, rational::one())).collect()
        }))
    }

    /// `λ(a, α)(β) = P(β) / P(a)` for `β ∈ a`, over `f(a, α) = a`.
    pub fn bayes(p: &ProbabilityDist, f: &SelectionFunction) -> Result<Self> {
        let total = f
            .algebra()
            .nonempty_events()
            .all(|a| f.row(a).iter().all(|&sel| sel == a));
        if !total {
            return Err(Error::LambdaPrecondition {
                kind: "bayes",
                requirement: "f(a, α) = a for every non-empty a".into(),
            });
        }
        if p.algebra().atom_count() != f.algebra().atom_count() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self::build(f, |a, _, sel| {
            let pa = p.prob(a);
            sel.atoms()
                .map(|b| (b, &p.weights()[b.index()] / &pa))
                .collect()
        }))
    }

    /// Positive integer weights in `1..=1000` on each selected world, normalized exactly.
    pub fn random<R: Rng + ?Sized>(f: &SelectionFunction, rng: &mut R) -> Result<Self> {
        Self::require_normal(f, "random")?;
        Ok(Self::build(f, |_, _, sel| {
            let counts: Vec<(AtomIndex, i64)> =
                sel.atoms().map(|b| (b, rng.gen_range(1..=1000))).collect();
            let total: i64 = counts.iter().map(|(_, c)| c).sum();
            counts
                .into_iter()
                .map(|(b, c)| (b, rational::ratio(c, total)))
                .collect()
        }))
    }

    pub fn selection(&self) -> &SelectionFunction {
        &self.selection
    }

    pub fn cells(&self) -> &BTreeMap<(Event, AtomIndex), LambdaCell> {
        &self.cells
    }

    pub fn cell(&self, a: Event, alpha: AtomIndex) -> Option<&LambdaCell> {
        self.cells.get(&(a, alpha))
    }

    /// `λ(a, α)(β)`, zero when not stored.
    pub fn weight(&self, a: Event, alpha: AtomIndex, beta: AtomIndex) -> Rational {
        self.cell(a, alpha)
            .and_then(|c| c.get(&beta))
            .cloned()
            .unwrap_or_else(rational::zero)
    }

    /// Every broken constraint, ordered by cell.
    pub fn validate(&self) -> Vec<LambdaViolation> {
        let f = &self.selection;
        let mut out = Vec::new();
        for a in f.algebra().nonempty_events() {
            for alpha in f.algebra().atoms() {
                let selected = f.get(a, alpha);
                if selected.is_bottom() {
                    out.push(LambdaViolation::SelectionNotNormal {
                        antecedent: a,
                        atom: alpha,
                    });
                    continue;
                }
                let Some(cell) = self.cell(a, alpha) else {
                    out.push(LambdaViolation::MissingCell {
                        antecedent: a,
                        atom: alpha,
                    });
                    continue;
                };
                for beta in selected.atoms() {
                    if !cell.get(&beta).is_some_and(Signed::is_positive) {
                        out.push(LambdaViolation::NonPositiveOnSelected {
                            antecedent: a,
                            atom: alpha,
                            target: beta,
                        });
                    }
                }
                for (&beta, w) in cell {
                    if !selected.contains(beta) && !w.is_zero() {
                        out.push(LambdaViolation::NonzeroOffSelection {
                            antecedent: a,
                            atom: alpha,
                            target: beta,
                        });
                    }
                }
                let sum: Rational = selected.atoms().map(|b| self.weight(a, alpha, b)).sum();
                if sum != rational::one() {
                    out.push(LambdaViolation::NotNormalized {
                        antecedent: a,
                        atom: alpha,
                        sum: rational::format(&sum),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Whether `lam` satisfies both constraints, with every violation found.
pub fn validate_lambda(lam: &DistributionFunction) -> (bool, Vec<LambdaViolation>) {
    let violations = lam.validate();
    (violations.is_empty(), violations)
}

pub fn build_lambda(
    kind: LambdaKind,
    p: &ProbabilityDist,
    f: &SelectionFunction,
) -> Result<DistributionFunction> {
    match kind {
        LambdaKind::Uniform => DistributionFunction::uniform(f),
        LambdaKind::Lewis => DistributionFunction::lewis(f),
        LambdaKind::Bayes => DistributionFunction::bayes(p, f),
    }
}

/// `P_a^λ(β) = Σ_{α : β ∈ f(a,α)} λ(a,α)(β) · P(α)` for every atom `β`.
pub fn updated_distribution(
    p: &ProbabilityDist,
    lam: &DistributionFunction,
    a: Event,
) -> Result<Vec<Rational>> {
    if a.is_bottom() {
        return Err(Error::EmptyAntecedent);
    }
    let f = lam.selection();
    if p.algebra().atom_count() != f.algebra().atom_count() {
        return Err(Error::AlgebraMismatch);
    }
    let out = f
        .algebra()
        .atoms()
        .map(|beta| {
            f.algebra()
                .atoms()
                .filter(|&alpha| f.get(a, alpha).contains(beta))
                .map(|alpha| lam.weight(a, alpha, beta) * &p.weights()[alpha.index()])
                .sum()
        })
        .collect();
    Ok(out)
}

/// `P_a^λ(b) = Σ_{β ∈ b} P_a^λ(β)`.
pub fn updated_prob(
    p: &ProbabilityDist,
    lam: &DistributionFunction,
    a: Event,
    b: Event,
) -> Result<Rational> {
    let dist = updated_distribution(p, lam, a)?;
    Ok(b.atoms().map(|beta| &dist[beta.index()]).sum())
}

fn require_normal_match(f: &SelectionFunction, lam: &DistributionFunction) -> Result<()> {
    if let Some((antecedent, atom)) = f.normality_violation() {
        return Err(Error::NotNormal {
            antecedent,
            atom: atom.index(),
        });
    }
    if lam.selection() != f {
        return Err(Error::InvalidLambda(
            "distribution function belongs to a different selection function".into(),
        ));
    }
    Ok(())
}

/// Outcome of comparing `P(a ▷_f b)` against `P_a^λ(b)` over all `a ≠ ⊥`, `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact7Report {
    /// `P(a ▷_f b) ≤ P_a^λ(b)` everywhere.
    pub holds: bool,
    /// Largest `P_a^λ(b) − P(a ▷_f b)`.
    pub worst_gap: Rational,
    /// Lexicographically least `(a, b)` attaining the largest gap.
    pub argmax: (Event, Event),
    /// Lexicographically least `(a, b)` where the inequality fails.
    pub violation: Option<(Event, Event)>,
}

/// Per-pair values `(a, b, P(a ▷_f b), P_a^λ(b))` for every `a ≠ ⊥` and `b`, in lexicographic order.
fn comparison_grid<'a>(
    p: &'a ProbabilityDist,
    f: &'a SelectionFunction,
    lam: &'a DistributionFunction,
) -> impl Iterator<Item = (Event, Event, Rational, Rational)> + 'a {
    f.algebra().nonempty_events().flat_map(move |a| {
        let dist = updated_distribution(p, lam, a).expect("non-empty antecedent");
        f.algebra().events().map(move |b| {
            let lhs = p.prob(conditional(f, a, b));
            let rhs: Rational = b.atoms().map(|beta| &dist[beta.index()]).sum();
            (a, b, lhs, rhs)
        })
    })
}

pub fn fact7_check(
    p: &ProbabilityDist,
    f: &SelectionFunction,
    lam: &DistributionFunction,
) -> Result<Fact7Report> {
    require_normal_match(f, lam)?;
    let mut worst: Option<(Rational, (Event, Event))> = None;
    let mut violation = None;
    for (a, b, lhs, rhs) in comparison_grid(p, f, lam) {
        let gap = rhs - lhs;
        if gap.is_negative() && violation.is_none() {
            violation = Some((a, b));
        }
        if worst.as_ref().is_none_or(|(g, _)| &gap > g) {
            worst = Some((gap, (a, b)));
        }
    }
    let (worst_gap, argmax) = worst.expect("algebra has a non-empty event");
    Ok(Fact7Report {
        holds: violation.is_none(),
        worst_gap,
        argmax,
        violation,
    })
}

/// Equality of conditional probability and λ-update, against uniqueness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Report {
    /// `P(a ▷_f b) = P_a^λ(b)` for every `a ≠ ⊥` and `b`.
    pub equality_forall: bool,
    /// Every cell at a non-empty antecedent is a singleton.
    pub uniqueness: bool,
    /// Lexicographically least `(a, b)` where equality fails.
    pub witness: Option<(Event, Event)>,
}

impl Theorem1Report {
    pub fn agree(&self) -> bool {
        self.equality_forall == self.uniqueness
    }
}

pub fn theorem1_check(
    p: &ProbabilityDist,
    f: &SelectionFunction,
    lam: &DistributionFunction,
) -> Result<Theorem1Report> {
    require_normal_match(f, lam)?;
    let witness = comparison_grid(p, f, lam)
        .find(|(_, _, lhs, rhs)| lhs != rhs)
        .map(|(a, b, _, _)| (a, b));
    Ok(Theorem1Report {
        equality_forall: witness.is_none(),
        uniqueness: f.is_unique_on_nonempty(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::Algebra;
    use crate::belief::prob_conditional;
    use crate::fixtures::{self, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT};
    use crate::rational::ratio;

    fn alg(n: usize) -> Arc<Algebra> {
        Arc::new(Algebra::new(n).unwrap())
    }

    fn example_cell_lambda(w: Rational) -> DistributionFunction {
        let f = fixtures::example_selection();
        let mut cells = DistributionFunction::uniform(&f).unwrap().cells().clone();
        let one_minus = rational::one() - &w;
        cells.insert(
            (EXAMPLE_ANTECEDENT, AtomIndex(0)),
            [(AtomIndex(1), w), (AtomIndex(2), one_minus)]
                .into_iter()
                .collect(),
        );
        DistributionFunction::new(f, cells).unwrap()
    }

    #[test]
    fn uniform_lambda_on_example_selection() {
        let lam = fixtures::example_lambda();
        assert_eq!(validate_lambda(&lam), (true, Vec::new()));
        let cell = lam.cell(EXAMPLE_ANTECEDENT, AtomIndex(0)).unwrap();
        let expected: LambdaCell = [(AtomIndex(1), ratio(1, 2)), (AtomIndex(2), ratio(1, 2))]
            .into_iter()
            .collect();
        assert_eq!(cell, &expected);
        assert!(lam.cell(Event::BOTTOM, AtomIndex(0)).is_none());
    }

    #[test]
    fn zero_weight_on_selected_world_is_rejected() {
        let f = fixtures::example_selection();
        let mut cells = fixtures::example_lambda().cells().clone();
        cells.insert(
            (EXAMPLE_ANTECEDENT, AtomIndex(0)),
            [(AtomIndex(1), ratio(0, 1)), (AtomIndex(2), ratio(1, 1))]
                .into_iter()
                .collect(),
        );
        let lam = DistributionFunction::from_cells(f, cells);
        assert_eq!(
            lam.validate(),
            vec![LambdaViolation::NonPositiveOnSelected {
                antecedent: EXAMPLE_ANTECEDENT,
                atom: AtomIndex(0),
                target: AtomIndex(1)
            }]
        );
    }

    #[test]
    fn unnormalized_cell_is_rejected() {
        let f = fixtures::example_selection();
        let mut cells = fixtures::example_lambda().cells().clone();
        cells.insert(
            (EXAMPLE_ANTECEDENT, AtomIndex(0)),
            [(AtomIndex(1), ratio(1, 2)), (AtomIndex(2), ratio(1, 4))]
                .into_iter()
                .collect(),
        );
        let err = DistributionFunction::new(f, cells).unwrap_err();
        assert!(
            matches!(err, Error::InvalidLambda(ref s) if s.contains("3/4")),
            "{err}"
        );
    }

    #[test]
    fn off_selection_weight_and_missing_cell() {
        let f = fixtures::example_selection();
        let mut cells = fixtures::example_lambda().cells().clone();
        cells.insert(
            (Event(0b001), AtomIndex(0)),
            [(AtomIndex(0), ratio(1, 1)), (AtomIndex(2), ratio(1, 3))]
                .into_iter()
                .collect(),
        );
        cells.remove(&(Event(0b111), AtomIndex(2)));
        let v = DistributionFunction::from_cells(f, cells).validate();
        assert!(v.contains(&LambdaViolation::NonzeroOffSelection {
            antecedent: Event(0b001),
            atom: AtomIndex(0),
            target: AtomIndex(2)
        }));
        assert!(v.contains(&LambdaViolation::MissingCell {
            antecedent: Event(0b111),
            atom: AtomIndex(2)
        }));
    }

    #[test]
    fn non_normal_selection_has_no_lambda() {
        let f = SelectionFunction::from_fn(alg(2), |_, _| Event::BOTTOM).unwrap();
        assert!(matches!(
            DistributionFunction::uniform(&f),
            Err(Error::LambdaPrecondition {
                kind: "uniform",
                ..
            })
        ));
        let v = DistributionFunction::from_cells(f, BTreeMap::new()).validate();
        assert!(matches!(v[0], LambdaViolation::SelectionNotNormal { .. }));
    }

    #[test]
    fn worked_example_update_values() {
        let (p, lam) = (fixtures::example_probability(), fixtures::example_lambda());
        // 1/2 · 1/2 + 1 · 1/4
        assert_eq!(
            updated_prob(&p, &lam, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            updated_prob(&p, &lam, EXAMPLE_ANTECEDENT, Event(0b111)).unwrap(),
            ratio(1, 1)
        );
        assert!(matches!(
            updated_prob(&p, &lam, Event::BOTTOM, EXAMPLE_CONSEQUENT),
            Err(Error::EmptyAntecedent)
        ));
    }

    #[test]
    fn custom_cell_weight() {
        let p = fixtures::example_probability();
        let lam = example_cell_lambda(ratio(1, 4));
        // 1/4 · 1/2 + 1/4
        assert_eq!(
            updated_prob(&p, &lam, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT).unwrap(),
            ratio(3, 8)
        );
    }

    #[test]
    fn unique_selection_update_is_conditional_probability() {
        let f = SelectionFunction::nearest_singleton(alg(3));
        let p = fixtures::example_probability();
        let lam = DistributionFunction::lewis(&f).unwrap();
        for a in f.algebra().nonempty_events() {
            for b in f.algebra().events() {
                let direct: Rational = f
                    .algebra()
                    .atoms()
                    .filter(|&al| f.get(a, al).leq(b))
                    .map(|al| p.weights()[al.index()].clone())
                    .sum();
                assert_eq!(updated_prob(&p, &lam, a, b).unwrap(), direct);
                assert_eq!(
                    updated_prob(&p, &lam, a, b).unwrap(),
                    prob_conditional(&p, &f, a, b)
                );
            }
        }
        // Uniform λ on a unique f is forced to the same indicator weights.
        assert_eq!(DistributionFunction::uniform(&f).unwrap(), lam);
    }

    #[test]
    fn bayes_recovers_conditionalization() {
        let a3 = alg(3);
        let f = SelectionFunction::total(a3.clone());
        let p = fixtures::example_probability();
        let lam = build_lambda(LambdaKind::Bayes, &p, &f).unwrap();
        assert!(lam.is_valid());
        assert_eq!(
            updated_prob(&p, &lam, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT).unwrap(),
            ratio(1, 2)
        );
        for a in a3.nonempty_events() {
            for b in a3.events() {
                assert_eq!(
                    updated_prob(&p, &lam, a, b).unwrap(),
                    p.prob(a.meet(b)) / p.prob(a)
                );
            }
        }
        assert!(matches!(
            build_lambda(LambdaKind::Bayes, &p, &fixtures::example_selection()),
            Err(Error::LambdaPrecondition { kind: "bayes", .. })
        ));
    }

    #[test]
    fn lewis_requires_uniqueness() {
        let f = fixtures::example_selection();
        assert!(matches!(
            build_lambda(LambdaKind::Lewis, &fixtures::example_probability(), &f),
            Err(Error::LambdaPrecondition { kind: "lewis", .. })
        ));
    }

    #[test]
    fn worked_example_fact7_gap() {
        let (p, f, lam) = (
            fixtures::example_probability(),
            fixtures::example_selection(),
            fixtures::example_lambda(),
        );
        let r = fact7_check(&p, &f, &lam).unwrap();
        assert!(r.holds);
        assert_eq!(r.violation, None);
        assert_eq!(r.worst_gap, ratio(1, 4));
        // The gap at the example's pair is 1/2 − 1/4.
        let gap = updated_prob(&p, &lam, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT).unwrap()
            - prob_conditional(&p, &f, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT);
        assert_eq!(gap, ratio(1, 4));
        assert_eq!(r.argmax, (EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT));
        for a in f.algebra().nonempty_events() {
            assert_eq!(
                updated_prob(&p, &lam, a, f.algebra().top()).unwrap(),
                prob_conditional(&p, &f, a, f.algebra().top())
            );
        }
    }

    #[test]
    fn stalnaker_lewis_zero_gap() {
        let f = SelectionFunction::nearest_singleton(alg(3));
        let p = fixtures::example_probability();
        let lam = DistributionFunction::lewis(&f).unwrap();
        let r = fact7_check(&p, &f, &lam).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_gap, ratio(0, 1));
        let t = theorem1_check(&p, &f, &lam).unwrap();
        assert_eq!(
            t,
            Theorem1Report {
                equality_forall: true,
                uniqueness: true,
                witness: None
            }
        );
    }

    #[test]
    fn worked_example_theorem1_witness() {
        let (p, f, lam) = (
            fixtures::example_probability(),
            fixtures::example_selection(),
            fixtures::example_lambda(),
        );
        let r = theorem1_check(&p, &f, &lam).unwrap();
        assert_eq!(
            r,
            Theorem1Report {
                equality_forall: false,
                uniqueness: false,
                witness: Some((EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT))
            }
        );
    }

    #[test]
    fn checks_require_normality() {
        let f = SelectionFunction::from_fn(alg(2), |a, _| a).unwrap();
        let lam = DistributionFunction::uniform(&f).unwrap();
        let g = f
            .with_cell(Event(0b01), AtomIndex(1), Event::BOTTOM)
            .unwrap();
        let p = ProbabilityDist::uniform(alg(2));
        assert!(matches!(
            fact7_check(&p, &g, &lam),
            Err(Error::NotNormal { .. })
        ));
        assert!(matches!(
            theorem1_check(&p, &g, &lam),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn random_lambda_is_valid_and_deterministic() {
        let f = fixtures::example_selection();
        let l1 = DistributionFunction::random(&f, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let l2 = DistributionFunction::random(&f, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(l1, l2);
        assert!(l1.is_valid());
    }

    #[test]
    fn mass_splitting_conserves_prior_mass() {
        let f = fixtures::example_selection();
        let p = fixtures::example_probability();
        let lam = DistributionFunction::random(&f, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        for a in f.algebra().nonempty_events() {
            let sent: Rational = f
                .algebra()
                .atoms()
                .map(|al| {
                    let share: Rational = f.get(a, al).atoms().map(|b| lam.weight(a, al, b)).sum();
                    share * &p.weights()[al.index()]
                })
                .sum();
            let received: Rational = updated_distribution(&p, &lam, a).unwrap().iter().sum();
            assert_eq!(sent, received);
            assert_eq!(received, rational::one());
        }
    }
}
