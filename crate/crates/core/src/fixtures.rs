//! The three-atom worked example: a normal selection function that is not
//! unique at `{α2, α3}`, with `P = (1/2, 1/4, 1/4)` and uniform `λ`.

use std::sync::Arc;

use crate::algebra::{Algebra, AtomIndex, Event};
use crate::belief::ProbabilityDist;
use crate::rational::ratio;
use crate::selection::SelectionFunction;
use crate::update::DistributionFunction;

/// Antecedent `{α2, α3}`.
pub const EXAMPLE_ANTECEDENT: Event = Event(0b110);
/// Consequent `{α2}`.
pub const EXAMPLE_CONSEQUENT: Event = Event(0b010);

pub fn example_algebra() -> Arc<Algebra> {
    Arc::new(Algebra::new(3).expect("three atoms"))
}

/// The example's selection function.
///
/// Only the three cells at `{α2, α3}` are prescribed:
/// `f({α2,α3}, α1) = {α2,α3}`, `f({α2,α3}, α2) = {α2}`, `f({α2,α3}, α3) = {α3}`.
/// Every other cell is filled with the nearest singleton (`{α}` when `α ∈ a`,
/// otherwise the least atom of `a`, and `⊥` at `⊥`), so uniqueness fails only
/// at the prescribed cell.
pub fn example_selection() -> SelectionFunction {
    SelectionFunction::nearest_singleton(example_algebra())
        .with_cell(EXAMPLE_ANTECEDENT, AtomIndex(0), EXAMPLE_ANTECEDENT)
        .expect("valid cell")
}

/// `P = (1/2, 1/4, 1/4)`.
pub fn example_probability() -> ProbabilityDist {
    ProbabilityDist::new(
        example_algebra(),
        vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)],
    )
    .expect("valid distribution")
}

/// Uniform `λ` over the example's selection function.
pub fn example_lambda() -> DistributionFunction {
    DistributionFunction::uniform(&example_selection()).expect("example selection is normal")
}
