use thiserror::Error;

use crate::algebra::Event;
use crate::selection::FrameProperty;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("atom count {0} out of range (must be between 1 and {max})", max = crate::algebra::MAX_ATOMS)]
    AtomCount(usize),

    #[error("atom names must be distinct and non-empty: {0:?}")]
    AtomNames(String),

    #[error("event bits {bits:#b} exceed an algebra of {atoms} atoms")]
    InvalidEvent { bits: u32, atoms: usize },

    #[error("atom index {index} out of range for {atoms} atoms")]
    InvalidAtom { index: usize, atoms: usize },

    #[error("selection table has {got} cells, expected {expected}")]
    TableSize { got: usize, expected: usize },

    #[error("enumeration space of {bound} selection functions exceeds the budget of {budget}")]
    BudgetExceeded { bound: String, budget: u128 },

    #[error("constraints {0:?} cannot be satisfied together")]
    Unsatisfiable(Vec<FrameProperty>),

    #[error("no selection function satisfying {constraints:?} found after {retries} retries")]
    RetryCapExhausted {
        constraints: Vec<FrameProperty>,
        retries: usize,
    },

    #[error("probability weight for atom {atom} must be positive, got {value}")]
    NonPositiveProbability { atom: usize, value: String },

    #[error("probability not normalized (sum = {0})")]
    NotNormalized(String),

    #[error("probability denominators too large for exact scaling")]
    DenominatorOverflow,

    #[error("selection function is not normal: f({antecedent:?}, atom {atom}) is empty")]
    NotNormal { antecedent: Event, atom: usize },

    #[error("antecedent must be non-empty")]
    EmptyAntecedent,

    #[error("{kind} distribution function requires {requirement}")]
    LambdaPrecondition {
        kind: &'static str,
        requirement: String,
    },

    #[error("distribution function invalid: {0}")]
    InvalidLambda(String),

    #[error("selection function and probability belong to different algebras")]
    AlgebraMismatch,

    #[error("invalid campaign: {0}")]
    InvalidCampaign(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
