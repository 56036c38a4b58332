//! Selection-function conditionals over finite Boolean algebras, the belief
//! functions they induce, and λ-imaging probability updates, with exhaustive
//! and sampled checkers for the relationships between them.

pub mod algebra;
pub mod belief;
pub mod conditional;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod rational;
pub mod selection;
pub mod update;
pub mod verifier;

pub use algebra::{Algebra, AtomIndex, Event};
pub use error::{Error, Result};
pub use model::Model;
pub use rational::Rational;
pub use selection::{FrameProperty, SelectionFunction};
pub use verifier::{run_campaign, Campaign, Report, Target};
