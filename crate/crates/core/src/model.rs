//! JSON model files: an algebra, a selection function, a probability and an
//! optional distribution function.
//!
//! Events are written as lists of atom names (`[]` for `⊥`), rationals as
//! `"p/q"` strings. A model file looks like:
//!
//! ```json
//! {
//!   "schema_version": "imago-model/1",
//!   "atoms": ["w1", "w2"],
//!   "selection": [
//!     { "antecedent": [], "cells": { "w1": [], "w2": [] } },
//!     { "antecedent": ["w1"], "cells": { "w1": ["w1"], "w2": ["w1"] } }
//!   ],
//!   "probability": { "w1": "1/3", "w2": "2/3" },
//!   "lambda": [
//!     { "antecedent": ["w1"], "atom": "w2", "weights": { "w1": "1/1" } }
//!   ]
//! }
//! ```
//!
//! (The example above is abridged: `selection` must list every antecedent.)

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AtomIndex, Event};
use crate::belief::ProbabilityDist;
use crate::rational::{self, Rational};
use crate::selection::SelectionFunction;
use crate::update::{DistributionFunction, LambdaCell};

pub const MODEL_SCHEMA_VERSION: &str = "imago-model/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl ToString) -> ModelError {
    ModelError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionRow {
    pub antecedent: Vec<String>,
    /// Atom name to selected event.
    pub cells: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaRow {
    pub antecedent: Vec<String>,
    pub atom: String,
    /// Target atom name to `"p/q"` weight.
    pub weights: BTreeMap<String, String>,
}

/// The on-disk form of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: String,
    pub atoms: Vec<String>,
    pub selection: Vec<SelectionRow>,
    pub probability: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<LambdaRow>>,
}

/// A validated model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub algebra: Arc<Algebra>,
    pub selection: SelectionFunction,
    pub probability: ProbabilityDist,
    pub lambda: Option<DistributionFunction>,
}

impl Model {
    pub fn new(
        selection: SelectionFunction,
        probability: ProbabilityDist,
        lambda: Option<DistributionFunction>,
    ) -> Self {
        Self {
            algebra: selection.algebra_arc().clone(),
            selection,
            probability,
            lambda,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }

    pub fn from_file(file: &ModelFile) -> Result<Self, ModelError> {
        if file.schema_version != MODEL_SCHEMA_VERSION {
            return Err(field_err(
                "schema_version",
                format!(
                    "unsupported `{}` (expected `{MODEL_SCHEMA_VERSION}`)",
                    file.schema_version
                ),
            ));
        }
        let algebra =
            Arc::new(Algebra::with_names(file.atoms.clone()).map_err(|e| field_err("atoms", e))?);
        let atom = |field: &str, name: &str| {
            algebra
                .atom_by_name(name)
                .ok_or_else(|| field_err(field, format!("undeclared atom `{name}`")))
        };
        let event = |field: &str, names: &[String]| -> Result<Event, ModelError> {
            let mut e = Event::BOTTOM;
            for name in names {
                let a = atom(field, name)?;
                if e.contains(a) {
                    return Err(field_err(field, format!("atom `{name}` listed twice")));
                }
                e = e.join(a.event());
            }
            Ok(e)
        };

        let n = algebra.atom_count();
        let mut table: Vec<Option<Event>> = vec![None; algebra.size() * n];
        let mut seen = vec![false; algebra.size()];
        for (i, row) in file.selection.iter().enumerate() {
            let field = format!("selection[{i}]");
            let a = event(&format!("{field}.antecedent"), &row.antecedent)?;
            if std::mem::replace(&mut seen[a.bits() as usize], true) {
                return Err(field_err(
                    &field,
                    format!("antecedent {} listed twice", algebra.display(a)),
                ));
            }
            for (name, value) in &row.cells {
                let cell_field = format!("{field}.cells.{name}");
                let alpha = atom(&cell_field, name)?;
                table[a.bits() as usize * n + alpha.index()] = Some(event(&cell_field, value)?);
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, cell)| {
                cell.ok_or_else(|| {
                    let a = Event((i / n) as u32);
                    field_err(
                        "selection",
                        format!(
                            "table not total: missing f({}, {})",
                            algebra.display(a),
                            algebra.atom_name(AtomIndex(i % n))
                        ),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let selection = SelectionFunction::new(algebra.clone(), table)
            .map_err(|e| field_err("selection", e))?;

        let mut weights = vec![None; n];
        for (name, value) in &file.probability {
            let field = format!("probability.{name}");
            let a = atom(&field, name)?;
            weights[a.index()] = Some(rational::parse(value).map_err(|e| field_err(&field, e))?);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    field_err(
                        "probability",
                        format!("missing atom `{}`", algebra.atom_name(AtomIndex(i))),
                    )
                })
            })
            .collect::<Result<Vec<Rational>, _>>()?;
        let probability = ProbabilityDist::new(algebra.clone(), weights)
            .map_err(|e| field_err("probability", e))?;

        let lambda = match &file.lambda {
            None => None,
            Some(rows) => {
                let mut cells: BTreeMap<(Event, AtomIndex), LambdaCell> = BTreeMap::new();
                for (i, row) in rows.iter().enumerate() {
                    let field = format!("lambda[{i}]");
                    let a = event(&format!("{field}.antecedent"), &row.antecedent)?;
                    if a.is_bottom() {
                        return Err(field_err(
                            &field,
                            "cells at the empty antecedent are not allowed",
                        ));
                    }
                    let alpha = atom(&format!("{field}.atom"), &row.atom)?;
                    let mut cell = LambdaCell::new();
                    for (name, w) in &row.weights {
                        let wf = format!("{field}.weights.{name}");
                        cell.insert(
                            atom(&wf, name)?,
                            rational::parse(w).map_err(|e| field_err(&wf, e))?,
                        );
                    }
                    if cells.insert((a, alpha), cell).is_some() {
                        return Err(field_err(&field, "cell listed twice"));
                    }
                }
                let lam = DistributionFunction::from_cells(selection.clone(), cells);
                if let Some(v) = lam.validate().first() {
                    return Err(field_err("lambda", v));
                }
                Some(lam)
            }
        };

        Ok(Self {
            algebra,
            selection,
            probability,
            lambda,
        })
    }

    /// Event as a list of atom names in declaration order.
    pub fn event_spec(&self, e: Event) -> Vec<String> {
        e.atoms()
            .map(|a| self.algebra.atom_name(a).to_string())
            .collect()
    }

    pub fn to_file(&self) -> ModelFile {
        let alg = &self.algebra;
        let name = |a: AtomIndex| alg.atom_name(a).to_string();
        let selection = alg
            .events()
            .map(|a| SelectionRow {
                antecedent: self.event_spec(a),
                cells: alg
                    .atoms()
                    .map(|alpha| (name(alpha), self.event_spec(self.selection.get(a, alpha))))
                    .collect(),
            })
            .collect();
        let probability = alg
            .atoms()
            .map(|a| {
                (
                    name(a),
                    rational::format(&self.probability.weights()[a.index()]),
                )
            })
            .collect();
        let lambda = self.lambda.as_ref().map(|lam| {
            lam.cells()
                .iter()
                .map(|((a, alpha), cell)| LambdaRow {
                    antecedent: self.event_spec(*a),
                    atom: name(*alpha),
                    weights: cell
                        .iter()
                        .map(|(b, w)| (name(*b), rational::format(w)))
                        .collect(),
                })
                .collect()
        });
        ModelFile {
            schema_version: MODEL_SCHEMA_VERSION.to_string(),
            atoms: alg.atom_names().to_vec(),
            selection,
            probability,
            lambda,
        }
    }
}
