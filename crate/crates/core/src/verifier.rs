//! Verification campaigns over spaces of selection functions, probabilities
//! and distribution functions.
//!
//! A campaign evaluates a set of [`Target`]s on every instance it visits,
//! either enumerating all selection functions admitted by a constraint set or
//! drawing seeded samples. Failing instances are recorded as self-contained
//! [`Witness`]es that can be replayed on their own.

use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AtomIndex, Event};
use crate::belief::{prob_conditional, proposition1_report, BeliefTable, ProbabilityDist};
use crate::conditional::{
    check_fact1_row_with, conditional, necessity, possibility, ConditionalTable,
};
use crate::error::{Error, Result};
use crate::model::{Model, ModelError, ModelFile, MODEL_SCHEMA_VERSION};
use crate::rational::{self, Rational};
use crate::selection::{
    sample_with_rng, Budget, FrameProperty, SelectionFunction, SelectionSpace, DEFAULT_RETRY_CAP,
};
use crate::update::{fact7_check, theorem1_check, updated_distribution, DistributionFunction};

pub const REPORT_SCHEMA_VERSION: &str = "imago-report/1";

/// Number of instances handed to one worker at a time.
const CHUNK: u128 = 1024;

/// A checkable claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    /// A frame property agrees with its conditional identity.
    Fact1(FrameProperty),
    /// `a ▷_f b = □_a^f b`, and their probabilities agree.
    Fact2,
    /// `□_a^f = ◇_a^f` exactly when every cell at `a` is a singleton.
    Fact3,
    /// `P(a ▷_f b) = P(□_a^f b) = Bel_a(b)`, with `Bel_a` superadditive and monotone.
    Fact5,
    /// The four conditions for `P(a ▷_f ·)` to be a probability agree.
    Prop1,
    /// `P_a^λ` sums to one.
    Fact6,
    /// `P(a ▷_f b) ≤ P_a^λ(b)`.
    Fact7,
    /// Equality of `P(a ▷_f ·)` and `P_a^λ` holds exactly when `f` is unique.
    Thm1,
    /// `P(a ▷_f b) = P_a^λ(b)` for every `a ≠ ⊥`, `b` (fails on non-unique `f`).
    Thm1Equality,
    /// Centering holds exactly when centering-1 and centering-2 do.
    CenteringDecomposition,
    /// The conditionalization `λ` over `f(a, α) = a` reproduces `P(a ∧ b) / P(a)`.
    BayesRecovery,
}

impl Target {
    /// Every target expected to hold universally.
    pub fn all() -> Vec<Target> {
        let mut out: Vec<Target> = FrameProperty::ALL.into_iter().map(Target::Fact1).collect();
        out.extend([
            Target::Fact2,
            Target::Fact3,
            Target::Fact5,
            Target::Prop1,
            Target::Fact6,
            Target::Fact7,
            Target::Thm1,
            Target::CenteringDecomposition,
            Target::BayesRecovery,
        ]);
        out
    }

    /// Whether the target is evaluated against a distribution function.
    pub fn needs_lambda(self) -> bool {
        matches!(
            self,
            Target::Fact6 | Target::Fact7 | Target::Thm1 | Target::Thm1Equality
        )
    }

    /// Comma-separated list; `all` and `fact1` expand to several targets.
    pub fn parse_list(text: &str) -> Result<Vec<Target>, String> {
        let mut out = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.to_ascii_lowercase().as_str() {
                "all" => out.extend(Target::all()),
                "fact1" => out.extend(FrameProperty::ALL.map(Target::Fact1)),
                _ => out.push(item.parse()?),
            }
        }
        if out.is_empty() {
            return Err("no targets given".into());
        }
        let mut seen = BTreeSet::new();
        out.retain(|t| seen.insert(*t));
        Ok(out)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Fact1(row) => write!(f, "fact1:{row}"),
            Target::Fact2 => f.write_str("fact2"),
            Target::Fact3 => f.write_str("fact3"),
            Target::Fact5 => f.write_str("fact5"),
            Target::Prop1 => f.write_str("prop1"),
            Target::Fact6 => f.write_str("fact6"),
            Target::Fact7 => f.write_str("fact7"),
            Target::Thm1 => f.write_str("thm1"),
            Target::Thm1Equality => f.write_str("thm1-equality"),
            Target::CenteringDecomposition => f.write_str("centering-decomposition"),
            Target::BayesRecovery => f.write_str("bayes-recovery"),
        }
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some(row) = key.strip_prefix("fact1:") {
            return Ok(Target::Fact1(row.parse()?));
        }
        let t = match key.as_str() {
            "fact2" | "fact4" => Target::Fact2,
            "fact3" => Target::Fact3,
            "fact5" => Target::Fact5,
            "prop1" => Target::Prop1,
            "fact6" => Target::Fact6,
            "fact7" => Target::Fact7,
            "thm1" => Target::Thm1,
            "thm1-equality" => Target::Thm1Equality,
            "centering-decomposition" => Target::CenteringDecomposition,
            "bayes-recovery" => Target::BayesRecovery,
            _ => return Err(format!("unknown target `{s}`")),
        };
        Ok(t)
    }
}

/// One `(f, P, λ)` triple.
#[derive(Debug, Clone)]
pub struct Instance {
    pub selection: SelectionFunction,
    pub probability: ProbabilityDist,
    pub lambda: Option<DistributionFunction>,
}

impl Instance {
    pub fn from_model(model: &Model) -> Self {
        Self {
            selection: model.selection.clone(),
            probability: model.probability.clone(),
            lambda: model.lambda.clone(),
        }
    }

    pub fn to_model(&self) -> Model {
        Model::new(
            self.selection.clone(),
            self.probability.clone(),
            self.lambda.clone(),
        )
    }
}

/// Where and why a check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub antecedent: Option<Event>,
    pub consequent: Option<Event>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Skipped(&'static str),
    Failed(Failure),
}

fn fail(
    antecedent: Option<Event>,
    consequent: Option<Event>,
    detail: impl Into<String>,
) -> Outcome {
    Outcome::Failed(Failure {
        antecedent,
        consequent,
        detail: detail.into(),
    })
}

/// Evaluates targets on one instance, sharing intermediate tables.
pub struct Checker<'a> {
    inst: &'a Instance,
    table: OnceCell<ConditionalTable>,
}

impl<'a> Checker<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Self {
            inst,
            table: OnceCell::new(),
        }
    }

    fn table(&self) -> &ConditionalTable {
        self.table
            .get_or_init(|| ConditionalTable::new(&self.inst.selection))
    }

    pub fn check(&self, target: Target) -> Outcome {
        let f = &self.inst.selection;
        let p = &self.inst.probability;
        let alg = f.algebra();
        match target {
            Target::Fact1(row) => {
                let c = check_fact1_row_with(alg, self.table(), f, row);
                if c.agrees() {
                    Outcome::Passed
                } else {
                    fail(
                        None,
                        None,
                        format!("identity side {} but {row} {}", c.lhs, c.rhs),
                    )
                }
            }
            Target::Fact2 => {
                for a in alg.events() {
                    for b in alg.events() {
                        let pointwise = alg
                            .atoms()
                            .filter(|&al| f.get(a, al).leq(b))
                            .fold(Event::BOTTOM, |acc, al| acc.join(al.event()));
                        let cond = conditional(f, a, b);
                        if cond != pointwise
                            || necessity(f, a, b) != pointwise
                            || self.table().get(a, b) != pointwise
                        {
                            return fail(Some(a), Some(b), "conditional and necessity disagree");
                        }
                        // Exact: both sides are numerators over P's common denominator.
                        if p.scaled(cond) != p.scaled(necessity(f, a, b)) {
                            return fail(Some(a), Some(b), "P(a ▷ b) ≠ P(□_a b)");
                        }
                    }
                }
                Outcome::Passed
            }
            Target::Fact3 => {
                for a in alg.events() {
                    let collapse = alg
                        .events()
                        .all(|x| necessity(f, a, x) == possibility(f, a, x));
                    let singletons = f.row(a).iter().all(|e| e.cardinality() == 1);
                    if collapse != singletons {
                        return fail(
                            Some(a),
                            None,
                            format!("□=◇ is {collapse} but singleton cells is {singletons}"),
                        );
                    }
                }
                Outcome::Passed
            }
            Target::Fact5 => {
                let fmt =
                    |v: u128| rational::format(&Rational::new(v.into(), p.denominator().into()));
                for a in alg.events() {
                    let table = BeliefTable::new(p, f, a);
                    for b in alg.events() {
                        let pc = p.scaled(conditional(f, a, b));
                        let pn = p.scaled(necessity(f, a, b));
                        let bel = table.scaled(b);
                        if pc != pn || pn != bel {
                            return fail(
                                Some(a),
                                Some(b),
                                format!(
                                    "P(a ▷ b) = {}, P(□_a b) = {}, Bel_a(b) = {}",
                                    fmt(pc),
                                    fmt(pn),
                                    fmt(bel)
                                ),
                            );
                        }
                    }
                    if let Some((x, y)) = table.superadditivity_violation() {
                        return fail(
                            Some(a),
                            Some(x),
                            format!("Bel_a not superadditive at ({x}, {y})"),
                        );
                    }
                    if let Some((x, y)) = table.monotonicity_violation() {
                        return fail(
                            Some(a),
                            Some(x),
                            format!("Bel_a not monotone at ({x}, {y})"),
                        );
                    }
                }
                Outcome::Passed
            }
            Target::Prop1 => {
                for a in alg.events() {
                    let r = proposition1_report(p, f, a);
                    if !r.agree() {
                        return fail(
                            Some(a),
                            None,
                            format!(
                                "additive={} unique={} functional={} box_eq_diamond={}",
                                r.additive, r.unique, r.functional, r.box_eq_diamond
                            ),
                        );
                    }
                }
                Outcome::Passed
            }
            Target::Fact6 | Target::Fact7 | Target::Thm1 | Target::Thm1Equality => {
                self.check_update(target)
            }
            Target::CenteringDecomposition => {
                let whole = f.check_property(FrameProperty::Centering);
                let parts = f.check_property(FrameProperty::Centering1)
                    && f.check_property(FrameProperty::Centering2);
                if whole == parts {
                    Outcome::Passed
                } else {
                    fail(
                        None,
                        None,
                        format!("centering {whole} but centering-1 ∧ centering-2 {parts}"),
                    )
                }
            }
            Target::BayesRecovery => {
                let total = SelectionFunction::total(f.algebra_arc().clone());
                let lam = match DistributionFunction::bayes(p, &total) {
                    Ok(lam) => lam,
                    Err(e) => return fail(None, None, e.to_string()),
                };
                for a in alg.nonempty_events() {
                    let dist = updated_distribution(p, &lam, a).expect("non-empty antecedent");
                    for b in alg.events() {
                        let updated: Rational = b.atoms().map(|beta| &dist[beta.index()]).sum();
                        let bayes = p.prob(a.meet(b)) / p.prob(a);
                        if updated != bayes {
                            return fail(
                                Some(a),
                                Some(b),
                                format!(
                                    "P_a^λ(b) = {} but P(a∧b)/P(a) = {}",
                                    rational::format(&updated),
                                    rational::format(&bayes)
                                ),
                            );
                        }
                    }
                }
                Outcome::Passed
            }
        }
    }

    fn check_update(&self, target: Target) -> Outcome {
        let f = &self.inst.selection;
        let p = &self.inst.probability;
        if !f.is_normal() {
            return Outcome::Skipped("selection function not normal");
        }
        let Some(lam) = &self.inst.lambda else {
            return Outcome::Skipped("no distribution function");
        };
        match target {
            Target::Fact6 => {
                for a in f.algebra().nonempty_events() {
                    let total: Rational = updated_distribution(p, lam, a)
                        .expect("non-empty antecedent")
                        .into_iter()
                        .sum();
                    if total != rational::one() {
                        return fail(
                            Some(a),
                            None,
                            format!("P_a^λ sums to {}", rational::format(&total)),
                        );
                    }
                }
                Outcome::Passed
            }
            Target::Fact7 => match fact7_check(p, f, lam) {
                Err(e) => fail(None, None, e.to_string()),
                Ok(r) => match r.violation {
                    None => Outcome::Passed,
                    Some((a, b)) => fail(Some(a), Some(b), "P(a ▷ b) > P_a^λ(b)"),
                },
            },
            Target::Thm1 | Target::Thm1Equality => match theorem1_check(p, f, lam) {
                Err(e) => fail(None, None, e.to_string()),
                Ok(r) if target == Target::Thm1 && r.agree() => Outcome::Passed,
                Ok(r) if target == Target::Thm1Equality && r.equality_forall => Outcome::Passed,
                Ok(r) => {
                    let (a, b) = match r.witness {
                        Some((a, b)) => (Some(a), Some(b)),
                        None => (
                            f.algebra().nonempty_events().find(|&a| !f.is_unique_at(a)),
                            None,
                        ),
                    };
                    fail(
                        a,
                        b,
                        format!(
                            "equality_forall={} uniqueness={}",
                            r.equality_forall, r.uniqueness
                        ),
                    )
                }
            },
            _ => unreachable!("not an update target"),
        }
    }
}

/// Campaign enumeration strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every selection function admitted by the constraints, with one fixed `P`.
    Exhaustive,
    /// Seeded draws of `(f, P, λ)`.
    Sampled,
    /// A single model read from a file.
    Single,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            _ => Err(format!(
                "unknown mode `{s}` (expected exhaustive or sampled)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub algebra: Arc<Algebra>,
    pub mode: Mode,
    pub targets: Vec<Target>,
    /// Number of samples (sampled mode only).
    pub trials: u64,
    pub seed: u64,
    /// Every visited `f` satisfies all of these.
    pub constraints: BTreeSet<FrameProperty>,
    /// Every visited `f` violates all of these.
    pub exclude: BTreeSet<FrameProperty>,
    pub budget: Budget,
    /// Witnesses kept per target.
    pub max_witnesses: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Campaign {
    pub fn exhaustive(algebra: Arc<Algebra>, targets: Vec<Target>) -> Self {
        Self {
            algebra,
            mode: Mode::Exhaustive,
            targets,
            trials: 0,
            seed: 0,
            constraints: BTreeSet::new(),
            exclude: BTreeSet::new(),
            budget: Budget::DEFAULT,
            max_witnesses: 5,
            threads: None,
        }
    }

    pub fn sampled(algebra: Arc<Algebra>, targets: Vec<Target>, trials: u64, seed: u64) -> Self {
        Self {
            mode: Mode::Sampled,
            trials,
            seed,
            ..Self::exhaustive(algebra, targets)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_constraints(
        mut self,
        constraints: impl IntoIterator<Item = FrameProperty>,
    ) -> Self {
        self.constraints = constraints.into_iter().collect();
        self
    }

    pub fn with_exclude(mut self, exclude: impl IntoIterator<Item = FrameProperty>) -> Self {
        self.exclude = exclude.into_iter().collect();
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    fn admits(&self, f: &SelectionFunction) -> bool {
        self.exclude.iter().all(|&p| !f.check_property(p))
    }
}

/// A failing instance, serialized as a self-contained model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub target: String,
    /// Enumeration index or trial number that produced the instance.
    pub instance: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antecedent: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consequent: Option<Vec<String>>,
    pub detail: String,
    pub model: ModelFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetReport {
    pub target: String,
    pub checked: u64,
    pub passed: u64,
    /// Instances on which the target does not apply (e.g. non-normal `f` for λ targets).
    pub skipped: u64,
    pub witnesses: Vec<Witness>,
}

impl TargetReport {
    fn new(target: Target) -> Self {
        Self {
            target: target.to_string(),
            checked: 0,
            passed: 0,
            skipped: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }

    fn merge(&mut self, other: TargetReport, max_witnesses: usize) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by_key(|w| w.instance);
        self.witnesses.truncate(max_witnesses);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub model_schema_version: String,
    pub atoms: usize,
    pub mode: Mode,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub constraints: Vec<FrameProperty>,
    pub exclude: Vec<FrameProperty>,
    pub targets: Vec<TargetReport>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.targets.iter().all(TargetReport::all_passed)
    }

    pub fn target(&self, target: Target) -> Option<&TargetReport> {
        let name = target.to_string();
        self.targets.iter().find(|t| t.target == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tallies for one target set over a range of instances.
struct Tally {
    targets: Vec<Target>,
    reports: Vec<TargetReport>,
    max_witnesses: usize,
}

impl Tally {
    fn new(targets: &[Target], max_witnesses: usize) -> Self {
        Self {
            targets: targets.to_vec(),
            reports: targets.iter().map(|&t| TargetReport::new(t)).collect(),
            max_witnesses,
        }
    }

    fn record(&mut self, slot: usize, index: u128, inst: &Instance, outcome: Outcome) {
        let target = self.targets[slot];
        let report = &mut self.reports[slot];
        match outcome {
            Outcome::Skipped(_) => report.skipped += 1,
            Outcome::Passed => {
                report.checked += 1;
                report.passed += 1;
            }
            Outcome::Failed(failure) => {
                report.checked += 1;
                if report.witnesses.len() < self.max_witnesses {
                    report
                        .witnesses
                        .push(make_witness(target, index, inst, &failure));
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (mine, theirs) in self.reports.iter_mut().zip(other.reports) {
            mine.merge(theirs, self.max_witnesses);
        }
        self
    }
}

fn make_witness(target: Target, index: u128, inst: &Instance, failure: &Failure) -> Witness {
    let model = if target == Target::BayesRecovery {
        let total = SelectionFunction::total(inst.selection.algebra_arc().clone());
        let lam = DistributionFunction::bayes(&inst.probability, &total).ok();
        Model::new(total, inst.probability.clone(), lam)
    } else {
        inst.to_model()
    };
    Witness {
        target: target.to_string(),
        instance: index,
        antecedent: failure.antecedent.map(|e| model.event_spec(e)),
        consequent: failure.consequent.map(|e| model.event_spec(e)),
        detail: failure.detail.clone(),
        model: model.to_file(),
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn run_campaign(c: &Campaign) -> Result<Report> {
    match c.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidCampaign(e.to_string()))?;
            pool.install(|| run_campaign_inner(c))
        }
        None => run_campaign_inner(c),
    }
}

fn run_campaign_inner(c: &Campaign) -> Result<Report> {
    let start = Instant::now();
    if c.targets.is_empty() {
        return Err(Error::InvalidCampaign("no targets".into()));
    }
    if c.max_witnesses == 0 {
        return Err(Error::InvalidCampaign(
            "max_witnesses must be at least 1".into(),
        ));
    }
    let tally = match c.mode {
        Mode::Exhaustive => run_exhaustive(c)?,
        Mode::Sampled => {
            if c.trials == 0 {
                return Err(Error::InvalidCampaign(
                    "sampled mode needs at least one trial".into(),
                ));
            }
            run_sampled(c)?
        }
        Mode::Single => {
            return Err(Error::InvalidCampaign(
                "single-model mode is driven by check_model".into(),
            ))
        }
    };
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION.into(),
        model_schema_version: MODEL_SCHEMA_VERSION.into(),
        atoms: c.algebra.atom_count(),
        mode: c.mode,
        seed: c.seed,
        trials: (c.mode == Mode::Sampled).then_some(c.trials),
        constraints: c.constraints.iter().copied().collect(),
        exclude: c.exclude.iter().copied().collect(),
        targets: tally.reports,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs one `f` through every target. λ targets see a uniform and a seeded random `λ`.
fn check_selection(
    c: &Campaign,
    tally: &mut Tally,
    index: u128,
    base: Instance,
    lambdas: Vec<DistributionFunction>,
) {
    let checker = Checker::new(&base);
    for (slot, &target) in c.targets.iter().enumerate() {
        if target.needs_lambda() || target == Target::BayesRecovery {
            continue;
        }
        let outcome = checker.check(target);
        tally.record(slot, index, &base, outcome);
    }
    if !c.targets.iter().any(|t| t.needs_lambda()) {
        return;
    }
    let variants: Vec<Instance> = if lambdas.is_empty() {
        vec![base]
    } else {
        lambdas
            .into_iter()
            .map(|lam| Instance {
                lambda: Some(lam),
                ..base.clone()
            })
            .collect()
    };
    for inst in &variants {
        let checker = Checker::new(inst);
        for (slot, &target) in c.targets.iter().enumerate() {
            if target.needs_lambda() {
                tally.record(slot, index, inst, checker.check(target));
            }
        }
    }
}

fn run_exhaustive(c: &Campaign) -> Result<Tally> {
    let space = SelectionSpace::new(c.algebra.clone(), &c.constraints, c.budget)?;
    let probability = ProbabilityDist::random(c.algebra.clone(), &mut trial_rng(c.seed, u64::MAX));
    let wants_lambda = c.targets.iter().any(|t| t.needs_lambda());
    let total = space.candidate_count();
    let chunks: Vec<u128> = (0..total.div_ceil(CHUNK)).collect();
    let tally = chunks
        .into_par_iter()
        .map(|chunk| {
            let mut tally = Tally::new(&c.targets, c.max_witnesses);
            for (index, f) in space.iter_range(chunk * CHUNK..(chunk + 1) * CHUNK) {
                if !c.admits(&f) {
                    continue;
                }
                let lambdas = if wants_lambda && f.is_normal() {
                    let mut rng = trial_rng(c.seed, index as u64);
                    vec![
                        DistributionFunction::uniform(&f).expect("normal"),
                        DistributionFunction::random(&f, &mut rng).expect("normal"),
                    ]
                } else {
                    Vec::new()
                };
                let base = Instance {
                    selection: f,
                    probability: probability.clone(),
                    lambda: None,
                };
                check_selection(c, &mut tally, index, base, lambdas);
            }
            tally
        })
        .reduce(|| Tally::new(&c.targets, c.max_witnesses), Tally::merge);

    let mut tally = tally;
    // Conditionalization does not depend on f: one check against the fixed P.
    if let Some(slot) = c.targets.iter().position(|&t| t == Target::BayesRecovery) {
        let inst = Instance {
            selection: SelectionFunction::total(c.algebra.clone()),
            probability,
            lambda: None,
        };
        let outcome = Checker::new(&inst).check(Target::BayesRecovery);
        tally.record(slot, 0, &inst, outcome);
    }
    Ok(tally)
}

/// Draws one `f` satisfying the campaign's constraints and exclusions.
fn sample_admitted<R: Rng>(c: &Campaign, rng: &mut R) -> Result<SelectionFunction> {
    for _ in 0..DEFAULT_RETRY_CAP {
        let f = sample_with_rng(c.algebra.clone(), &c.constraints, rng, DEFAULT_RETRY_CAP)?;
        if c.admits(&f) {
            return Ok(f);
        }
    }
    Err(Error::RetryCapExhausted {
        constraints: c.constraints.iter().chain(&c.exclude).copied().collect(),
        retries: DEFAULT_RETRY_CAP,
    })
}

fn run_sampled(c: &Campaign) -> Result<Tally> {
    let wants_lambda = c.targets.iter().any(|t| t.needs_lambda());
    let chunks: Vec<u64> = (0..c.trials.div_ceil(CHUNK as u64)).collect();
    chunks
        .into_par_iter()
        .map(|chunk| -> Result<Tally> {
            let mut tally = Tally::new(&c.targets, c.max_witnesses);
            let end = ((chunk + 1) * CHUNK as u64).min(c.trials);
            for trial in chunk * CHUNK as u64..end {
                let mut rng = trial_rng(c.seed, trial);
                let f = sample_admitted(c, &mut rng)?;
                let probability = ProbabilityDist::random(c.algebra.clone(), &mut rng);
                let lambdas = if wants_lambda && f.is_normal() {
                    vec![DistributionFunction::random(&f, &mut rng).expect("normal")]
                } else {
                    Vec::new()
                };
                let base = Instance {
                    selection: f,
                    probability,
                    lambda: None,
                };
                if let Some(slot) = c.targets.iter().position(|&t| t == Target::BayesRecovery) {
                    let outcome = Checker::new(&base).check(Target::BayesRecovery);
                    tally.record(slot, u128::from(trial), &base, outcome);
                }
                check_selection(c, &mut tally, u128::from(trial), base, lambdas);
            }
            Ok(tally)
        })
        .try_reduce(
            || Tally::new(&c.targets, c.max_witnesses),
            |a, b| Ok(a.merge(b)),
        )
}

/// Runs targets against a single model.
///
/// λ targets use the model's distribution function, or uniform `λ` when the
/// model has none and `f` is normal. On one model `thm1` asks whether the
/// model attains equality, so it is evaluated as `thm1-equality` and its
/// witnesses carry that target name.
pub fn check_model(model: &Model, targets: &[Target]) -> Report {
    let start = Instant::now();
    let mut inst = Instance::from_model(model);
    if inst.lambda.is_none()
        && inst.selection.is_normal()
        && targets.iter().any(|t| t.needs_lambda())
    {
        inst.lambda = DistributionFunction::uniform(&inst.selection).ok();
    }
    let mut tally = Tally::new(targets, 5);
    let checker = Checker::new(&inst);
    for (slot, &t) in targets.iter().enumerate() {
        let eval = if t == Target::Thm1 {
            Target::Thm1Equality
        } else {
            t
        };
        tally.record(slot, 0, &inst, checker.check(eval));
        for w in &mut tally.reports[slot].witnesses {
            w.target = eval.to_string();
        }
    }
    Report {
        schema_version: REPORT_SCHEMA_VERSION.into(),
        model_schema_version: MODEL_SCHEMA_VERSION.into(),
        atoms: model.algebra.atom_count(),
        mode: Mode::Single,
        seed: 0,
        trials: None,
        constraints: Vec::new(),
        exclude: Vec::new(),
        targets: tally.reports,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("invalid target: {0}")]
    Target(String),
    #[error("invalid witness model: {0}")]
    Model(#[from] ModelError),
}

/// Re-runs a witness's check on its own model; `true` when it still fails.
pub fn replay(witness: &Witness) -> Result<bool, ReplayError> {
    let target: Target = witness.target.parse().map_err(ReplayError::Target)?;
    let model = Model::from_file(&witness.model)?;
    let inst = Instance::from_model(&model);
    Ok(matches!(
        Checker::new(&inst).check(target),
        Outcome::Failed(_)
    ))
}

/// An instance where the probability of a conditional is strictly below the λ-update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub model: Model,
    pub antecedent: Event,
    pub consequent: Event,
    pub conditional_prob: Rational,
    pub updated_prob: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleFile {
    pub model: ModelFile,
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub conditional_probability: String,
    pub updated_probability: String,
}

impl Counterexample {
    /// Recomputes both sides from the model and confirms the strict inequality.
    pub fn verify(&self) -> bool {
        let Some(lam) = &self.model.lambda else {
            return false;
        };
        let f = &self.model.selection;
        let p = &self.model.probability;
        if !f.is_normal() || f.is_unique_on_nonempty() || !lam.is_valid() {
            return false;
        }
        let lhs = prob_conditional(p, f, self.antecedent, self.consequent);
        match crate::update::updated_prob(p, lam, self.antecedent, self.consequent) {
            Ok(rhs) => lhs == self.conditional_prob && rhs == self.updated_prob && lhs < rhs,
            Err(_) => false,
        }
    }

    pub fn to_file(&self) -> CounterexampleFile {
        CounterexampleFile {
            model: self.model.to_file(),
            antecedent: self.model.event_spec(self.antecedent),
            consequent: self.model.event_spec(self.consequent),
            conditional_probability: rational::format(&self.conditional_prob),
            updated_probability: rational::format(&self.updated_prob),
        }
    }
}

/// Least `(a, b)`, antecedent first, with `P(a ▷_f b) < P_a^λ(b)`.
pub fn search_counterexample(
    p: &ProbabilityDist,
    f: &SelectionFunction,
    lam: &DistributionFunction,
) -> Result<Option<Counterexample>> {
    if let Some((antecedent, atom)) = f.normality_violation() {
        return Err(Error::NotNormal {
            antecedent,
            atom: atom.index(),
        });
    }
    for a in f.algebra().nonempty_events() {
        let dist = updated_distribution(p, lam, a)?;
        for b in f.algebra().events() {
            let lhs = prob_conditional(p, f, a, b);
            let rhs: Rational = b.atoms().map(|beta| &dist[beta.index()]).sum();
            if lhs < rhs {
                return Ok(Some(Counterexample {
                    model: Model::new(f.clone(), p.clone(), Some(lam.clone())),
                    antecedent: a,
                    consequent: b,
                    conditional_prob: lhs,
                    updated_prob: rhs,
                }));
            }
        }
    }
    Ok(None)
}

/// Builds a normal, non-unique selection function from `seed` and returns the
/// least strict-inequality pair for it, with seeded `P` and `λ`.
///
/// Returns `None` when no normal selection function can be non-unique (one atom).
pub fn find_theorem1_counterexample(
    algebra: Arc<Algebra>,
    seed: u64,
) -> Result<Option<Counterexample>> {
    let wide: Vec<Event> = algebra.events().filter(|e| e.cardinality() >= 2).collect();
    if wide.is_empty() {
        return Ok(None);
    }
    let mut rng = trial_rng(seed, 0);
    let normal = BTreeSet::from([FrameProperty::Normality]);
    let mut f = sample_with_rng(algebra.clone(), &normal, &mut rng, DEFAULT_RETRY_CAP)?;
    if f.is_unique_on_nonempty() {
        let a = wide[rng.gen_range(0..wide.len())];
        let alpha = AtomIndex(rng.gen_range(0..algebra.atom_count()));
        f = f.with_cell(a, alpha, a)?;
    }
    let p = ProbabilityDist::random(algebra, &mut rng);
    let lam = DistributionFunction::random(&f, &mut rng)?;
    search_counterexample(&p, &f, &lam)
}
