use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use imago::belief::{imaged_mass, prob_conditional};
use imago::conditional::conditional;
use imago::fixtures::{self, EXAMPLE_ANTECEDENT, EXAMPLE_CONSEQUENT};
use imago::rational::{self, Rational};
use imago::selection::Budget;
use imago::update::{updated_distribution, DistributionFunction, LambdaCell};
use imago::verifier::{
    check_model, find_theorem1_counterexample, run_campaign, Campaign, Mode, Target,
};
use imago::{Algebra, AtomIndex, Error, FrameProperty, Model};

#[derive(Parser)]
#[command(
    name = "imago",
    version,
    about = "Check selection-function conditionals and imaging updates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on one model file.
    Check {
        path: PathBuf,
        /// Comma-separated targets, or `all`.
        #[arg(long, default_value = "all")]
        targets: String,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an exhaustive or sampled campaign.
    Campaign {
        #[arg(long)]
        atoms: usize,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Frame properties every selection function must satisfy.
        #[arg(long, default_value = "")]
        constraints: String,
        /// Frame properties every selection function must violate.
        #[arg(long, default_value = "")]
        exclude: String,
        #[arg(long, default_value = "all")]
        targets: String,
        #[arg(long, default_value_t = 5)]
        max_witnesses: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk through the three-atom worked example.
    Demo {
        /// Also write the example model file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Weight `λ(a, w1)(w2)` in the open interval (0, 1); `w3` gets the rest.
        #[arg(long)]
        lambda_weight: Option<String>,
        /// Shrink `f(a, w1)` to `{w2}`, making the selection function unique.
        #[arg(long)]
        lewis: bool,
    },
    /// Search a seeded non-unique selection function for a strict inequality.
    Mine {
        #[arg(long)]
        atoms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure that maps to exit status 2.
struct Invalid(String);

impl From<Error> for Invalid {
    fn from(e: Error) -> Self {
        Invalid(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Invalid>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { path, targets, out } => cmd_check(&path, &targets, out.as_deref()),
        Command::Campaign {
            atoms,
            mode,
            trials,
            seed,
            constraints,
            exclude,
            targets,
            max_witnesses,
            threads,
            out,
        } => {
            let args = CampaignArgs {
                atoms,
                mode,
                trials,
                seed,
                constraints,
                exclude,
                targets,
                max_witnesses,
                threads,
            };
            cmd_campaign(&args, out.as_deref())
        }
        Command::Demo {
            out,
            lambda_weight,
            lewis,
        } => cmd_demo(out.as_deref(), lambda_weight.as_deref(), lewis),
        Command::Mine { atoms, seed, out } => cmd_mine(atoms, seed, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Invalid> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Invalid(format!("{}: {e}", path.display()))),
        None => {
            // A closed pipe (e.g. `| head`) is not an input error.
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn pass_code(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn parse_properties(text: &str) -> Result<BTreeSet<FrameProperty>, Invalid> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<FrameProperty>().map_err(Invalid))
        .collect()
}

fn cmd_check(path: &Path, targets: &str, out: Option<&Path>) -> CmdResult {
    let targets = Target::parse_list(targets).map_err(Invalid)?;
    let text = fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    let model = Model::from_json(&text).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    let report = check_model(&model, &targets);
    emit(&report.to_json(), out)?;
    Ok(pass_code(report.all_passed()))
}

struct CampaignArgs {
    atoms: usize,
    mode: String,
    trials: u64,
    seed: u64,
    constraints: String,
    exclude: String,
    targets: String,
    max_witnesses: usize,
    threads: Option<usize>,
}

fn cmd_campaign(args: &CampaignArgs, out: Option<&Path>) -> CmdResult {
    let algebra = Arc::new(Algebra::new(args.atoms)?);
    let targets = Target::parse_list(&args.targets).map_err(Invalid)?;
    let mode: Mode = args.mode.parse().map_err(Invalid)?;
    let mut campaign = match mode {
        Mode::Sampled => Campaign::sampled(algebra, targets, args.trials, args.seed),
        _ => Campaign::exhaustive(algebra, targets).with_seed(args.seed),
    }
    .with_constraints(parse_properties(&args.constraints)?)
    .with_exclude(parse_properties(&args.exclude)?)
    .with_budget(Budget::from_env());
    campaign.max_witnesses = args.max_witnesses;
    campaign.threads = args.threads;
    let report = run_campaign(&campaign)?;
    emit(&report.to_json(), out)?;
    Ok(pass_code(report.all_passed()))
}

fn cmd_demo(out: Option<&Path>, lambda_weight: Option<&str>, lewis: bool) -> CmdResult {
    let a = EXAMPLE_ANTECEDENT;
    let b = EXAMPLE_CONSEQUENT;
    let w1 = AtomIndex(0);
    let mut f = fixtures::example_selection();
    if lewis {
        f = f.with_cell(a, w1, AtomIndex(1).event())?;
    }
    let p = fixtures::example_probability();
    let mut lam = DistributionFunction::uniform(&f)?;
    if let Some(text) = lambda_weight {
        if lewis {
            return Err(Invalid(
                "--lambda-weight needs the two-element cell; drop --lewis".into(),
            ));
        }
        let w = rational::parse(text).map_err(Invalid)?;
        if w <= rational::zero() || w >= rational::one() {
            return Err(Invalid(format!(
                "--lambda-weight must lie strictly between 0 and 1, got {text}"
            )));
        }
        let mut cells = lam.cells().clone();
        let rest = rational::one() - &w;
        cells.insert(
            (a, w1),
            LambdaCell::from([(AtomIndex(1), w), (AtomIndex(2), rest)]),
        );
        lam = DistributionFunction::new(f.clone(), cells)?;
    }
    let model = Model::new(f.clone(), p.clone(), Some(lam.clone()));
    let alg = f.algebra();
    let fmt = rational::format;
    let list = |values: &mut dyn Iterator<Item = (AtomIndex, Rational)>| {
        values
            .map(|(al, v)| format!("{}: {}", alg.atom_name(al), fmt(&v)))
            .collect::<Vec<_>>()
            .join(", ")
    };

    println!("atoms: {}", alg.atom_names().join(", "));
    println!(
        "P = ({})",
        list(&mut alg.atoms().map(|al| (al, p.weights()[al.index()].clone())))
    );
    println!("a = {}, b = {}", alg.display(a), alg.display(b));
    let cells: Vec<String> = alg
        .atoms()
        .map(|al| format!("{} -> {}", alg.atom_name(al), alg.display(f.get(a, al))))
        .collect();
    println!("f(a, .): {}", cells.join(", "));
    let cond = conditional(&f, a, b);
    println!("conditional set a > b = {}", alg.display(cond));
    let pc = prob_conditional(&p, &f, a, b);
    println!("P(a > b) = {}", fmt(&pc));
    let mass = imaged_mass(&p, &f, a);
    let entries: Vec<String> = mass
        .entries
        .iter()
        .map(|(c, m)| format!("{} -> {}", alg.display(*c), fmt(m)))
        .collect();
    println!("mass m_a: {}", entries.join(", "));
    println!("Bel_a(b) = {}", fmt(&mass.belief(b)));
    for al in alg.atoms() {
        let weights: Vec<String> = f
            .get(a, al)
            .atoms()
            .map(|beta| format!("{}: {}", alg.atom_name(beta), fmt(&lam.weight(a, al, beta))))
            .collect();
        println!(
            "lambda(a, {}) = ({})",
            alg.atom_name(al),
            weights.join(", ")
        );
    }
    let dist = updated_distribution(&p, &lam, a)?;
    println!(
        "P_a^lambda = ({})",
        list(&mut alg.atoms().map(|al| (al, dist[al.index()].clone())))
    );
    let updated: Rational = b.atoms().map(|beta| &dist[beta.index()]).sum();
    println!("P_a^lambda(b) = {}", fmt(&updated));
    let relation = match pc.cmp(&updated) {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    };
    println!(
        "P(a > b) = {} {relation} {} = P_a^lambda(b)",
        fmt(&pc),
        fmt(&updated)
    );
    let everywhere = alg.events().all(|c| {
        let lhs = prob_conditional(&p, &f, a, c);
        let rhs: Rational = c.atoms().map(|beta| &dist[beta.index()]).sum();
        lhs == rhs
    });
    if everywhere {
        println!("equality holds for every consequent at a");
    } else {
        println!("equality fails at a: f(a, .) is not unique");
    }
    if let Some(path) = out {
        emit(&model.to_json(), Some(path))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mine(atoms: usize, seed: u64, out: Option<&Path>) -> CmdResult {
    let algebra = Arc::new(Algebra::new(atoms)?);
    match find_theorem1_counterexample(algebra, seed)? {
        Some(cx) if cx.verify() => {
            let text =
                serde_json::to_string_pretty(&cx.to_file()).expect("counterexample serializes");
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Some(_) => Err(Invalid("counterexample failed verification".into())),
        None => {
            eprintln!("no normal selection function on {atoms} atom(s) can be non-unique");
            Ok(ExitCode::FAILURE)
        }
    }
}
