//! `planebranch`: every pipeline stage behind one command, JSON in and out.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use planebranch::decider::decide;
use planebranch::forms::{algorithm1, eval_form_orders_multi, Algorithm1Options};
use planebranch::json::{
    BranchJson, DecisionJson, LambdaJson, OneFormJson, RecoverJson, SemigroupJson, StratificationJson,
};
use planebranch::ring::Exact;
use planebranch::semigroup::NumericalSemigroup;
use planebranch::strata::{stratify, StratifyOptions};
use planebranch::valueset::ValueSet;

#[derive(Parser)]
#[command(
    name = "planebranch",
    version,
    about = "Value sets of 1-forms on plane branches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args)]
struct Tuning {
    /// Series precision override.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Seed for the randomized witness search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Case-split budget of the stratifier.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_splits: usize,
    /// Worker threads for `stratify`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

/// Every `--set`, `--branch` and `--form` argument is a path, inline JSON, or
/// `-` for stdin.
#[derive(Subcommand)]
enum Command {
    /// Invariants of a numerical semigroup.
    Semigroup {
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_big)]
        gens: Vec<BigInt>,
    },
    /// Apery profile of a value set and the semigroup it determines.
    RecoverGamma {
        #[arg(long)]
        set: String,
    },
    /// Value set of 1-forms of a branch with its minimal basis.
    Lambda {
        #[arg(long)]
        branch: String,
    },
    /// Value of a 1-form on one or more branches.
    EvalForm {
        #[arg(long, required = true)]
        branch: Vec<String>,
        #[arg(long)]
        form: String,
    },
    /// Every value set attainable in a topological class.
    Stratify {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<usize>,
    },
    /// Whether a cofinite set is the value set of some plane branch.
    Decide {
        #[arg(long)]
        set: String,
    },
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))
}

enum Failure {
    Usage(String),
    Domain { stage: &'static str, detail: String },
}

fn domain<E: std::fmt::Display>(stage: &'static str) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Domain {
        stage,
        detail: e.to_string(),
    }
}

fn read_input<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed JSON in {arg}: {e}")))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let t = &cli.tuning;
    let strat = StratifyOptions {
        max_splits: t.max_splits,
        seed: t.seed,
        jobs: t.jobs.max(1),
        precision: t.precision,
        ..StratifyOptions::default()
    };
    let out = match cli.command {
        Command::Semigroup { gens } => {
            let g = NumericalSemigroup::new(gens).map_err(domain("semigroup"))?;
            json!(SemigroupJson::from_semigroup(&g))
        }
        Command::RecoverGamma { set } => {
            let l: ValueSet = read_input(&set)?;
            let profile = l.profile().map_err(domain("recover-gamma"))?;
            let gamma = l.recover_gamma().map_err(domain("recover-gamma"))?;
            json!(RecoverJson::new(&profile, &gamma))
        }
        Command::Lambda { branch } => {
            let phi = read_input::<BranchJson>(&branch)?
                .to_branch()
                .map_err(domain("branch"))?;
            let opts = Algorithm1Options {
                precision: t.precision,
                ..Algorithm1Options::default()
            };
            let basis = algorithm1(&phi, &Exact, &opts).map_err(domain("lambda"))?;
            json!(LambdaJson::from_basis(&basis))
        }
        Command::EvalForm { branch, form } => {
            let branches = branch
                .iter()
                .map(|b| read_input::<BranchJson>(b)?.to_branch().map_err(domain("branch")))
                .collect::<Result<Vec<_>, _>>()?;
            let omega = read_input::<OneFormJson>(&form)?
                .to_form()
                .map_err(domain("form"))?;
            let values = eval_form_orders_multi(&branches, &omega, t.precision.unwrap_or(256))
                .map_err(domain("eval-form"))?;
            if values.len() == 1 {
                json!({"value": values[0], "values": values})
            } else {
                json!({"values": values})
            }
        }
        Command::Stratify { gens } => {
            let g = NumericalSemigroup::from_small(&gens).map_err(domain("semigroup"))?;
            let s = stratify(&g, &strat).map_err(domain("stratify"))?;
            json!(StratificationJson::from_stratification(&s))
        }
        Command::Decide { set } => {
            let l: ValueSet = read_input(&set)?;
            let d = decide(&l, &strat).map_err(domain("decide"))?;
            json!(DecisionJson::from_decision(&d))
        }
    };
    Ok(out)
}

fn emit(doc: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{doc}");
}

fn main() -> ExitCode {
    let outcome = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or_default();
            Err(Failure::Usage(first.trim_start_matches("error: ").to_string()))
        }
    };
    match outcome {
        Ok(v) => {
            emit(&serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            emit(&json!({"error": "usage", "detail": msg}).to_string());
            ExitCode::from(2)
        }
        Err(Failure::Domain { stage, detail }) => {
            emit(&json!({"error": stage, "detail": detail}).to_string());
            ExitCode::from(1)
        }
    }
}
