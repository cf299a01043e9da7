//! `choix`: consistency checks, choice queries, generator inspection and
//! experiments from the command line.
//!
//! Exit status: 0 on success, 1 when `check` finds the assessment
//! inconsistent, 2 on invalid input.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use choix::generators::{assessment_to_conjunctive, assessment_to_conjunctive_naive, conjunctive_to_disjunctive_simplified};
use choix::{check_consistency, natural_extension, Assessment, Method, OptionSet, OptionSetDoc, ToleranceConfig};
use choix_bench::{run_to_csv, ExperimentConfig, ExperimentKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "choix", version, about = "Inference with choice assessments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Feasibility slack granted to the LP layer.
    #[arg(long, global = true, env = "CHOIX_LP_TOL", default_value_t = 1e-9)]
    lp_tol: f64,
    /// Slack for componentwise comparisons.
    #[arg(long, global = true, default_value_t = 0.0)]
    tau: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether an assessment is consistent.
    Check {
        #[command(flatten)]
        input: AssessmentArgs,
    },
    /// Split an option set into chosen and rejected options.
    Choose {
        #[command(flatten)]
        input: AssessmentArgs,
        /// JSON file holding `{"options": [[...], ...]}` or a bare array.
        #[arg(long)]
        options: PathBuf,
    },
    /// Print the simplified conjunctive and disjunctive generators.
    Simplify {
        #[arg(long)]
        assessment: PathBuf,
    },
    /// Run an experiment and write its CSV.
    Experiment {
        #[arg(value_enum)]
        kind: Experiment,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct AssessmentArgs {
    /// JSON file holding `{"dimension": n, "pairs": [{"chosen": [...], "rejected": [...]}]}`.
    #[arg(long)]
    assessment: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Full)]
    method: MethodArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Naive,
    Conj,
    Full,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Naive => Method::Naive,
            MethodArg::Conj => Method::Conjunctive,
            MethodArg::Full => Method::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Size,
    Epsilon,
    Timing,
}

impl From<Experiment> for ExperimentKind {
    fn from(e: Experiment) -> Self {
        match e {
            Experiment::Size => ExperimentKind::Size,
            Experiment::Epsilon => ExperimentKind::Epsilon,
            Experiment::Timing => ExperimentKind::Timing,
        }
    }
}

enum Failure {
    Input(String),
    Inconsistent,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_assessment(path: &Path) -> Result<Assessment, Failure> {
    serde_json::from_value(read_json(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_options(path: &Path) -> Result<OptionSet, Failure> {
    let value = read_json(path)?;
    let parsed = if value.is_array() {
        serde_json::from_value::<OptionSet>(value)
    } else {
        serde_json::from_value::<OptionSetDoc>(value).map(|d| d.options)
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("json values serialise"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = ToleranceConfig::new(cli.tau, cli.lp_tol)?;
    match cli.command {
        Command::Check { input } => {
            let a = read_assessment(&input.assessment)?;
            let consistent = check_consistency(&a, input.method.into(), &tol)?;
            print(&json!({ "consistent": consistent }));
            if !consistent {
                return Err(Failure::Inconsistent);
            }
        }
        Command::Choose { input, options } => {
            let a = read_assessment(&input.assessment)?;
            let query = read_options(&options)?;
            let result = natural_extension(&query, &a, input.method.into(), &tol)?;
            print(&serde_json::to_value(&result)?);
        }
        Command::Simplify { assessment } => {
            let a = read_assessment(&assessment)?;
            let naive = assessment_to_conjunctive_naive(&a);
            let conj = assessment_to_conjunctive(&a, &tol)?;
            let full = conjunctive_to_disjunctive_simplified(&conj, &tol)?;
            print(&json!({
                "conjunctive": conj.sets(),
                "disjunctive": full.sets(),
                "inconsistent": conj.is_inconsistent(),
                "sizes": {
                    "h_naive": naive.len(),
                    "h_simplified": conj.len(),
                    "g_naive": naive.disjunctive_size().to_string(),
                    "g_conj": conj.disjunctive_size().to_string(),
                    "g_full": full.len(),
                },
            }));
        }
        Command::Experiment { kind, config, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let file = File::create(&out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            run_to_csv(kind.into(), &cfg, &tol, BufWriter::new(file))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconsistent) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
