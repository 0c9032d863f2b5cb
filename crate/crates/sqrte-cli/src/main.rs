//! Command line harness: spec-file ingestion, route selection,
//! cross-validation reports and the example regression suite.

mod report;
mod spec;
mod suite;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use report::{cross_validate, render_table, RunOptions};
use spec::parse_spec;
use sqrte::cone::normal_cone_ideal;
use sqrte::winding::{oh1_check, DEFAULT_SAMPLES};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sqrte", about = "Square-root Euler multiplicities of isotropic sections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Seed for generic slices, perturbations and sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Sample budget for the winding verifier
    #[arg(long)]
    samples: Option<usize>,
    /// S-pair reduction budget for Groebner computations
    /// (default from SQRTE_STEP_BUDGET or 1000000)
    #[arg(long)]
    step_budget: Option<usize>,
    /// Emit the machine-readable JSON report
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the requested routes on a section spec and cross-validate
    Compute {
        spec: PathBuf,
        /// Comma-separated route list (default: all applicable)
        #[arg(long, value_delimiter = ',')]
        routes: Option<Vec<String>>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Validate a section spec and print its diagnostics
    Validate { spec: PathBuf },
    /// Print the normal-cone ideal of the section
    Cone { spec: PathBuf },
    /// Winding-number verifier only
    Degree {
        spec: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run the whole worked-example regression grid
    PaperSuite {
        /// Largest d of the (d, i, j) grid
        #[arg(long, default_value_t = 4)]
        max_d: u32,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn env_step_budget() -> usize {
    std::env::var("SQRTE_STEP_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(sqrte::ideal::DEFAULT_STEP_BUDGET)
}

fn options_from(spec: &spec::SectionSpec, flags: &CommonFlags, routes: Option<Vec<String>>) -> RunOptions {
    let step_budget = flags.step_budget.or(spec.step_budget).unwrap_or_else(env_step_budget);
    sqrte::ideal::set_default_step_budget(step_budget);
    RunOptions {
        seed: flags.seed.or(spec.seed).unwrap_or(1),
        samples: flags.samples.or(spec.samples).unwrap_or(DEFAULT_SAMPLES),
        step_budget,
        routes: routes.or_else(|| spec.routes.clone()),
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    sqrte::ideal::set_default_step_budget(env_step_budget());
    match cli.command {
        Command::Compute { spec: path, routes, flags } => {
            let spec = parse_spec(&path)?;
            let section = spec.section()?;
            let spin = spec.spin_model()?;
            let options = options_from(&spec, &flags, routes);
            if let Some(list) = &options.routes {
                for name in list {
                    if !report::KNOWN_ROUTES.contains(&name.as_str()) {
                        anyhow::bail!(
                            "unknown route `{name}` (known: {})",
                            report::KNOWN_ROUTES.join(", ")
                        );
                    }
                }
            }
            let report = cross_validate(&section, spin.as_ref(), &options);
            if flags.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", render_table(&report));
            }
            Ok(if report.verdict == "pass" { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Validate { spec: path } => {
            let spec = parse_spec(&path)?;
            let section = spec.section()?;
            println!("valid isotropic section over C^{}", section.n());
            println!("rank {} bundle, orientation {:+}", section.space().dim(), section.space().orientation_unit());
            println!("length Z(s) = {}", section.zero_locus_length()?);
            if let Some(w) = section.torus() {
                println!("torus weights: base {:?}, fiber {:?}", w.base, w.fiber);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cone { spec: path } => {
            let spec = parse_spec(&path)?;
            let section = spec.section()?;
            let cone = normal_cone_ideal(&section)?;
            println!("variables: {}", cone.vars.join(", "));
            for g in cone.ideal.gens() {
                println!("{g}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Degree { spec: path, flags } => {
            let spec = parse_spec(&path)?;
            let section = spec.section()?;
            let options = options_from(&spec, &flags, None);
            let w = oh1_check(&section, options.samples, options.seed)?;
            if flags.json {
                println!(
                    "{{\"degree\": {}, \"estimate\": {}, \"residual\": {}}}",
                    w.degree, w.estimate, w.residual
                );
            } else {
                println!("deg s+ = deg s- = {} (estimate {:.6}, residual {:.6})", w.degree, w.estimate, w.residual);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::PaperSuite { max_d, flags } => {
            let seed = flags.seed.unwrap_or(1);
            let samples = flags.samples.unwrap_or(DEFAULT_SAMPLES);
            let budget = flags.step_budget.unwrap_or_else(env_step_budget);
            let outcome = suite::paper_suite(max_d, seed, samples, budget);
            for line in &outcome.lines {
                println!("{line}");
            }
            println!(
                "{} checks, {} failures",
                outcome.checks, outcome.failures
            );
            Ok(if outcome.failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
