//! `xcsp`: decide, classify, generate and play counting-quantifier graph
//! problems from the terminal.
//!
//! Exit statuses: 0 decided, 1 disagreement or unexplained self-test
//! failure, 2 parse error, 3 method does not apply, 4 node budget exhausted,
//! 5 generated instance rejected by its validator.

mod bench;
mod input;
mod play;
mod solve;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use xcsp::acceptance;
use xcsp::classify::classify;
use xcsp::formula::serialize_instance;
use xcsp::oracle::default_budget;
use xcsp::reductions::{lift_to_cycle, lift_to_k2n, validate_cycle_lift, validate_k2n_lift};

use input::{load_instance, load_template, Failure};

#[derive(Parser)]
#[command(name = "xcsp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance on a template. Prints YES or NO.
    Solve {
        instance: PathBuf,
        /// Template name (k4, path5, cycle6, infpath, p100, p10, p101), an
        /// inline edge list such as `3:0-1,1-2,0-0`, or a template file.
        #[arg(long, short)]
        template: String,
        #[arg(long, short, value_enum, default_value_t = solve::Method::Auto)]
        method: solve::Method,
        /// Oracle node budget; defaults to $XCSP_BUDGET or 10^8.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Complexity of the problem with the given quantifier counts.
    Classify {
        #[arg(long, short)]
        template: String,
        /// Comma-separated counts, e.g. `1,2`.
        #[arg(long, short)]
        quantifiers: String,
    },
    /// Emit the hardness-reduction image of a source instance.
    Gadget {
        #[arg(value_enum)]
        kind: GadgetKind,
        source: PathBuf,
        /// `n` for the K_2n lift, `j` for the cycle lift.
        #[arg(long, short)]
        param: u32,
    },
    /// Play the game; the person at the terminal takes one side.
    Play {
        instance: PathBuf,
        #[arg(long, short)]
        template: String,
        #[arg(long, short, value_enum, default_value_t = play::Side::None)]
        side: play::Side,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long)]
        criterion: Option<u8>,
    },
    /// Time each polynomial decider against the oracle.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6, 7, 8])]
        sizes: Vec<usize>,
        /// Instances per decider and size.
        #[arg(long, default_value_t = 200)]
        per: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    /// Universal counts to `∃≥n` on K_2n.
    K2n,
    /// Quantified colouring of K_j to `{1,2}` on C_2j.
    Cycle,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            instance,
            template,
            method,
            budget,
        } => {
            let inst = load_instance(&instance)?;
            let tmpl = load_template(&template)?;
            let report = solve::solve(&inst, &tmpl, method, budget.unwrap_or_else(default_budget))?;
            println!("{}", report.verdict_line());
            for w in &report.warnings {
                eprintln!("{w}");
            }
            eprintln!("method: {}", report.method);
            eprintln!("elapsed: {:.3} ms", report.elapsed.as_secs_f64() * 1e3);
            if let Some(c) = &report.certificate {
                eprintln!("certificate: {c}");
            }
        }
        Command::Classify {
            template,
            quantifiers,
        } => {
            let tmpl = load_template(&template)?;
            let x = acceptance::parse_quantifiers(&quantifiers)
                .ok_or_else(|| Failure::Parse(format!("bad quantifier list `{quantifiers}`")))?;
            println!("{}", classify(&tmpl, &x));
        }
        Command::Gadget {
            kind,
            source,
            param,
        } => {
            let src = load_instance(&source)?;
            let unsupported =
                |e: xcsp::reductions::ReductionError| Failure::Unsupported(e.to_string());
            let out = match kind {
                GadgetKind::K2n => {
                    let out = lift_to_k2n(&src, param).map_err(unsupported)?;
                    validate_k2n_lift(&src, param, &out).map_err(Failure::Validator)?;
                    out
                }
                GadgetKind::Cycle => {
                    let out = lift_to_cycle(&src, param).map_err(unsupported)?;
                    validate_cycle_lift(&src, param, &out).map_err(Failure::Validator)?;
                    out
                }
            };
            print!("{}", serialize_instance(&out));
        }
        Command::Play {
            instance,
            template,
            side,
        } => {
            let inst = load_instance(&instance)?;
            let tmpl = load_template(&template)?;
            play::run(&inst, &tmpl, side, io::stdin().lock())?;
        }
        Command::Selftest { criterion } => {
            let outcomes = match criterion {
                Some(n) if acceptance::CRITERIA.iter().any(|c| c.0 == n) => {
                    vec![acceptance::run(n)]
                }
                Some(n) => return Err(Failure::Parse(format!("no criterion {n}"))),
                None => acceptance::run_all(),
            };
            for o in &outcomes {
                println!("{o}");
            }
            let bad = outcomes.iter().filter(|o| !o.accepted()).count();
            if bad > 0 {
                return Err(Failure::Check(format!(
                    "{bad} criterion(s) failed unexpectedly"
                )));
            }
        }
        Command::Bench { sizes, per, seed } => {
            let rows = bench::run(&sizes, per, seed)?;
            bench::print(&rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("xcsp: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
