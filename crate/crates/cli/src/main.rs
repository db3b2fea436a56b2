//! `toric`: exact combinatorics of toric Deligne-Mumford stacks and
//! symbolic verification of the extended I-function recursion identities.

mod commands;
mod examples;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, SeriesOptions, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "toric",
    about = "Exact toric stack combinatorics and mirror-identity verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a stacky fan document.
    Validate { file: String },
    /// List all box elements with cones, fractions, and ages.
    Box { file: String },
    /// Print the fixed-point weights of every top cone.
    Weights { file: String },
    /// Print the extreme rays of the Mori cone.
    Mori { file: String },
    /// Print the truncated I-function restricted to fixed points.
    Ifunction {
        file: String,
        /// Restrict to one top cone (default: all).
        #[arg(long)]
        sigma: Option<usize>,
        /// Omega-degree cutoff (rational); defaults to the document's.
        #[arg(long)]
        cutoff: Option<String>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run the pole, recursion, and restriction checks.
    Verify {
        file: String,
        /// Omega-degree cutoff (rational); defaults to the document's.
        #[arg(long)]
        cutoff: Option<String>,
        /// Comma-separated subset of {c1, c2, restriction}.
        #[arg(long)]
        checks: Option<String>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Emit a built-in example document, or run a subcommand on it after
    /// `--`: `toric example wp 1 2 -- verify --cutoff 3`.
    Example {
        /// One of: p1, wp, football, affine-quotient, product.
        name: String,
        /// Builder arguments, then optionally `--` and a subcommand.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        rest: Vec<String>,
    },
}

fn read_doc(file: &str) -> Result<input::InputDoc, Outcome> {
    let text = std::fs::read_to_string(file).map_err(|e| Outcome {
        stdout: format!("cannot read {file}: {e}"),
        exit: 2,
    })?;
    input::parse(&text).map_err(|e| Outcome {
        stdout: format!("{e}"),
        exit: 2,
    })
}

fn parse_cutoff(s: &Option<String>) -> Result<Option<toric::Rat>, Outcome> {
    match s {
        None => Ok(None),
        Some(v) => toric::exactlin::parse_rat(v).map(Some).ok_or(Outcome {
            stdout: format!("--cutoff: invalid rational \"{v}\""),
            exit: 2,
        }),
    }
}

fn run() -> Outcome {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file } => match read_doc(&file) {
            Ok(doc) => commands::cmd_validate(&doc),
            Err(o) => o,
        },
        Command::Box { file } => match read_doc(&file) {
            Ok(doc) => commands::cmd_box(&doc),
            Err(o) => o,
        },
        Command::Weights { file } => match read_doc(&file) {
            Ok(doc) => commands::cmd_weights(&doc),
            Err(o) => o,
        },
        Command::Mori { file } => match read_doc(&file) {
            Ok(doc) => commands::cmd_mori(&doc),
            Err(o) => o,
        },
        Command::Ifunction {
            file,
            sigma,
            cutoff,
            jobs,
        } => {
            let doc = match read_doc(&file) {
                Ok(d) => d,
                Err(o) => return o,
            };
            let cutoff = match parse_cutoff(&cutoff) {
                Ok(c) => c,
                Err(o) => return o,
            };
            commands::cmd_ifunction(
                &doc,
                &SeriesOptions {
                    sigma,
                    cutoff,
                    jobs,
                },
            )
        }
        Command::Verify {
            file,
            cutoff,
            checks,
            jobs,
        } => {
            let doc = match read_doc(&file) {
                Ok(d) => d,
                Err(o) => return o,
            };
            let cutoff = match parse_cutoff(&cutoff) {
                Ok(c) => c,
                Err(o) => return o,
            };
            commands::cmd_verify(
                &doc,
                &VerifyOptions {
                    cutoff,
                    checks,
                    jobs,
                },
            )
        }
        Command::Example { name, rest } => {
            // clap swallows the first `--`, so also split at the first
            // token that names a subcommand.
            const SUBCOMMANDS: [&str; 6] =
                ["validate", "box", "weights", "mori", "ifunction", "verify"];
            let (builder_args, tail): (&[String], &[String]) =
                match rest.iter().position(|a| a == "--") {
                    Some(p) => (&rest[..p], &rest[p + 1..]),
                    None => match rest
                        .iter()
                        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
                    {
                        Some(p) => (&rest[..p], &rest[p..]),
                        None => (&rest[..], &[]),
                    },
                };
            let doc = match examples::build_example(&name, builder_args) {
                Ok(d) => d,
                Err(msg) => {
                    return Outcome {
                        stdout: msg,
                        exit: 2,
                    }
                }
            };
            if tail.is_empty() {
                return Outcome {
                    stdout: input::render(&doc),
                    exit: 0,
                };
            }
            let sub = &tail[0];
            match commands::dispatch(&doc, sub, &tail[1..]) {
                Ok(o) => o,
                Err(msg) => Outcome {
                    stdout: msg,
                    exit: 2,
                },
            }
        }
    }
}

fn main() -> ExitCode {
    let outcome = run();
    if outcome.exit <= 1 {
        print!("{}", outcome.stdout);
    } else {
        eprint!("{}", outcome.stdout);
        if !outcome.stdout.ends_with('\n') {
            eprintln!();
        }
    }
    ExitCode::from(outcome.exit as u8)
}
