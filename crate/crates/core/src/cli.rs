//! Command-line front end.
//!
//! Exit codes: 0 accepted or verified, 1 rejected, 2 invalid input,
//! 3 internal invariant breach.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::fuzz::run_fuzz;
use crate::io::{export_dot, load_graph, parse_plan, serialize_plan, to_canonical_json, ParsedGraph};
use crate::planner::{plan, PlanError};
use crate::realizability::{check, Coverage, RealizabilityReport, Verdict};
use crate::verifier::{sweep, verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const SEED_ENV: &str = "REEB_FORGE_SEED";

#[derive(Debug, Parser)]
#[command(name = "reeb-forge", version, about = "Realizability checks and constructions for Reeb graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the label and vertex criteria on a graph.
    Check {
        graph: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Build a construction plan for an accepted graph.
    Plan {
        graph: PathBuf,
        /// Write the plan here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a plan against a graph.
    Verify {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print a graph, or the graph rebuilt from a plan, as DOT.
    ExportDot {
        #[arg(required_unless_present = "plan", conflicts_with = "plan")]
        graph: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Run the random plan/verify round trip.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Falls back to REEB_FORGE_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<ParsedGraph, Failure> {
    load_graph(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn verdict_line<V: std::fmt::Display>(name: &str, verdict: &Verdict<V>, out: &mut String) {
    match verdict {
        Verdict::Holds => writeln!(out, "{name}: holds").unwrap(),
        Verdict::Violated(vs) => {
            writeln!(out, "{name}: violated").unwrap();
            for v in vs {
                writeln!(out, "  {v}").unwrap();
            }
        }
    }
}

/// Plain-text rendering of a report.
pub fn format_report(report: &RealizabilityReport) -> String {
    let mut out = String::new();
    let coverage = match report.coverage {
        Coverage::Mt1 => "MT1",
        Coverage::Mt2 => "MT2",
        Coverage::Outside => "none",
    };
    writeln!(out, "accepted by: {coverage}").unwrap();
    verdict_line("MT1", &report.mt1, &mut out);
    verdict_line("MT2", &report.mt2, &mut out);
    let header = ["vertex", "D_v", "up", "low", "A_up", "A_low", "B_up", "B_low", "extremum", "slack"];
    let mut rows = vec![header.map(String::from).to_vec()];
    for (name, r) in &report.per_vertex {
        let ext = match r.extremum {
            Some(crate::graph::Extremum::Min) => "min",
            Some(crate::graph::Extremum::Max) => "max",
            None => "-",
        };
        rows.push(vec![
            name.clone(),
            r.d_v.to_string(),
            r.e_up.to_string(),
            r.e_low.to_string(),
            r.a_up.to_string(),
            r.a_low.to_string(),
            r.b_up.to_string(),
            r.b_low.to_string(),
            ext.to_string(),
            r.slack.map_or("-".to_string(), |s| s.to_string()),
        ]);
    }
    let widths: Vec<usize> = (0..header.len()).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap()).collect();
    for row in rows {
        let line: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
    }
    out
}

fn exec(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let write = |out: &mut dyn Write, text: &str| -> Result<(), Failure> {
        out.write_all(text.as_bytes()).map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })
    };
    match command {
        Command::Check { graph, json } => {
            let parsed = read_graph(&graph)?;
            let report = check(&parsed.graph, &parsed.function_or_default());
            let text = if json { to_canonical_json(&report) } else { format_report(&report) };
            write(out, &text)?;
            Ok(if report.accepted() { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::Plan { graph, output } => {
            let parsed = read_graph(&graph)?;
            let f = parsed.function_or_default();
            let report = check(&parsed.graph, &f);
            let p = match plan(&parsed.graph, &f, &report) {
                Ok(p) => p,
                Err(PlanError::NotCovered) => {
                    return Err(Failure { code: EXIT_REJECTED, message: format_report(&report) });
                }
                Err(e @ PlanError::Internal { .. }) => {
                    return Err(Failure { code: EXIT_INTERNAL, message: format!("internal error: {e}") });
                }
                Err(e) => return Err(invalid(e.to_string())),
            };
            let text = serialize_plan(&p);
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure { code: EXIT_INTERNAL, message: format!("{}: {e}", path.display()) })?,
                None => write(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { plan: plan_path, graph } => {
            let parsed = read_graph(&graph)?;
            let p = parse_plan(&read(&plan_path)?).map_err(|e| invalid(format!("{}: {e}", plan_path.display())))?;
            match verify(&p, &parsed.graph, &parsed.function_or_default()) {
                Ok(report) => {
                    let mut text = format!(
                        "verified: {} vertices, {} edges, {} Morse points, {} non-Morse blocks\n",
                        report.vertices, report.edges, report.counts.morse_points, report.counts.non_morse_blocks
                    );
                    for name in &report.flagged {
                        writeln!(text, "flag part2-unverified at {name}").unwrap();
                    }
                    write(out, &text)?;
                    Ok(EXIT_OK)
                }
                Err(e) => Err(Failure { code: EXIT_REJECTED, message: format!("verification failed: {e}") }),
            }
        }
        Command::ExportDot { graph, plan: plan_path } => {
            let g = match (graph, plan_path) {
                (Some(path), _) => read_graph(&path)?.graph,
                (None, Some(path)) => {
                    let p = parse_plan(&read(&path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                    sweep(&p)
                        .map_err(|e| Failure { code: EXIT_REJECTED, message: format!("verification failed: {e}") })?
                        .graph
                }
                (None, None) => return Err(invalid("need a graph or --plan")),
            };
            write(out, &export_dot(&g))?;
            Ok(EXIT_OK)
        }
        Command::Fuzz { count, seed } => {
            let seed = match seed {
                Some(s) => s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v.trim().parse().map_err(|_| invalid(format!("{SEED_ENV} is not an integer: {v:?}")))?,
                    Err(_) => 0,
                },
            };
            let summary = run_fuzz(count, seed);
            write(out, &format!("seed: {seed}\n{summary}"))?;
            Ok(if summary.failures.is_empty() { EXIT_OK } else { EXIT_INTERNAL })
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match exec(cli.command, out) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = write!(err, "{message}");
            if !message.ends_with('\n') {
                let _ = writeln!(err);
            }
            code
        }
    }
}
