use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tyurin::catalog::{bundled, load_catalog, Catalog};
use tyurin::report::{emit_report, CheckRecord, CheckReport, Format, GraphSummary};
use tyurin::verify;

/// Verify the catalog of projective models and Tyurin degenerations.
#[derive(Parser)]
#[command(name = "tyurin", version)]
struct Cli {
    /// Catalog file to use instead of the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice, relation, quotient and fibration checks.
    Lattice {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Per-model checks (a) to (f).
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Polytope, grading and chart pipeline checks.
    Toric {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Flop-graph enumeration from the seed central fibre.
    Flops {
        #[command(subcommand)]
        action: FlopsAction,
    },
    /// Run everything and print a report.
    Report {
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
        /// Omit the timestamp so reruns are byte-identical.
        #[arg(long)]
        deterministic: bool,
    },
}

#[derive(Subcommand)]
enum CheckAction {
    Check,
    Verify,
}

#[derive(Subcommand)]
enum ModelsAction {
    Verify {
        /// Only this model (its Γ name).
        #[arg(long)]
        model: Option<String>,
    },
}

#[derive(Subcommand)]
enum FlopsAction {
    Enumerate {
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        /// Keep mirror-image states apart.
        #[arg(long)]
        no_reflection_quotient: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn print_checks(records: &[CheckRecord]) -> ExitCode {
    for r in records {
        println!("{}", r.line());
    }
    let report = CheckReport::new(records.to_vec());
    println!(
        "{} checks: {} passed, {} failed, {} skipped",
        records.len(),
        report.count(tyurin::report::Status::Pass),
        report.count(tyurin::report::Status::Fail),
        report.count(tyurin::report::Status::Skipped)
    );
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli, catalog: Catalog) -> ExitCode {
    match cli.command {
        Command::Lattice { action } => {
            if matches!(action, CheckAction::Verify) {
                return usage_error("use `lattice check`");
            }
            let mut records = verify::lattice_checks();
            records.extend(verify::fibration_checks(&catalog));
            print_checks(&records)
        }
        Command::Toric { action } => {
            if matches!(action, CheckAction::Check) {
                return usage_error("use `toric verify`");
            }
            print_checks(&verify::toric_checks(&catalog.toric))
        }
        Command::Models {
            action: ModelsAction::Verify { model },
        } => {
            let models: Vec<_> = match &model {
                Some(name) => match catalog.model(name) {
                    Some(m) => vec![m],
                    None => {
                        let names: Vec<&str> = catalog.models.iter().map(|m| m.name.as_str()).collect();
                        return usage_error(format!("no model named `{name}` (available: {})", names.join(", ")));
                    }
                },
                None => catalog.models.iter().collect(),
            };
            let graph = verify::flop_graph(&catalog, true);
            let records: Vec<CheckRecord> = models.iter().flat_map(|m| verify::verify_model(m, &graph)).collect();
            print_checks(&records)
        }
        Command::Flops {
            action: FlopsAction::Enumerate {
                emit,
                no_reflection_quotient,
            },
        } => {
            let graph = verify::flop_graph(&catalog, !no_reflection_quotient);
            let summary = GraphSummary::from_graph(&graph);
            match emit {
                Some(Emit::Dot) => print!("{}", summary.to_dot()),
                Some(Emit::Json) => println!("{}", serde_json::to_string_pretty(&summary).expect("serializes")),
                None => {
                    for (i, n) in summary.nodes.iter().enumerate() {
                        let nb: Vec<String> = graph
                            .neighbours(i)
                            .iter()
                            .map(|&j| summary.nodes[j].gamma.clone())
                            .collect();
                        let k2 = format!("({}, {})", n.k_squared[0], n.k_squared[1]);
                        println!("{i:>2}  {:<8} K² = {k2:<8}  flops to {}", n.gamma, nb.join(", "));
                    }
                    println!("{} states, {} edges", summary.nodes.len(), summary.edges.len());
                }
            }
            if graph.truncated || !graph.discrepancies().is_empty() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Report { format, deterministic } => {
            let mut report = verify::run_all(&catalog);
            if !deterministic {
                report.stamp_now();
            }
            match emit_report(&report, format) {
                Ok(text) => print!("{text}"),
                Err(e) => return usage_error(e),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let catalog = match &cli.catalog {
        Some(path) => match load_catalog(path) {
            Ok(c) => c,
            Err(e) => return usage_error(e),
        },
        None => bundled(),
    };
    run(cli, catalog)
}
