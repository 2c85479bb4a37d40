use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gerrymander::eval::EvalReport;
use gerrymander::io::{parse_instance, parse_partition, parse_source_graph, write_instance, write_partition};
use gerrymander::reductions::{clique_to_path, partition_to_tree};
use gerrymander::solve::{crosscheck, solve, Algorithm};
use gerrymander::{evaluate_partition, Error, Instance};

const EXIT_NO_SOLUTION: u8 = 3;
const EXIT_USAGE: u8 = 1;
const EXIT_UNSUPPORTED: u8 = 2;
const EXIT_DISCREPANCY: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "gerrymander",
    version,
    about = "Exact gerrymandering solvers for paths and trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the target color can win a plurality of districts.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        /// Write a witness partition here when one exists.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Check a partition against an instance.
    Eval { instance: PathBuf, partition: PathBuf },
    /// Generate hardness-construction instances.
    #[command(subcommand)]
    Gen(Gen),
    /// Compare the fast solvers with brute force on random trees.
    Crosscheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        colors: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// Path instance from a regular graph and a clique size.
    CliquePath {
        /// Source graph: `n <count>` then `e <a> <b>` lines.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        l: usize,
        /// Splice the components into a single path.
        #[arg(long)]
        connected: bool,
        /// Clique to turn into a witness partition, e.g. `0,1,2`.
        #[arg(long, value_delimiter = ',')]
        witness_clique: Option<Vec<usize>>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Three-color tree from a multiset of integers.
    PartitionTree {
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<u64>,
        /// 1-based indices of a half-sum subset, e.g. `1,4`.
        #[arg(long, value_delimiter = ',')]
        witness_indices: Option<Vec<usize>>,
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(Debug, Args)]
struct Outputs {
    /// Instance file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Witness partition file, required with a witness option.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotATree
            | Error::DisconnectedInstance
            | Error::ColorCount { .. }
            | Error::UnsupportedShape(_)
            | Error::Capacity(_) => EXIT_UNSUPPORTED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// What to print and how to exit.
struct Outcome {
    code: u8,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    /// Nonzero exits keep standard output empty.
    fn fail(code: u8, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn format_report(inst: &Instance, report: &EvalReport) -> String {
    let mut out = format!("valid {}\n", report.valid);
    if let Some(v) = &report.violation {
        out.push_str(&format!("violation {v}\n"));
    }
    out.push_str(&format!("solution {}\n", report.is_solution));
    out.push_str(&format!(
        "uniquely {} {}\n",
        inst.color_name(inst.target),
        report.uniquely_p_count
    ));
    for (c, &count) in report.colored_count.iter().enumerate() {
        if count > 0 || c == inst.target.index() {
            out.push_str(&format!("colored {} {count}\n", inst.colors[c]));
        }
    }
    out
}

fn emit(instance: &Instance, header: &str, out: &Outputs, witness: Option<String>) -> Result<Outcome, Failure> {
    let text = format!("{header}{}", write_instance(instance));
    if let Some(w) = witness {
        let path = out
            .witness_out
            .as_ref()
            .ok_or_else(|| usage("--witness-out is required when a witness is requested"))?;
        write(path, &w)?;
    }
    match &out.output {
        Some(path) => {
            write(path, &text)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Solve {
            instance,
            algorithm,
            witness,
        } => {
            let inst = load_instance(&instance)?;
            let (used, result) = solve(&inst, algorithm)?;
            if !result.answer {
                return Ok(Outcome::fail(
                    EXIT_NO_SOLUTION,
                    format!("answer no\nalgorithm {used}\nexamined {}\n", result.partitions_examined),
                ));
            }
            if let (Some(path), Some(w)) = (&witness, &result.witness) {
                write(path, &write_partition(w))?;
            }
            Ok(Outcome::ok(format!(
                "answer yes\nalgorithm {used}\nexamined {}\n",
                result.partitions_examined
            )))
        }
        Command::Eval { instance, partition } => {
            let inst = load_instance(&instance)?;
            let part =
                parse_partition(&read(&partition)?).map_err(|e| usage(format!("{}: {e}", partition.display())))?;
            let report = evaluate_partition(&inst, &part);
            let text = format_report(&inst, &report);
            Ok(if report.is_solution {
                Outcome::ok(text)
            } else {
                Outcome::fail(EXIT_NO_SOLUTION, text)
            })
        }
        Command::Gen(Gen::CliquePath {
            graph,
            l,
            connected,
            witness_clique,
            out,
        }) => {
            let source = parse_source_graph(&read(&graph)?).map_err(|e| usage(format!("{}: {e}", graph.display())))?;
            let cp = clique_to_path(&source, l, connected)?;
            let witness = match &witness_clique {
                Some(k) => Some(write_partition(&cp.witness(&source, k)?)),
                None => None,
            };
            let p = cp.params;
            let header = format!(
                "# clique-path n={} m={} d={} l={} N={} M={} z={} k={}\n",
                p.n, p.m, p.d, p.l, p.big_n, p.big_m, p.z, p.k
            );
            emit(&cp.instance, &header, &out, witness)
        }
        Command::Gen(Gen::PartitionTree {
            elements,
            witness_indices,
            out,
        }) => {
            let pt = partition_to_tree(&elements)?;
            let witness = match &witness_indices {
                Some(i) => Some(write_partition(&pt.witness(i)?)),
                None => None,
            };
            let p = &pt.params;
            let header = format!(
                "# partition-tree n={} s={} scale={} N={} M={} k={}\n",
                p.n, p.s, p.scale, p.big_n, p.big_m, p.k
            );
            emit(&pt.instance, &header, &out, witness)
        }
        Command::Crosscheck {
            n,
            colors,
            trials,
            seed,
        } => {
            let report = crosscheck(n, colors, trials, seed)?;
            let summary = format!(
                "trials {} comparisons {} discrepancies {}\n",
                report.trials,
                report.comparisons,
                report.discrepancies.len()
            );
            if report.discrepancies.is_empty() {
                return Ok(Outcome::ok(summary));
            }
            let mut text = String::new();
            for d in &report.discrepancies {
                text.push_str(&format!("# {}: {}\n", d.algorithm, d.detail));
                text.push_str(&write_instance(&d.instance));
            }
            Ok(Outcome {
                code: EXIT_DISCREPANCY,
                stdout: text,
                stderr: summary,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = run(cli).unwrap_or_else(|f| Outcome::fail(f.code, format!("error: {}\n", f.message)));
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code)
}
