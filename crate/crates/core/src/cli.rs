//! `tro` command line: ingest, validate, detect, vocab and export.
//!
//! Exit codes: 0 success, 1 validation ERRORs present, 2 usage, I/O or
//! parse failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::coi::{detect_conflicts, findings_to_csv, findings_to_json};
use crate::ingest::ingest_csv;
use crate::mint::MintConfig;
use crate::ns;
use crate::rdf::{canonical_ntriples, parse_turtle, serialize_turtle, Graph, Iri};
use crate::validate::{check, max_severity, Severity};
use crate::vocab::{builtin_vocabulary, vocabulary_graph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tro",
    version,
    about = "Build, validate and query TRO knowledge graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FindingsFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Ntriples,
    Turtle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph from a contracts CSV and a roles CSV and write it as Turtle
    Ingest {
        #[arg(long)]
        contracts: PathBuf,
        #[arg(long)]
        roles: PathBuf,
        #[arg(long, default_value = ns::DATA_BASE)]
        base: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a Turtle graph and print the quality report
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report_format: ReportFormat,
    },
    /// Validate, then write candidate conflict-of-interest findings
    Detect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FindingsFormat::Json)]
        format: FindingsFormat,
    },
    /// Write the builtin vocabulary as a Turtle ontology
    Vocab {
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-serialize a Turtle graph
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Ntriples)]
        format: GraphFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs the CLI with process stdout/stderr. `args` includes the program name.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_turtle(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    parse_turtle(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Ingest {
            contracts,
            roles,
            base,
            out: target,
        } => {
            let base = Iri::new(base).context("invalid --base")?;
            let cfg = MintConfig::new(base).context("invalid --base")?;
            let (graph, report) = ingest_csv(&read(&contracts)?, &read(&roles)?, &cfg)?;
            write(&target, &serialize_turtle(&graph))?;
            writeln!(out, "{report}")?;
            writeln!(out, "wrote {} triples to {}", graph.len(), target.display())?;
            Ok(EXIT_OK)
        }
        Command::Validate {
            input,
            report_format,
        } => {
            let graph = load_turtle(&input)?;
            let report = check(&graph, &builtin_vocabulary());
            match report_format {
                ReportFormat::Text => write!(out, "{}", report.to_text())?,
                ReportFormat::Json => writeln!(out, "{}", report.to_json())?,
            }
            let counts = report.counts();
            writeln!(
                err,
                "{} error(s), {} warning(s), {} info",
                counts.error, counts.warn, counts.info
            )?;
            Ok(if max_severity(&report) == Some(Severity::Error) {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            })
        }
        Command::Detect {
            input,
            out: target,
            format,
        } => {
            let graph = load_turtle(&input)?;
            let report = check(&graph, &builtin_vocabulary());
            if max_severity(&report) == Some(Severity::Error) {
                write!(err, "{}", report.to_text())?;
                writeln!(
                    err,
                    "aborting: {} validation error(s)",
                    report.counts().error
                )?;
                return Ok(EXIT_VALIDATION);
            }
            let findings = detect_conflicts(&graph);
            let rendered = match format {
                FindingsFormat::Json => format!("{}\n", findings_to_json(&findings)),
                FindingsFormat::Csv => findings_to_csv(&findings),
            };
            write(&target, &rendered)?;
            writeln!(
                out,
                "{} candidate finding(s) written to {}",
                findings.len(),
                target.display()
            )?;
            Ok(EXIT_OK)
        }
        Command::Vocab { out: target } => {
            write(
                &target,
                &serialize_turtle(&vocabulary_graph(&builtin_vocabulary())),
            )?;
            Ok(EXIT_OK)
        }
        Command::Export {
            input,
            format,
            out: target,
        } => {
            let graph = load_turtle(&input)?;
            let text = match format {
                GraphFormat::Ntriples => canonical_ntriples(&graph)?,
                GraphFormat::Turtle => serialize_turtle(&graph),
            };
            write(&target, &text)?;
            Ok(EXIT_OK)
        }
    }
}
