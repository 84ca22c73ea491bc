//! `qgen` — the instructor-facing command line.
//!
//! Subcommands: `single` generates one record, `batch` processes a roster
//! into a line-delimited records file, `validate` re-checks an existing
//! records file against the truth-table oracle, and `show-laws` prints the
//! law table. Exit codes: 0 success, 1 validation failure, 2 usage or
//! configuration error, 3 I/O error.

use std::fmt;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eqgen::config::RunConfig;
use eqgen::laws::law_table;
use eqgen::logic::Syntax;
use eqgen::question::{
    generate_batch, generate_record, validate_records, write_records, GenerateError,
};
use eqgen::roster::{read_roster, RosterError};

/// Environment variable consulted when the config file sets no salt.
const SALT_ENV: &str = "QGEN_SALT";

#[derive(Parser)]
#[command(
    name = "qgen",
    version,
    about = "Deterministic generator of propositional logical-equivalence exercises"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the question record for one student key
    Single {
        /// Student key to hash (salted if a salt is configured)
        #[arg(long)]
        key: String,
        /// Config file (flat key = value lines)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Strip the solution trace for student-facing output
        #[arg(long)]
        no_solutions: bool,
    },
    /// Generate one record per roster entry and write a records file
    Batch {
        /// Roster CSV with header student_key,display_name
        #[arg(long)]
        roster: PathBuf,
        /// Output records file (one JSON record per line)
        #[arg(long)]
        out: PathBuf,
        /// Config file (flat key = value lines)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Strip the solution traces for student-facing output
        #[arg(long)]
        no_solutions: bool,
    },
    /// Re-validate an existing records file
    Validate {
        /// Records file produced by batch or single
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Print the law table with difficulty categories
    ShowLaws,
}

enum CliError {
    /// Bad configuration or input data — exit code 2.
    Config(String),
    /// Filesystem failure — exit code 3.
    Io(String),
    /// A record failed validation — exit code 1.
    Validation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        match e {
            GenerateError::Config(_) | GenerateError::Seed(_) => CliError::Config(e.to_string()),
            GenerateError::Oracle(_) | GenerateError::Gate { .. } => {
                CliError::Validation(e.to_string())
            }
        }
    }
}

impl From<RosterError> for CliError {
    fn from(e: RosterError) -> Self {
        match e {
            RosterError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Single {
            key,
            config,
            no_solutions,
        } => {
            let config = load_config(config.as_deref())?;
            let mut record = generate_record(&key, &config)?;
            if no_solutions {
                record.trace = None;
            }
            println!("{}", record.to_json());
            Ok(())
        }
        Command::Batch {
            roster,
            out,
            config,
            no_solutions,
        } => {
            let config = load_config(config.as_deref())?;
            let entries = read_roster(&roster)?;
            let (records, summary) = generate_batch(&entries, &config, !no_solutions)?;
            let file = fs::File::create(&out)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
            let mut writer = std::io::BufWriter::new(file);
            write_records(&mut writer, &records)
                .and_then(|()| writer.flush())
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
            println!("records: {}", summary.records);
            println!(
                "distinct pairs: {} (ratio {:.3})",
                summary.distinct_pairs,
                summary.distinct_ratio()
            );
            let laws = summary.laws_by_category;
            println!(
                "laws applied: easy {}, median {}, hard {}",
                laws.easy, laws.median, laws.hard
            );
            Ok(())
        }
        Command::Validate { input } => {
            let file = fs::File::open(&input)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.display())))?;
            let report = validate_records(BufReader::new(file))
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.display())))?;
            for outcome in &report.outcomes {
                let key = outcome.student_key.as_deref().unwrap_or("?");
                if outcome.passed() {
                    println!("line {}: ok ({key})", outcome.line);
                } else {
                    for issue in &outcome.issues {
                        println!("line {}: FAIL ({key}): {issue}", outcome.line);
                    }
                }
            }
            println!(
                "checked {} records: {} passed, {} failed",
                report.checked(),
                report.passed(),
                report.failed()
            );
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "{} of {} records failed validation",
                    report.failed(),
                    report.checked()
                )))
            }
        }
        Command::ShowLaws => {
            println!("{:>2}  {:<8}  {:<15}  schema", "id", "category", "name");
            for rule in law_table() {
                println!(
                    "{:>2}  {:<8}  {:<15}  {}",
                    rule.id,
                    rule.category().to_string(),
                    rule.name(),
                    rule.schema(Syntax::Unicode)
                );
            }
            Ok(())
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let mut config = match path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if config.salt.is_none() {
        if let Ok(salt) = std::env::var(SALT_ENV) {
            if !salt.is_empty() {
                config.salt = Some(salt);
            }
        }
    }
    Ok(config)
}
