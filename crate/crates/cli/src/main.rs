use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cayley_cli::{list_rows, parse_config_text, parse_num, read_report, render, run, CliError, Format, RunConfig, DEFAULT_SEED, SEED_ENV};
use clap::{Args, Parser, Subcommand};

/// Exact verification of equivariant birational maps and Cayley transforms.
#[derive(Parser)]
#[command(name = "cayley", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every construction id with its anchors.
    List,
    /// Run constructions and emit a report; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Re-render a JSON report written by `verify`.
    Report(ReportArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated construction ids, or `all` (mutants are never in `all`).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Seed for every random choice; falls back to $CAYLEY_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Random points per spot check.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Maximum terms of any intermediate polynomial.
    #[arg(long)]
    term_budget: Option<usize>,
    /// Flat `key = value` file (seed, trials, term_budget, format, only); flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON report from an earlier `verify --format json`.
    input: PathBuf,
    #[arg(long, default_value = "md")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes to stdout, tolerating a closed pipe (`cayley list | head`).
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            write_stdout(text);
            Ok(())
        }
    }
}

fn verify(a: VerifyArgs) -> Result<bool, CliError> {
    let file = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            parse_config_text(&text)?
        }
        None => Default::default(),
    };
    let env_seed = std::env::var(SEED_ENV).ok().map(|s| parse_num::<u64>(SEED_ENV, &s)).transpose()?;
    let file_num = |k: &str| file.get(k).map(|v| parse_num::<u64>(k, v)).transpose();
    let seed = match (a.seed, file_num("seed")?, env_seed) {
        (Some(s), _, _) | (None, Some(s), _) | (None, None, Some(s)) => s,
        _ => DEFAULT_SEED,
    };
    let defaults = RunConfig::default();
    let trials = match a.trials {
        Some(t) => t,
        None => file.get("trials").map(|v| parse_num("trials", v)).transpose()?.unwrap_or(defaults.trials),
    };
    let term_budget = match a.term_budget {
        Some(t) => t,
        None => file.get("term_budget").map(|v| parse_num("term_budget", v)).transpose()?.unwrap_or(defaults.term_budget),
    };
    let format = match a.format {
        Some(f) => f,
        None => file.get("format").map(|v| v.parse().map_err(CliError::Config)).transpose()?.unwrap_or(Format::Json),
    };
    let constructions = if !a.only.is_empty() {
        a.only
    } else if let Some(v) = file.get("only") {
        vec![v.clone()]
    } else {
        defaults.constructions
    };
    let cfg = RunConfig { seed, trials, term_budget, constructions };
    let report = run(&cfg)?;
    emit(&render(&report, format), a.out.as_ref())?;
    for c in report.certificates.iter().filter(|c| c.failed()) {
        let names: Vec<&str> = c.verdicts.iter().filter(|v| !v.pass).map(|v| v.check.as_str()).collect();
        eprintln!("FAIL {}: {}", c.id, names.join(", "));
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::List => {
            let rows = list_rows();
            let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let mut text = String::new();
            for (id, anchors, note) in rows {
                let note = if note.is_empty() { String::new() } else { format!("  [{note}]") };
                text.push_str(&format!("{id:width$}  {anchors}{note}\n"));
            }
            write_stdout(&text);
            Ok(true)
        }
        Cmd::Verify(a) => verify(a),
        Cmd::Report(a) => read_report(&a.input).and_then(|r| emit(&render(&r, a.format), a.out.as_ref()).map(|()| true)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
