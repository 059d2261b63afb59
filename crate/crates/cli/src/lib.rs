//! The `jetmorse` command line: one experiment config in, one result record out.
//!
//! ```text
//! jetmorse <command> --config <file> [--seed N] [--output <path>] [--format json|csv]
//! ```
//!
//! Exit status 0 on success, 2 on invalid input, 3 when a numerical
//! diagnostic fails (the record is still written), 1 on i/o errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::Parser;
use serde_json::json;

use commands::{dispatch, Outcome};
use config::{Command, ExperimentConfig};
use error::{CliError, CliResult};
use output::{render, timestamp, Provenance, ResultRecord, SweepRow};

#[derive(Debug, Parser)]
#[command(name = "jetmorse", version, about = "Holomorphic Morse inequalities on jet towers")]
pub struct Cli {
    /// dim, jets, morse, bounded, closure, gg or certify
    pub command: String,
    /// JSON experiment config
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the record here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// json (default) or csv
    #[arg(long)]
    pub format: Option<String>,
}

/// A finished run: the rendered record plus any failed diagnostic.
pub struct Report {
    pub text: String,
    pub output: Option<PathBuf>,
    pub diagnostic: Option<String>,
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    let command: Command = cli.command.parse()?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| CliError::key("config", format!("cannot read {}: {e}", cli.config.display())))?;
    let mut cfg = ExperimentConfig::parse(&text, Some(command))?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let format = match &cli.format {
        Some(f) => f.parse()?,
        None => cfg.format.unwrap_or_default(),
    };
    let output = cli.output.clone().or_else(|| cfg.output.clone().map(PathBuf::from));
    let (record, sweep, diagnostic) = run_config(&cfg)?;
    Ok(Report { text: render(&record, sweep.as_deref(), format)?, output, diagnostic })
}

/// Runs a config, expanding a ranged parameter into a sweep.
pub fn run_config(cfg: &ExperimentConfig) -> CliResult<(ResultRecord, Option<Vec<SweepRow>>, Option<String>)> {
    let mut notes = vec![];
    let (payload, details, sweep, diagnostic) = match cfg.ranged()? {
        None => {
            let out = dispatch(cfg.command, cfg.params.clone(), cfg.seed)?;
            (out.payload, out.provenance, None, out.diagnostic)
        }
        Some((key, values)) => {
            let mut runs = vec![];
            let mut rows = vec![];
            let mut details = serde_json::Map::new();
            let mut diagnostic = None;
            for v in values {
                let Outcome { payload, provenance, summary, diagnostic: d } =
                    dispatch(cfg.command, cfg.with_param(&key, v.clone()).params, cfg.seed)?;
                if let Some(d) = d {
                    notes.push(format!("{key} = {v}: {d}"));
                    diagnostic.get_or_insert(d);
                }
                details = provenance;
                runs.push(json!({ "param": v, "summary": summary_json(&summary), "result": payload }));
                rows.push(SweepRow { param: v, summary });
            }
            (json!({ "parameter": key, "runs": runs }), details, Some(rows), diagnostic)
        }
    };
    if sweep.is_none() {
        if let Some(d) = &diagnostic {
            notes.push(d.clone());
        }
    }
    if cfg.command == Command::Gg || cfg.command == Command::Certify {
        notes.push("relative O(1/log k) error terms are not quantified".into());
    }
    let record = ResultRecord {
        command: cfg.command.name().into(),
        config_hash: cfg.hash(),
        timestamp: timestamp(),
        payload,
        provenance: Provenance::new(cfg.seed, &details),
        notes,
    };
    Ok((record, sweep, diagnostic))
}

fn summary_json(s: &commands::Summary) -> serde_json::Value {
    json!({ "value": s.value, "stderr": s.stderr, "reference": s.reference, "ratio": s.ratio, "ratio_stderr": s.ratio_stderr })
}

/// Parses arguments, runs, writes the record and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let fail = |e: CliError| {
        eprintln!("{}", e.to_json());
        e.exit_code()
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let written = match &report.output {
        Some(path) => std::fs::write(path, &report.text).map_err(CliError::from),
        None => {
            print!("{}", report.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        return fail(e);
    }
    match report.diagnostic {
        Some(d) => fail(CliError::Numerical(d)),
        None => 0,
    }
}

