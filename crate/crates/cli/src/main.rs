//! `nfamb`: reproduce near-field ambiguity figures and tables as CSV and JSON.
//!
//! Exit codes: 0 on success, 1 on a computational failure, 2 on a usage error.
//! Files already written by a failing invocation are removed.

// `!(x > 1.0)` is used on purpose: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use nearfield_core::export::config_hash;

use crate::config::{Cli, Command, FileConfig, Settings};
use crate::output::Outputs;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(nearfield_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Compute(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<nearfield_core::Error> for CliError {
    fn from(e: nearfield_core::Error) -> Self {
        Self::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

fn run(cli: &Cli, settings: &Settings) -> Result<Outputs, (CliError, Option<Outputs>)> {
    let hash = config_hash(settings).map_err(|e| (e.into(), None))?;
    let mut out = Outputs::new(&settings.out).map_err(|e| (e, None))?;
    let result = match &cli.command {
        Command::Af(_) => commands::af(settings, &hash, &mut out),
        Command::Compare(_) => commands::compare(settings, &hash, &mut out),
        Command::Metrics(_) => commands::metrics(settings, &hash, &mut out),
        Command::Sweep(_) => commands::sweep(settings, &hash, &mut out),
        Command::Minbw(_) => commands::minbw(settings, &hash, &mut out),
    };
    match result {
        Ok(()) => Ok(out),
        Err(e) => Err((e, Some(out))),
    }
}

fn usage_error(cli: &Cli, msg: &str) -> ExitCode {
    let mut cmd = Cli::command();
    cmd.build();
    let usage = match cmd.find_subcommand_mut(cli.command.name()) {
        Some(sub) => sub.render_usage(),
        None => cmd.render_usage(),
    };
    eprintln!("error: {msg}\n\n{usage}\n\nFor more information, try '--help'.");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    nearfield_core::init_threads_from_env();
    let file = match &cli.config {
        Some(path) => match FileConfig::load(path) {
            Ok(f) => f,
            Err(e) => return usage_error(&cli, &e.to_string()),
        },
        None => FileConfig::default(),
    };
    let settings = match Settings::resolve(&cli.command, file) {
        Ok(s) => s,
        Err(e) => return usage_error(&cli, &e.to_string()),
    };
    match run(&cli, &settings) {
        Ok(out) => {
            for p in out.written() {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err((e, out)) => {
            if let Some(out) = out {
                out.roll_back();
            }
            match e {
                CliError::Usage(m) => usage_error(&cli, &m),
                other => {
                    eprintln!("error: {other}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
