//! Workspace parsing, command dispatch and verification reports for the
//! `idealab` command-line tool.

pub mod anchors;
pub mod args;
pub mod commands;
pub mod report;
pub mod suite;
pub mod workspace;

use std::time::Instant;

use args::{Cli, Format};
use report::Report;
use workspace::Workspace;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl From<idealab_core::Error> for CliError {
    fn from(e: idealab_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Flags that do not change the computation are left out of the echo so
/// reports compare across machines.
pub fn command_echo(argv: &[String]) -> String {
    let mut out = Vec::new();
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        match a.as_str() {
            "--workspace" | "--out" | "--format" => {
                it.next();
            }
            "--timing" => {}
            s if s.starts_with("--workspace=") || s.starts_with("--out=") || s.starts_with("--format=") => {}
            s => out.push(s.to_string()),
        }
    }
    out.join(" ")
}

/// Parses the workspace, runs the command and renders the report.
pub fn execute(cli: &Cli, argv: &[String], env: &dyn Fn(&str) -> Option<String>) -> Result<(Report, String), CliError> {
    let path = cli.common.workspace.as_ref().ok_or_else(|| CliError::Input("--workspace is required".into()))?;
    let ws = Workspace::read(path, cli.common.universe.as_deref(), env)?;
    let start = Instant::now();
    let checks = commands::run(&ws, &cli.command)?;
    let elapsed = cli.common.timing.then(|| start.elapsed().as_millis() as u64);
    let report = Report::new(command_echo(argv), checks, ws.budgets.entries(), elapsed);
    let text = match cli.common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if let Some(out) = &cli.common.out {
        std::fs::write(out, &text).map_err(|source| CliError::Write { path: out.display().to_string(), source })?;
    }
    Ok((report, text))
}
