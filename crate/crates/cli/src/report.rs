use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use qnogo_core::states::Qubit;
use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

pub const TOOL: &str = "qnogo";

/// What a subcommand produced, before formatting.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub status: &'static str,
    pub exit_code: u8,
    pub result: Value,
    pub human: String,
    /// Only the fidelity sweep has a tabular form.
    pub csv: Option<String>,
}

impl Outcome {
    pub fn envelope(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "status": self.status,
            "exit_code": self.exit_code,
            "result": self.result,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Human => Ok(self.human.clone()),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope()).expect("json values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::Usage(format!("--format csv is not available for {}", self.command))),
        }
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn qubit_json(q: &Qubit) -> Value {
    json!({
        "alpha": complex_json(q.alpha()),
        "beta": complex_json(q.beta()),
        "text": q.to_string(),
    })
}

/// Writes to `path` through a temporary file in the same directory, so readers
/// never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit(contents: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
