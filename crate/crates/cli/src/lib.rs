//! Driver for the `filpiv` command-line tool: configs, commands and
//! machine-readable outputs.

pub mod checks;
pub mod commands;
pub mod config;
pub mod output;

use serde::Serialize;

/// Exit codes of the tool.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const INVARIANT: i32 = 4;
}

/// Error surfaced to the user as JSON on stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { kind: "config", message: msg.into(), exit_code: exit::CONFIG }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError { kind: "io", message: msg.into(), exit_code: exit::CONFIG }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<filpiv::Error> for CliError {
    fn from(e: filpiv::Error) -> Self {
        if e.is_numeric() {
            CliError { kind: "numeric", message: e.to_string(), exit_code: exit::NUMERIC }
        } else {
            CliError { kind: "input", message: e.to_string(), exit_code: exit::CONFIG }
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} error: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}
