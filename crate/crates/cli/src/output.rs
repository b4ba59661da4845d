//! CSV and JSON writers. Floats use 17 significant digits so reruns diff
//! byte for byte.

use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;
use std::path::Path;

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Result of one command: files to write, a JSON summary for stdout and
/// any invariant violations.
#[derive(Debug, Clone)]
pub struct CmdOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: Value,
    pub violations: Vec<String>,
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// CSV with `#` metadata lines, a header row and fixed-format floats.
pub fn csv<C: Serialize>(command: &str, config: &C, notes: &[String], columns: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    writeln!(out, "# filpiv {VERSION}").unwrap();
    writeln!(out, "# command: {command}").unwrap();
    writeln!(out, "# config: {}", serde_json::to_string(config).expect("config serialises")).unwrap();
    for n in notes {
        writeln!(out, "# {n}").unwrap();
    }
    writeln!(out, "{}", columns.join(",")).unwrap();
    for r in rows {
        debug_assert_eq!(r.len(), columns.len());
        let line: Vec<String> = r.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(out, "{}", line.join(",")).unwrap();
    }
    out
}

/// JSON document with the artifact version and resolved config embedded.
pub fn json_doc<C: Serialize>(command: &str, config: &C, result: Value) -> String {
    let doc = json!({
        "artifact": { "name": "filpiv", "version": VERSION },
        "command": command,
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serialises");
    s.push('\n');
    s
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    for a in artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "nan");
        for &x in &[0.1, 1.0 / 3.0, 6.02214076e23, -1e-300] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let text = csv("integrate", &json!({"k": 1}), &["note".into()], &["s", "x"], &[vec![0.0, 1.5]]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# filpiv {VERSION}"));
        assert_eq!(lines[2], "# config: {\"k\":1}");
        assert_eq!(lines[4], "s,x");
        assert_eq!(lines[5], "0.0000000000000000e0,1.5000000000000000e0");
    }
}
