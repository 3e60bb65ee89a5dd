use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub error_estimates: BTreeMap<String, f64>,
    pub condition_flags: Vec<String>,
    pub warnings: Vec<String>,
}

/// Every JSON document written to stdout.
#[derive(Debug, Clone, Serialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Diagnostics,
}

impl OutputEnvelope {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        OutputEnvelope { command: command.into(), inputs, results, diagnostics: Diagnostics::default() }
    }

    pub fn estimate(mut self, name: impl Into<String>, v: f64) -> Self {
        self.diagnostics.error_estimates.insert(name.into(), v);
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Flags parse but do not describe a valid request.
    Usage(String),
    Compute(pantograph_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("Usage".to_string(), m.clone()),
            CliError::Compute(e) => {
                let dbg = format!("{e:?}");
                let kind = dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
                (kind, e.to_string())
            }
            CliError::Io(m) => ("Io".to_string(), m.clone()),
        };
        serde_json::json!({ "command": command, "error": { "kind": kind, "message": message } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<pantograph_core::Error> for CliError {
    fn from(e: pantograph_core::Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// 17 significant digits.
pub fn full(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds() {
        let e = CliError::from(pantograph_core::Error::RankAmbiguous { ratio: 1e-7 });
        assert_eq!(e.exit_code(), 1);
        assert_eq!(e.to_json("classify")["error"]["kind"], "RankAmbiguous");
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(full(0.1), "1.0000000000000001e-1");
    }
}
