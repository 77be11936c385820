//! Config files equivalent to command-line flags.
//!
//! A config file (TOML, or JSON when the extension is `.json`) may set the
//! global flags and, for invocations without a subcommand, the command and
//! its flags:
//!
//! ```toml
//! out = "results"
//! format = "csv"
//! seed = 7
//! command = ["hodograph", "run"]
//!
//! [args]
//! F-index = 3
//! r = 0.05
//! t = "0:2:0.5"
//! ```
//!
//! Every entry becomes a `--key=value` token. Booleans become bare flags when
//! true and are dropped when false; arrays repeat the flag. Global entries are
//! placed before the command-line arguments, so flags given there win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    out: Option<String>,
    format: Option<String>,
    seed: Option<u64>,
    #[serde(default)]
    command: Vec<String>,
    #[serde(default)]
    args: BTreeMap<String, Value>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let err = |message: String| CliError::Config {
            path: path.to_path_buf(),
            message,
        };
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| err(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| err(e.to_string()))
        }
    }

    /// Tokens for the global flags.
    pub fn global_tokens(&self) -> Vec<OsString> {
        let mut out = Vec::new();
        if let Some(dir) = &self.out {
            out.push(format!("--out={dir}").into());
        }
        if let Some(format) = &self.format {
            out.push(format!("--format={format}").into());
        }
        if let Some(seed) = self.seed {
            out.push(format!("--seed={seed}").into());
        }
        out
    }

    /// Tokens for the command and its flags, empty if no command is set.
    pub fn command_tokens(&self, path: &Path) -> Result<Vec<OsString>, CliError> {
        if self.command.is_empty() {
            if !self.args.is_empty() {
                return Err(CliError::Config {
                    path: path.to_path_buf(),
                    message: "`args` given without `command`".into(),
                });
            }
            return Ok(Vec::new());
        }
        let mut out: Vec<OsString> = self.command.iter().map(OsString::from).collect();
        for (key, value) in &self.args {
            push_flag(&mut out, key, value).map_err(|message| CliError::Config {
                path: path.to_path_buf(),
                message,
            })?;
        }
        Ok(out)
    }
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn push_flag(out: &mut Vec<OsString>, key: &str, value: &Value) -> Result<(), String> {
    match value {
        Value::Bool(true) => out.push(format!("--{key}").into()),
        Value::Bool(false) | Value::Null => {}
        Value::Array(items) => {
            for item in items {
                let s = scalar(item).ok_or_else(|| format!("`{key}` must hold strings or numbers"))?;
                out.push(format!("--{key}={s}").into());
            }
        }
        Value::Object(_) => return Err(format!("`{key}` cannot be a table")),
        other => out.push(format!("--{key}={}", scalar(other).expect("scalar value")).into()),
    }
    Ok(())
}
