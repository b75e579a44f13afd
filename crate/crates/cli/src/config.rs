use std::path::Path;

use crate::error::{CliError, CliResult};

/// Run configuration loaded from a JSON file. Keys mirror the long flag
/// names exactly (`"c"`, `"C"`, `"f0"`, `"u-span"`, `"tol"`, `"out"`, ...);
/// a flag given on the command line always overrides the file value.
pub struct Config(serde_json::Value);

pub fn load(path: Option<&Path>) -> CliResult<Config> {
    let Some(path) = path else {
        return Ok(Config(serde_json::Value::Null));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    if !value.is_object() {
        return Err(CliError::usage(format!(
            "config {} must be a JSON object mapping flag names to values",
            path.display()
        )));
    }
    Ok(Config(value))
}

impl Config {
    pub fn f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(|v| v.as_f64())
    }

    pub fn usize(&self, key: &str) -> Option<usize> {
        self.0.get(key).and_then(|v| v.as_u64()).map(|v| v as usize)
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).and_then(|v| v.as_str()).map(str::to_owned)
    }

    /// A two-element array of strings, e.g. `"perturb": ["gauss", "1e-3"]`.
    pub fn string_pair(&self, key: &str) -> Option<(String, String)> {
        let arr = self.0.get(key)?.as_array()?;
        match arr.as_slice() {
            [a, b] => Some((a.as_str()?.to_owned(), b.as_str()?.to_owned())),
            _ => None,
        }
    }
}

/// Flag value wins over config value.
pub fn resolve<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

pub fn require<T>(value: Option<T>, name: &str) -> CliResult<T> {
    value.ok_or_else(|| {
        CliError::usage(format!("missing required parameter --{name} (flag or config key \"{name}\")"))
    })
}
