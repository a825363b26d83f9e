//! JSON run configuration: one document per invocation, with command-line
//! flags overriding top-level keys.

use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Reads the config document from a path, `-` for stdin, or `{}` when absent.
pub fn load(path: Option<&Path>) -> Result<Map<String, Value>, CliError> {
    let text = match path {
        None => return Ok(Map::new()),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
    };
    match serde_json::from_str::<Value>(&text)? {
        Value::Object(m) => Ok(m),
        other => Err(CliError::Config(format!(
            "config must be a JSON object, got {}",
            kind(&other)
        ))),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// The merged configuration a command runs against.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub params: Map<String, Value>,
}

impl RunConfig {
    pub fn new(command: &str, mut params: Map<String, Value>, seed_flag: Option<u64>) -> Result<Self, CliError> {
        let seed = match seed_flag {
            Some(s) => s,
            None => match params.get("seed") {
                None => 0,
                Some(v) => v
                    .as_u64()
                    .ok_or_else(|| CliError::Config(format!("seed must be a nonnegative integer, got {v}")))?,
            },
        };
        params.insert("seed".into(), Value::from(seed));
        Ok(Self {
            command: command.to_string(),
            seed,
            params,
        })
    }

    /// Sets a top-level key (flags win over the document).
    pub fn set(&mut self, key: &str, value: Value) {
        self.params.insert(key.to_string(), value);
    }

    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| CliError::Config(format!("{}: {e}", self.command)))
    }

    /// SHA-256 of the canonical (key-sorted, compact) JSON of the merged config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&Value::Object(self.params.clone()))
            .expect("JSON values always serialise");
        hex::encode(Sha256::digest(format!("{}\n{canonical}", self.command).as_bytes()))
    }
}

/// A scalar or a list of scalars.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Size limits checked before a computation starts.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    #[serde(default = "default_ball_points")]
    pub max_ball_points: u128,
    #[serde(default = "default_max_support")]
    pub max_support: usize,
    /// Advisory only; recorded in the config hash.
    #[serde(default)]
    pub time_hint: Option<f64>,
}

fn default_ball_points() -> u128 {
    orlicz_core::lattice::DEFAULT_BALL_BUDGET
}

fn default_max_support() -> usize {
    orlicz_core::sampling::DEFAULT_MAX_SUPPORT
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            max_ball_points: default_ball_points(),
            max_support: default_max_support(),
            time_hint: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_and_hash_is_stable() {
        let mut m = Map::new();
        m.insert("p".into(), Value::from(2.0));
        m.insert("seed".into(), Value::from(5));
        let mut a = RunConfig::new("classify", m.clone(), None).unwrap();
        assert_eq!(a.seed, 5);
        let b = RunConfig::new("classify", m.clone(), Some(9)).unwrap();
        assert_eq!(b.seed, 9);
        assert_ne!(a.hash(), b.hash());
        let h = a.hash();
        a.set("p", Value::from(2.0));
        assert_eq!(a.hash(), h);
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn rejects_non_object_documents() {
        let dir = std::env::temp_dir().join("orlicz-cli-config-test.json");
        std::fs::write(&dir, "[1, 2]").unwrap();
        assert!(matches!(load(Some(&dir)), Err(CliError::Config(_))));
        std::fs::remove_file(&dir).ok();
    }
}
