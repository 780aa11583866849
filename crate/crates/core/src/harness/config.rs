//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("{key}: {value:?} is not valid")]
    Value { key: String, value: String },
}

pub const KEYS: &[&str] =
    &["command", "cap", "stage", "depth", "branching", "levels", "oracle", "seed", "out", "trace", "sigma", "fixture"];

/// Every parameter a command may use. Unset keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub command: String,
    pub cap: u64,
    pub stage: u64,
    pub depth: usize,
    pub branching: u64,
    pub levels: usize,
    pub oracle: String,
    pub seed: u64,
    pub out: Option<String>,
    pub trace: Option<String>,
    pub sigma: Option<String>,
    pub fixture: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: String::new(),
            cap: 10_000,
            stage: 10_000,
            depth: 4,
            branching: 3,
            levels: 2,
            oracle: "zeros".into(),
            seed: 0,
            out: None,
            trace: None,
            sigma: None,
            fixture: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value { key: key.into(), value: value.into() })
}

impl ExperimentConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "command" => self.command = value.into(),
            "cap" => self.cap = num(key, value)?,
            "stage" => self.stage = num(key, value)?,
            "depth" => self.depth = num(key, value)?,
            "branching" => self.branching = num(key, value)?,
            "levels" => self.levels = num(key, value)?,
            "oracle" => self.oracle = value.into(),
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = Some(value.into()),
            "trace" => self.trace = Some(value.into()),
            "sigma" => self.sigma = Some(value.into()),
            "fixture" => self.fixture = Some(value.into()),
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        if matches!(key, "cap" | "stage" | "branching") && value == "0" {
            return Err(ConfigError::Value { key: key.into(), value: value.into() });
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(k + 1))?;
            cfg.set(key.trim(), value)?;
        }
        Ok(cfg)
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("command", self.command.clone());
        m.insert("cap", self.cap.to_string());
        m.insert("stage", self.stage.to_string());
        m.insert("depth", self.depth.to_string());
        m.insert("branching", self.branching.to_string());
        m.insert("levels", self.levels.to_string());
        m.insert("oracle", self.oracle.clone());
        m.insert("seed", self.seed.to_string());
        for (k, v) in [("out", &self.out), ("trace", &self.trace), ("sigma", &self.sigma), ("fixture", &self.fixture)] {
            if let Some(v) = v {
                m.insert(k, v.clone());
            }
        }
        m
    }

    /// The parameters that determine results, in a fixed order; output paths
    /// are left out.
    pub fn canonical(&self) -> String {
        self.to_map()
            .into_iter()
            .filter(|(k, _)| !matches!(*k, "out" | "trace"))
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.to_map() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::default();
        c.set("command", "tower").unwrap();
        c.set("levels", "3").unwrap();
        c.set("out", "r.txt").unwrap();
        assert_eq!(ExperimentConfig::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(ExperimentConfig::parse("nonsense"), Err(ConfigError::Syntax(1)));
        assert!(matches!(ExperimentConfig::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(ExperimentConfig::parse("cap = 0"), Err(ConfigError::Value { .. })));
    }

    #[test]
    fn canonical_ignores_paths() {
        let a = ExperimentConfig::parse("out = a\nseed = 3").unwrap();
        let b = ExperimentConfig::parse("out = b\nseed = 3").unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }
}
