//! Plain `key = value` config files.
//!
//! Blank lines and lines starting with `#` are skipped. Keys use the long
//! flag names, with `-` and `_` interchangeable. Values given on the command
//! line take precedence.

use std::collections::BTreeMap;
use std::path::Path;

pub const KEYS: &[&str] = &[
    "gamma",
    "a",
    "t",
    "measures",
    "format",
    "output",
    "workers",
    "abs-tol",
    "rel-tol",
    "base-order",
    "max-subdivisions",
    "side",
    "window-min",
    "window-max",
    "ceiling",
    "revival-threshold",
    "slope-step",
    "tol",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{}'", i + 1, k.trim()));
            }
            let value = v.trim().trim_matches('"').to_string();
            if entries.insert(key.clone(), value).is_some() {
                return Err(format!("line {}: duplicate key '{key}'", i + 1));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config '{}': {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// `flag` if given, else the parsed config value, else `None`.
    pub fn merge<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| format!("config key '{key}': {e}")),
        }
    }
}
