use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

/// A configuration key with its default value.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
}

pub const fn key(name: &'static str, default: &'static str) -> Key {
    Key { name, default }
}

/// Flat `key = value` configuration resolved against a list of known keys.
///
/// Lines starting with `#` and blank lines are ignored. Values from the
/// file override the defaults; command-line overrides win over both.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

/// Parses the text of a configuration file.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Turns trailing `--key value` or `--key=value` arguments into entries.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let name = arg
            .strip_prefix("--")
            .ok_or_else(|| CliError::Usage(format!("unexpected argument {arg:?}")))?;
        if let Some((k, v)) = name.split_once('=') {
            out.push((k.replace('-', "_"), v.to_string()));
        } else {
            let v = it
                .next()
                .ok_or_else(|| CliError::Usage(format!("missing value for --{name}")))?;
            out.push((name.replace('-', "_"), v.clone()));
        }
    }
    Ok(out)
}

impl Config {
    pub fn resolve(
        keys: &[Key],
        file: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> = keys
            .iter()
            .map(|k| (k.name.to_string(), k.default.to_string()))
            .collect();
        let mut entries = Vec::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            entries.extend(parse_entries(&text)?);
        }
        entries.extend(overrides.iter().cloned());
        for (k, v) in entries {
            match values.get_mut(&k) {
                Some(slot) => *slot = v,
                None => return Err(CliError::Usage(format!("unknown key {k:?}"))),
            }
        }
        Ok(Self { values })
    }

    pub fn raw(&self, name: &str) -> &str {
        self.values
            .get(name)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("key {name} is not declared"))
    }

    pub fn set(&mut self, name: &str, value: impl Display) {
        if let Some(slot) = self.values.get_mut(name) {
            *slot = value.to_string();
        }
    }

    pub fn get<T: FromStr>(&self, name: &str) -> Result<T, CliError> {
        let raw = self.raw(name);
        raw.parse()
            .map_err(|_| CliError::Usage(format!("bad value {raw:?} for key {name:?}")))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, name: &str) -> Result<Vec<T>, CliError> {
        let raw = self.raw(name);
        if raw.is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad list item {v:?} for key {name:?}")))
            })
            .collect()
    }

    /// `key = value` lines in key order.
    pub fn render(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
