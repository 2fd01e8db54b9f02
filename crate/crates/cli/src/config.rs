//! `key = value` parameter files.
//!
//! Blank lines and `#` comments are ignored; a `#` after a value also
//! starts a comment. Keys are the long flag names without dashes
//! (`v0`, `sigma`, `with_oracle`, ...); `-` and `_` are interchangeable.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

/// Values that may come from a config file or flags. `None` means "not
/// given here"; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub v0: Option<f64>,
    pub v1: Option<f64>,
    pub x0: Option<f64>,
    pub sigma: Option<f64>,
    pub mass: Option<f64>,
    pub hbar: Option<f64>,
    pub energy: Option<f64>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub count: Option<usize>,
    pub with_oracle: Option<bool>,
    pub output: Option<String>,
}

impl Settings {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(&self, over: &Settings) -> Settings {
        Settings {
            v0: over.v0.or(self.v0),
            v1: over.v1.or(self.v1),
            x0: over.x0.or(self.x0),
            sigma: over.sigma.or(self.sigma),
            mass: over.mass.or(self.mass),
            hbar: over.hbar.or(self.hbar),
            energy: over.energy.or(self.energy),
            from: over.from.or(self.from),
            to: over.to.or(self.to),
            count: over.count.or(self.count),
            with_oracle: over.with_oracle.or(self.with_oracle),
            output: over.output.clone().or_else(|| self.output.clone()),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| anyhow!("{key}: expected a number, got {v:?}"))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => bail!("{key}: expected true or false, got {v:?}"),
    }
}

pub fn parse(text: &str) -> Result<Settings> {
    let mut s = Settings::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let ctx = || format!("line {}", i + 1);
        match key.as_str() {
            "v0" => s.v0 = Some(parse_f64(&key, value).with_context(ctx)?),
            "v1" => s.v1 = Some(parse_f64(&key, value).with_context(ctx)?),
            "x0" => s.x0 = Some(parse_f64(&key, value).with_context(ctx)?),
            "sigma" => s.sigma = Some(parse_f64(&key, value).with_context(ctx)?),
            "mass" => s.mass = Some(parse_f64(&key, value).with_context(ctx)?),
            "hbar" => s.hbar = Some(parse_f64(&key, value).with_context(ctx)?),
            "energy" => s.energy = Some(parse_f64(&key, value).with_context(ctx)?),
            "from" => s.from = Some(parse_f64(&key, value).with_context(ctx)?),
            "to" => s.to = Some(parse_f64(&key, value).with_context(ctx)?),
            "count" => {
                let n = value
                    .parse::<usize>()
                    .map_err(|_| anyhow!("count: expected a positive integer, got {value:?}"))
                    .with_context(ctx)?;
                s.count = Some(n);
            }
            "with_oracle" => s.with_oracle = Some(parse_bool(&key, value).with_context(ctx)?),
            "output" => s.output = Some(value.to_string()),
            other => bail!("line {}: unknown key {other:?}", i + 1),
        }
    }
    Ok(s)
}

pub fn load(path: &Path) -> Result<Settings> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}
