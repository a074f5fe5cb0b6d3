//! Run configuration: defaults, then a flat `key = value` file, then flags.
//!
//! Recognized keys: `C`, `K`, `tolerance`, `ceiling_all`, `ceiling_nc`,
//! `ceiling_pair`, `format`. Blank lines and `#` comments are skipped.

use std::path::{Path, PathBuf};

use fml_core::bounds::{BoundConfig, DEFAULT_C, DEFAULT_K};
use fml_core::kolmogorov::DEFAULT_TOLERANCE;
use fml_core::Ceilings;

use crate::args::{Format, GlobalArgs};
use crate::CliError;

pub const CONFIG_ENV: &str = "FML_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub constant_c: f64,
    pub constant_k: f64,
    pub tolerance: f64,
    pub ceilings: Ceilings,
    /// `None` lets each subcommand pick its natural format.
    pub format: Option<Format>,
    /// Nothing in the pipeline draws random numbers; kept for reports.
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            constant_c: DEFAULT_C,
            constant_k: DEFAULT_K,
            tolerance: DEFAULT_TOLERANCE,
            ceilings: Ceilings::default(),
            format: None,
            deterministic: true,
        }
    }
}

impl RunConfig {
    /// Resolves the configuration for one invocation. `env_path` is the
    /// value of `$FML_CONFIG`, consulted only without `--config`.
    pub fn resolve(flags: &GlobalArgs, env_path: Option<PathBuf>) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = flags.config.clone().or(env_path) {
            cfg.apply_file(&path)?;
        }
        if let Some(v) = flags.constant_c {
            cfg.constant_c = v;
        }
        if let Some(v) = flags.constant_k {
            cfg.constant_k = v;
        }
        if let Some(v) = flags.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = flags.ceiling_all {
            cfg.ceilings.all = v;
        }
        if let Some(v) = flags.ceiling_nc {
            cfg.ceilings.noncrossing = v;
        }
        if let Some(v) = flags.ceiling_pair {
            cfg.ceilings.pair = v;
        }
        if flags.format.is_some() {
            cfg.format = flags.format;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| format!("line {}: {what} `{value}` for `{key}`", lineno + 1);
            let real = || value.parse::<f64>().map_err(|_| bad("malformed number"));
            let int = || value.parse::<usize>().map_err(|_| bad("malformed integer"));
            match key {
                "C" => self.constant_c = real()?,
                "K" => self.constant_k = real()?,
                "tolerance" => self.tolerance = real()?,
                "ceiling_all" => self.ceilings.all = int()?,
                "ceiling_nc" => self.ceilings.noncrossing = int()?,
                "ceiling_pair" => self.ceilings.pair = int()?,
                "format" => {
                    self.format = Some(match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        "text" => Format::Text,
                        _ => return Err(bad("unknown format")),
                    })
                }
                _ => return Err(format!("line {}: unknown key `{key}`", lineno + 1)),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("C", self.constant_c), ("K", self.constant_k)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Input(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Input(format!(
                "tolerance must be positive and finite, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn bound_config(&self) -> BoundConfig {
        BoundConfig {
            constant_c: self.constant_c,
            constant_k: self.constant_k,
            tolerance: self.tolerance,
            ceilings: self.ceilings,
        }
    }

    pub fn format_or(&self, fallback: Format) -> Format {
        self.format.unwrap_or(fallback)
    }
}
