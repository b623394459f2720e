//! Runtime configuration: defaults, then an optional `key=value` file, then
//! `QUADREP_MAX_B`, then command-line flags.

use std::fs;
use std::path::Path;

use quadrep::arith::DEFAULT_FACTOR_BOUND;
use quadrep::ideals::DEFAULT_ENUM_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub max_factor_bound: u64,
    pub max_enum_b: u64,
    pub truncation: u64,
    pub tolerance: f64,
    pub output: OutputFormat,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            max_factor_bound: DEFAULT_FACTOR_BOUND,
            max_enum_b: DEFAULT_ENUM_BOUND,
            truncation: 5000,
            tolerance: 1e-3,
            output: OutputFormat::Json,
        }
    }
}

impl CliConfig {
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            self.set(key.trim(), value.trim()).map_err(|e| format!("config line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let int = |v: &str| v.parse::<u64>().map_err(|e| format!("{key}: {e}"));
        match key {
            "max_factor_bound" => self.max_factor_bound = int(value)?,
            "max_enum_b" => self.max_enum_b = int(value)?,
            "truncation" | "B" => self.truncation = int(value)?,
            "tolerance" => self.tolerance = value.parse().map_err(|e| format!("{key}: {e}"))?,
            "output" => {
                self.output = <OutputFormat as clap::ValueEnum>::from_str(value, true)
                    .map_err(|_| format!("output: unknown format {value}"))?
            }
            other => return Err(format!("unknown key {other}")),
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_factor_bound == 0 || self.max_enum_b == 0 || self.truncation == 0 {
            return Err("bounds must be positive".into());
        }
        if !(self.tolerance > 0.0) {
            return Err("tolerance must be positive".into());
        }
        Ok(())
    }
}
