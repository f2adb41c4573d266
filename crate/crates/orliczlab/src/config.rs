//! Run configuration: seed, the unspecified constants, tolerances and the
//! key=value file format they are read from.

use std::collections::BTreeMap;
use std::path::Path;

use orliczlab_core::constants::Constant;
use orliczlab_core::integral::{ClassifierConfig, LogIntegralConfig};
use orliczlab_core::ConstantsConfig;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub constants: ConstantsConfig,
    pub classifier: ClassifierConfig,
    pub log_bound: LogIntegralConfig,
}

/// Keys consumed by [`RunConfig::set`]; every other key is a command flag.
pub const GLOBAL_KEYS: &[&str] = &[
    "seed",
    "alpha_k",
    "alpha_n",
    "c_n",
    "gamma_n",
    "beta_n",
    "margin",
    "cutoff",
    "rel_tol",
    "log_bound_delta",
    "log_bound_tau_max",
    "log_bound_tolerance",
];

pub fn is_global(key: &str) -> bool {
    GLOBAL_KEYS.contains(&key.replace('-', "_").as_str())
}

fn positive(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("`{key}` needs a number, got `{value}`")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(CliError::Usage(format!(
            "`{key}` must be positive and finite, got {v}"
        )));
    }
    Ok(v)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| {
                    CliError::Usage(format!("seed must be an unsigned integer, got `{value}`"))
                })?
            }
            "alpha_k" => self.constants.alpha_k = Constant::user(positive(&key, value)?),
            "alpha_n" => self.constants.alpha_n = Constant::user(positive(&key, value)?),
            "c_n" => self.constants.c_n = Constant::user(positive(&key, value)?),
            "gamma_n" => self.constants.gamma_n = Constant::user(positive(&key, value)?),
            "beta_n" => self.constants.beta_n = Constant::user(positive(&key, value)?),
            "margin" => self.classifier.margin = positive(&key, value)?,
            "cutoff" => {
                let c = positive(&key, value)?;
                if c <= 1.0 {
                    return Err(CliError::Usage(format!("cutoff must exceed 1, got {c}")));
                }
                self.classifier.cutoff = c;
            }
            "rel_tol" => self.classifier.rel_tol = positive(&key, value)?,
            "log_bound_delta" => {
                let d = positive(&key, value)?;
                if d >= 0.5 {
                    return Err(CliError::Usage(format!(
                        "log_bound_delta must be below 1/2, got {d}"
                    )));
                }
                self.log_bound.delta = d;
            }
            "log_bound_tau_max" => self.log_bound.tau_max = positive(&key, value)?,
            "log_bound_tolerance" => self.log_bound.tolerance = positive(&key, value)?,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown configuration key `{other}`"
                )))
            }
        }
        Ok(())
    }
}

/// Parses `key = value` lines; `#` starts a comment. Keys may not repeat.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: key `{k}` repeated", i + 1));
        }
    }
    Ok(out)
}

pub fn load_kv(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_kv(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
}
