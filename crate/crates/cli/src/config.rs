use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Every setting a command can take. Values come from the command line,
/// falling back to a `--config` JSON file with the same field names.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub preset: Option<String>,
    pub alphabet: Option<String>,
    pub family: Option<PathBuf>,
    pub z: Option<String>,
    pub word: Option<String>,
    pub relations: Option<String>,
    pub u: Option<String>,
    pub v: Option<String>,
    pub letters: Option<String>,
    pub depth: Option<usize>,
    pub level: Option<usize>,
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub budget: Option<usize>,
    pub viewport: Option<String>,
    pub res: Option<String>,
    pub tests: Option<String>,
    pub tails: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub angle: Option<f64>,
    pub alpha: Option<f64>,
    pub target: Option<String>,
    pub escape_depth: Option<usize>,
    pub frontier_cap: Option<usize>,
    pub overlay: Option<usize>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub expect: Option<String>,
    pub trunk: Option<bool>,
    pub color_pieces: Option<bool>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),* $(,)?) => {
        RunConfig { $($f: $a.$f.or($b.$f),)* }
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("invalid config file")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// `self` with unset fields taken from `fallback`.
    pub fn or(self, fallback: RunConfig) -> RunConfig {
        let a = self;
        let b = fallback;
        merge_fields!(a, b; command, preset, alphabet, family, z, word, relations, u, v,
            letters, depth, level, order, tol, budget, viewport, res, tests, tails, samples,
            seed, angle, alpha, target, escape_depth, frontier_cap, overlay, out, out_dir,
            workers, expect, trunk, color_pieces)
    }

    /// Checks the invariants that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        let sources = [self.preset.is_some(), self.alphabet.is_some(), self.family.is_some()]
            .iter()
            .filter(|&&s| s)
            .count();
        if sources > 1 {
            bail!("give at most one of --preset, --alphabet and --family");
        }
        for (name, v) in [
            ("budget", self.budget),
            ("samples", self.samples),
            ("frontier-cap", self.frontier_cap),
            ("escape-depth", self.escape_depth),
            ("workers", self.workers),
        ] {
            if v == Some(0) {
                bail!("--{name} must be positive");
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--tol must be a positive number");
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_merge() {
        let file = RunConfig::from_json(r#"{"preset": "ternary-up", "depth": 4, "seed": 7}"#).unwrap();
        let cli = RunConfig { depth: Some(9), ..Default::default() };
        let merged = cli.or(file);
        assert_eq!(merged.depth, Some(9));
        assert_eq!(merged.preset.as_deref(), Some("ternary-up"));
        assert_eq!(merged.seed(), 7);
        assert_eq!(RunConfig::default().seed(), 0);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::from_json(r#"{"preset": "x", "alphabet": "1/2,-1/2"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"budget": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tol": -1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
