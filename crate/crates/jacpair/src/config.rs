//! Experiment configuration files (JSON or TOML, one experiment per file).

use std::fmt;
use std::path::{Path, PathBuf};

use jacpair_core::arith::is_prime;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    GraphCyclic,
    GraphPairingFreq,
    GraphTwoPrimes,
    HaarMu,
    HaarMoments,
}

impl ExperimentKind {
    pub fn is_graph(self) -> bool {
        matches!(self, Self::GraphCyclic | Self::GraphPairingFreq | Self::GraphTwoPrimes)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::GraphCyclic => "graph-cyclic",
            Self::GraphPairingFreq => "graph-pairing-freq",
            Self::GraphTwoPrimes => "graph-two-primes",
            Self::HaarMu => "haar-mu",
            Self::HaarMoments => "haar-moments",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        [Self::GraphCyclic, Self::GraphPairingFreq, Self::GraphTwoPrimes, Self::HaarMu, Self::HaarMoments]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// One experiment.
///
/// Every field except `kind` has a default; the effective values are echoed
/// into each report. `targets` lists surjection-moment targets as exponent
/// lists, so `[1, 1]` is `(Z/p)^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default = "default_primes")]
    pub primes: Vec<u64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub connected_only: bool,
    #[serde(default = "default_catalog_bound")]
    pub catalog_bound: u64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default = "default_guard")]
    pub guard: u32,
    #[serde(default)]
    pub zero_sum: bool,
    #[serde(default = "default_targets")]
    pub targets: Vec<Vec<u32>>,
    #[serde(default = "default_precision_exceeded_limit")]
    pub precision_exceeded_limit: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn default_n() -> usize {
    20
}
fn default_q() -> f64 {
    0.5
}
fn default_primes() -> Vec<u64> {
    vec![2]
}
fn default_trials() -> u64 {
    10_000
}
fn yes() -> bool {
    true
}
fn default_catalog_bound() -> u64 {
    8
}
fn default_precision() -> u32 {
    jacpair_core::haar::DEFAULT_PRECISION
}
fn default_guard() -> u32 {
    jacpair_core::haar::DEFAULT_GUARD
}
fn default_targets() -> Vec<Vec<u32>> {
    vec![vec![1]]
}
fn default_precision_exceeded_limit() -> f64 {
    1e-6
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl ExperimentConfig {
    /// Defaults for `kind`.
    pub fn new(kind: ExperimentKind) -> Self {
        let (n, primes, bound) = match kind {
            ExperimentKind::GraphCyclic => (30, vec![2, 3], 8),
            ExperimentKind::GraphPairingFreq => (20, vec![2], 8),
            ExperimentKind::GraphTwoPrimes => (30, vec![2, 3], 12),
            ExperimentKind::HaarMu => (4, vec![3], 9),
            ExperimentKind::HaarMoments => (8, vec![3], 9),
        };
        ExperimentConfig {
            kind,
            n,
            q: default_q(),
            primes,
            trials: default_trials(),
            seed: 0,
            connected_only: true,
            catalog_bound: bound,
            precision: default_precision(),
            guard: default_guard(),
            zero_sum: false,
            targets: default_targets(),
            precision_exceeded_limit: default_precision_exceeded_limit(),
            output: None,
        }
    }

    /// Parses JSON or TOML, chosen by extension (`.json`, `.toml`); other
    /// extensions try JSON first.
    pub fn from_str_with_format(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let parse_err = |message: String| ConfigError::Parse { path: path.to_path_buf(), message };
        let cfg: ExperimentConfig = match ext {
            "toml" => toml::from_str(text).map_err(|e| parse_err(e.to_string()))?,
            "json" => serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?,
            _ => match serde_json::from_str(text) {
                Ok(c) => c,
                Err(_) => toml::from_str(text).map_err(|e| parse_err(e.to_string()))?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_str_with_format(&text, path)
    }

    /// Matrix size the Haar predictions refer to: `n - 1` for zero-sum.
    pub fn effective_n(&self) -> usize {
        if self.zero_sum {
            self.n.saturating_sub(1)
        } else {
            self.n
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(ConfigError::Invalid(format!("{p} is not prime")));
        }
        if self.catalog_bound == 0 || self.catalog_bound > jacpair_core::pairing::DEFAULT_BOUND {
            return Err(ConfigError::Invalid(format!("catalog_bound must lie in 1..={}", jacpair_core::pairing::DEFAULT_BOUND)));
        }
        if self.kind.is_graph() {
            if !(self.q > 0.0 && self.q < 1.0) {
                return bad("q must lie in (0, 1)");
            }
            if self.zero_sum {
                return bad("zero_sum applies to Haar experiments only");
            }
        }
        let distinct = {
            let mut p = self.primes.clone();
            p.sort_unstable();
            p.dedup();
            p.len() == self.primes.len()
        };
        if !distinct {
            return bad("primes must be distinct");
        }
        match self.kind {
            ExperimentKind::GraphCyclic => {}
            ExperimentKind::GraphTwoPrimes if self.primes.len() != 2 => return bad("graph-two-primes needs exactly two primes"),
            ExperimentKind::GraphPairingFreq | ExperimentKind::HaarMu | ExperimentKind::HaarMoments if self.primes.len() != 1 => {
                return Err(ConfigError::Invalid(format!("{} needs exactly one prime", self.kind)));
            }
            _ => {}
        }
        if !self.kind.is_graph() {
            if self.guard == 0 || self.precision <= self.guard {
                return bad("need 1 <= guard < precision");
            }
            let p = self.primes[0];
            if p.checked_pow(self.precision).is_none_or(|m| m > u64::MAX / 2) {
                return bad("p^precision must fit in 63 bits");
            }
            if self.zero_sum && self.n < 2 {
                return bad("zero-sum matrices need n >= 2");
            }
        }
        if self.kind == ExperimentKind::HaarMoments {
            if self.targets.is_empty() {
                return bad("haar-moments needs at least one target");
            }
            for t in &self.targets {
                if t.is_empty() || t.contains(&0) {
                    return bad("target exponents must be positive and nonempty");
                }
                if t.len() > self.effective_n() {
                    return bad("target rank exceeds the matrix size");
                }
                let p = self.primes[0];
                if t.iter().try_fold(1u64, |acc, &e| p.checked_pow(e).and_then(|x| acc.checked_mul(x))).is_none_or(|o| o > 1 << 20) {
                    return bad("target order must be at most 2^20");
                }
            }
        }
        if !(0.0..=1.0).contains(&self.precision_exceeded_limit) {
            return bad("precision_exceeded_limit must lie in [0, 1]");
        }
        Ok(())
    }
}
