//! Experiment configuration, player ranges and parameter grids.
//!
//! Every CLI flag has a field here so a run can also be described in a TOML
//! file:
//!
//! ```toml
//! command = "noise"
//! n = "3..9"
//! p = "0.80:0.99:0.01"
//! trials = 1000000
//! seed = 42
//! format = "json"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mermin_core::rng::DEFAULT_SEED;
use mermin_core::Limits;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bound,
    Search,
    Quantum,
    Noise,
    Detect,
    Report,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Search => "search",
            Command::Quantum => "quantum",
            Command::Noise => "noise",
            Command::Detect => "detect",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Deliberate corruptions for exercising the verification-failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Complement player 1's pair in the simple optimal strategy.
    Table1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<PlayerRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<PathBuf>,
    #[serde(default)]
    pub dense_check: bool,
    #[serde(default)]
    pub timing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject_fault: Option<Fault>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            n: None,
            p: None,
            eta: None,
            trials: None,
            seed: DEFAULT_SEED,
            format: None,
            out: None,
            witnesses: None,
            dense_check: false,
            timing: false,
            inject_fault: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Output format: explicit choice, else the `out` extension, else text.
    pub fn resolved_format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self
            .out
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
        {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ => Format::Text,
        }
    }

    pub fn players(&self) -> Result<&PlayerRange, HarnessError> {
        self.n
            .as_ref()
            .ok_or_else(|| HarnessError::Usage(format!("{} needs --n", self.command.as_str())))
    }

    /// The single player count of a single-n command.
    pub fn single_n(&self) -> Result<usize, HarnessError> {
        let range = self.players()?;
        match range.values() {
            [n] => Ok(*n),
            _ => Err(HarnessError::Usage(format!(
                "{} takes a single player count, got {range}",
                self.command.as_str()
            ))),
        }
    }
}

/// Player counts: `5`, `3..9` (inclusive), `3..=9`, or `3,5,7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerRange {
    text: String,
    values: Vec<usize>,
}

impl PlayerRange {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn contains(&self, n: usize) -> bool {
        self.values.contains(&n)
    }
}

fn parse_count(s: &str) -> Result<usize, HarnessError> {
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| HarnessError::Usage(format!("invalid player count {s:?}")))?;
    if n < 3 {
        return Err(HarnessError::Usage(format!("player count {n} below 3")));
    }
    Ok(n)
}

impl FromStr for PlayerRange {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let values = if let Some((lo, hi)) = s.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (parse_count(lo)?, parse_count(hi)?);
            if lo > hi {
                return Err(HarnessError::Usage(format!("empty player range {s:?}")));
            }
            (lo..=hi).collect()
        } else {
            s.split(',').map(parse_count).collect::<Result<Vec<_>, _>>()?
        };
        Ok(PlayerRange {
            text: s.to_string(),
            values,
        })
    }
}

impl fmt::Display for PlayerRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Real grid `start:stop:step` (inclusive of `stop`), or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Rejects points outside `[lo, hi]`.
    pub fn check_bounds(&self, name: &str, lo: f64, hi: f64) -> Result<(), HarnessError> {
        match self.values.iter().find(|v| !(lo..=hi).contains(*v)) {
            Some(v) => Err(HarnessError::Usage(format!(
                "{name} grid value {v} outside [{lo}, {hi}]"
            ))),
            None => Ok(()),
        }
    }
}

fn parse_real(s: &str) -> Result<f64, HarnessError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| HarnessError::Usage(format!("invalid number {s:?}")))?;
    if !v.is_finite() {
        return Err(HarnessError::Usage(format!("invalid number {s:?}")));
    }
    Ok(v)
}

// grid points are snapped to 1e-12 so that 0.80 + 3·0.01 prints as 0.83
fn snap(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

impl FromStr for Grid {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [v] => vec![parse_real(v)?],
            [start, stop, step] => {
                let (start, stop, step) = (parse_real(start)?, parse_real(stop)?, parse_real(step)?);
                if step <= 0.0 || start > stop {
                    return Err(HarnessError::Usage(format!("invalid grid {s:?}")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
                if count > 1_000_000 {
                    return Err(HarnessError::Usage(format!("grid {s:?} too large")));
                }
                (0..count).map(|k| snap(start + k as f64 * step)).collect()
            }
            _ => return Err(HarnessError::Usage(format!("invalid grid {s:?}"))),
        };
        Ok(Grid {
            text: s.to_string(),
            values,
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.text)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                #[derive(Deserialize)]
                #[serde(untagged)]
                enum Raw {
                    Text(String),
                    Int(u64),
                    Real(f64),
                }
                let text = match Raw::deserialize(d)? {
                    Raw::Text(t) => t,
                    Raw::Int(i) => i.to_string(),
                    Raw::Real(r) => r.to_string(),
                };
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(PlayerRange);
string_serde!(Grid);

/// Environment variables overriding the sweep limits.
pub const LIMIT_VARS: [&str; 4] = [
    "GAME_EXHAUSTIVE_LIMIT",
    "GAME_OPTIMAL_SET_LIMIT",
    "GAME_EXTENDED_LIMIT",
    "GAME_DENSE_LIMIT",
];

/// Default limits with any `GAME_*_LIMIT` overrides applied.
pub fn limits_from_env() -> Result<Limits, HarnessError> {
    limits_from_lookup(|k| std::env::var(k).ok())
}

pub fn limits_from_lookup<F: Fn(&str) -> Option<String>>(get: F) -> Result<Limits, HarnessError> {
    let mut limits = Limits::default();
    let slots: [&mut usize; 4] = [
        &mut limits.exhaustive,
        &mut limits.optimal_set,
        &mut limits.extended,
        &mut limits.dense,
    ];
    for (var, slot) in LIMIT_VARS.iter().zip(slots) {
        if let Some(v) = get(var) {
            *slot = v
                .trim()
                .parse()
                .map_err(|_| HarnessError::Usage(format!("{var}={v:?} is not a count")))?;
        }
    }
    Ok(limits)
}
