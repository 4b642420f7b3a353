//! Run configuration shared by the pipeline, the simulation harness and the
//! command-line front end.
//!
//! The configuration round-trips through TOML using the field names below, so
//! a resolved run can be replayed from its echo file.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::selection::Scorer;

/// Learning task implied by the response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Regression,
    Classification,
}

/// Built-in base estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Lasso,
    Mcp,
    Scad,
    AdaptiveLasso,
    LogisticL1,
}

impl EstimatorKind {
    pub fn task(self) -> Task {
        match self {
            EstimatorKind::LogisticL1 => Task::Classification,
            _ => Task::Regression,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Lasso => "lasso",
            EstimatorKind::Mcp => "mcp",
            EstimatorKind::Scad => "scad",
            EstimatorKind::AdaptiveLasso => "adaptive",
            EstimatorKind::LogisticL1 => "logistic",
        }
    }

    /// Scorer used when the configuration does not name one.
    pub fn default_scorer(self) -> Scorer {
        match self {
            EstimatorKind::LogisticL1 => Scorer::H2,
            _ => Scorer::H3,
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lasso" => Ok(EstimatorKind::Lasso),
            "mcp" => Ok(EstimatorKind::Mcp),
            "scad" => Ok(EstimatorKind::Scad),
            "adaptive" | "adaptive-lasso" | "adaptive_lasso" => Ok(EstimatorKind::AdaptiveLasso),
            "logistic" | "logistic-l1" | "logistic_l1" => Ok(EstimatorKind::LogisticL1),
            other => Err(Error::Config(format!(
                "unknown estimator '{other}' (expected lasso, mcp, scad, adaptive or logistic)"
            ))),
        }
    }
}

/// Exponent of the weighting measure `mu_alpha(dλ) ∝ λ^(-alpha) dλ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Alpha {
    #[default]
    Auto,
    Value(f64),
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Auto => f.write_str("auto"),
            Alpha::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("auto") {
            return Ok(Alpha::Auto);
        }
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("alpha must be 'auto' or a number, got '{s}'")))?;
        if !v.is_finite() {
            return Err(Error::Config(format!("alpha must be finite, got {v}")));
        }
        Ok(Alpha::Value(v))
    }
}

/// Worker count for the subsampling stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    #[default]
    Auto,
    Fixed(usize),
}

impl fmt::Display for Threads {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threads::Auto => f.write_str("auto"),
            Threads::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Threads {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("auto") {
            return Ok(Threads::Auto);
        }
        match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Fixed(n)),
            _ => Err(Error::Config(format!(
                "threads must be 'auto' or a positive integer, got '{s}'"
            ))),
        }
    }
}

/// Everything needed to run integrated path stability selection on a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(with = "as_string")]
    pub estimator: EstimatorKind,
    /// `None` picks [`EstimatorKind::default_scorer`].
    #[serde(with = "as_opt_string", skip_serializing_if = "Option::is_none")]
    pub scorer: Option<Scorer>,
    pub b_subsamples: usize,
    pub grid_points: usize,
    pub cutoff: f64,
    #[serde(with = "as_string")]
    pub alpha: Alpha,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_efp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_fdr: Option<f64>,
    pub seed: u64,
    /// Not echoed: results never depend on the worker count.
    #[serde(with = "as_string", skip_serializing)]
    pub threads: Threads,
    /// Stop the lower-endpoint scan once more than this fraction of features
    /// is selected on the full data.
    pub max_selected_fraction: f64,
    /// Concavity parameter override for MCP and SCAD.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub ridge_penalty: f64,
    /// Unlocks the `wm:<m>` and `fdelta:<d>` scorers.
    pub experimental: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            estimator: EstimatorKind::Lasso,
            scorer: None,
            b_subsamples: 50,
            grid_points: 25,
            cutoff: 0.05,
            alpha: Alpha::Auto,
            target_efp: None,
            target_fdr: None,
            seed: 0,
            threads: Threads::Auto,
            max_selected_fraction: 0.5,
            gamma: None,
            ridge_penalty: 1.0,
            experimental: false,
        }
    }
}

/// Which target drives the final selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    TargetEfp(f64),
    TargetFdr(f64),
}

impl RunConfig {
    pub fn new(estimator: EstimatorKind) -> Self {
        Self {
            estimator,
            ..Self::default()
        }
    }

    pub fn scorer(&self) -> Scorer {
        self.scorer
            .unwrap_or_else(|| self.estimator.default_scorer())
    }

    /// E(FP) mode wins when both targets are set; with neither set the
    /// target E(FP) defaults to 1.
    pub fn selection_mode(&self) -> SelectionMode {
        match (self.target_efp, self.target_fdr) {
            (Some(t), _) => SelectionMode::TargetEfp(t),
            (None, Some(f)) => SelectionMode::TargetFdr(f),
            (None, None) => SelectionMode::TargetEfp(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b_subsamples == 0 {
            return Err(Error::Config("b_subsamples must be positive".into()));
        }
        if self.grid_points == 0 {
            return Err(Error::Config("grid_points must be positive".into()));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(Error::Config(format!(
                "cutoff must be positive, got {}",
                self.cutoff
            )));
        }
        if let Some(t) = self.target_efp {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!(
                    "target_efp must be positive, got {t}"
                )));
            }
        }
        if let Some(f) = self.target_fdr {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::Config(format!(
                    "target_fdr must lie in (0, 1), got {f}"
                )));
            }
        }
        if !(self.max_selected_fraction > 0.0 && self.max_selected_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "max_selected_fraction must lie in (0, 1], got {}",
                self.max_selected_fraction
            )));
        }
        if !(self.ridge_penalty > 0.0 && self.ridge_penalty.is_finite()) {
            return Err(Error::Config("ridge_penalty must be positive".into()));
        }
        let scorer = self.scorer();
        scorer.validate()?;
        if scorer.is_experimental() && !self.experimental {
            return Err(Error::Config(format!(
                "scorer '{scorer}' is experimental; enable it with --experimental"
            )));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes to TOML")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Measure exponent for a run: user values pass through untouched, `Auto`
/// follows the per-estimator defaults (piecewise linear in `p`).
pub fn resolve_alpha(config: &RunConfig, p: usize) -> f64 {
    match config.alpha {
        Alpha::Value(a) => a,
        Alpha::Auto => auto_alpha(config.estimator, p),
    }
}

pub fn auto_alpha(estimator: EstimatorKind, p: usize) -> f64 {
    let p = p as f64;
    match estimator {
        EstimatorKind::Mcp | EstimatorKind::Scad => 1.25,
        EstimatorKind::Lasso | EstimatorKind::AdaptiveLasso => {
            if p <= 200.0 {
                1.0
            } else if p >= 1000.0 {
                0.75
            } else {
                -p / 3200.0 + 17.0 / 16.0
            }
        }
        EstimatorKind::LogisticL1 => {
            if p <= 200.0 {
                1.0
            } else if p >= 1000.0 {
                0.0
            } else {
                -p / 800.0 + 1.25
            }
        }
    }
}

mod as_string {
    use super::*;

    pub fn serialize<T: fmt::Display, S: Serializer>(
        v: &T,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T, D>(d: D) -> std::result::Result<T, D::Error>
    where
        T: FromStr<Err = Error>,
        D: Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
            Float(f64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Str(s) => s,
            Raw::Int(i) => i.to_string(),
            Raw::Float(f) => f.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

mod as_opt_string {
    use super::*;

    pub fn serialize<T: fmt::Display, S: Serializer>(
        v: &Option<T>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> std::result::Result<Option<T>, D::Error>
    where
        T: FromStr<Err = Error>,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map(Some).map_err(serde::de::Error::custom)
    }
}
