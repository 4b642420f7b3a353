//! Stability selection baselines: the Meinshausen-Bühlmann (MB) bound and
//! the unimodal (UM) bound of Shah and Samworth.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::paths::StabilityPaths;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineMethod {
    Mb,
    Um,
}

impl fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineMethod::Mb => "mb",
            BaselineMethod::Um => "um",
        })
    }
}

impl FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mb" => Ok(BaselineMethod::Mb),
            "um" => Ok(BaselineMethod::Um),
            _ => Err(Error::Config(format!("unknown baseline '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineSpec {
    pub method: BaselineMethod,
    pub tau: f64,
    pub target_efp: f64,
}

/// Calibrated target model size.
#[derive(Debug, Clone, PartialEq)]
pub struct QStar {
    pub q_star: f64,
    /// Threshold actually used (UM snaps `τ` onto its ladder).
    pub tau: f64,
    pub warnings: Vec<String>,
}

/// Largest ladder value `1/2 + k/(2B)`, `k >= 2`, not above `tau`.
pub fn snap_to_ladder(tau: f64, b: usize) -> Option<f64> {
    let step = 1.0 / (2.0 * b as f64);
    let k = ((tau - 0.5) / step + 1e-9).floor();
    if k < 2.0 {
        return None;
    }
    Some((0.5 + k * step).min(1.0))
}

/// `C(τ, B)` of the UM bound.
pub fn um_constant(tau: f64, b: usize) -> f64 {
    let bf = b as f64;
    if tau <= 0.75 {
        1.0 / (2.0 * (2.0 * tau - 1.0 - 1.0 / (2.0 * bf)))
    } else {
        4.0 * (1.0 - tau + 1.0 / (2.0 * bf)) / (1.0 + 1.0 / bf)
    }
}

/// Invert the method's bound at the target E(FP) for `q*`.
pub fn solve_q_star(spec: &BaselineSpec, b: usize, p: usize) -> Result<QStar> {
    let pf = p as f64;
    let tau = spec.tau;
    if !(tau > 0.5 && tau <= 1.0) {
        return Err(Error::InvalidTau {
            tau,
            reason: "stability selection needs 1/2 < tau <= 1".into(),
        });
    }
    if !(spec.target_efp > 0.0) {
        return Err(Error::Config("target E(FP) must be positive".into()));
    }
    match spec.method {
        BaselineMethod::Mb => Ok(QStar {
            q_star: (spec.target_efp * (2.0 * tau - 1.0) * pf).sqrt(),
            tau,
            warnings: Vec::new(),
        }),
        BaselineMethod::Um => {
            let snapped = snap_to_ladder(tau, b).ok_or_else(|| Error::InvalidTau {
                tau,
                reason: format!("below the smallest UM ladder value 1/2 + 1/B for B = {b}"),
            })?;
            let mut warnings = Vec::new();
            if (snapped - tau).abs() > 1e-12 {
                warnings.push(format!(
                    "tau {tau} snapped down to UM ladder value {snapped}"
                ));
            }
            let c = um_constant(snapped, b);
            Ok(QStar {
                q_star: (spec.target_efp * pf / c).sqrt(),
                tau: snapped,
                warnings,
            })
        }
    }
}

/// Warnings for the UM side conditions once `q_Λ` and `q(λ)` are known.
pub fn um_post_checks(tau: f64, b: usize, p: usize, q_lambda: f64, q_hat: &[f64]) -> Vec<String> {
    let pf = p as f64;
    let bf = b as f64;
    let mut out = Vec::new();
    let worst = q_hat.iter().fold(0.0f64, |a, &q| a.max(q * q / pf));
    if worst > 1.0 / 3f64.sqrt() {
        out.push(format!(
            "UM validity condition q^2/p <= 1/sqrt(3) fails (max {worst:.4})"
        ));
    }
    if tau <= 0.75 {
        let r2 = q_lambda * q_lambda / (pf * pf);
        let edge = (0.5 + r2).min(0.5 + 1.0 / (2.0 * bf) + 0.75 * r2);
        if tau <= edge {
            out.push(format!(
                "tau {tau} is below the UM branch lower edge {edge:.4}"
            ));
        }
    }
    out
}

/// Largest grid `λ` (smallest index) with `q_union_hat >= q_star`; the last
/// index with `flagged = true` if none qualifies.
pub fn calibrate_lambda_min(q_union_hat: &[f64], q_star: f64) -> (usize, bool) {
    match q_union_hat.iter().position(|&q| q >= q_star) {
        Some(i) => (i, false),
        None => (q_union_hat.len().saturating_sub(1), true),
    }
}

/// Features whose maximum `π̂_j` over points `0..=lambda_min_index` reaches `tau`.
pub fn select_ss(paths: &StabilityPaths, lambda_min_index: usize, tau: f64) -> Vec<bool> {
    paths
        .pi_hat
        .iter()
        .map(|path| {
            let end = (lambda_min_index + 1).min(path.len());
            path[..end].iter().any(|&v| v >= tau)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineResult {
    pub method: BaselineMethod,
    pub tau: f64,
    pub target_efp: f64,
    pub q_star: f64,
    pub lambda_min_index: usize,
    pub selected: Vec<bool>,
    pub warnings: Vec<String>,
}

/// Calibrate and select with one baseline on shared paths.
pub fn run_baseline(paths: &StabilityPaths, spec: &BaselineSpec) -> Result<BaselineResult> {
    let p = paths.p();
    let q = solve_q_star(spec, paths.b, p)?;
    let (idx, flagged) = calibrate_lambda_min(&paths.q_union_hat, q.q_star);
    let mut warnings = q.warnings;
    if flagged {
        warnings.push(format!(
            "q* = {:.3} not reached on the evaluated grid; using its smallest lambda",
            q.q_star
        ));
    }
    if spec.method == BaselineMethod::Um {
        let end = (idx + 1).min(paths.q_hat.len());
        warnings.extend(um_post_checks(
            q.tau,
            paths.b,
            p,
            paths.q_union_hat[idx],
            &paths.q_hat[..end],
        ));
    }
    Ok(BaselineResult {
        method: spec.method,
        tau: q.tau,
        target_efp: spec.target_efp,
        q_star: q.q_star,
        lambda_min_index: idx,
        selected: select_ss(paths, idx, q.tau),
        warnings,
    })
}
