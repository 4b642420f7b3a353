//! Score functions, expected-false-positive bounds, efp scores, and the
//! E(FP)- and FDR-mode selection rules.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::LambdaGrid;

/// Transform applied to stability paths before integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scorer {
    /// `(2x-1) 1(x >= 1/2)`
    H1,
    /// `(2x-1)^2 1(x >= 1/2)`
    H2,
    /// `(2x-1)^3 1(x >= 1/2)`
    H3,
    /// `x^m` (experimental).
    W(u32),
    /// `((x-δ)/(1-δ)) 1(x >= δ)` (experimental).
    FDelta(f64),
}

impl Scorer {
    /// Value of the transform at `x ∈ [0, 1]`.
    pub fn transform(self, x: f64) -> f64 {
        match self {
            Scorer::H1 | Scorer::H2 | Scorer::H3 => {
                if x < 0.5 {
                    0.0
                } else {
                    let t = 2.0 * x - 1.0;
                    match self {
                        Scorer::H1 => t,
                        Scorer::H2 => t * t,
                        _ => t * t * t,
                    }
                }
            }
            Scorer::W(m) => x.powi(m as i32),
            Scorer::FDelta(d) => {
                if x < d {
                    0.0
                } else {
                    (x - d) / (1.0 - d)
                }
            }
        }
    }

    pub fn is_experimental(self) -> bool {
        matches!(self, Scorer::W(_) | Scorer::FDelta(_))
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Scorer::W(m) if !(1..=3).contains(&m) => Err(Error::Config(format!(
                "wm scorer supports m in 1..=3, got {m}"
            ))),
            Scorer::FDelta(d) if !(0.0..1.0).contains(&d) => Err(Error::Config(format!(
                "fdelta scorer needs delta in [0, 1), got {d}"
            ))),
            _ => Ok(()),
        }
    }

    /// Integrand `ψ(q)` of the E(FP) bound at model size `q` (before
    /// dividing by `τ`), for `b` subsample pairs and `p` features.
    pub fn bound_integrand(self, q: f64, b: usize, p: usize) -> Result<f64> {
        let pf = p as f64;
        if q > pf * (1.0 + 1e-12) || q < 0.0 || !q.is_finite() {
            return Err(Error::InvalidModelSize { q, p });
        }
        let q = q.min(pf);
        let bf = b as f64;
        let x = q / pf;
        Ok(match self {
            Scorer::H1 | Scorer::FDelta(_) => q * q / pf,
            Scorer::H2 => q * q / (bf * pf) + (bf - 1.0) * q.powi(4) / (bf * pf.powi(3)),
            Scorer::H3 => {
                q * q / (bf * bf * pf)
                    + 3.0 * (bf - 1.0) * q.powi(4) / (bf * bf * pf.powi(3))
                    + (bf - 1.0) * (bf - 2.0) * q.powi(6) / (bf * bf * pf.powi(5))
            }
            Scorer::W(m) => {
                // group compositions of m into 2B parts by their number N of
                // nonzero parts: C(2B, N) choices of parts, Surj(m, N) words
                let slots = 2 * b;
                let mut total = 0.0;
                for n in 1..=(m as usize).min(slots) {
                    total += binomial(slots, n) * surjections(m as usize, n) * x.powi(n as i32);
                }
                pf * total / (slots as f64).powi(m as i32)
            }
        })
    }

    fn parse_param<T: FromStr>(s: &str, what: &str) -> Result<T> {
        s.trim()
            .parse()
            .map_err(|_| Error::Config(format!("invalid {what} parameter '{s}'")))
    }
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of surjections from an `m`-set onto an `n`-set.
pub fn surjections(m: usize, n: usize) -> f64 {
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, i) * ((n - i) as f64).powi(m as i32)
        })
        .sum()
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scorer::H1 => f.write_str("h1"),
            Scorer::H2 => f.write_str("h2"),
            Scorer::H3 => f.write_str("h3"),
            Scorer::W(m) => write!(f, "wm:{m}"),
            Scorer::FDelta(d) => write!(f, "fdelta:{d}"),
        }
    }
}

impl FromStr for Scorer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let scorer = match lower.split_once(':') {
            None => match lower.as_str() {
                "h1" => Scorer::H1,
                "h2" | "quad" => Scorer::H2,
                "h3" | "cubic" => Scorer::H3,
                _ => return Err(Error::Config(format!("unknown scorer '{s}'"))),
            },
            Some(("wm", m)) => Scorer::W(Self::parse_param(m, "wm")?),
            Some(("fdelta", d)) => Scorer::FDelta(Self::parse_param(d, "fdelta")?),
            Some(_) => return Err(Error::Config(format!("unknown scorer '{s}'"))),
        };
        scorer.validate()?;
        Ok(scorer)
    }
}

impl Serialize for Scorer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `∫ f(π̂_j) dμ` over the retained grid.
pub fn score_feature(path: &[f64], scorer: Scorer, grid: &LambdaGrid) -> f64 {
    let vals: Vec<f64> = path[..grid.retained_len()]
        .iter()
        .map(|&x| scorer.transform(x))
        .collect();
    grid.integrate(&vals)
}

/// `I(Λ) = ∫ ψ(q̂(λ)) dμ` over the retained grid.
pub fn bound_integral(
    q_hat: &[f64],
    scorer: Scorer,
    b: usize,
    p: usize,
    grid: &LambdaGrid,
) -> Result<f64> {
    let psi = q_hat[..grid.retained_len()]
        .iter()
        .map(|&q| scorer.bound_integrand(q, b, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(grid.integrate(&psi))
}

/// `efp_j = min(I / score_j, p)`, and `p` when the score is zero.
pub fn efp_scores(scores: &[f64], bound: f64, p: usize) -> Vec<f64> {
    let pf = p as f64;
    scores
        .iter()
        .map(|&s| if s > 0.0 { (bound / s).min(pf) } else { pf })
        .collect()
}

/// efp scores for `f_δ`: the bound's denominator is `2((1-δ)s + δ) - 1`.
pub fn fdelta_efp_scores(scores: &[f64], bound: f64, p: usize, delta: f64) -> Vec<f64> {
    let pf = p as f64;
    scores
        .iter()
        .map(|&s| {
            let eff = 2.0 * ((1.0 - delta) * s + delta) - 1.0;
            if eff > 0.0 {
                (bound / eff).min(pf)
            } else {
                pf
            }
        })
        .collect()
}

/// Threshold `τ` implied by a target E(FP) for `f_δ`. Requires the result
/// to exceed `(1-2δ)/(2-2δ)` and to be at most one.
pub fn fdelta_threshold(bound: f64, target: f64, delta: f64) -> Result<f64> {
    let tau = ((bound / target + 1.0) / 2.0 - delta) / (1.0 - delta);
    if tau > 1.0 {
        return Err(Error::FdInfeasible { target, delta, tau });
    }
    Ok(tau.max((1.0 - 2.0 * delta) / (2.0 - 2.0 * delta)))
}

/// `efp_j <= target` (inclusive).
pub fn select_by_efp(efp: &[f64], target: f64) -> Vec<bool> {
    efp.iter().map(|&e| e <= target).collect()
}

/// Feature indices sorted by ascending efp, ties by index.
pub fn rank_by_efp(efp: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..efp.len()).collect();
    order.sort_by(|&a, &b| efp[a].total_cmp(&efp[b]).then(a.cmp(&b)));
    order
}

/// Select the `j*` features with smallest efp, where `j*` is the largest
/// `j` with `efp_(j) / j <= target_fdr`.
pub fn select_by_fdr(efp: &[f64], target_fdr: f64) -> Vec<bool> {
    let order = rank_by_efp(efp);
    let j_star = order
        .iter()
        .enumerate()
        .filter(|(i, &j)| efp[j] / (i + 1) as f64 <= target_fdr)
        .map(|(i, _)| i + 1)
        .last()
        .unwrap_or(0);
    let mut sel = vec![false; efp.len()];
    for &j in &order[..j_star] {
        sel[j] = true;
    }
    sel
}

/// Scores, efp values, and bound for one scorer on retained paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub scorer: Scorer,
    pub scores: Vec<f64>,
    pub bound: f64,
    pub efp: Vec<f64>,
}

/// Score every feature. `pi_hat[j]` is feature `j`'s path over at least the
/// retained grid points.
pub fn score_all(
    pi_hat: &[Vec<f64>],
    q_hat: &[f64],
    scorer: Scorer,
    b: usize,
    grid: &LambdaGrid,
) -> Result<Scored> {
    let p = pi_hat.len();
    let scores: Vec<f64> = pi_hat
        .iter()
        .map(|path| score_feature(path, scorer, grid))
        .collect();
    let bound = bound_integral(q_hat, scorer, b, p, grid)?;
    let efp = match scorer {
        Scorer::FDelta(d) => fdelta_efp_scores(&scores, bound, p, d),
        _ => efp_scores(&scores, bound, p),
    };
    Ok(Scored {
        scorer,
        scores,
        bound,
        efp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_hit_endpoints() {
        for s in [
            Scorer::H1,
            Scorer::H2,
            Scorer::H3,
            Scorer::W(2),
            Scorer::FDelta(0.3),
        ] {
            assert_eq!(s.transform(0.0), 0.0);
            assert!((s.transform(1.0) - 1.0).abs() < 1e-15);
        }
        assert_eq!(Scorer::H2.transform(0.5), 0.0);
        assert!((Scorer::H3.transform(0.75) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn scorer_parsing() {
        assert_eq!("h2".parse::<Scorer>().unwrap(), Scorer::H2);
        assert_eq!("wm:2".parse::<Scorer>().unwrap(), Scorer::W(2));
        assert_eq!("fdelta:0.3".parse::<Scorer>().unwrap(), Scorer::FDelta(0.3));
        assert!("fdelta:1.0".parse::<Scorer>().is_err());
        assert!("h7".parse::<Scorer>().is_err());
        for s in [Scorer::H1, Scorer::W(3), Scorer::FDelta(0.25)] {
            assert_eq!(s.to_string().parse::<Scorer>().unwrap(), s);
        }
    }

    #[test]
    fn full_model_size_gives_trivial_bound() {
        for s in [
            Scorer::H1,
            Scorer::H2,
            Scorer::H3,
            Scorer::W(1),
            Scorer::W(2),
            Scorer::W(3),
        ] {
            let v = s.bound_integrand(200.0, 50, 200).unwrap();
            assert!((v - 200.0).abs() < 1e-9, "{s}: {v}");
        }
        assert_eq!(Scorer::H2.bound_integrand(0.0, 50, 200).unwrap(), 0.0);
        assert!(Scorer::H2.bound_integrand(201.0, 50, 200).is_err());
    }

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 1), 1.0);
        assert_eq!(surjections(3, 2), 6.0);
        assert_eq!(surjections(3, 3), 6.0);
        assert_eq!(surjections(2, 3), 0.0);
    }

    #[test]
    fn efp_examples() {
        let e = efp_scores(&[0.0, 0.5, 0.001], 0.05, 200);
        assert_eq!(e[0], 200.0);
        assert!((e[1] - 0.1).abs() < 1e-15);
        let e = efp_scores(&[0.001], 10.0, 200);
        assert_eq!(e[0], 200.0);
    }

    #[test]
    fn efp_selection_is_inclusive() {
        assert_eq!(
            select_by_efp(&[0.4, 1.0, 3.2], 1.0),
            vec![true, true, false]
        );
        assert_eq!(select_by_efp(&[2.0, 3.0], 1.0), vec![false, false]);
    }

    #[test]
    fn fdr_rule_examples() {
        assert_eq!(
            select_by_fdr(&[1.8, 0.2, 0.5], 0.3),
            vec![false, true, true]
        );
        assert_eq!(select_by_fdr(&[5.0; 5], 0.5), vec![false; 5]);
        assert_eq!(select_by_fdr(&[0.05], 0.1), vec![true]);
        // a later ratio can qualify even when an earlier one does not
        assert_eq!(
            select_by_fdr(&[0.5, 0.6, 0.6], 0.25),
            vec![true, true, true]
        );
    }

    #[test]
    fn fdelta_threshold_matches_definition() {
        let tau = fdelta_threshold(0.1, 1.0, 0.2).unwrap();
        let eff = 2.0 * (tau - tau * 0.2 + 0.2) - 1.0;
        assert!((0.1 / eff - 1.0).abs() < 1e-12);
        assert!(matches!(
            fdelta_threshold(5.0, 1.0, 0.2),
            Err(Error::FdInfeasible { .. })
        ));
    }
}
