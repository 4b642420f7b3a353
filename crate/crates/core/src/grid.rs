//! Regularization grid, the measures `μ_α`, and the Riemann quadrature
//! used for every integral over `Λ`.
//!
//! The grid holds `r` geometric points `λ_i = λ_max ρ^i` (`i = 0..r`) with
//! `ρ = (λ_lo/λ_max)^{1/r}`. Each point is the upper endpoint of the cell
//! `[λ_max ρ^{i+1}, λ_max ρ^i]`, so the points tile `[λ_lo, λ_max]` as
//! right-endpoint Riemann nodes. Truncating at index `K` keeps points
//! `0..=K` and sets `λ_min = λ_max ρ^{K+1}`.

use std::fmt::Write as _;

use crate::config::EstimatorKind;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{Design, EstimatorSpec, PathSolver};
use crate::selection::Scorer;

/// Number of points in the `λ_0` scan.
pub const SCAN_POINTS: usize = 100;
/// The scan reaches down to `λ_max / SCAN_DEPTH`.
pub const SCAN_DEPTH: f64 = 1e10;

/// Largest regularization level of the grid.
///
/// Regression: `2 max_j |(1/n) Σ_i x_ij y_i|`. Logistic:
/// `10 / max_j |(1/n) Σ_i x_ij ỹ_i|` with `ỹ_i = y_i - ȳ(1-ȳ)`.
pub fn lambda_max(data: &Dataset, kind: EstimatorKind) -> Result<f64> {
    let x = data.x();
    let n = data.n() as f64;
    let y: Vec<f64> = match kind {
        EstimatorKind::LogisticL1 => {
            let ybar = data.y().sum() / n;
            data.y().iter().map(|v| v - ybar * (1.0 - ybar)).collect()
        }
        _ => data.y().to_vec(),
    };
    let mut best: f64 = 0.0;
    for col in x.columns() {
        let c: f64 = col.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / n;
        best = best.max(c.abs());
    }
    if !(best > 1e-14) {
        return Err(Error::DegenerateData(
            "the response is uncorrelated with every feature".into(),
        ));
    }
    Ok(match kind {
        EstimatorKind::LogisticL1 => 10.0 / best,
        _ => 2.0 * best,
    })
}

/// Outcome of the `λ_0` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaZero {
    pub lambda: f64,
    /// The scan never selected more than the cap, so `λ_0 = λ_max / 1e10`.
    pub exhausted: bool,
    /// Scan points fitted before stopping.
    pub scanned: usize,
}

/// The 100 log-spaced scan points from `λ_max` down to `λ_max / 1e10`.
pub fn scan_points(lambda_max: f64) -> Vec<f64> {
    (0..SCAN_POINTS)
        .map(|i| lambda_max * SCAN_DEPTH.powf(-(i as f64) / (SCAN_POINTS - 1) as f64))
        .collect()
}

/// Scan the full data downward from `λ_max`, stopping once more than
/// `max_fraction * p` features are selected. Returns the smallest scanned
/// `λ` with fewer than `max_fraction * p` features selected.
pub fn lambda_zero(
    data: &Dataset,
    spec: &EstimatorSpec,
    lambda_max: f64,
    max_fraction: f64,
) -> LambdaZero {
    let design = Design::from_dataset(data, None);
    let cap = max_fraction * data.p() as f64;
    let points = scan_points(lambda_max);
    let mut solver = PathSolver::new(&design, spec);
    let mut last_below = None;
    for (i, &lam) in points.iter().enumerate() {
        let size = solver.fit(lam).support_size() as f64;
        if size > cap {
            return LambdaZero {
                lambda: last_below.unwrap_or(lambda_max),
                exhausted: false,
                scanned: i + 1,
            };
        }
        if size < cap {
            last_below = Some(lam);
        }
    }
    LambdaZero {
        lambda: points[SCAN_POINTS - 1],
        exhausted: true,
        scanned: SCAN_POINTS,
    }
}

/// `z_α = ∫_lo^hi λ^{-α} dλ`.
pub fn z_alpha(lo: f64, hi: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        (hi / lo).ln()
    } else {
        (hi.powf(1.0 - alpha) - lo.powf(1.0 - alpha)) / (1.0 - alpha)
    }
}

/// Geometric regularization grid with `μ_α` quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    points: Vec<f64>,
    raw: Vec<f64>,
    lambda_lo: f64,
    ratio: f64,
    alpha: f64,
    lambda_min_index: usize,
}

impl LambdaGrid {
    /// `r` points tiling `[lambda_lo, lambda_max]`, all retained.
    pub fn new(lambda_max: f64, lambda_lo: f64, r: usize, alpha: f64) -> Result<Self> {
        if r == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(lambda_lo > 0.0 && lambda_lo < lambda_max && lambda_max.is_finite()) {
            return Err(Error::Config(format!(
                "grid needs 0 < lambda_lo < lambda_max, got [{lambda_lo}, {lambda_max}]"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::Config("alpha must be finite".into()));
        }
        let ratio = (lambda_lo / lambda_max).powf(1.0 / r as f64);
        let points: Vec<f64> = (0..r).map(|i| lambda_max * ratio.powi(i as i32)).collect();
        let raw = points.iter().map(|l| l.powf(1.0 - alpha)).collect();
        Ok(Self {
            points,
            raw,
            lambda_lo,
            ratio,
            alpha,
            lambda_min_index: r - 1,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Common ratio `λ_{i+1}/λ_i`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn lambda_max(&self) -> f64 {
        self.points[0]
    }

    /// Lower edge of the untruncated grid (`λ_0`).
    pub fn lambda_lo(&self) -> f64 {
        self.lambda_lo
    }

    /// Unnormalized quadrature weights `λ_i^{1-α}` for every point.
    pub fn raw_weights(&self) -> &[f64] {
        &self.raw
    }

    pub fn lambda_min_index(&self) -> usize {
        self.lambda_min_index
    }

    /// Lower edge of the retained interval, `λ_max ρ^{K+1}`.
    pub fn lambda_min(&self) -> f64 {
        self.lower_edge(self.lambda_min_index)
    }

    fn lower_edge(&self, index: usize) -> f64 {
        if index + 1 == self.r() {
            self.lambda_lo
        } else {
            self.points[index] * self.ratio
        }
    }

    /// Number of retained points.
    pub fn retained_len(&self) -> usize {
        self.lambda_min_index + 1
    }

    pub fn retained(&self) -> &[f64] {
        &self.points[..self.retained_len()]
    }

    /// Keep points `0..=index` (clamped to the grid).
    pub fn truncate(&mut self, index: usize) {
        self.lambda_min_index = index.min(self.r() - 1);
    }

    pub fn truncated(&self, index: usize) -> Self {
        let mut g = self.clone();
        g.truncate(index);
        g
    }

    /// Retained weights renormalized to sum to one.
    pub fn weights(&self) -> Vec<f64> {
        let w = &self.raw[..self.retained_len()];
        let total: f64 = w.iter().sum();
        w.iter().map(|v| v / total).collect()
    }

    /// Riemann partial sum over points `0..=index`, normalized by `z_α`
    /// on `[λ_max ρ^{index+1}, λ_max]`. `values` must cover `0..=index`.
    pub fn partial_sum(&self, values: &[f64], index: usize) -> f64 {
        let lo = self.lower_edge(index);
        let z = z_alpha(lo, self.lambda_max(), self.alpha);
        let s: f64 = self.raw[..=index]
            .iter()
            .zip(values)
            .map(|(w, g)| w * g)
            .sum();
        (1.0 - self.ratio) / z * s
    }

    /// Riemann approximation of `∫ g dμ_α` over the retained interval.
    pub fn quadrature(&self, values: &[f64]) -> Result<f64> {
        if values.len() < self.retained_len() {
            return Err(Error::EmptyGrid);
        }
        Ok(self.partial_sum(values, self.lambda_min_index))
    }

    /// `Σ_k w_k g_k` with the renormalized retained weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights().iter().zip(values).map(|(w, g)| w * g).sum()
    }

    /// Points, raw weights, and retained normalized weights as CSV text.
    pub fn to_csv(&self) -> String {
        let w = self.weights();
        let mut out = String::from("index,lambda,raw_weight,weight,retained\n");
        for (i, (&l, &rw)) in self.points.iter().zip(&self.raw).enumerate() {
            let (wi, kept) = w.get(i).map_or((0.0, false), |&v| (v, true));
            let _ = writeln!(out, "{i},{l:e},{rw:e},{wi:e},{kept}");
        }
        out
    }
}

/// Where the cutoff rule truncates the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff {
    /// Last retained index.
    pub index: usize,
    /// The first partial sum already exceeded `C`, so `Λ = {λ_max}`.
    pub degenerate: bool,
    /// Some partial sum exceeded `C` before the grid ran out.
    pub exceeded: bool,
}

/// Scan partial sums of `psi` from `λ_max` downward and keep every index
/// whose partial sum is at most `c`. Only the first `psi.len()` points are
/// considered.
pub fn cutoff_index(psi: &[f64], grid: &LambdaGrid, c: f64) -> Cutoff {
    let n = psi.len().min(grid.r());
    for k in 0..n {
        if grid.partial_sum(psi, k) > c {
            return Cutoff {
                index: k.saturating_sub(1),
                degenerate: k == 0,
                exceeded: true,
            };
        }
    }
    Cutoff {
        index: n.saturating_sub(1),
        degenerate: false,
        exceeded: false,
    }
}

/// `λ_min` by the integral cutoff: accumulate the scorer's bound integrand
/// evaluated at `q_hat` and stop once the partial sum exceeds `c`.
pub fn lambda_min_by_cutoff(
    q_hat: &[f64],
    grid: &LambdaGrid,
    scorer: Scorer,
    b: usize,
    p: usize,
    c: f64,
) -> Result<Cutoff> {
    let psi = q_hat
        .iter()
        .map(|&q| scorer.bound_integrand(q, b, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(cutoff_index(&psi, grid, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_geometric() {
        let g = LambdaGrid::new(3.0, 3e-4, 25, 1.0).unwrap();
        assert_eq!(g.points()[0], 3.0);
        for w in g.points().windows(2) {
            assert!((w[1] / w[0] - g.ratio()).abs() < 1e-12);
        }
        assert!((g.points()[24] * g.ratio() - 3e-4).abs() < 1e-15);
    }

    #[test]
    fn z_alpha_closed_forms() {
        assert!((z_alpha(0.1, 10.0, 1.0) - 100f64.ln()).abs() < 1e-12);
        assert!((z_alpha(1.0, 2.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((z_alpha(1.0, 4.0, 0.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constants_integrate_to_themselves() {
        for alpha in [0.0, 0.75, 1.0, 1.25] {
            // the right-endpoint rule is only close on short log ranges
            let g = LambdaGrid::new(2.0, 1.0, 25, alpha).unwrap();
            let ones = vec![1.0; 25];
            let q = g.quadrature(&ones).unwrap();
            assert!((q - 1.0).abs() < 0.04, "alpha {alpha}: {q}");
            assert!((g.integrate(&ones) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_integrand_on_unit_interval() {
        let g = LambdaGrid::new(2.0, 1.0, 200, 0.0).unwrap();
        let vals: Vec<f64> = g.points().to_vec();
        let q = g.quadrature(&vals).unwrap();
        assert!((q - 1.5).abs() / 1.5 < 0.01);
    }

    #[test]
    fn truncation_renormalizes() {
        let mut g = LambdaGrid::new(1.0, 1e-3, 25, 0.75).unwrap();
        g.truncate(9);
        assert_eq!(g.retained_len(), 10);
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((g.lambda_min() - g.points()[9] * g.ratio()).abs() < 1e-15);
        g.truncate(100);
        assert_eq!(g.lambda_min_index(), 24);
        assert_eq!(g.lambda_min(), 1e-3);
    }

    #[test]
    fn zero_integrand_never_cuts() {
        let g = LambdaGrid::new(1.0, 1e-3, 25, 1.0).unwrap();
        let c = cutoff_index(&[0.0; 25], &g, 0.05);
        assert_eq!(
            c,
            Cutoff {
                index: 24,
                degenerate: false,
                exceeded: false
            }
        );
    }

    #[test]
    fn full_model_size_cuts_immediately() {
        let g = LambdaGrid::new(1.0, 1e-3, 25, 1.0).unwrap();
        let q = vec![200.0; 25];
        let c = lambda_min_by_cutoff(&q, &g, Scorer::H2, 50, 200, 0.05).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.index, 0);
    }
}
