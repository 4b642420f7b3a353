//! Regularized base estimators.
//!
//! Every estimator maps a (sub)sample and a regularization level to a fitted
//! coefficient vector whose support is the selected feature set. Linear
//! estimators minimize
//!
//! ```text
//! (1/(2m)) ||y - X b||^2 + sum_j penalty(|b_j|, λ)
//! ```
//!
//! over the `m` rows of the sample. `ℓ1`-logistic regression minimizes the
//! mean negative Bernoulli log-likelihood plus `λ ||b||_1` with an
//! unpenalized intercept. Paths are solved from the largest to the smallest
//! `λ` with warm starts.

mod adaptive;
mod linear;
mod logistic;
pub mod penalty;

use crate::config::EstimatorKind;
use crate::data::Dataset;
use crate::error::{Error, Result};

pub use adaptive::{fit_adaptive_lasso, fit_weighted_lasso, ridge_coefficients, ridge_weights};
pub use linear::{fit_lasso, fit_mcp, fit_scad};
pub use logistic::fit_logistic_l1;
pub use penalty::{mcp_update, scad_update, soft_threshold, Penalty};

/// Solver settings for a base estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    /// Concavity of MCP (default 3) or SCAD (default 3.7).
    pub gamma: f64,
    /// Ridge penalty of the adaptive-lasso weight stage.
    pub ridge_penalty: f64,
    /// Cap on coordinate sweeps per regularization level.
    pub max_iter: usize,
    /// Largest coordinate change accepted as converged (linear estimators).
    pub tol: f64,
    /// Relative objective change accepted as converged (logistic).
    pub objective_tol: f64,
}

impl EstimatorSpec {
    pub fn new(kind: EstimatorKind) -> Self {
        let gamma = match kind {
            EstimatorKind::Scad => 3.7,
            _ => 3.0,
        };
        Self {
            kind,
            gamma,
            ridge_penalty: 1.0,
            max_iter: 1000,
            tol: 1e-7,
            objective_tol: 1e-9,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            EstimatorKind::Scad if !(self.gamma > 2.0) => Err(Error::Config(format!(
                "SCAD requires gamma > 2, got {}",
                self.gamma
            ))),
            EstimatorKind::Mcp if !(self.gamma > 1.0) => Err(Error::Config(format!(
                "MCP requires gamma > 1, got {}",
                self.gamma
            ))),
            EstimatorKind::AdaptiveLasso if !(self.ridge_penalty > 0.0) => {
                Err(Error::Config("ridge_penalty must be positive".into()))
            }
            _ if self.max_iter == 0 => Err(Error::Config("max_iter must be positive".into())),
            _ if !(self.tol > 0.0 && self.objective_tol > 0.0) => {
                Err(Error::Config("tolerances must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn linear_penalty(&self) -> Penalty {
        match self.kind {
            EstimatorKind::Mcp => Penalty::Mcp { gamma: self.gamma },
            EstimatorKind::Scad => Penalty::Scad { gamma: self.gamma },
            _ => Penalty::L1,
        }
    }
}

/// Output of one fit at one regularization level.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub beta: Vec<f64>,
    /// Unpenalized intercept (logistic only; zero for linear estimators).
    pub intercept: f64,
    /// `selected[j]` holds exactly when `beta[j] != 0`.
    pub selected: Vec<bool>,
    pub lambda: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitResult {
    pub(crate) fn new(
        beta: Vec<f64>,
        intercept: f64,
        lambda: f64,
        converged: bool,
        iterations: usize,
    ) -> Self {
        let selected = beta.iter().map(|&b| b != 0.0).collect();
        Self {
            beta,
            intercept,
            selected,
            lambda,
            converged,
            iterations,
        }
    }

    pub fn support_size(&self) -> usize {
        self.selected.iter().filter(|&&s| s).count()
    }
}

/// Column-major copy of a row subset, ready for coordinate descent.
#[derive(Debug, Clone)]
pub struct Design {
    m: usize,
    p: usize,
    cols: Vec<f64>,
    y: Vec<f64>,
    col_sq: Vec<f64>,
}

impl Design {
    /// Copy `rows` (all rows when `None`) of a standardized dataset.
    pub fn from_dataset(data: &Dataset, rows: Option<&[usize]>) -> Self {
        let x = data.x();
        let y = data.y();
        let p = data.p();
        let all: Vec<usize>;
        let rows = match rows {
            Some(r) => r,
            None => {
                all = (0..data.n()).collect();
                &all
            }
        };
        let m = rows.len();
        let mut cols = vec![0.0; m * p];
        for (i, &row) in rows.iter().enumerate() {
            let xr = x.row(row);
            for j in 0..p {
                cols[j * m + i] = xr[j];
            }
        }
        let y = rows.iter().map(|&r| y[r]).collect();
        Self::from_parts(m, p, cols, y)
    }

    /// Build from explicit columns (each of length `y.len()`).
    pub fn from_columns(columns: &[Vec<f64>], y: Vec<f64>) -> Self {
        let m = y.len();
        let p = columns.len();
        let mut cols = Vec::with_capacity(m * p);
        for c in columns {
            assert_eq!(c.len(), m, "column length must match response length");
            cols.extend_from_slice(c);
        }
        Self::from_parts(m, p, cols, y)
    }

    fn from_parts(m: usize, p: usize, cols: Vec<f64>, y: Vec<f64>) -> Self {
        let mf = m as f64;
        let col_sq = (0..p)
            .map(|j| cols[j * m..(j + 1) * m].iter().map(|v| v * v).sum::<f64>() / mf)
            .collect();
        Self {
            m,
            p,
            cols,
            y,
            col_sq,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.cols[j * self.m..(j + 1) * self.m]
    }

    /// `(1/m) ||x_j||^2`.
    #[inline]
    pub fn col_sq(&self, j: usize) -> f64 {
        self.col_sq[j]
    }

    /// `(1/m) <x_j, v>` for every column.
    pub fn correlations(&self, v: &[f64]) -> Vec<f64> {
        let mf = self.m as f64;
        (0..self.p).map(|j| dot(self.col(j), v) / mf).collect()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fit one regularization level from a cold start.
pub fn fit(design: &Design, lambda: f64, spec: &EstimatorSpec) -> FitResult {
    fit_path(design, &[lambda], spec)
        .pop()
        .expect("one lambda in, one fit out")
}

/// Warm-started fits along `lambdas`, which should be sorted descending.
pub fn fit_path(design: &Design, lambdas: &[f64], spec: &EstimatorSpec) -> Vec<FitResult> {
    let mut solver = PathSolver::new(design, spec);
    lambdas.iter().map(|&lam| solver.fit(lam)).collect()
}

/// Keeps solver state between regularization levels for warm starts.
pub struct PathSolver<'a> {
    design: &'a Design,
    spec: EstimatorSpec,
    inner: SolverState,
}

enum SolverState {
    Linear {
        state: linear::LinearState,
        weights: Option<Vec<f64>>,
    },
    Logistic(logistic::LogisticState),
}

impl<'a> PathSolver<'a> {
    pub fn new(design: &'a Design, spec: &EstimatorSpec) -> Self {
        let inner = match spec.kind {
            EstimatorKind::LogisticL1 => {
                SolverState::Logistic(logistic::LogisticState::new(design))
            }
            EstimatorKind::AdaptiveLasso => SolverState::Linear {
                state: linear::LinearState::new(design),
                weights: Some(ridge_weights(design, spec.ridge_penalty)),
            },
            _ => SolverState::Linear {
                state: linear::LinearState::new(design),
                weights: None,
            },
        };
        Self {
            design,
            spec: *spec,
            inner,
        }
    }

    pub fn fit(&mut self, lambda: f64) -> FitResult {
        match &mut self.inner {
            SolverState::Linear { state, weights } => linear::solve(
                self.design,
                lambda,
                self.spec.linear_penalty(),
                weights.as_deref(),
                state,
                &self.spec,
            ),
            SolverState::Logistic(state) => logistic::solve(self.design, lambda, state, &self.spec),
        }
    }
}
