//! Adaptive lasso: a ridge stage supplies per-feature weights for a
//! weighted lasso.

use nalgebra::{DMatrix, DVector};

use super::{linear, Design, EstimatorSpec, FitResult, Penalty};

/// Ridge coefficients minimizing `||y - X b||^2 + ridge ||b||^2`.
///
/// Uses the `p x p` normal equations when `m >= p` and the `m x m` dual
/// form `X'(XX' + ridge I)^{-1} y` otherwise.
pub fn ridge_coefficients(design: &Design, ridge: f64) -> Vec<f64> {
    let m = design.m();
    let p = design.p();
    let x = DMatrix::from_fn(m, p, |i, j| design.col(j)[i]);
    let y = DVector::from_column_slice(design.y());
    let beta = if m >= p {
        let mut gram = x.transpose() * &x;
        for j in 0..p {
            gram[(j, j)] += ridge;
        }
        let rhs = x.transpose() * &y;
        solve_spd(gram, rhs)
    } else {
        let mut gram = &x * x.transpose();
        for i in 0..m {
            gram[(i, i)] += ridge;
        }
        let alpha = solve_spd(gram, y);
        x.transpose() * alpha
    };
    beta.iter().copied().collect()
}

fn solve_spd(a: DMatrix<f64>, b: DVector<f64>) -> DVector<f64> {
    match a.clone().cholesky() {
        Some(ch) => ch.solve(&b),
        // ridge > 0 keeps the matrix positive definite; LU covers round-off
        None => a.lu().solve(&b).unwrap_or_else(|| DVector::zeros(b.len())),
    }
}

/// Adaptive weights `1/|b_ridge|`; an exactly zero ridge coefficient gets
/// an infinite weight and is never selected.
pub fn ridge_weights(design: &Design, ridge: f64) -> Vec<f64> {
    ridge_coefficients(design, ridge)
        .into_iter()
        .map(|b| {
            if b == 0.0 {
                f64::INFINITY
            } else {
                1.0 / b.abs()
            }
        })
        .collect()
}

/// Lasso with per-feature penalty `lambda * weights[j]`.
pub fn fit_weighted_lasso(
    design: &Design,
    lambda: f64,
    weights: &[f64],
    spec: &EstimatorSpec,
) -> FitResult {
    assert_eq!(weights.len(), design.p(), "one weight per feature");
    let mut state = linear::LinearState::new(design);
    linear::solve(design, lambda, Penalty::L1, Some(weights), &mut state, spec)
}

/// Adaptive lasso at a single `lambda`, with ridge penalty `spec.ridge_penalty`.
pub fn fit_adaptive_lasso(design: &Design, lambda: f64, spec: &EstimatorSpec) -> FitResult {
    let w = ridge_weights(design, spec.ridge_penalty);
    fit_weighted_lasso(design, lambda, &w, spec)
}
