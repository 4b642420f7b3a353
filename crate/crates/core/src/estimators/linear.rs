//! Cyclic coordinate descent for penalized least squares.

use super::{dot, Design, EstimatorSpec, FitResult, Penalty};
use crate::config::EstimatorKind;

/// Coefficients and residual `y - X b`, carried across a path.
pub(crate) struct LinearState {
    beta: Vec<f64>,
    resid: Vec<f64>,
}

impl LinearState {
    pub(crate) fn new(design: &Design) -> Self {
        Self {
            beta: vec![0.0; design.p()],
            resid: design.y().to_vec(),
        }
    }
}

pub(crate) fn objective(
    design: &Design,
    state: &LinearState,
    lambda: f64,
    penalty: Penalty,
    weights: Option<&[f64]>,
) -> f64 {
    let loss = dot(&state.resid, &state.resid) / (2.0 * design.m() as f64);
    let pen: f64 = state
        .beta
        .iter()
        .enumerate()
        .filter(|(_, b)| **b != 0.0)
        .map(|(j, &b)| {
            let w = weights.map_or(1.0, |w| w[j]);
            penalty.value(b, lambda * w)
        })
        .sum();
    loss + pen
}

/// One pass over `coords`; returns the largest absolute coefficient change.
fn sweep(
    design: &Design,
    state: &mut LinearState,
    coords: impl Iterator<Item = usize>,
    lambda: f64,
    penalty: Penalty,
    weights: Option<&[f64]>,
) -> f64 {
    let mf = design.m() as f64;
    let mut max_change: f64 = 0.0;
    for j in coords {
        let w = weights.map_or(1.0, |w| w[j]);
        if w.is_infinite() {
            continue;
        }
        let v = design.col_sq(j);
        if v <= 0.0 {
            continue;
        }
        let x = design.col(j);
        let old = state.beta[j];
        let z = dot(x, &state.resid) / mf + v * old;
        let new = penalty.update(z, v, lambda * w);
        if new != old {
            let d = new - old;
            for (r, xi) in state.resid.iter_mut().zip(x) {
                *r -= d * xi;
            }
            state.beta[j] = new;
            max_change = max_change.max(d.abs());
        }
    }
    max_change
}

/// Solve at `lambda` starting from `state`. Full sweeps alternate with
/// sweeps restricted to the current support until a full sweep moves no
/// coefficient by more than `spec.tol`.
pub(crate) fn solve(
    design: &Design,
    lambda: f64,
    penalty: Penalty,
    weights: Option<&[f64]>,
    state: &mut LinearState,
    spec: &EstimatorSpec,
) -> FitResult {
    let p = design.p();
    let mut iters = 0;
    let mut converged = false;
    let mut last_obj = objective(design, state, lambda, penalty, weights);
    let mut check = |state: &LinearState| {
        if cfg!(debug_assertions) {
            let obj = objective(design, state, lambda, penalty, weights);
            debug_assert!(
                obj <= last_obj + 1e-9 * (1.0 + last_obj.abs()),
                "objective increased from {last_obj} to {obj}"
            );
            last_obj = obj;
        }
    };
    while iters < spec.max_iter {
        let change = sweep(design, state, 0..p, lambda, penalty, weights);
        iters += 1;
        check(state);
        if change < spec.tol {
            converged = true;
            break;
        }
        let active: Vec<usize> = (0..p).filter(|&j| state.beta[j] != 0.0).collect();
        while iters < spec.max_iter {
            let change = sweep(
                design,
                state,
                active.iter().copied(),
                lambda,
                penalty,
                weights,
            );
            iters += 1;
            check(state);
            if change < spec.tol {
                break;
            }
        }
    }
    FitResult::new(state.beta.clone(), 0.0, lambda, converged, iters)
}

fn fit_with(design: &Design, lambda: f64, kind: EstimatorKind, spec: &EstimatorSpec) -> FitResult {
    let spec = EstimatorSpec { kind, ..*spec };
    let mut state = LinearState::new(design);
    solve(
        design,
        lambda,
        spec.linear_penalty(),
        None,
        &mut state,
        &spec,
    )
}

/// Lasso fit at a single `lambda` from a cold start.
pub fn fit_lasso(design: &Design, lambda: f64, spec: &EstimatorSpec) -> FitResult {
    fit_with(design, lambda, EstimatorKind::Lasso, spec)
}

/// MCP fit (concavity `spec.gamma`) at a single `lambda`.
pub fn fit_mcp(design: &Design, lambda: f64, spec: &EstimatorSpec) -> FitResult {
    fit_with(design, lambda, EstimatorKind::Mcp, spec)
}

/// SCAD fit (concavity `spec.gamma`) at a single `lambda`.
pub fn fit_scad(design: &Design, lambda: f64, spec: &EstimatorSpec) -> FitResult {
    fit_with(design, lambda, EstimatorKind::Scad, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthogonal_design() -> Design {
        // four orthogonal columns with (1/m)||x_j||^2 = 1
        let c1 = vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
        let c2 = vec![1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
        let c3 = vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let beta = [2.0, -0.5, 0.1];
        let y: Vec<f64> = (0..8)
            .map(|i| beta[0] * c1[i] + beta[1] * c2[i] + beta[2] * c3[i])
            .collect();
        Design::from_columns(&[c1, c2, c3], y)
    }

    #[test]
    fn orthogonal_lasso_is_soft_thresholding() {
        let d = orthogonal_design();
        let spec = EstimatorSpec::new(EstimatorKind::Lasso);
        let fit = fit_lasso(&d, 0.3, &spec);
        assert!(fit.converged);
        assert!((fit.beta[0] - 1.7).abs() < 1e-12);
        assert!((fit.beta[1] + 0.2).abs() < 1e-12);
        assert_eq!(fit.beta[2], 0.0);
        assert_eq!(fit.selected, vec![true, true, false]);
    }

    #[test]
    fn orthogonal_mcp_and_scad_match_closed_forms() {
        let d = orthogonal_design();
        let mcp = fit_mcp(&d, 0.3, &EstimatorSpec::new(EstimatorKind::Mcp));
        // |z| = 2 > 0.9 keeps z; |z| = 0.5 is shrunk by S(z, λ)/(1 - 1/γ)
        assert!((mcp.beta[0] - 2.0).abs() < 1e-12);
        assert!((mcp.beta[1] + 0.3).abs() < 1e-12);
        assert_eq!(mcp.beta[2], 0.0);
        let scad = fit_scad(&d, 0.3, &EstimatorSpec::new(EstimatorKind::Scad));
        assert!((scad.beta[0] - 2.0).abs() < 1e-12);
        assert!((scad.beta[1] + 0.2).abs() < 1e-12);
        assert_eq!(scad.beta[2], 0.0);
    }

    #[test]
    fn warm_path_matches_cold_fits() {
        let d = orthogonal_design();
        let spec = EstimatorSpec::new(EstimatorKind::Lasso);
        let lams = [1.5, 0.6, 0.2, 0.05];
        let path = super::super::fit_path(&d, &lams, &spec);
        for (fit, &lam) in path.iter().zip(&lams) {
            let cold = fit_lasso(&d, lam, &spec);
            for (a, b) in fit.beta.iter().zip(&cold.beta) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn large_lambda_gives_empty_support() {
        let d = orthogonal_design();
        let fit = fit_lasso(&d, 2.5, &EstimatorSpec::new(EstimatorKind::Lasso));
        assert_eq!(fit.support_size(), 0);
        assert!(fit.converged);
    }
}
