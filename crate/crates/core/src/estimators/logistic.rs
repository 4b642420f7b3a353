//! `ℓ1`-penalized logistic regression by proximal coordinate descent.
//!
//! Each coordinate step uses the global curvature bound `v_j / 4` of the
//! mean log-loss, so every step is a majorize-minimize step and the
//! objective never increases.

use super::{soft_threshold, Design, EstimatorSpec, FitResult};

const COEF_CAP: f64 = 1e3;

pub(crate) struct LogisticState {
    beta: Vec<f64>,
    intercept: f64,
    eta: Vec<f64>,
    mu: Vec<f64>,
    degenerate: bool,
}

#[inline]
fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

impl LogisticState {
    pub(crate) fn new(design: &Design) -> Self {
        let m = design.m();
        let ybar = design.y().iter().sum::<f64>() / m as f64;
        let degenerate = ybar <= 0.0 || ybar >= 1.0;
        let intercept = if degenerate {
            0.0
        } else {
            (ybar / (1.0 - ybar)).ln()
        };
        Self {
            beta: vec![0.0; design.p()],
            intercept,
            eta: vec![intercept; m],
            mu: vec![sigmoid(intercept); m],
            degenerate,
        }
    }

    fn shift(&mut self, x: Option<&[f64]>, d: f64) {
        match x {
            Some(x) => {
                for ((e, mu), xi) in self.eta.iter_mut().zip(self.mu.iter_mut()).zip(x) {
                    *e += d * xi;
                    *mu = sigmoid(*e);
                }
            }
            None => {
                for (e, mu) in self.eta.iter_mut().zip(self.mu.iter_mut()) {
                    *e += d;
                    *mu = sigmoid(*e);
                }
            }
        }
    }
}

/// Mean negative log-likelihood plus `lambda ||beta||_1`.
pub(crate) fn objective(design: &Design, state: &LogisticState, lambda: f64) -> f64 {
    let m = design.m() as f64;
    let loss: f64 = state
        .eta
        .iter()
        .zip(design.y())
        .map(|(&e, &y)| softplus(e) - y * e)
        .sum::<f64>()
        / m;
    loss + lambda * state.beta.iter().map(|b| b.abs()).sum::<f64>()
}

/// One pass over the intercept and `coords`. Returns whether a coefficient
/// hit the magnitude cap.
fn sweep(
    design: &Design,
    state: &mut LogisticState,
    coords: impl Iterator<Item = usize>,
    lambda: f64,
) -> bool {
    let mf = design.m() as f64;
    let y = design.y();
    let mut capped = false;

    let g0 = state.mu.iter().zip(y).map(|(mu, y)| mu - y).sum::<f64>() / mf;
    let mut d0 = -4.0 * g0;
    let target = (state.intercept + d0).clamp(-COEF_CAP, COEF_CAP);
    if target != state.intercept + d0 {
        capped = true;
    }
    d0 = target - state.intercept;
    if d0 != 0.0 {
        state.intercept = target;
        state.shift(None, d0);
    }

    for j in coords {
        let v = design.col_sq(j) / 4.0;
        if v <= 0.0 {
            continue;
        }
        let x = design.col(j);
        let g = state
            .mu
            .iter()
            .zip(y)
            .zip(x)
            .map(|((mu, y), xi)| (mu - y) * xi)
            .sum::<f64>()
            / mf;
        let old = state.beta[j];
        let mut new = soft_threshold(v * old - g, lambda) / v;
        if new.abs() > COEF_CAP {
            new = new.signum() * COEF_CAP;
            capped = true;
        }
        if new != old {
            state.beta[j] = new;
            state.shift(Some(x), new - old);
        }
    }
    capped
}

pub(crate) fn solve(
    design: &Design,
    lambda: f64,
    state: &mut LogisticState,
    spec: &EstimatorSpec,
) -> FitResult {
    let p = design.p();
    if state.degenerate {
        return FitResult::new(vec![0.0; p], 0.0, lambda, true, 0);
    }
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-12);
    let mut iters = 0;
    let mut converged = false;
    let mut capped = false;
    let mut obj = objective(design, state, lambda);
    while iters < spec.max_iter {
        capped |= sweep(design, state, 0..p, lambda);
        iters += 1;
        let next = objective(design, state, lambda);
        debug_assert!(
            next <= obj + 1e-10 * (1.0 + obj.abs()),
            "objective increased"
        );
        let done = rel(obj, next) < spec.objective_tol;
        obj = next;
        if done {
            converged = true;
            break;
        }
        let active: Vec<usize> = (0..p).filter(|&j| state.beta[j] != 0.0).collect();
        while iters < spec.max_iter {
            capped |= sweep(design, state, active.iter().copied(), lambda);
            iters += 1;
            let next = objective(design, state, lambda);
            let done = rel(obj, next) < spec.objective_tol;
            obj = next;
            if done {
                break;
            }
        }
    }
    FitResult::new(
        state.beta.clone(),
        state.intercept,
        lambda,
        converged && !capped,
        iters,
    )
}

/// `ℓ1`-logistic fit at a single `lambda` from a cold start. Responses must
/// be 0/1; if every label is equal the coefficients are all zero.
pub fn fit_logistic_l1(design: &Design, lambda: f64, spec: &EstimatorSpec) -> FitResult {
    let mut state = LogisticState::new(design);
    solve(design, lambda, &mut state, spec)
}

#[cfg(test)]
fn mean_gradient(design: &Design, beta: &[f64], intercept: f64) -> Vec<f64> {
    let m = design.m();
    let mut eta = vec![intercept; m];
    for (j, &b) in beta.iter().enumerate() {
        if b != 0.0 {
            for (e, xi) in eta.iter_mut().zip(design.col(j)) {
                *e += b * xi;
            }
        }
    }
    let resid: Vec<f64> = eta
        .iter()
        .zip(design.y())
        .map(|(&e, &y)| sigmoid(e) - y)
        .collect();
    (0..design.p())
        .map(|j| super::dot(design.col(j), &resid) / m as f64)
        .collect()
}
