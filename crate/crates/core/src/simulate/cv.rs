//! K-fold cross-validated base estimator (minimum mean CV loss), used as a
//! comparison method in simulations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::config::Task;
use crate::data::Dataset;
use crate::error::Result;
use crate::estimators::{fit_path, Design, EstimatorSpec, FitResult};
use crate::grid::lambda_max;

/// Number of points on the CV path.
pub const CV_PATH_POINTS: usize = 50;

/// Path from `λ_max` down to `λ_max / 1e3`.
pub fn cv_path(lambda_max: f64) -> Vec<f64> {
    (0..CV_PATH_POINTS)
        .map(|i| lambda_max * 1e-3f64.powf(i as f64 / (CV_PATH_POINTS - 1) as f64))
        .collect()
}

fn fold_loss(data: &Dataset, rows: &[usize], fit: &FitResult) -> f64 {
    let x = data.x();
    let y = data.y();
    rows.iter()
        .map(|&i| {
            let eta = fit.intercept
                + x.row(i)
                    .iter()
                    .zip(&fit.beta)
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
            match data.task() {
                Task::Regression => (y[i] - eta).powi(2),
                Task::Classification => {
                    let softplus = if eta > 0.0 {
                        eta + (-eta).exp().ln_1p()
                    } else {
                        eta.exp().ln_1p()
                    };
                    softplus - y[i] * eta
                }
            }
        })
        .sum::<f64>()
}

/// Select features by `k`-fold CV over [`cv_path`], refitting on all data
/// at the `λ` with the smallest mean held-out loss.
pub fn cv_select<R: Rng + ?Sized>(
    data: &Dataset,
    spec: &EstimatorSpec,
    k: usize,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let lmax = lambda_max(data, spec.kind)?;
    let lams = cv_path(lmax);
    let n = data.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut loss = vec![0.0; lams.len()];
    for fold in 0..k {
        let test: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(i, _)| i % k == fold)
            .map(|(_, &r)| r)
            .collect();
        let mut train: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(i, _)| i % k != fold)
            .map(|(_, &r)| r)
            .collect();
        train.sort_unstable();
        let design = Design::from_dataset(data, Some(&train));
        for (l, fit) in loss.iter_mut().zip(fit_path(&design, &lams, spec)) {
            *l += fold_loss(data, &test, &fit);
        }
    }
    let best = loss
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let full = Design::from_dataset(data, None);
    let fits = fit_path(&full, &lams[..=best], spec);
    Ok(fits
        .last()
        .map(|f| f.selected.clone())
        .unwrap_or_else(|| vec![false; data.p()]))
}
