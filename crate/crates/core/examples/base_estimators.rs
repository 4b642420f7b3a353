//! Fit each base estimator once on the same data and compare supports.

use ipss::config::EstimatorKind;
use ipss::estimators::{fit, fit_path, Design, EstimatorSpec};
use ipss::grid::lambda_max;
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, ModelKind, TrialParams};

fn show(name: &str, design: &Design, lambda: f64, spec: &EstimatorSpec) {
    let f = fit(design, lambda, spec);
    let support: Vec<usize> = (0..f.selected.len()).filter(|&j| f.selected[j]).collect();
    println!(
        "{name:<15} lambda {lambda:.4}  converged {}  iters {:>4}  support {support:?}",
        f.converged, f.iterations
    );
}

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(30, 1);
    sim.fixed = Some(TrialParams {
        n: 120,
        s: 4,
        signal: 1.5,
    });
    let data = generate_trial(&sim, 0)?;
    let design = Design::from_dataset(&data.dataset, None);
    let lmax = lambda_max(&data.dataset, EstimatorKind::Lasso)?;
    println!(
        "true support: {:?}",
        (0..30).filter(|&j| data.truth[j]).collect::<Vec<_>>()
    );

    for kind in [
        EstimatorKind::Lasso,
        EstimatorKind::Mcp,
        EstimatorKind::Scad,
        EstimatorKind::AdaptiveLasso,
    ] {
        show(kind.name(), &design, lmax / 8.0, &EstimatorSpec::new(kind));
    }

    // warm-started path: support sizes as lambda falls
    let lambdas: Vec<f64> = (0..8).map(|k| lmax * 0.6f64.powi(k)).collect();
    let sizes: Vec<usize> = fit_path(&design, &lambdas, &EstimatorSpec::new(EstimatorKind::Lasso))
        .iter()
        .map(|f| f.support_size())
        .collect();
    println!("lasso path sizes: {sizes:?}");

    sim.model = ModelKind::Logistic;
    sim.estimator = EstimatorKind::LogisticL1;
    let data = generate_trial(&sim, 0)?;
    let design = Design::from_dataset(&data.dataset, None);
    let lmax = lambda_max(&data.dataset, EstimatorKind::LogisticL1)?;
    let spec = EstimatorSpec::new(EstimatorKind::LogisticL1);
    let lambdas: Vec<f64> = (0..12).map(|k| lmax * 0.4f64.powi(k)).collect();
    let sizes: Vec<usize> = fit_path(&design, &lambdas, &spec)
        .iter()
        .map(|f| f.support_size())
        .collect();
    println!("logistic path sizes: {sizes:?}");
    show("logistic-l1", &design, lambdas[7], &spec);
    Ok(())
}
