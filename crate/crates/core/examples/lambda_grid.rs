//! Build a regularization grid, integrate on it, and truncate it.

use ipss::config::EstimatorKind;
use ipss::estimators::EstimatorSpec;
use ipss::grid::{lambda_max, lambda_zero, z_alpha, LambdaGrid};
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(60, 1);
    sim.fixed = Some(TrialParams {
        n: 80,
        s: 5,
        signal: 1.0,
    });
    let data = generate_trial(&sim, 0)?;

    let spec = EstimatorSpec::new(EstimatorKind::Lasso);
    let lmax = lambda_max(&data.dataset, EstimatorKind::Lasso)?;
    let lz = lambda_zero(&data.dataset, &spec, lmax, 0.5);
    println!(
        "lambda_max {lmax:.4}, lambda_0 {:.3e} (scan exhausted: {})",
        lz.lambda, lz.exhausted
    );

    let grid = LambdaGrid::new(lmax, lz.lambda, 25, 1.0)?;
    println!(
        "ratio {:.4}, first points {:?}",
        grid.ratio(),
        &grid.points()[..3]
    );

    // mean of log(lambda) under the log-uniform measure; right-endpoint
    // sums are first order in 1/r
    let exact = (lmax.ln() + lz.lambda.ln()) / 2.0;
    for r in [25, 100, 400] {
        let g = LambdaGrid::new(lmax, lz.lambda, r, 1.0)?;
        let logs: Vec<f64> = g.points().iter().map(|l| l.ln()).collect();
        println!(
            "E[log lambda] r={r:<3}: {:.4} (exact {exact:.4})",
            g.integrate(&logs)
        );
    }
    println!("z_alpha at alpha=1: {:.4}", z_alpha(lz.lambda, lmax, 1.0));

    let short = grid.truncated(9);
    println!(
        "truncated at index 9: lambda_min {:.4}, weights sum {:.6}",
        short.lambda_min(),
        short.weights().iter().sum::<f64>()
    );
    Ok(())
}
