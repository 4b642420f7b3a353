//! Count violations of the selection-independence condition along the path.

use ipss::config::RunConfig;
use ipss::paths::condition_diagnostic;
use ipss::pipeline::{run_paths, Extent};
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, FeatureDesign, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(150, 1);
    sim.seed = 9;
    sim.design = FeatureDesign::Toeplitz(0.9);
    sim.fixed = Some(TrialParams {
        n: 100,
        s: 8,
        signal: 1.0,
    });
    let data = generate_trial(&sim, 0)?;
    let run = run_paths(&data.dataset, &RunConfig::default(), &Extent::Full)?;

    let counts: Vec<Vec<usize>> = (1..=3)
        .map(|m| condition_diagnostic(&run.tensor, &run.paths, &data.truth, m))
        .collect();
    println!(
        "{:>10} {:>7} {:>4} {:>4} {:>4}",
        "lambda", "q_hat", "m=1", "m=2", "m=3"
    );
    for k in 0..run.paths.len() {
        println!(
            "{:>10.4} {:>7.2} {:>4} {:>4} {:>4}",
            run.grid.points()[k],
            run.paths.q_hat[k],
            counts[0][k],
            counts[1][k],
            counts[2][k]
        );
    }
    Ok(())
}
