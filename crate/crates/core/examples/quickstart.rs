//! Simulate a sparse linear model and recover its support with IPSS.
//!
//! cargo run --release --example quickstart

use ipss::config::RunConfig;
use ipss::pipeline::run_ipss;
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(100, 1);
    sim.seed = 1;
    sim.fixed = Some(TrialParams {
        n: 150,
        s: 5,
        signal: 2.0,
    });
    let trial = generate_trial(&sim, 0)?;

    let mut config = RunConfig::default();
    config.target_efp = Some(1.0);
    config.seed = 7;
    let out = run_ipss(&trial.dataset, &config)?;
    let res = &out.result;

    println!(
        "scorer {}, lambda in [{:.4}, {:.4}], {} of {} grid points kept",
        res.scorer, res.grid.lambda_min, res.grid.lambda_max, res.grid.retained, res.grid.r
    );
    let truth: Vec<usize> = (0..trial.truth.len()).filter(|&j| trial.truth[j]).collect();
    println!("true support: {truth:?}");
    for j in res.ranking().into_iter().take(8) {
        let mark = if res.selected[j] { "*" } else { " " };
        println!(
            "{mark} feature {j:>3}  efp {:>7.3}  score {:.3}",
            res.efp[j], res.scores[j]
        );
    }
    println!("selected: {:?}", res.selected_indices());
    Ok(())
}
