//! Meinshausen-Bühlmann and unimodal stability selection on shared paths.

use ipss::baselines::{run_baseline, BaselineMethod, BaselineSpec};
use ipss::config::{RunConfig, SelectionMode};
use ipss::pipeline::{run_paths, Extent};
use ipss::selection::Scorer;
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(200, 1);
    sim.seed = 5;
    sim.fixed = Some(TrialParams {
        n: 150,
        s: 10,
        signal: 1.0,
    });
    let data = generate_trial(&sim, 0)?;
    let run = run_paths(&data.dataset, &RunConfig::default(), &Extent::Full)?;

    let tp = |sel: &[bool]| {
        sel.iter()
            .zip(&data.truth)
            .filter(|(s, t)| **s && **t)
            .count()
    };
    let total = |sel: &[bool]| sel.iter().filter(|&&s| s).count();

    for method in [BaselineMethod::Mb, BaselineMethod::Um] {
        for tau in [0.6, 0.75, 0.9] {
            let spec = BaselineSpec {
                method,
                tau,
                target_efp: 1.0,
            };
            let res = run_baseline(&run.paths, &spec)?;
            println!(
                "{method} tau {:.3}: q* {:>6.2}, lambda index {:>2}, TP {}, FP {}",
                res.tau,
                res.q_star,
                res.lambda_min_index,
                tp(&res.selected),
                total(&res.selected) - tp(&res.selected)
            );
            for w in &res.warnings {
                println!("    warning: {w}");
            }
        }
    }
    let ipss = run.select(Scorer::H3, 0.05, SelectionMode::TargetEfp(1.0), None)?;
    println!(
        "ipss h3: TP {}, FP {}",
        tp(&ipss.selected),
        total(&ipss.selected) - tp(&ipss.selected)
    );
    Ok(())
}
