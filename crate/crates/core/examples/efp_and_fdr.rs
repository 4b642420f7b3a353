//! Score one set of paths with each scorer and select by E(FP) or FDR.

use ipss::config::{RunConfig, SelectionMode};
use ipss::pipeline::{run_paths, Extent};
use ipss::selection::Scorer;
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(200, 1);
    sim.seed = 11;
    sim.fixed = Some(TrialParams {
        n: 150,
        s: 10,
        signal: 1.0,
    });
    let data = generate_trial(&sim, 0)?;
    let run = run_paths(&data.dataset, &RunConfig::default(), &Extent::Full)?;

    let count = |sel: &[bool]| {
        let tp = sel
            .iter()
            .zip(&data.truth)
            .filter(|(s, t)| **s && **t)
            .count();
        (tp, sel.iter().filter(|&&s| s).count() - tp)
    };
    for scorer in [Scorer::H1, Scorer::H2, Scorer::H3] {
        for mode in [SelectionMode::TargetEfp(1.0), SelectionMode::TargetFdr(0.1)] {
            let res = run.select(scorer, 0.05, mode, None)?;
            let (tp, fp) = count(&res.selected);
            println!(
                "{scorer}  {mode:?}: lambda_min {:.4}, I = {:.3}, TP {tp}, FP {fp}",
                res.grid.lambda_min, res.bound_integral
            );
        }
    }
    Ok(())
}
