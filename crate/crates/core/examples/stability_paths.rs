//! Compute complementary-pairs stability paths and print them as a table.

use ipss::config::RunConfig;
use ipss::pipeline::{run_paths, Extent};
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(50, 1);
    sim.seed = 3;
    sim.fixed = Some(TrialParams {
        n: 100,
        s: 3,
        signal: 2.0,
    });
    let data = generate_trial(&sim, 0)?;

    let mut config = RunConfig::default();
    config.grid_points = 12;
    let run = run_paths(&data.dataset, &config, &Extent::Full)?;
    let paths = &run.paths;

    // the three features with the largest final selection proportion
    let last = paths.len() - 1;
    let mut order: Vec<usize> = (0..paths.p()).collect();
    order.sort_by(|&a, &b| paths.pi_hat[b][last].total_cmp(&paths.pi_hat[a][last]));
    let top = &order[..3];

    print!("{:>10} {:>7}", "lambda", "q_hat");
    for j in top {
        print!(
            " {:>6}",
            format!("x{j}{}", if data.truth[*j] { "*" } else { "" })
        );
    }
    println!();
    for k in 0..paths.len() {
        print!("{:>10.4} {:>7.2}", run.grid.points()[k], paths.q_hat[k]);
        for &j in top {
            print!(" {:>6.2}", paths.pi_hat[j][k]);
        }
        println!();
    }
    for f in &run.flags {
        println!("note: {f}");
    }
    Ok(())
}
