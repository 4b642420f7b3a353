//! A small simulation study comparing IPSS with stability selection.

use std::io::Write;

use ipss::simulate::experiment::run_experiment_with;
use ipss::simulate::{ExperimentConfig, FeatureDesign};

fn main() -> ipss::Result<()> {
    let mut cfg = ExperimentConfig::new(100, 10);
    cfg.seed = 2024;
    cfg.design = FeatureDesign::Toeplitz(0.5);
    let res = run_experiment_with(&cfg, |done, total| {
        eprint!("\rtrial {done}/{total}");
        std::io::stderr().flush().ok();
    })?;
    eprintln!();
    print!("{}", res.summary_csv());
    Ok(())
}
