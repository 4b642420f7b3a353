//! Write a dataset to CSV, load it back, run IPSS, and write the report.

use std::fmt::Write as _;

use ipss::config::{RunConfig, Task};
use ipss::data::load_dataset;
use ipss::pipeline::run_ipss;
use ipss::report::write_run;
use ipss::simulate::experiment::generate_trial;
use ipss::simulate::{ExperimentConfig, TrialParams};

fn main() -> ipss::Result<()> {
    let mut sim = ExperimentConfig::new(20, 1);
    sim.fixed = Some(TrialParams {
        n: 100,
        s: 3,
        signal: 2.0,
    });
    let data = generate_trial(&sim, 0)?;
    let x = data.dataset.x();
    let y = data.dataset.y();

    let dir = std::env::temp_dir().join("ipss-csv-example");
    std::fs::create_dir_all(&dir).map_err(|e| ipss::Error::io(&dir, e))?;
    let mut xs = (0..x.ncols())
        .map(|j| format!("gene{j}"))
        .collect::<Vec<_>>()
        .join(",");
    xs.push('\n');
    let mut ys = String::new();
    for i in 0..x.nrows() {
        let row: Vec<String> = x.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(xs, "{}", row.join(",")).unwrap();
        writeln!(ys, "{}", y[i]).unwrap();
    }
    let (xp, yp) = (dir.join("x.csv"), dir.join("y.csv"));
    std::fs::write(&xp, xs).map_err(|e| ipss::Error::io(&xp, e))?;
    std::fs::write(&yp, ys).map_err(|e| ipss::Error::io(&yp, e))?;

    let ds = load_dataset(&xp, &yp, Task::Regression)?;
    let config = RunConfig::default();
    let out = run_ipss(&ds, &config)?;
    let report = dir.join("out");
    write_run(
        &report,
        &out.run,
        &out.result,
        ds.feature_names(),
        &config,
        ds.n(),
    )?;

    let names: Vec<&str> = out
        .result
        .selected_indices()
        .iter()
        .map(|&j| ds.feature_names()[j].as_str())
        .collect();
    println!("selected {names:?}");
    println!(
        "truth    {:?}",
        (0..20)
            .filter(|&j| data.truth[j])
            .map(|j| format!("gene{j}"))
            .collect::<Vec<_>>()
    );
    println!("report written to {}", report.display());
    Ok(())
}
