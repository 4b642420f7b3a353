//! Result files: JSON summary, ranked CSV, stability-path CSV and SVG.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::baselines::BaselineResult;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::grid::LambdaGrid;
use crate::paths::StabilityPaths;
use crate::pipeline::{GridSummary, PathRun, SelectionResult};
use crate::selection::Scorer;
use crate::svg::{self, Plot, Series};

#[derive(Debug, Serialize)]
struct FeatureRecord<'a> {
    name: &'a str,
    index: usize,
    score: f64,
    efp: f64,
    selected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    fdr_selected: Option<bool>,
}

#[derive(Debug, Serialize)]
struct ResultDocument<'a> {
    method: &'static str,
    estimator: String,
    scorer: Scorer,
    mode: crate::config::SelectionMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_fdr: Option<f64>,
    b_subsamples: usize,
    seed: u64,
    n: usize,
    p: usize,
    bound_integral: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    grid: &'a GridSummary,
    selected: Vec<&'a str>,
    features: Vec<FeatureRecord<'a>>,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    baselines: &'a [BaselineResult],
    flags: &'a [String],
}

/// JSON document for an IPSS result (optionally with baselines run on the
/// same paths).
pub fn result_json(
    result: &SelectionResult,
    names: &[String],
    config: &RunConfig,
    n: usize,
    baselines: &[BaselineResult],
) -> Result<String> {
    let features = (0..names.len())
        .map(|j| FeatureRecord {
            name: &names[j],
            index: j,
            score: result.scores[j],
            efp: result.efp[j],
            selected: result.selected[j],
            fdr_selected: result.fdr_selected.as_ref().map(|s| s[j]),
        })
        .collect();
    let doc = ResultDocument {
        method: "ipss",
        estimator: config.estimator.to_string(),
        scorer: result.scorer,
        mode: result.mode,
        target_fdr: result.fdr_selected.as_ref().and(config.target_fdr),
        b_subsamples: config.b_subsamples,
        seed: config.seed,
        n,
        p: names.len(),
        bound_integral: result.bound_integral,
        tau: result.tau,
        grid: &result.grid,
        selected: result
            .selected_indices()
            .into_iter()
            .map(|j| names[j].as_str())
            .collect(),
        features,
        baselines,
        flags: &result.flags,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Features ranked by efp: `rank,feature,index,efp,score,selected`.
pub fn ranking_csv(result: &SelectionResult, names: &[String]) -> String {
    let mut out = String::from("rank,feature,index,efp,score,selected\n");
    for (rank, j) in result.ranking().into_iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            rank + 1,
            csv_field(&names[j]),
            j,
            result.efp[j],
            result.scores[j],
            result.selected[j]
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per feature, one column per evaluated grid point.
pub fn paths_csv(paths: &StabilityPaths, grid: &LambdaGrid, names: &[String]) -> String {
    let mut out = String::from("feature");
    for lam in &grid.points()[..paths.len()] {
        out.push_str(&format!(",{lam:e}"));
    }
    out.push('\n');
    for (name, path) in names.iter().zip(&paths.pi_hat) {
        out.push_str(&csv_field(name));
        for v in path {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Stability paths against `log10 λ` with optional `λ_min` markers.
pub fn paths_svg(
    paths: &StabilityPaths,
    grid: &LambdaGrid,
    names: &[String],
    markers: &[(f64, String)],
) -> String {
    let xs: Vec<f64> = grid.points()[..paths.len()]
        .iter()
        .map(|l| l.log10())
        .collect();
    let series = paths
        .pi_hat
        .iter()
        .enumerate()
        .map(|(j, path)| {
            let pts = xs.iter().copied().zip(path.iter().copied()).collect();
            Series::new(names[j].clone(), pts, svg::color(j))
        })
        .collect();
    let plot = Plot {
        title: "Stability paths".into(),
        x_label: "log10 lambda".into(),
        y_label: "selection proportion".into(),
        series,
        markers: markers
            .iter()
            .map(|(l, s)| (l.log10(), s.clone()))
            .collect(),
        y_range: Some((0.0, 1.0)),
        ..Default::default()
    };
    svg::render(&[plot], 720.0, 420.0)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Write `paths.csv`, `paths.svg`, and `grid.csv` under `dir`.
pub fn write_paths(
    dir: &Path,
    run: &PathRun,
    names: &[String],
    markers: &[(f64, String)],
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_file(
        &dir.join("paths.csv"),
        &paths_csv(&run.paths, &run.grid, names),
    )?;
    write_file(
        &dir.join("paths.svg"),
        &paths_svg(&run.paths, &run.grid, names, markers),
    )?;
    write_file(&dir.join("grid.csv"), &run.grid.to_csv())
}

/// Write every artifact of a `run` invocation under `dir`.
pub fn write_run(
    dir: &Path,
    run: &PathRun,
    result: &SelectionResult,
    names: &[String],
    config: &RunConfig,
    n: usize,
) -> Result<()> {
    let marker = (
        result.grid.lambda_min,
        format!("lambda_min ({})", result.scorer),
    );
    write_paths(dir, run, names, &[marker])?;
    write_file(
        &dir.join("result.json"),
        &result_json(result, names, config, n, &[])?,
    )?;
    write_file(&dir.join("ranking.csv"), &ranking_csv(result, names))?;
    write_file(&dir.join("resolved-config.toml"), &config.to_toml())
}
