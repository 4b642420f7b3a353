//! Simulation experiments: per-trial data generation, one shared run of
//! the subsampled paths, and every method evaluated on the shared paths.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use super::cv::cv_select;
use super::design::{
    gen_beta, gen_features, gen_response, sample_trial_params, FeatureDesign, ModelKind,
    TrialParams,
};
use crate::baselines::{run_baseline, solve_q_star, BaselineMethod, BaselineSpec};
use crate::config::{Alpha, EstimatorKind, RunConfig, SelectionMode, Task};
use crate::data::{standardize, Dataset};
use crate::error::{Error, Result};
use crate::pipeline::{estimator_spec, run_paths, Extent, PathRun};
use crate::report::write_file;
use crate::rng::{stream_rng, substream_rng};
use crate::selection::Scorer;
use crate::svg::{self, Plot, Series};

/// A selection method compared in simulations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Ipss(Scorer),
    Baseline(BaselineMethod, f64),
    /// Five-fold minimum-CV base estimator (target independent).
    Cv,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ipss(s) => write!(f, "ipss-{s}"),
            Method::Baseline(m, tau) => write!(f, "{m}-{tau}"),
            Method::Cv => f.write_str("cv"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// `ipss-h2`, `ipss-h3`, `mb`, `um`, `mb-0.9`, `cv`. Baselines default
    /// to `τ = 0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "cv" {
            return Ok(Method::Cv);
        }
        if let Some(rest) = s.strip_prefix("ipss-") {
            return Ok(Method::Ipss(rest.parse()?));
        }
        let (name, tau) = match s.split_once('-') {
            Some((n, t)) => (
                n,
                t.parse::<f64>()
                    .map_err(|_| Error::Config(format!("invalid threshold in method '{s}'")))?,
            ),
            None => (s.as_str(), 0.75),
        };
        Ok(Method::Baseline(name.parse()?, tau))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub p: usize,
    pub trials: usize,
    pub design: FeatureDesign,
    pub model: ModelKind,
    pub estimator: EstimatorKind,
    pub methods: Vec<Method>,
    pub targets: Vec<f64>,
    pub seed: u64,
    pub b_subsamples: usize,
    pub grid_points: usize,
    pub cutoff: f64,
    pub alpha: Alpha,
    /// Fixed `(n, s, signal)` instead of per-trial sampling.
    pub fixed: Option<TrialParams>,
    /// Evaluate every grid point instead of stopping once all methods are
    /// calibrated.
    pub full_grid: bool,
}

impl ExperimentConfig {
    pub fn new(p: usize, trials: usize) -> Self {
        Self {
            p,
            trials,
            design: FeatureDesign::Independent,
            model: ModelKind::LinearNormal,
            estimator: EstimatorKind::Lasso,
            methods: vec![
                Method::Ipss(Scorer::H2),
                Method::Ipss(Scorer::H3),
                Method::Baseline(BaselineMethod::Mb, 0.75),
                Method::Baseline(BaselineMethod::Um, 0.75),
            ],
            targets: vec![1.0, 2.0, 3.0],
            seed: 0,
            b_subsamples: 50,
            grid_points: 25,
            cutoff: 0.05,
            alpha: Alpha::Auto,
            fixed: None,
            full_grid: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.targets.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config("targets must be positive".into()));
        }
        let wants_class = self.model == ModelKind::Logistic;
        if wants_class != (self.estimator.task() == Task::Classification) {
            return Err(Error::Config(format!(
                "estimator '{}' does not fit the response model",
                self.estimator
            )));
        }
        Ok(())
    }

    /// Run configuration for the IPSS part of one trial.
    pub fn run_config(&self, seed: u64) -> RunConfig {
        let mut cfg = RunConfig::new(self.estimator);
        cfg.b_subsamples = self.b_subsamples;
        cfg.grid_points = self.grid_points;
        cfg.cutoff = self.cutoff;
        cfg.alpha = self.alpha;
        cfg.seed = seed;
        cfg.experimental = true;
        cfg
    }
}

/// Generated data for one trial.
#[derive(Debug, Clone)]
pub struct TrialData {
    pub params: TrialParams,
    pub dataset: Dataset,
    pub truth: Vec<bool>,
    /// Seed for the subsampling plan.
    pub plan_seed: u64,
}

/// Draw the parameters, features, coefficients, and response of `trial`.
pub fn generate_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialData> {
    let mut rng = stream_rng(cfg.seed, trial as u64);
    let params = cfg
        .fixed
        .unwrap_or_else(|| sample_trial_params(cfg.p, cfg.model, &mut rng));
    let x = gen_features(&cfg.design, params.n, cfg.p, &mut rng)?;
    let beta = gen_beta(cfg.p, params.s, &mut rng)?;
    let y = gen_response(&x, &beta, params.model(cfg.model), &mut rng)?;
    let truth = beta.iter().map(|b| *b != 0.0).collect();
    let task = if cfg.model == ModelKind::Logistic {
        Task::Classification
    } else {
        Task::Regression
    };
    let dataset = standardize(x.view(), y.view(), task)?;
    Ok(TrialData {
        params,
        dataset,
        truth,
        plan_seed: rng.random(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub method: String,
    pub target: f64,
    pub tp: usize,
    pub fp: usize,
    pub n: usize,
    pub s: usize,
    pub signal: f64,
}

fn count(selected: &[bool], truth: &[bool]) -> (usize, usize) {
    selected
        .iter()
        .zip(truth)
        .filter(|(s, _)| **s)
        .fold(
            (0, 0),
            |(tp, fp), (_, &t)| if t { (tp + 1, fp) } else { (tp, fp + 1) },
        )
}

/// Shared paths for a trial, fitted as far as every method needs.
pub fn trial_paths(
    cfg: &ExperimentConfig,
    data: &TrialData,
    extra_cutoffs: &[f64],
) -> Result<PathRun> {
    let run_cfg = cfg.run_config(data.plan_seed);
    let scorers: Vec<Scorer> = cfg
        .methods
        .iter()
        .filter_map(|m| match m {
            Method::Ipss(s) => Some(*s),
            _ => None,
        })
        .collect();
    let p = cfg.p;
    let mut q_star: Option<f64> = None;
    for m in &cfg.methods {
        if let Method::Baseline(method, tau) = m {
            for &t in &cfg.targets {
                let spec = BaselineSpec {
                    method: *method,
                    tau: *tau,
                    target_efp: t,
                };
                let q = solve_q_star(&spec, cfg.b_subsamples, p)?.q_star;
                q_star = Some(q_star.map_or(q, |v: f64| v.max(q)));
            }
        }
    }
    let extent = if cfg.full_grid {
        Extent::Full
    } else {
        Extent::Needed {
            scorers,
            cutoff: extra_cutoffs.iter().fold(cfg.cutoff, |a, &c| a.max(c)),
            q_star,
        }
    };
    run_paths(&data.dataset, &run_cfg, &extent)
}

/// Evaluate every method and target on one trial.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<TrialOutcome>> {
    let data = generate_trial(cfg, trial)?;
    let needs_paths = cfg.methods.iter().any(|m| !matches!(m, Method::Cv));
    let run = if needs_paths {
        Some(trial_paths(cfg, &data, &[])?)
    } else {
        None
    };
    let mut out = Vec::new();
    let mut push = |method: &Method, target: f64, selected: &[bool]| {
        let (tp, fp) = count(selected, &data.truth);
        out.push(TrialOutcome {
            trial,
            method: method.to_string(),
            target,
            tp,
            fp,
            n: data.params.n,
            s: data.params.s,
            signal: data.params.signal,
        });
    };
    for method in &cfg.methods {
        match method {
            Method::Ipss(scorer) => {
                let run = run.as_ref().expect("paths were fitted");
                for &t in &cfg.targets {
                    let res = run.select(*scorer, cfg.cutoff, SelectionMode::TargetEfp(t), None)?;
                    push(method, t, &res.selected);
                }
            }
            Method::Baseline(m, tau) => {
                let run = run.as_ref().expect("paths were fitted");
                for &t in &cfg.targets {
                    let spec = BaselineSpec {
                        method: *m,
                        tau: *tau,
                        target_efp: t,
                    };
                    let res = run_baseline(&run.paths, &spec)?;
                    push(method, t, &res.selected);
                }
            }
            Method::Cv => {
                let spec = estimator_spec(&cfg.run_config(0));
                let mut rng = substream_rng(cfg.seed, trial as u64, 1);
                let sel = cv_select(&data.dataset, &spec, 5, &mut rng)?;
                for &t in &cfg.targets {
                    push(method, t, &sel);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub target: f64,
    pub trials: usize,
    pub mean_tp: f64,
    pub se_tp: f64,
    pub mean_fp: f64,
    pub se_fp: f64,
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub outcomes: Vec<TrialOutcome>,
    pub failed: Vec<(usize, String)>,
    pub trials: usize,
}

impl ExperimentResult {
    /// Mean and standard error of TP and FP per (method, target), in the
    /// order methods and targets first appear.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut keys: Vec<(String, f64)> = Vec::new();
        for o in &self.outcomes {
            if !keys.iter().any(|(m, t)| *m == o.method && *t == o.target) {
                keys.push((o.method.clone(), o.target));
            }
        }
        keys.into_iter()
            .map(|(method, target)| {
                let rows: Vec<&TrialOutcome> = self
                    .outcomes
                    .iter()
                    .filter(|o| o.method == method && o.target == target)
                    .collect();
                let tp: Vec<f64> = rows.iter().map(|o| o.tp as f64).collect();
                let fp: Vec<f64> = rows.iter().map(|o| o.fp as f64).collect();
                let (mean_tp, se_tp) = mean_se(&tp);
                let (mean_fp, se_fp) = mean_se(&fp);
                SummaryRow {
                    method,
                    target,
                    trials: rows.len(),
                    mean_tp,
                    se_tp,
                    mean_fp,
                    se_fp,
                }
            })
            .collect()
    }

    pub fn row(&self, method: &str, target: f64) -> Option<SummaryRow> {
        self.summary()
            .into_iter()
            .find(|r| r.method == method && r.target == target)
    }

    /// Per-trial `a - b` differences in one metric for two methods at a
    /// target, as (mean, standard error).
    pub fn paired_difference(&self, a: &str, b: &str, target: f64, tp: bool) -> (f64, f64) {
        let pick = |m: &str| -> Vec<(usize, f64)> {
            self.outcomes
                .iter()
                .filter(|o| o.method == m && o.target == target)
                .map(|o| (o.trial, if tp { o.tp } else { o.fp } as f64))
                .collect()
        };
        let (va, vb) = (pick(a), pick(b));
        let diffs: Vec<f64> = va
            .iter()
            .filter_map(|(t, x)| vb.iter().find(|(u, _)| u == t).map(|(_, y)| x - y))
            .collect();
        mean_se(&diffs)
    }

    pub fn outcomes_csv(&self) -> String {
        let mut out = String::from("trial,method,target,tp,fp,n,s,signal\n");
        for o in &self.outcomes {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                o.trial, o.method, o.target, o.tp, o.fp, o.n, o.s, o.signal
            ));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("method,target,trials,mean_tp,se_tp,mean_fp,se_fp\n");
        for r in self.summary() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.method, r.target, r.trials, r.mean_tp, r.se_tp, r.mean_fp, r.se_fp
            ));
        }
        out
    }

    /// Mean TP and FP against the target, FP panel with the `y = x` line.
    pub fn summary_svg(&self) -> String {
        let rows = self.summary();
        let mut methods: Vec<String> = Vec::new();
        for r in &rows {
            if !methods.contains(&r.method) {
                methods.push(r.method.clone());
            }
        }
        let series = |tp: bool| -> Vec<Series> {
            methods
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let pts = rows
                        .iter()
                        .filter(|r| &r.method == m)
                        .map(|r| (r.target, if tp { r.mean_tp } else { r.mean_fp }))
                        .collect();
                    Series::new(m.clone(), pts, svg::color(i))
                })
                .collect()
        };
        let tp = Plot {
            title: "True positives".into(),
            x_label: "target E(FP)".into(),
            y_label: "mean TP".into(),
            series: series(true),
            legend: true,
            ..Default::default()
        };
        let fp = Plot {
            title: "False positives".into(),
            x_label: "target E(FP)".into(),
            y_label: "mean FP".into(),
            series: series(false),
            diagonal: true,
            legend: true,
            ..Default::default()
        };
        svg::render(&[tp, fp], 520.0, 380.0)
    }

    /// Write `outcomes.csv`, `summary.csv`, and `summary.svg` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_file(&dir.join("outcomes.csv"), &self.outcomes_csv())?;
        write_file(&dir.join("summary.csv"), &self.summary_csv())?;
        write_file(&dir.join("summary.svg"), &self.summary_svg())
    }
}

/// Run every trial. Failed trials are excluded and counted; more than 5%
/// failures aborts the experiment. `progress` is called after each trial.
pub fn run_experiment_with<F: FnMut(usize, usize)>(
    cfg: &ExperimentConfig,
    mut progress: F,
) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut outcomes = Vec::new();
    let mut failed = Vec::new();
    for trial in 0..cfg.trials {
        match run_trial(cfg, trial) {
            Ok(rows) => outcomes.extend(rows),
            Err(e) => failed.push((trial, e.to_string())),
        }
        progress(trial + 1, cfg.trials);
    }
    if failed.len() * 20 > cfg.trials {
        return Err(Error::TooManyFailures {
            failed: failed.len(),
            total: cfg.trials,
        });
    }
    Ok(ExperimentResult {
        outcomes,
        failed,
        trials: cfg.trials,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(cfg, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for s in ["ipss-h2", "ipss-h3", "mb-0.75", "um-0.75", "cv"] {
            assert_eq!(s.parse::<Method>().unwrap().to_string(), s);
        }
        assert_eq!(
            "mb".parse::<Method>().unwrap(),
            Method::Baseline(BaselineMethod::Mb, 0.75)
        );
        assert!("xx".parse::<Method>().is_err());
    }

    #[test]
    fn counting_true_and_false_positives() {
        assert_eq!(
            count(&[true, true, false, true], &[true, false, false, false]),
            (1, 2)
        );
    }
}
