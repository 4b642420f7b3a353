//! End-to-end integrated path stability selection: grid construction,
//! subsampled paths, truncation at `λ_min`, scoring, and selection.

use serde::Serialize;

use crate::config::{resolve_alpha, RunConfig, SelectionMode};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimators::EstimatorSpec;
use crate::grid::{
    cutoff_index, lambda_max, lambda_min_by_cutoff, lambda_zero, LambdaGrid, LambdaZero,
};
use crate::paths::{
    aggregate, run_algorithm1_until, SelectionTensor, StabilityPaths, SubsamplePlan,
};
use crate::selection::{
    fdelta_threshold, rank_by_efp, score_all, select_by_efp, select_by_fdr, Scorer,
};

/// Solver settings implied by a run configuration.
pub fn estimator_spec(config: &RunConfig) -> EstimatorSpec {
    let mut spec = EstimatorSpec::new(config.estimator);
    if let Some(g) = config.gamma {
        spec.gamma = g;
    }
    spec.ridge_penalty = config.ridge_penalty;
    spec
}

/// How far down the grid the subsample fits need to go.
#[derive(Debug, Clone, PartialEq)]
pub enum Extent {
    /// Every grid point.
    Full,
    /// Until every listed scorer's cutoff sum has exceeded `cutoff` and the
    /// union size has reached `q_star` (when given).
    Needed {
        scorers: Vec<Scorer>,
        cutoff: f64,
        q_star: Option<f64>,
    },
}

/// Subsampled paths over the untruncated grid, shared by every downstream
/// selection rule.
#[derive(Debug, Clone)]
pub struct PathRun {
    pub spec: EstimatorSpec,
    pub grid: LambdaGrid,
    pub lambda_zero: LambdaZero,
    pub tensor: SelectionTensor,
    pub paths: StabilityPaths,
    pub flags: Vec<String>,
}

/// Build the grid and fit the subsample paths on `data`.
pub fn run_paths(data: &Dataset, config: &RunConfig, extent: &Extent) -> Result<PathRun> {
    config.validate()?;
    if config.estimator.task() != data.task() {
        return Err(Error::Config(format!(
            "estimator '{}' does not match the dataset's task",
            config.estimator
        )));
    }
    let spec = estimator_spec(config);
    spec.validate()?;
    let lmax = lambda_max(data, config.estimator)?;
    let lz = lambda_zero(data, &spec, lmax, config.max_selected_fraction);
    let alpha = resolve_alpha(config, data.p());
    let grid = LambdaGrid::new(lmax, lz.lambda, config.grid_points, alpha)?;
    let plan = SubsamplePlan::new(data.n(), config.b_subsamples, config.seed)?;
    let (b, p) = (config.b_subsamples, data.p());

    let tensor = match extent {
        Extent::Full => run_algorithm1_until(data, &grid, &spec, &plan, |_, _| false),
        Extent::Needed {
            scorers,
            cutoff,
            q_star,
        } => run_algorithm1_until(data, &grid, &spec, &plan, |q_hat, q_union| {
            let cut_done = scorers.iter().all(|s| {
                let psi: Vec<f64> = q_hat
                    .iter()
                    .map(|&q| s.bound_integrand(q, b, p).unwrap_or(f64::INFINITY))
                    .collect();
                cutoff_index(&psi, &grid, *cutoff).exceeded
            });
            let union_done = q_star.is_none_or(|qs| q_union.last().is_some_and(|&u| u >= qs));
            cut_done && union_done
        }),
    };
    let paths = aggregate(&tensor);

    let mut flags = Vec::new();
    if lz.exhausted {
        flags.push(format!(
            "lambda_0 scan never selected more than {} of {} features; using lambda_max/1e10",
            config.max_selected_fraction, p
        ));
    }
    if tensor.nonconverged() > 0 {
        flags.push(format!(
            "{} of {} subsample fits did not converge",
            tensor.nonconverged(),
            tensor.halves() * tensor.evaluated()
        ));
    }
    Ok(PathRun {
        spec,
        grid,
        lambda_zero: lz,
        tensor,
        paths,
        flags,
    })
}

/// Grid facts reported with a selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_zero: f64,
    pub r: usize,
    pub retained: usize,
    pub alpha: f64,
    pub cutoff: f64,
}

/// Outcome of IPSS for one scorer and target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub scorer: Scorer,
    pub efp: Vec<f64>,
    pub scores: Vec<f64>,
    pub bound_integral: f64,
    pub selected: Vec<bool>,
    pub mode: SelectionMode,
    /// FDR-mode selection, reported alongside when both targets are set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fdr_selected: Option<Vec<bool>>,
    /// Threshold implied by the target (`f_δ` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub grid: GridSummary,
    pub flags: Vec<String>,
}

impl SelectionResult {
    /// Feature indices ordered by efp, ties by index.
    pub fn ranking(&self) -> Vec<usize> {
        rank_by_efp(&self.efp)
    }

    pub fn selected_indices(&self) -> Vec<usize> {
        (0..self.selected.len())
            .filter(|&j| self.selected[j])
            .collect()
    }
}

impl PathRun {
    /// Truncated grid for `scorer` at cutoff `c`, plus flags.
    pub fn truncated_grid(&self, scorer: Scorer, c: f64) -> Result<(LambdaGrid, Vec<String>)> {
        let cut = lambda_min_by_cutoff(
            &self.paths.q_hat,
            &self.grid,
            scorer,
            self.paths.b,
            self.paths.p(),
            c,
        )?;
        let mut flags = Vec::new();
        if cut.degenerate {
            flags.push(
                "bound integrand exceeds the cutoff at lambda_max; only lambda_max is retained"
                    .into(),
            );
        }
        Ok((self.grid.truncated(cut.index), flags))
    }

    /// Scores, efp values, and selection for `scorer` under `mode`.
    pub fn select(
        &self,
        scorer: Scorer,
        c: f64,
        mode: SelectionMode,
        fdr_also: Option<f64>,
    ) -> Result<SelectionResult> {
        let (grid, mut flags) = self.truncated_grid(scorer, c)?;
        flags.splice(0..0, self.flags.iter().cloned());
        let scored = score_all(
            &self.paths.pi_hat,
            &self.paths.q_hat,
            scorer,
            self.paths.b,
            &grid,
        )?;
        let mut tau = None;
        let selected = match mode {
            SelectionMode::TargetEfp(t) => {
                if let Scorer::FDelta(d) = scorer {
                    tau = Some(fdelta_threshold(scored.bound, t, d)?);
                }
                select_by_efp(&scored.efp, t)
            }
            SelectionMode::TargetFdr(f) => select_by_fdr(&scored.efp, f),
        };
        let fdr_selected = fdr_also.map(|f| select_by_fdr(&scored.efp, f));
        Ok(SelectionResult {
            scorer,
            efp: scored.efp,
            scores: scored.scores,
            bound_integral: scored.bound,
            selected,
            mode,
            fdr_selected,
            tau,
            grid: GridSummary {
                lambda_min: grid.lambda_min(),
                lambda_max: grid.lambda_max(),
                lambda_zero: self.lambda_zero.lambda,
                r: grid.r(),
                retained: grid.retained_len(),
                alpha: grid.alpha(),
                cutoff: c,
            },
            flags,
        })
    }
}

/// Paths plus the configured selection.
#[derive(Debug, Clone)]
pub struct IpssOutput {
    pub run: PathRun,
    pub result: SelectionResult,
}

/// Run the full procedure as configured.
pub fn run_ipss(data: &Dataset, config: &RunConfig) -> Result<IpssOutput> {
    let scorer = config.scorer();
    let extent = Extent::Needed {
        scorers: vec![scorer],
        cutoff: config.cutoff,
        q_star: None,
    };
    let run = run_paths(data, config, &extent)?;
    let mode = config.selection_mode();
    let fdr_also = match (mode, config.target_fdr) {
        (SelectionMode::TargetEfp(_), Some(f)) => Some(f),
        _ => None,
    };
    let result = run.select(scorer, config.cutoff, mode, fdr_also)?;
    Ok(IpssOutput { run, result })
}
