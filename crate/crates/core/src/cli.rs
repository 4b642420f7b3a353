//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::config::{Alpha, EstimatorKind, RunConfig, Threads};
use crate::data::{read_features_csv, read_response_csv, standardize, Dataset};
use crate::error::{Error, Result};
use crate::grid::lambda_min_by_cutoff;
use crate::paths::condition_diagnostic;
use crate::pipeline::{run_ipss, run_paths, Extent};
use crate::report::{write_file, write_paths, write_run};
use crate::selection::Scorer;
use crate::simulate::experiment::run_experiment_with;
use crate::simulate::{ExperimentConfig, FeatureDesign, Method, ModelKind, TrialParams};
use crate::svg::{self, Plot, Series};

#[derive(Debug, Parser)]
#[command(name = "ipss", version, about = "Integrated path stability selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select features and write result.json, ranking.csv, and path files.
    Run(DataArgs),
    /// Estimate stability paths only.
    Paths(DataArgs),
    /// Count selection-independence violations per lambda against a known support.
    Diagnose {
        #[command(flatten)]
        data: DataArgs,
        /// CSV with one 0/1 entry per feature marking the true support.
        #[arg(long)]
        truth: PathBuf,
    },
    /// Run a simulation experiment.
    Simulate(SimArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Feature matrix CSV (rows are samples; optional header row).
    #[arg(long)]
    pub x: PathBuf,
    /// Response CSV (one column).
    #[arg(long)]
    pub y: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
    /// Output directory.
    #[arg(long, default_value = "ipss-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file with run settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// lasso, mcp, scad, adaptive, or logistic.
    #[arg(long)]
    pub estimator: Option<EstimatorKind>,
    /// h1, h2, h3, wm:<m>, or fdelta:<d>.
    #[arg(long)]
    pub scorer: Option<Scorer>,
    #[arg(long)]
    pub target_efp: Option<f64>,
    #[arg(long)]
    pub target_fdr: Option<f64>,
    /// Number of complementary subsample pairs.
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Measure exponent, or "auto".
    #[arg(long)]
    pub alpha: Option<Alpha>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads, or "auto".
    #[arg(long, env = "IPSS_THREADS")]
    pub threads: Option<Threads>,
    /// Allow the wm and fdelta scorers.
    #[arg(long)]
    pub experimental: bool,
}

impl RunArgs {
    /// Config file (if any) overridden by flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                RunConfig::from_toml(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(e) = self.estimator {
            cfg.estimator = e;
        }
        if self.scorer.is_some() {
            cfg.scorer = self.scorer;
        }
        if self.target_efp.is_some() {
            cfg.target_efp = self.target_efp;
        }
        if self.target_fdr.is_some() {
            cfg.target_fdr = self.target_fdr;
        }
        if let Some(b) = self.b {
            cfg.b_subsamples = b;
        }
        if let Some(r) = self.grid_points {
            cfg.grid_points = r;
        }
        if let Some(c) = self.cutoff {
            cfg.cutoff = c;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        cfg.experimental |= self.experimental;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 200)]
    pub p: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// independent, toeplitz:<rho>, or rnaseq:<csv path>.
    #[arg(long, default_value = "independent")]
    pub design: String,
    /// linear, t2, or logistic.
    #[arg(long, default_value = "linear")]
    pub model: String,
    /// Defaults to lasso (logistic for the logistic model).
    #[arg(long)]
    pub estimator: Option<EstimatorKind>,
    /// Comma-separated: ipss-h2, ipss-h3, mb[-tau], um[-tau], cv.
    #[arg(long, default_value = "ipss-h2,ipss-h3,mb,um", value_delimiter = ',')]
    pub methods: Vec<Method>,
    #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
    pub targets: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub b: usize,
    #[arg(long, default_value_t = 25)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 0.05)]
    pub cutoff: f64,
    #[arg(long, default_value = "auto")]
    pub alpha: Alpha,
    /// Fix the sample size instead of sampling it per trial.
    #[arg(long, requires_all = ["s", "signal"])]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// SNR (linear) or gamma (logistic).
    #[arg(long)]
    pub signal: Option<f64>,
    #[arg(long, env = "IPSS_THREADS")]
    pub threads: Option<Threads>,
    #[arg(long, default_value = "ipss-sim")]
    pub out: PathBuf,
}

impl SimArgs {
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let model = match self.model.as_str() {
            "linear" | "normal" => ModelKind::LinearNormal,
            "t2" => ModelKind::LinearT2,
            "logistic" => ModelKind::Logistic,
            m => return Err(Error::Config(format!("unknown model '{m}'"))),
        };
        let design = match self.design.split_once(':') {
            None if self.design == "independent" => FeatureDesign::Independent,
            Some(("toeplitz", rho)) => FeatureDesign::Toeplitz(
                rho.parse()
                    .map_err(|_| Error::Config(format!("invalid Toeplitz rho '{rho}'")))?,
            ),
            Some(("rnaseq", path)) => {
                let (x, _) = read_features_csv(Path::new(path))?;
                FeatureDesign::RnaSeq(Arc::new(x))
            }
            _ => return Err(Error::Config(format!("unknown design '{}'", self.design))),
        };
        let estimator = self.estimator.unwrap_or(if model == ModelKind::Logistic {
            EstimatorKind::LogisticL1
        } else {
            EstimatorKind::Lasso
        });
        let mut cfg = ExperimentConfig::new(self.p, self.trials);
        cfg.design = design;
        cfg.model = model;
        cfg.estimator = estimator;
        cfg.methods = self.methods.clone();
        cfg.targets = self.targets.clone();
        cfg.seed = self.seed;
        cfg.b_subsamples = self.b;
        cfg.grid_points = self.grid_points;
        cfg.cutoff = self.cutoff;
        cfg.alpha = self.alpha;
        if let (Some(n), Some(s), Some(signal)) = (self.n, self.s, self.signal) {
            cfg.fixed = Some(TrialParams { n, s, signal });
        }
        Ok(cfg)
    }
}

fn load(args: &DataArgs, cfg: &RunConfig) -> Result<Dataset> {
    let (x, names) = read_features_csv(&args.x)?;
    let y = read_response_csv(&args.y)?;
    let ds = standardize(x.view(), y.view(), cfg.estimator.task())?;
    match names {
        Some(n) => ds.with_feature_names(n),
        None => Ok(ds),
    }
}

fn with_threads<T: Send>(threads: Threads, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Threads::Fixed(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

fn cmd_run(args: &DataArgs) -> Result<()> {
    let cfg = args.run.resolve()?;
    let ds = load(args, &cfg)?;
    with_threads(cfg.threads, || {
        let out = run_ipss(&ds, &cfg)?;
        write_run(
            &args.out,
            &out.run,
            &out.result,
            ds.feature_names(),
            &cfg,
            ds.n(),
        )?;
        let sel: Vec<&str> = out
            .result
            .selected_indices()
            .into_iter()
            .map(|j| ds.feature_names()[j].as_str())
            .collect();
        println!(
            "selected {} of {} features: {}",
            sel.len(),
            ds.p(),
            sel.join(", ")
        );
        for flag in &out.result.flags {
            eprintln!("note: {flag}");
        }
        Ok(())
    })
}

fn cmd_paths(args: &DataArgs) -> Result<()> {
    let cfg = args.run.resolve()?;
    let ds = load(args, &cfg)?;
    with_threads(cfg.threads, || {
        let run = run_paths(&ds, &cfg, &Extent::Full)?;
        write_paths(&args.out, &run, ds.feature_names(), &[])?;
        write_file(&args.out.join("resolved-config.toml"), &cfg.to_toml())?;
        println!(
            "wrote stability paths for {} features over {} grid points to {}",
            ds.p(),
            run.grid.r(),
            args.out.display()
        );
        Ok(())
    })
}

fn cmd_diagnose(args: &DataArgs, truth_path: &Path) -> Result<()> {
    let cfg = args.run.resolve()?;
    let ds = load(args, &cfg)?;
    let truth: Vec<bool> = read_response_csv(truth_path)?
        .iter()
        .map(|&v| v != 0.0)
        .collect();
    if truth.len() != ds.p() {
        return Err(Error::ShapeMismatch(format!(
            "truth has {} entries but there are {} features",
            truth.len(),
            ds.p()
        )));
    }
    with_threads(cfg.threads, || {
        let run = run_paths(&ds, &cfg, &Extent::Full)?;
        let counts: Vec<Vec<usize>> = (1..=3)
            .map(|m| condition_diagnostic(&run.tensor, &run.paths, &truth, m))
            .collect();
        let mut csv =
            String::from("index,lambda,q_hat,violations_m1,violations_m2,violations_m3\n");
        for (k, lam) in run.grid.points().iter().enumerate() {
            csv.push_str(&format!(
                "{k},{lam:e},{},{},{},{}\n",
                run.paths.q_hat[k], counts[0][k], counts[1][k], counts[2][k]
            ));
        }
        let mut markers = String::from("scorer,index,lambda_min\n");
        let mut marks = Vec::new();
        for scorer in [Scorer::H1, Scorer::H2, Scorer::H3] {
            let cut = lambda_min_by_cutoff(
                &run.paths.q_hat,
                &run.grid,
                scorer,
                cfg.b_subsamples,
                ds.p(),
                cfg.cutoff,
            )?;
            let lmin = run.grid.truncated(cut.index).lambda_min();
            markers.push_str(&format!("{scorer},{},{lmin:e}\n", cut.index));
            marks.push((lmin.log10(), format!("lambda_min {scorer}")));
        }
        std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
        write_file(&args.out.join("condition.csv"), &csv)?;
        write_file(&args.out.join("lambda_min.csv"), &markers)?;
        let xs: Vec<f64> = run.grid.points().iter().map(|l| l.log10()).collect();
        let plot = Plot {
            title: "independence condition violations".into(),
            x_label: "log10 lambda".into(),
            y_label: "violating features".into(),
            series: counts
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let pts = xs.iter().zip(c).map(|(&x, &v)| (x, v as f64)).collect();
                    Series::new(format!("m = {}", i + 1), pts, svg::color(i))
                })
                .collect(),
            markers: marks,
            legend: true,
            ..Default::default()
        };
        write_file(
            &args.out.join("condition.svg"),
            &svg::render(&[plot], 720.0, 420.0),
        )?;
        write_file(&args.out.join("resolved-config.toml"), &cfg.to_toml())?;
        println!("wrote condition diagnostics to {}", args.out.display());
        Ok(())
    })
}

fn cmd_simulate(args: &SimArgs) -> Result<()> {
    let cfg = args.to_config()?;
    with_threads(args.threads.unwrap_or(Threads::Auto), || {
        let res = run_experiment_with(&cfg, |done, total| eprintln!("trial {done}/{total}"))?;
        res.write(&args.out)?;
        for (trial, err) in &res.failed {
            eprintln!("trial {trial} failed: {err}");
        }
        print!("{}", res.summary_csv());
        Ok(())
    })
}

/// Parse `args` and execute. Returns the process exit status: 0 on
/// success, 1 for invalid input, 2 for runtime failures.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Paths(a) => cmd_paths(a),
        Command::Diagnose { data, truth } => cmd_diagnose(data, truth),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}
