//! Integrated path stability selection (IPSS).
//!
//! A regularized base estimator is refitted on complementary half-samples
//! across a regularization grid. The resulting stability paths are
//! transformed, integrated against a probability measure on the grid, and
//! turned into per-feature efp scores: the smallest expected number of
//! false positives under which each feature would be selected.
//!
//! ```no_run
//! use ipss::{config::{EstimatorKind, RunConfig, Task}, data, pipeline};
//! # fn main() -> ipss::Result<()> {
//! let ds = data::load_dataset("x.csv".as_ref(), "y.csv".as_ref(), Task::Regression)?;
//! let mut cfg = RunConfig::new(EstimatorKind::Lasso);
//! cfg.target_efp = Some(1.0);
//! let out = pipeline::run_ipss(&ds, &cfg)?;
//! println!("{:?}", out.result.selected_indices());
//! # Ok(())
//! # }
//! ```

pub mod baselines;
pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod estimators;
pub mod grid;
pub mod paths;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod selection;
pub mod simulate;
pub mod svg;

pub use error::{Error, Result};
