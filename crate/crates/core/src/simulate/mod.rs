//! Synthetic data and simulation experiments.

pub mod cv;
pub mod design;
pub mod experiment;

pub use design::{
    gen_beta, gen_features, gen_response, sample_trial_params, FeatureDesign, ModelKind,
    ResponseModel, TrialParams,
};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentResult, Method, TrialOutcome};
