use std::time::Instant;

use approx::assert_relative_eq;
use proptest::prelude::*;

use ipss::rng::stream_rng;
use ipss::simulate::design::{noise_variance, trial_ranges};
use ipss::simulate::experiment::run_trial;
use ipss::simulate::{
    gen_features, run_experiment, sample_trial_params, ExperimentConfig, FeatureDesign, Method,
    ModelKind, TrialParams,
};

#[test]
fn toeplitz_neighbours_are_correlated() {
    let mut rng = stream_rng(4, 0);
    let x = gen_features(&FeatureDesign::Toeplitz(0.9), 10_000, 5, &mut rng).unwrap();
    for j in 0..4 {
        let a = x.column(j);
        let b = x.column(j + 1);
        let (ma, mb) = (a.mean().unwrap(), b.mean().unwrap());
        let cov = a
            .iter()
            .zip(b)
            .map(|(u, v)| (u - ma) * (v - mb))
            .sum::<f64>();
        let va = a.iter().map(|u| (u - ma).powi(2)).sum::<f64>();
        let vb = b.iter().map(|v| (v - mb).powi(2)).sum::<f64>();
        let corr = cov / (va * vb).sqrt();
        assert!((corr - 0.9).abs() < 0.02, "{corr}");
    }
}

#[test]
fn noise_variance_from_snr() {
    assert_relative_eq!(noise_variance(400.0, 200, 2.0), 1.0);
}

#[test]
fn snr_draws_are_uniform() {
    let mut rng = stream_rng(8, 0);
    let draws: Vec<f64> = (0..10_000)
        .map(|_| sample_trial_params(200, ModelKind::LinearNormal, &mut rng).signal)
        .collect();
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    assert!(draws.iter().all(|&s| (1.0 / 3.0..=3.0).contains(&s)));
    assert!((mean - 5.0 / 3.0).abs() < 0.03, "{mean}");
}

#[test]
fn published_ranges() {
    assert_eq!(trial_ranges(200), ((50, 200), (5, 20)));
    assert_eq!(trial_ranges(1000), ((100, 500), (10, 40)));
}

#[test]
fn smoke_experiment_is_quick_and_complete() {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(50, 3);
    cfg.methods.push(Method::Cv);
    let res = run_experiment(&cfg).unwrap();
    assert!(start.elapsed().as_secs() < 60);
    assert!(res.failed.is_empty());
    // 5 methods × 3 targets × 3 trials
    assert_eq!(res.outcomes.len(), 45);
    assert!(res.summary_csv().lines().count() > 1);
    assert!(res.summary_svg().contains("<svg"));
}

#[test]
fn trials_are_reproducible_and_worker_invariant() {
    let mut cfg = ExperimentConfig::new(30, 2);
    cfg.b_subsamples = 8;
    cfg.fixed = Some(TrialParams {
        n: 40,
        s: 3,
        signal: 2.0,
    });
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let a = one.install(|| run_trial(&cfg, 1)).unwrap();
    let b = many.install(|| run_trial(&cfg, 1)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, run_trial(&cfg, 1).unwrap());
}

#[test]
fn logistic_and_heavy_tailed_models_run() {
    for model in [ModelKind::Logistic, ModelKind::LinearT2] {
        let mut cfg = ExperimentConfig::new(30, 1);
        cfg.model = model;
        cfg.b_subsamples = 8;
        if model == ModelKind::Logistic {
            cfg.estimator = ipss::config::EstimatorKind::LogisticL1;
        }
        let res = run_experiment(&cfg).unwrap();
        assert!(res.failed.is_empty(), "{model:?}: {:?}", res.failed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_params_stay_in_range(seed in 0u64..1000, p in prop::sample::select(vec![40usize, 200, 1000, 333])) {
        let mut rng = stream_rng(seed, 0);
        let ((n_lo, n_hi), (s_lo, s_hi)) = trial_ranges(p);
        let t = sample_trial_params(p, ModelKind::Logistic, &mut rng);
        prop_assert!((n_lo..=n_hi).contains(&t.n));
        prop_assert!((s_lo..=s_hi).contains(&t.s));
        prop_assert!((0.5..=2.0).contains(&t.signal));
    }
}
