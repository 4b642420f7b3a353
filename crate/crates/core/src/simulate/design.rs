//! Feature designs, true coefficients, and response models.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Bernoulli, Distribution, Normal, StandardNormal, StudentT};

use crate::error::{Error, Result};

/// How feature rows are generated.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureDesign {
    /// I.i.d. standard normal entries.
    Independent,
    /// Gaussian rows with `Σ_jk = ρ^{|j-k|}`.
    Toeplitz(f64),
    /// Random row and column subset of a source matrix.
    RnaSeq(Arc<Array2<f64>>),
}

/// Response model given `X β*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResponseModel {
    /// Gaussian noise with variance set by the empirical SNR.
    LinearNormal { snr: f64 },
    /// Unscaled t(2) noise.
    LinearT2,
    /// Bernoulli labels with success probability `sigmoid(γ x'β*)`.
    Logistic { gamma: f64 },
}

impl ResponseModel {
    pub fn is_classification(self) -> bool {
        matches!(self, ResponseModel::Logistic { .. })
    }
}

pub fn gen_features<R: Rng + ?Sized>(
    design: &FeatureDesign,
    n: usize,
    p: usize,
    rng: &mut R,
) -> Result<Array2<f64>> {
    match design {
        FeatureDesign::Independent => Ok(Array2::from_shape_fn((n, p), |_| {
            rng.sample(StandardNormal)
        })),
        FeatureDesign::Toeplitz(rho) => {
            if !(rho.abs() < 1.0) {
                return Err(Error::Config(format!(
                    "Toeplitz rho must lie in (-1, 1), got {rho}"
                )));
            }
            let innov = (1.0 - rho * rho).sqrt();
            let mut x = Array2::zeros((n, p));
            for mut row in x.rows_mut() {
                let mut prev: f64 = rng.sample(StandardNormal);
                row[0] = prev;
                for k in 1..p {
                    let e: f64 = rng.sample(StandardNormal);
                    prev = rho * prev + innov * e;
                    row[k] = prev;
                }
            }
            Ok(x)
        }
        FeatureDesign::RnaSeq(src) => {
            let (rows, cols) = src.dim();
            if rows < n || cols < p {
                return Err(Error::SourceTooSmall {
                    rows,
                    cols,
                    need_rows: n,
                    need_cols: p,
                });
            }
            let ri = sample(rng, rows, n).into_vec();
            let ci = sample(rng, cols, p).into_vec();
            Ok(Array2::from_shape_fn((n, p), |(i, j)| src[[ri[i], ci[j]]]))
        }
    }
}

/// `s` nonzero coefficients, each uniform on `[-1, -0.5] ∪ [0.5, 1]`, at
/// uniformly random coordinates.
pub fn gen_beta<R: Rng + ?Sized>(p: usize, s: usize, rng: &mut R) -> Result<Array1<f64>> {
    if s > p {
        return Err(Error::Config(format!("sparsity {s} exceeds p = {p}")));
    }
    let mut beta = Array1::zeros(p);
    for j in sample(rng, p, s).into_iter() {
        let mag = rng.random_range(0.5..=1.0);
        beta[j] = if rng.random_bool(0.5) { mag } else { -mag };
    }
    Ok(beta)
}

pub fn gen_response<R: Rng + ?Sized>(
    x: &Array2<f64>,
    beta: &Array1<f64>,
    model: ResponseModel,
    rng: &mut R,
) -> Result<Array1<f64>> {
    let signal = x.dot(beta);
    let n = signal.len() as f64;
    match model {
        ResponseModel::LinearNormal { snr } => {
            let ss: f64 = signal.iter().map(|v| v * v).sum();
            if !(ss > 0.0) {
                return Err(Error::DegenerateSignal);
            }
            let sigma = (ss / (n * snr)).sqrt();
            let noise = Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?;
            Ok(signal.mapv(|s| s + noise.sample(rng)))
        }
        ResponseModel::LinearT2 => {
            let t = StudentT::new(2.0).expect("two degrees of freedom is valid");
            Ok(signal.mapv(|s| s + t.sample(rng)))
        }
        ResponseModel::Logistic { gamma } => Ok(signal.mapv(|s| {
            let prob = 1.0 / (1.0 + (-gamma * s).exp());
            let draw = Bernoulli::new(prob).expect("probability lies in [0, 1]");
            if draw.sample(rng) {
                1.0
            } else {
                0.0
            }
        })),
    }
}

/// Noise variance giving empirical signal-to-noise ratio `snr`.
pub fn noise_variance(signal_sum_sq: f64, n: usize, snr: f64) -> f64 {
    signal_sum_sq / (n as f64 * snr)
}

/// Response family of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LinearNormal,
    LinearT2,
    Logistic,
}

/// Per-trial draws: sample size, sparsity, and signal strength (SNR for
/// linear-normal, `γ` for logistic, unused for t(2)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialParams {
    pub n: usize,
    pub s: usize,
    pub signal: f64,
}

impl TrialParams {
    pub fn model(&self, kind: ModelKind) -> ResponseModel {
        match kind {
            ModelKind::LinearNormal => ResponseModel::LinearNormal { snr: self.signal },
            ModelKind::LinearT2 => ResponseModel::LinearT2,
            ModelKind::Logistic => ResponseModel::Logistic { gamma: self.signal },
        }
    }
}

/// Ranges for `(n, s)`: the published rows for `p = 200` and `p = 1000`;
/// other `p` scale the `p = 200` row.
pub fn trial_ranges(p: usize) -> ((usize, usize), (usize, usize)) {
    match p {
        200 => ((50, 200), (5, 20)),
        1000 => ((100, 500), (10, 40)),
        _ => {
            let n_lo = (p / 4).max(8);
            let n_hi = p.max(n_lo);
            let s_lo = (p / 40).max(1);
            let s_hi = (p / 10).max(s_lo);
            ((n_lo, n_hi), (s_lo, s_hi))
        }
    }
}

pub fn sample_trial_params<R: Rng + ?Sized>(p: usize, kind: ModelKind, rng: &mut R) -> TrialParams {
    let ((n_lo, n_hi), (s_lo, s_hi)) = trial_ranges(p);
    let n = rng.random_range(n_lo..=n_hi);
    let s = rng.random_range(s_lo..=s_hi);
    let signal = match kind {
        ModelKind::LinearNormal => rng.random_range(1.0 / 3.0..3.0),
        ModelKind::Logistic => rng.random_range(0.5..2.0),
        ModelKind::LinearT2 => 0.0,
    };
    TrialParams { n, s, signal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn beta_has_exact_support_and_magnitudes() {
        let mut rng = stream_rng(1, 0);
        let b = gen_beta(50, 7, &mut rng).unwrap();
        let nz: Vec<f64> = b.iter().copied().filter(|v| *v != 0.0).collect();
        assert_eq!(nz.len(), 7);
        assert!(nz.iter().all(|v| (0.5..=1.0).contains(&v.abs())));
        assert!(gen_beta(3, 4, &mut rng).is_err());
    }

    #[test]
    fn snr_example() {
        assert!((noise_variance(400.0, 200, 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_signal_is_rejected() {
        let mut rng = stream_rng(2, 0);
        let x = gen_features(&FeatureDesign::Independent, 10, 3, &mut rng).unwrap();
        let beta = Array1::zeros(3);
        let r = gen_response(
            &x,
            &beta,
            ResponseModel::LinearNormal { snr: 1.0 },
            &mut rng,
        );
        assert!(matches!(r, Err(Error::DegenerateSignal)));
    }

    #[test]
    fn rnaseq_subsets_the_source() {
        let src = Arc::new(Array2::from_shape_fn((6, 4), |(i, j)| (10 * i + j) as f64));
        let mut rng = stream_rng(3, 0);
        let x = gen_features(&FeatureDesign::RnaSeq(src.clone()), 6, 4, &mut rng).unwrap();
        let mut a: Vec<f64> = x.iter().copied().collect();
        let mut b: Vec<f64> = src.iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
        assert!(matches!(
            gen_features(&FeatureDesign::RnaSeq(src), 7, 4, &mut rng),
            Err(Error::SourceTooSmall { .. })
        ));
    }

    #[test]
    fn trial_params_respect_ranges() {
        let mut rng = stream_rng(4, 0);
        for _ in 0..1000 {
            let t = sample_trial_params(200, ModelKind::LinearNormal, &mut rng);
            assert!((50..=200).contains(&t.n) && (5..=20).contains(&t.s));
            assert!(t.signal >= 1.0 / 3.0 && t.signal <= 3.0);
            let t = sample_trial_params(1000, ModelKind::Logistic, &mut rng);
            assert!((100..=500).contains(&t.n) && (10..=40).contains(&t.s));
            assert!(t.signal >= 0.5 && t.signal <= 2.0);
        }
    }
}
