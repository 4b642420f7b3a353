//! Slow, independent reference computations for the test suite.
#![allow(dead_code)]

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub name: String,
    pub instance: String,
    pub oracle: f64,
    pub implementation: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub pass: bool,
}

impl OracleReport {
    pub fn absolute(
        name: &str,
        instance: String,
        oracle: f64,
        implementation: f64,
        tolerance: f64,
    ) -> Self {
        let pass = (oracle - implementation).abs() <= tolerance;
        Self {
            name: name.into(),
            instance,
            oracle,
            implementation,
            tolerance,
            relative: false,
            pass,
        }
    }

    pub fn relative(
        name: &str,
        instance: String,
        oracle: f64,
        implementation: f64,
        tolerance: f64,
    ) -> Self {
        let pass = (oracle - implementation).abs() <= tolerance * oracle.abs();
        Self {
            name: name.into(),
            instance,
            oracle,
            implementation,
            tolerance,
            relative: true,
            pass,
        }
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: oracle {:.6e} impl {:.6e} ({} tol {:e}) {}",
            self.name,
            self.instance,
            self.oracle,
            self.implementation,
            if self.relative { "rel" } else { "abs" },
            self.tolerance,
            if self.pass { "ok" } else { "MISMATCH" }
        )
    }
}

// ---------------------------------------------------------------------------
// Multinomial bound

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn compositions(m: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == parts - 1 {
        let used: usize = prefix.iter().sum();
        let mut k = prefix.clone();
        k.push(m - used);
        out.push(k);
        return;
    }
    let used: usize = prefix.iter().sum();
    for v in 0..=(m - used) {
        prefix.push(v);
        compositions(m, parts, prefix, out);
        prefix.pop();
    }
}

fn composition_sum(parts: usize, m: usize, x: f64, power: i32) -> f64 {
    let mut ks = Vec::new();
    compositions(m, parts, &mut Vec::new(), &mut ks);
    let mut total = 0.0;
    for k in ks {
        let coef = factorial(m) / k.iter().map(|&v| factorial(v)).product::<f64>();
        let nk = k.iter().filter(|&&v| v > 0).count() as i32;
        total += coef * x.powi(power * nk);
    }
    total / (parts as f64).powi(m as i32)
}

/// Sum over every `k` in `Δ_m` (nonnegative `k_1..k_B` adding to `m`) of
/// `multinomial(m; k) x^(2 N_k) / B^m`, with `N_k` the number of nonzero parts.
pub fn multinomial_bound(b: usize, m: usize, x: f64) -> f64 {
    composition_sum(b, m, x, 2)
}

/// The same sum over the `2B` individual halves with `x^(N_k)`: the bound
/// for the `x^m` transform of single-half selection frequencies.
pub fn single_half_bound(b: usize, m: usize, x: f64) -> f64 {
    composition_sum(2 * b, m, x, 1)
}

// ---------------------------------------------------------------------------
// One-dimensional penalized problems

#[derive(Debug, Clone, Copy)]
pub enum Pen {
    Lasso,
    Mcp(f64),
    Scad(f64),
}

fn pen_value(pen: Pen, a: f64, lam: f64) -> f64 {
    match pen {
        Pen::Lasso => lam * a,
        Pen::Mcp(g) => {
            if a < g * lam {
                lam * a - a * a / (2.0 * g)
            } else {
                0.5 * g * lam * lam
            }
        }
        Pen::Scad(g) => {
            if a < lam {
                lam * a
            } else if a < g * lam {
                (2.0 * g * lam * a - a * a - lam * lam) / (2.0 * (g - 1.0))
            } else {
                0.5 * lam * lam * (g + 1.0)
            }
        }
    }
}

fn pen_slope(pen: Pen, a: f64, lam: f64) -> f64 {
    match pen {
        Pen::Lasso => lam,
        Pen::Mcp(g) => (lam - a / g).max(0.0),
        Pen::Scad(g) => {
            if a <= lam {
                lam
            } else {
                ((g * lam - a) / (g - 1.0)).max(0.0)
            }
        }
    }
}

/// Minimizer of `(v/2) b^2 - z b + pen(|b|)`. A coarse scan brackets each
/// local minimum on `b·sign(z) >= 0`, bisection on the derivative refines
/// it, and the global winner (with `b = 0` as a candidate) is returned.
pub fn penalized_min_1d(z: f64, v: f64, lam: f64, pen: Pen) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let s = z.signum();
    let az = z.abs();
    let f = |a: f64| 0.5 * v * a * a - az * a + pen_value(pen, a, lam);
    let df = |a: f64| v * a - az + pen_slope(pen, a, lam);
    let hi = 2.0 * (az / v + lam) + 1.0;
    let n = 4000;
    let mut best = (0.0, f(0.0));
    let mut prev = df(1e-300);
    for i in 1..=n {
        let a1 = hi * i as f64 / n as f64;
        let d1 = df(a1);
        if prev < 0.0 && d1 >= 0.0 {
            let (mut lo, mut up) = (hi * (i - 1) as f64 / n as f64, a1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + up);
                if df(mid) < 0.0 {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            let a = 0.5 * (lo + up);
            if f(a) < best.1 {
                best = (a, f(a));
            }
        }
        prev = d1;
    }
    s * best.0
}

// ---------------------------------------------------------------------------
// Quadrature

/// `∫_lo^hi λ^e dλ`.
fn power_integral(e: f64, lo: f64, hi: f64) -> f64 {
    if (e + 1.0).abs() < 1e-14 {
        (hi / lo).ln()
    } else {
        (hi.powf(e + 1.0) - lo.powf(e + 1.0)) / (e + 1.0)
    }
}

/// Expectation of the polynomial `Σ c_k λ^k` under the probability measure
/// proportional to `λ^(-α)` on `[lo, hi]`.
pub fn poly_mean(coeffs: &[f64], alpha: f64, lo: f64, hi: f64) -> f64 {
    let norm = power_integral(-alpha, lo, hi);
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * power_integral(k as f64 - alpha, lo, hi))
        .sum::<f64>()
        / norm
}

pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Measure of `[a, b] ⊂ [lo, hi]` under the normalized `λ^(-α)` measure.
pub fn cell_mass(a: f64, b: f64, alpha: f64, lo: f64, hi: f64) -> f64 {
    power_integral(-alpha, a, b) / power_integral(-alpha, lo, hi)
}

// ---------------------------------------------------------------------------
// Independent selection

/// Stability quantities of one synthetic tensor whose halves select every
/// feature independently with probability `frac[k]` at grid point `k`.
pub struct SyntheticPaths {
    /// `p × r` simultaneous selection proportions.
    pub pi_hat: Vec<Vec<f64>>,
    /// Average support size per grid point.
    pub q_hat: Vec<f64>,
}

fn bernoulli_positions(p: usize, prob: f64, rng: &mut ChaCha8Rng, out: &mut Vec<usize>) {
    out.clear();
    if prob <= 0.0 {
        return;
    }
    if prob >= 1.0 {
        out.extend(0..p);
        return;
    }
    let ln_q = (1.0 - prob).ln();
    let mut pos = 0usize;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / ln_q).floor();
        if skip >= (p - pos) as f64 {
            break;
        }
        pos += skip as usize;
        out.push(pos);
        pos += 1;
        if pos >= p {
            break;
        }
    }
}

pub fn synthetic_paths(b: usize, p: usize, frac: &[f64], rng: &mut ChaCha8Rng) -> SyntheticPaths {
    let r = frac.len();
    let mut both = vec![vec![0u32; r]; p];
    let mut q_hat = vec![0.0; r];
    let mut first = vec![false; p];
    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    for _ in 0..b {
        for (k, &f) in frac.iter().enumerate() {
            bernoulli_positions(p, f, rng, &mut s1);
            bernoulli_positions(p, f, rng, &mut s2);
            q_hat[k] += (s1.len() + s2.len()) as f64;
            for &j in &s1 {
                first[j] = true;
            }
            for &j in &s2 {
                if first[j] {
                    both[j][k] += 1;
                }
            }
            for &j in &s1 {
                first[j] = false;
            }
        }
    }
    SyntheticPaths {
        pi_hat: both
            .into_iter()
            .map(|row| row.into_iter().map(|c| c as f64 / b as f64).collect())
            .collect(),
        q_hat: q_hat.into_iter().map(|q| q / (2 * b) as f64).collect(),
    }
}

/// Mean and standard error of the number of (all null) features selected
/// by `select` over `trials` independent synthetic tensors.
pub fn independent_selection<F>(
    b: usize,
    p: usize,
    frac: &[f64],
    trials: usize,
    seed: u64,
    mut select: F,
) -> (f64, f64)
where
    F: FnMut(&SyntheticPaths) -> usize,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fps: Vec<f64> = (0..trials)
        .map(|_| select(&synthetic_paths(b, p, frac, &mut rng)) as f64)
        .collect();
    mean_se(&fps)
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

// ---------------------------------------------------------------------------
// Penalized regression references

/// Worst violation of the lasso optimality conditions for
/// `(1/2m)||y - Xβ||² + λ||β||₁`: `|g_j + λ sign β_j|` on the support and
/// `max(|g_j| - λ, 0)` off it, where `g = -(1/m) Xᵀ(y - Xβ)`.
pub fn lasso_kkt(cols: &[Vec<f64>], y: &[f64], beta: &[f64], lam: f64) -> f64 {
    let m = y.len();
    let mut r = y.to_vec();
    for (c, &bj) in cols.iter().zip(beta) {
        if bj != 0.0 {
            for i in 0..m {
                r[i] -= c[i] * bj;
            }
        }
    }
    cols.iter()
        .zip(beta)
        .map(|(c, &bj)| {
            let g = -c.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>() / m as f64;
            if bj != 0.0 {
                (g + lam * bj.signum()).abs()
            } else {
                (g.abs() - lam).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// Accelerated proximal gradient for
/// `(1/n) Σ [log(1 + e^η_i) - y_i η_i] + λ||β||₁` with `η = β₀ + Xβ` and an
/// unpenalized intercept. Returns `(β₀, β)`.
pub fn logistic_l1_fista(cols: &[Vec<f64>], y: &[f64], lam: f64, iters: usize) -> (f64, Vec<f64>) {
    let n = y.len();
    let p = cols.len();
    let nf = n as f64;
    // Lipschitz constant of the gradient: largest eigenvalue of [1 X]ᵀ[1 X]/(4n),
    // bounded by the Frobenius norm.
    let frob: f64 = nf
        + cols
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>();
    let step = 4.0 * nf / frob;
    let mut x = vec![0.0; p + 1];
    let mut x_prev = x.clone();
    let mut yk = x.clone();
    let mut t = 1.0f64;
    for _ in 0..iters {
        let mut resid = vec![0.0; n];
        for i in 0..n {
            let mut eta = yk[0];
            for j in 0..p {
                eta += cols[j][i] * yk[j + 1];
            }
            resid[i] = sigmoid(eta) - y[i];
        }
        let mut next = vec![0.0; p + 1];
        next[0] = yk[0] - step * resid.iter().sum::<f64>() / nf;
        for j in 0..p {
            let g = cols[j].iter().zip(&resid).map(|(a, b)| a * b).sum::<f64>() / nf;
            let u = yk[j + 1] - step * g;
            next[j + 1] = u.signum() * (u.abs() - step * lam).max(0.0);
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        for j in 0..=p {
            yk[j] = next[j] + (t - 1.0) / t_next * (next[j] - x_prev[j]);
        }
        x_prev.clone_from(&next);
        x = next;
        t = t_next;
    }
    let b0 = x[0];
    (b0, x[1..].to_vec())
}

// ---------------------------------------------------------------------------
// selection-independence condition

fn subsets(b: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == m {
        out.push(cur.clone());
        return;
    }
    for i in start..b {
        cur.push(i);
        subsets(b, m, i + 1, cur, out);
        cur.pop();
    }
}

/// Average over every `m`-subset of distinct pairs of the product of the
/// per-pair "selected in both halves" indicators.
pub fn condition_tuples(pair_both: &[bool], m: usize) -> f64 {
    let mut all = Vec::new();
    subsets(pair_both.len(), m, 0, &mut Vec::new(), &mut all);
    if all.is_empty() {
        return 0.0;
    }
    let hits = all
        .iter()
        .filter(|s| s.iter().all(|&i| pair_both[i]))
        .count();
    hits as f64 / all.len() as f64
}
