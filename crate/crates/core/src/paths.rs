//! Complementary-pairs subsampling, the selection tensor, and stability
//! paths.

use bitvec::prelude::*;
use rand::seq::index::sample;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{Design, EstimatorSpec, PathSolver};
use crate::grid::LambdaGrid;
use crate::rng::stream_rng;
use crate::selection::binomial;

/// `B` complementary pairs of disjoint `⌊n/2⌋`-subsets. Halves `2b` and
/// `2b + 1` form pair `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsamplePlan {
    n: usize,
    halves: Vec<Vec<usize>>,
}

impl SubsamplePlan {
    /// Pair `b` is drawn from its own random stream of `seed`, so the plan
    /// depends only on `(n, b, seed)`.
    pub fn new(n: usize, b: usize, seed: u64) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooFewSamples(n));
        }
        if b == 0 {
            return Err(Error::Config("need at least one subsample pair".into()));
        }
        let h = n / 2;
        let mut halves = Vec::with_capacity(2 * b);
        for pair in 0..b {
            let mut rng = stream_rng(seed, pair as u64);
            let idx = sample(&mut rng, n, 2 * h).into_vec();
            let mut first = idx[..h].to_vec();
            let mut second = idx[h..].to_vec();
            first.sort_unstable();
            second.sort_unstable();
            halves.push(first);
            halves.push(second);
        }
        Ok(Self { n, halves })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pairs `B`.
    pub fn b(&self) -> usize {
        self.halves.len() / 2
    }

    pub fn halves(&self) -> &[Vec<usize>] {
        &self.halves
    }

    pub fn half_size(&self) -> usize {
        self.n / 2
    }

    /// Complementary partner of half `h`.
    pub fn pair_of(h: usize) -> usize {
        h ^ 1
    }
}

pub fn subsample_plan(n: usize, b: usize, seed: u64) -> Result<SubsamplePlan> {
    SubsamplePlan::new(n, b, seed)
}

/// Membership bits indexed by (half, grid point, feature).
#[derive(Debug, Clone)]
pub struct SelectionTensor {
    plan: SubsamplePlan,
    r: usize,
    p: usize,
    evaluated: usize,
    bits: BitVec,
    nonconverged: usize,
}

impl SelectionTensor {
    /// Empty tensor for `plan` over `r` grid points and `p` features.
    pub fn new(plan: SubsamplePlan, r: usize, p: usize) -> Self {
        let halves = plan.halves.len();
        Self {
            plan,
            r,
            p,
            evaluated: 0,
            bits: bitvec![0; halves * r * p],
            nonconverged: 0,
        }
    }

    #[inline]
    fn offset(&self, half: usize, k: usize) -> usize {
        (half * self.r + k) * self.p
    }

    pub fn plan(&self) -> &SubsamplePlan {
        &self.plan
    }

    pub fn halves(&self) -> usize {
        self.plan.halves.len()
    }

    pub fn b(&self) -> usize {
        self.plan.b()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Grid points `0..evaluated` have been fitted.
    pub fn evaluated(&self) -> usize {
        self.evaluated
    }

    /// Fits that hit the iteration cap or the coefficient cap.
    pub fn nonconverged(&self) -> usize {
        self.nonconverged
    }

    #[inline]
    pub fn get(&self, half: usize, k: usize, j: usize) -> bool {
        self.bits[self.offset(half, k) + j]
    }

    /// Record the support of half `half` at grid point `k`.
    pub fn set_support(&mut self, half: usize, k: usize, selected: &[bool]) {
        let off = self.offset(half, k);
        for (j, &s) in selected.iter().enumerate() {
            self.bits.set(off + j, s);
        }
    }

    /// Mark grid points `0..evaluated` as populated.
    pub fn set_evaluated(&mut self, evaluated: usize) {
        self.evaluated = evaluated.min(self.r);
    }

    pub fn support(&self, half: usize, k: usize) -> &BitSlice {
        let off = self.offset(half, k);
        &self.bits[off..off + self.p]
    }

    /// `U_jb(λ_k)`: feature `j` selected by both halves of pair `b`.
    #[inline]
    pub fn pair_selected(&self, pair: usize, k: usize, j: usize) -> bool {
        self.get(2 * pair, k, j) && self.get(2 * pair + 1, k, j)
    }

    /// Simultaneous selection proportion `π̃_j(λ_k) = (1/B) Σ_b U_jb(λ_k)`.
    pub fn simultaneous(&self, k: usize, j: usize) -> f64 {
        let b = self.b();
        (0..b)
            .filter(|&pair| self.pair_selected(pair, k, j))
            .count() as f64
            / b as f64
    }

    /// Count of (half, k, j) where a feature leaves the support as `λ`
    /// decreases. Informational only: nonconvex supports need not nest.
    pub fn nesting_violations(&self) -> usize {
        let mut count = 0;
        for h in 0..self.halves() {
            for k in 1..self.evaluated {
                let prev = self.support(h, k - 1);
                let cur = self.support(h, k);
                count += (prev.to_bitvec() & !cur.to_bitvec()).count_ones();
            }
        }
        count
    }
}

/// Fit every half over the whole grid.
pub fn run_algorithm1(
    data: &Dataset,
    grid: &LambdaGrid,
    spec: &EstimatorSpec,
    plan: &SubsamplePlan,
) -> SelectionTensor {
    run_algorithm1_until(data, grid, spec, plan, |_, _| false)
}

/// Run the subsampled fits one grid point at a time across all halves, calling
/// `stop(q_hat, q_union_hat)` after each point. Fitting ends early once it
/// returns true; the unfitted tail of the tensor stays empty.
///
/// Halves are solved in parallel and merged in half order, so the tensor is
/// identical for any worker count.
pub fn run_algorithm1_until<F>(
    data: &Dataset,
    grid: &LambdaGrid,
    spec: &EstimatorSpec,
    plan: &SubsamplePlan,
    mut stop: F,
) -> SelectionTensor
where
    F: FnMut(&[f64], &[f64]) -> bool,
{
    let p = data.p();
    let r = grid.r();
    let halves = plan.halves.len();
    let designs: Vec<Design> = plan
        .halves
        .par_iter()
        .map(|rows| Design::from_dataset(data, Some(rows)))
        .collect();
    let mut solvers: Vec<PathSolver> = designs
        .par_iter()
        .map(|d| PathSolver::new(d, spec))
        .collect();
    let mut tensor = SelectionTensor::new(plan.clone(), r, p);
    let mut unions: Vec<BitVec> = vec![bitvec![0; p]; halves];
    let mut q_hat = Vec::with_capacity(r);
    let mut q_union = Vec::with_capacity(r);
    let denom = halves as f64;

    for (k, &lam) in grid.points().iter().enumerate() {
        let fits: Vec<_> = solvers.par_iter_mut().map(|s| s.fit(lam)).collect();
        let mut total = 0usize;
        let mut union_total = 0usize;
        for (h, fit) in fits.iter().enumerate() {
            tensor.set_support(h, k, &fit.selected);
            if !fit.converged {
                tensor.nonconverged += 1;
            }
            for (j, &s) in fit.selected.iter().enumerate() {
                if s {
                    total += 1;
                    unions[h].set(j, true);
                }
            }
            union_total += unions[h].count_ones();
        }
        tensor.evaluated = k + 1;
        q_hat.push(total as f64 / denom);
        q_union.push(union_total as f64 / denom);
        if stop(&q_hat, &q_union) {
            break;
        }
    }
    tensor
}

/// Selection proportions and model-size estimates on the evaluated grid
/// points.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityPaths {
    /// `pi_hat[j][k]`.
    pub pi_hat: Vec<Vec<f64>>,
    /// Mean support size per grid point.
    pub q_hat: Vec<f64>,
    /// Mean size of the cumulative union of supports from `λ_max` down.
    pub q_union_hat: Vec<f64>,
    /// Number of pairs `B`.
    pub b: usize,
}

impl StabilityPaths {
    pub fn p(&self) -> usize {
        self.pi_hat.len()
    }

    /// Number of grid points covered.
    pub fn len(&self) -> usize {
        self.q_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q_hat.is_empty()
    }

    /// FNV-1a hash of every path value, for checking that two consumers saw
    /// the same inputs.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in self.pi_hat.iter().flatten() {
            for byte in v.to_bits().to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

/// Average the tensor over halves.
pub fn aggregate(tensor: &SelectionTensor) -> StabilityPaths {
    let p = tensor.p;
    let e = tensor.evaluated;
    let halves = tensor.halves();
    let denom = halves as f64;
    let mut counts = vec![vec![0u32; e]; p];
    let mut q_union = Vec::with_capacity(e);
    let mut unions: Vec<BitVec> = vec![bitvec![0; p]; halves];
    for k in 0..e {
        let mut union_total = 0;
        for (h, u) in unions.iter_mut().enumerate() {
            let s = tensor.support(h, k);
            for j in s.iter_ones() {
                counts[j][k] += 1;
            }
            *u |= s;
            union_total += u.count_ones();
        }
        q_union.push(union_total as f64 / denom);
    }
    let q_hat = (0..e)
        .map(|k| counts.iter().map(|c| c[k] as f64).sum::<f64>() / denom)
        .collect();
    let pi_hat = counts
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as f64 / denom).collect())
        .collect();
    StabilityPaths {
        pi_hat,
        q_hat,
        q_union_hat: q_union,
        b: tensor.b(),
    }
}

/// Average of `Π U_jb(λ_k)` over all `m`-subsets of distinct pairs. If `c`
/// pairs select `j` in both halves the product is one on exactly `C(c, m)`
/// of the `C(B, m)` subsets.
pub fn condition_lhs(tensor: &SelectionTensor, k: usize, j: usize, m: usize) -> f64 {
    let b = tensor.b();
    if m > b {
        return 0.0;
    }
    let c = (0..b)
        .filter(|&pair| tensor.pair_selected(pair, k, j))
        .count();
    binomial(c, m) / binomial(b, m)
}

/// Per evaluated grid point, the number of features outside `truth` whose
/// estimated joint selection probability over `m` pairs exceeds
/// `(q̂(λ_k)/p)^{2m}`.
pub fn condition_diagnostic(
    tensor: &SelectionTensor,
    paths: &StabilityPaths,
    truth: &[bool],
    m: usize,
) -> Vec<usize> {
    let p = tensor.p as f64;
    (0..tensor.evaluated)
        .map(|k| {
            let bound = (paths.q_hat[k] / p).powi(2 * m as i32);
            (0..tensor.p)
                .filter(|&j| !truth[j] && condition_lhs(tensor, k, j, m) > bound)
                .count()
        })
        .collect()
}
