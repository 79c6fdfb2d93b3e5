//! Deterministic Monte-Carlo engine for null distributions, type I error
//! studies and power curves.
//!
//! Replicate `r` always draws from [`crate::rng::replicate_stream`]`(seed, r)`
//! and results are gathered in replicate order, so every output is
//! bit-identical whatever the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alternatives::{sample_alt_with, AlternativeSpec};
use crate::critical::{critical_value, test_statistic, CriticalCache, Method, TestKind, TestSpec};
use crate::distfn::UnitSample;
use crate::rng::{open_uniforms, replicate_seed, replicate_stream, stream};
use crate::statistics::{evaluate, StatKind};
use crate::{GofError, Result};

/// Environment variable overriding the default worker count.
pub const WORKERS_ENV: &str = "GOF_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCConfig {
    pub reps: usize,
    pub master_seed: u64,
    /// Advisory thread count; results do not depend on it.
    pub workers: usize,
}

impl MCConfig {
    pub fn new(reps: usize, master_seed: u64, workers: usize) -> Result<Self> {
        if reps == 0 {
            return Err(GofError::Parameter("reps must be at least 1".into()));
        }
        if workers == 0 {
            return Err(GofError::Parameter("workers must be at least 1".into()));
        }
        Ok(MCConfig {
            reps,
            master_seed,
            workers,
        })
    }

    /// Worker count from `GOF_WORKERS`, else the available parallelism.
    pub fn with_default_workers(reps: usize, master_seed: u64) -> Result<Self> {
        let workers = std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&w| w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
        Self::new(reps, master_seed, workers)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| GofError::Parameter(format!("cannot start {} workers: {e}", self.workers)))
    }

    /// `f(r)` for every replicate, in replicate order.
    fn map_replicates<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync,
    {
        self.pool()?
            .install(|| (0..self.reps as u64).into_par_iter().map(&f).collect())
    }
}

/// Standard uniform sample of replicate `r`.
pub fn replicate_sample(cfg: &MCConfig, n: usize, r: u64) -> UnitSample {
    let mut rng = replicate_stream(cfg.master_seed, r);
    UnitSample::from_unsorted(open_uniforms(&mut rng, n)).expect("open uniforms form a valid unit sample")
}

/// Sorted values of `f` over `cfg.reps` uniform samples of size `n`.
pub fn simulate<F>(n: usize, cfg: &MCConfig, f: F) -> Result<Vec<f64>>
where
    F: Fn(&UnitSample) -> Result<f64> + Sync,
{
    if n == 0 {
        return Err(GofError::Parameter("sample size must be at least 1".into()));
    }
    let mut values = cfg.map_replicates(|r| f(&replicate_sample(cfg, n, r)))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Empirical null distribution of a raw statistic (sorted).
pub fn simulate_null(kind: StatKind, n: usize, weight: Option<f64>, cfg: &MCConfig) -> Result<Vec<f64>> {
    simulate(n, cfg, |s| Ok(evaluate(kind, s, weight)?.value))
}

/// Rejection rate and its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub stderr: f64,
}

impl RateEstimate {
    fn from_count(count: usize, reps: usize) -> Self {
        let rate = count as f64 / reps as f64;
        RateEstimate {
            rate,
            stderr: (rate * (1.0 - rate) / reps as f64).sqrt(),
        }
    }
}

/// Fraction of null replicates on which `spec`'s test rejects. The critical
/// value comes from `spec.method` (exact or asymptotic).
pub fn type_one_error(spec: &TestSpec, cfg: &MCConfig, cache: Option<&CriticalCache>) -> Result<RateEstimate> {
    if spec.method == Method::MonteCarlo {
        return Err(GofError::Capability(
            "type I error of a Monte-Carlo calibrated test is alpha by construction".into(),
        ));
    }
    let critical = critical_value(spec, cache)?;
    let rejections = cfg.map_replicates(|r| {
        let s = replicate_sample(cfg, spec.n, r);
        Ok(test_statistic(spec, &s)?.value > critical)
    })?;
    Ok(RateEstimate::from_count(rejections.iter().filter(|&&x| x).count(), cfg.reps))
}

/// The three tests compared in a power study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerTest {
    /// `sqrt(n) W*_n` against `z_{alpha,n}`.
    N,
    /// `sqrt(n) M_n` against `u_{alpha,n}`.
    S,
    /// `T+_n(w_alpha)` against `y_{alpha,n}`.
    MS,
}

impl PowerTest {
    pub const ALL: [PowerTest; 3] = [PowerTest::N, PowerTest::S, PowerTest::MS];

    pub fn test_kind(self) -> TestKind {
        match self {
            PowerTest::N => TestKind::WnStar,
            PowerTest::S => TestKind::Smirnov,
            PowerTest::MS => TestKind::MsPlus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub n: usize,
    pub alpha: f64,
    pub tau_prob: f64,
    pub reps: usize,
    pub delta_grid: Vec<f64>,
    /// Exact critical values of the N, S and MS tests.
    pub critical: [f64; 3],
    /// `power[t][g]`: rejection frequency of test `PowerTest::ALL[t]` at `delta_grid[g]`.
    pub power: [Vec<f64>; 3],
    pub stderr: [Vec<f64>; 3],
}

impl PowerCurve {
    pub fn power_of(&self, test: PowerTest) -> &[f64] {
        &self.power[test as usize]
    }

    pub fn stderr_of(&self, test: PowerTest) -> &[f64] {
        &self.stderr[test as usize]
    }
}

/// `delta` from 1 to 19 in steps of 0.5.
pub fn default_delta_grid() -> Vec<f64> {
    (0..=36).map(|k| 1.0 + 0.5 * k as f64).collect()
}

/// Power of the N, S and MS tests at each `delta` of the grid with exact
/// critical values. All three tests see the same sample in every replicate,
/// and replicate `r` reuses its uniform draws across the grid.
pub fn power_curve(
    n: usize,
    alpha: f64,
    tau_prob: f64,
    delta_grid: &[f64],
    cfg: &MCConfig,
    cache: Option<&CriticalCache>,
) -> Result<PowerCurve> {
    let specs: Vec<AlternativeSpec> = delta_grid
        .iter()
        .map(|&d| AlternativeSpec::new(tau_prob, d))
        .collect::<Result<_>>()?;
    let tests: Vec<TestSpec> = PowerTest::ALL
        .iter()
        .map(|t| TestSpec::new(t.test_kind(), n, alpha, Method::Exact))
        .collect::<Result<_>>()?;
    let mut critical = [0.0; 3];
    for (c, spec) in critical.iter_mut().zip(&tests) {
        *c = critical_value(spec, cache)?;
    }

    // rejections[r][g][t]: test t rejects on replicate r at grid point g.
    let rejections: Vec<Vec<[bool; 3]>> = cfg.map_replicates(|r| {
        let seed = replicate_seed(cfg.master_seed, r);
        specs
            .iter()
            .map(|alt| {
                let s = sample_alt_with(alt, n, &mut stream(seed));
                let mut rejects = [false; 3];
                for (t, spec) in tests.iter().enumerate() {
                    rejects[t] = test_statistic(spec, &s)?.value > critical[t];
                }
                Ok(rejects)
            })
            .collect()
    })?;

    let mut power: [Vec<f64>; 3] = Default::default();
    let mut stderr: [Vec<f64>; 3] = Default::default();
    for t in 0..3 {
        for g in 0..specs.len() {
            let count = rejections.iter().filter(|rep| rep[g][t]).count();
            let est = RateEstimate::from_count(count, cfg.reps);
            power[t].push(est.rate);
            stderr[t].push(est.stderr);
        }
    }
    Ok(PowerCurve {
        n,
        alpha,
        tau_prob,
        reps: cfg.reps,
        delta_grid: delta_grid.to_vec(),
        critical,
        power,
        stderr,
    })
}

/// `sup_x |F_m(x) - F(x)|` between the empirical distribution of sorted
/// `samples` and a continuous `cdf`, attained at the sample points.
pub fn empirical_cdf_distance<F: FnMut(f64) -> f64>(samples: &[f64], mut cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(GofError::Input("empirical distance needs at least one sample".into()));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(GofError::Input("samples must be sorted ascending".into()));
    }
    let m = samples.len() as f64;
    Ok(samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / m - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max))
}

/// Upper bound on [`empirical_cdf_distance`] from CDF values on an increasing
/// grid, for distribution functions too costly to evaluate at every sample.
/// Between neighbouring grid points both functions are monotone, which
/// sandwiches the gap; outside the grid the CDF is taken as 0 below and 1 above.
pub fn empirical_cdf_distance_on_grid(samples: &[f64], grid: &[f64], cdf_on_grid: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(GofError::Input("empirical distance needs at least one sample".into()));
    }
    if grid.len() != cdf_on_grid.len() || grid.is_empty() {
        return Err(GofError::Input("grid and CDF values must be non-empty and of equal length".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GofError::Input("grid must be strictly increasing".into()));
    }
    let m = samples.len() as f64;
    // Empirical CDF at x and just below x.
    let at = |x: f64| samples.partition_point(|&s| s <= x) as f64 / m;
    let below = |x: f64| samples.partition_point(|&s| s < x) as f64 / m;
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(grid.len() + 2);
    knots.push((f64::NEG_INFINITY, 0.0));
    knots.extend(grid.iter().copied().zip(cdf_on_grid.iter().copied()));
    knots.push((f64::INFINITY, 1.0));
    let mut bound: f64 = 0.0;
    for w in knots.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        let emp_lo = if x0 == f64::NEG_INFINITY { 0.0 } else { at(x0) };
        let emp_hi = if x1 == f64::INFINITY { 1.0 } else { below(x1) };
        bound = bound.max(emp_hi - f0).max(f1 - emp_lo);
    }
    Ok(bound)
}

/// Dvoretzky-Kiefer-Wolfowitz radius `sqrt(ln(2/gamma) / (2m))` holding with
/// probability `1 - gamma`.
pub fn dkw_bound(m: usize, gamma: f64) -> f64 {
    ((2.0 / gamma).ln() / (2.0 * m as f64)).sqrt()
}
