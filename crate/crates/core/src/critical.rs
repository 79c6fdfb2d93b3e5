//! Critical values, p-values and complete test decisions.
//!
//! Every test statistic is compared on the scale of its null distribution:
//! `sqrt(n)` times the raw statistic for `W*_n`, `M_n`, `V*_n`, `K_n`, `W_n`
//! and `V_n`, and unscaled `T+_n(w)` for the Mason-Schuenemeyer test.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::asymptotic::{
    gumbel_cdf, gumbel_critical, kolmogorov_cdf, maxwell_cdf, ms_limit, smirnov_limit_cdf, vstar_limit_cdf,
    SeriesControl,
};
use crate::distfn::UnitSample;
use crate::exact::{smirnov_cdf, tnplus_cdf, wstar_cdf};
use crate::mc::{simulate, MCConfig};
use crate::numeric::{invert_monotone, Inversion};
use crate::statistics::{
    ks_stat, smirnov_stat, tnplus_stat, vstar_stat, weighted_sup_one_sided, weighted_sup_two_sided, wstar_stat,
    StatKind, StatisticValue,
};
use crate::{GofError, Result};

/// Environment variable naming the critical-value cache file.
pub const CACHE_ENV: &str = "GOF_CACHE";
/// Cache file used when `GOF_CACHE` is unset.
pub const DEFAULT_CACHE_PATH: &str = ".gof_cache.csv";

/// Largest `|CDF(c) - (1 - alpha)|` accepted for an exact critical value.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Largest `|CDF(c) - (1 - alpha)|` accepted for an asymptotic critical value.
pub const ASYMPTOTIC_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestKind {
    /// `sqrt(n) W*_n`, the N-test.
    WnStar,
    /// `sqrt(n) M_n`, the S-test.
    Smirnov,
    /// `T+_n(w_alpha)`, the one-sided Mason-Schuenemeyer test.
    MsPlus,
    /// `sqrt(n) V*_n`.
    VnStar,
    /// `sqrt(n) K_n`.
    Ks,
    /// `sqrt(n) W_n` with Gumbel critical values.
    WnGumbel,
    /// `sqrt(n) V_n` with Gumbel critical values.
    VnGumbel,
}

impl TestKind {
    pub const ALL: [TestKind; 7] = [
        TestKind::WnStar,
        TestKind::Smirnov,
        TestKind::MsPlus,
        TestKind::VnStar,
        TestKind::Ks,
        TestKind::WnGumbel,
        TestKind::VnGumbel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::WnStar => "WnStar",
            TestKind::Smirnov => "Smirnov",
            TestKind::MsPlus => "MSplus",
            TestKind::VnStar => "VnStar",
            TestKind::Ks => "KS",
            TestKind::WnGumbel => "WnGumbel",
            TestKind::VnGumbel => "VnGumbel",
        }
    }

    pub fn has_exact(self) -> bool {
        matches!(self, TestKind::WnStar | TestKind::Smirnov | TestKind::MsPlus)
    }

    fn is_gumbel(self) -> bool {
        matches!(self, TestKind::WnGumbel | TestKind::VnGumbel)
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = GofError;

    fn from_str(s: &str) -> Result<Self> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = TestKind::ALL.iter().map(|k| k.name()).collect();
                GofError::Input(format!("unknown statistic '{s}', expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = GofError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "exact" => Ok(Method::Exact),
            "asymptotic" => Ok(Method::Asymptotic),
            "monte_carlo" | "mc" => Ok(Method::MonteCarlo),
            _ => Err(GofError::Input(format!(
                "unknown method '{s}', expected exact, asymptotic or monte_carlo"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub stat_kind: TestKind,
    pub n: usize,
    pub alpha: f64,
    pub method: Method,
}

impl TestSpec {
    pub fn new(stat_kind: TestKind, n: usize, alpha: f64, method: Method) -> Result<Self> {
        if n == 0 {
            return Err(GofError::Parameter("sample size must be at least 1".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GofError::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if method == Method::Exact && !stat_kind.has_exact() {
            return Err(GofError::Capability(format!(
                "no exact null distribution for {stat_kind}; use asymptotic or monte_carlo"
            )));
        }
        if stat_kind.is_gumbel() && method != Method::Asymptotic {
            return Err(GofError::Capability(format!("{stat_kind} is defined by its asymptotic critical value")));
        }
        Ok(TestSpec {
            stat_kind,
            n,
            alpha,
            method,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub spec: TestSpec,
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    /// `u_{R:n}` (or `u_{r:n}`) for the argmax-rescaled statistics.
    pub argmax_location: Option<f64>,
    /// Weight `w_alpha` of the Mason-Schuenemeyer test.
    pub weight_w: Option<f64>,
}

/// Quantile and weight of the Mason-Schuenemeyer construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsWeight {
    /// `y_alpha` (one-sided) or `x_alpha` (two-sided).
    pub quantile: f64,
    pub w: f64,
}

/// `y_alpha = sqrt(-log(1 - t) / 2)` with `t = (1 - alpha)^(1/3)` and
/// `w = y_alpha (1 - t)`; two-sided, the quantile is the Kolmogorov
/// `t`-quantile instead.
pub fn ms_weight(alpha: f64, one_sided: bool) -> Result<MsWeight> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GofError::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let t = (1.0 - alpha).cbrt();
    let quantile = if one_sided {
        (-0.5 * (1.0 - t).ln()).sqrt()
    } else {
        let ctrl = SeriesControl::default();
        let rule = Inversion {
            value_tol: ASYMPTOTIC_TOLERANCE,
            ..Inversion::default()
        };
        invert_monotone(|b| kolmogorov_cdf(b, &ctrl), t, 0.1, 2.0, rule)?
    };
    Ok(MsWeight {
        quantile,
        w: quantile * (1.0 - t),
    })
}

fn ms_plus_weight(alpha: f64) -> Result<f64> {
    Ok(ms_weight(alpha, true)?.w)
}

/// Test statistic on the null-distribution scale, with the argmax location
/// where defined.
pub fn test_statistic(spec: &TestSpec, sample: &UnitSample) -> Result<StatisticValue> {
    if sample.n() != spec.n {
        return Err(GofError::Input(format!(
            "sample has {} observations but the test expects n = {}",
            sample.n(),
            spec.n
        )));
    }
    let root_n = (spec.n as f64).sqrt();
    let scaled = |mut v: StatisticValue| {
        v.value *= root_n;
        v
    };
    Ok(match spec.stat_kind {
        TestKind::WnStar => scaled(wstar_stat(sample)?),
        TestKind::Smirnov => scaled(smirnov_stat(sample)),
        TestKind::MsPlus => tnplus_stat(sample, ms_plus_weight(spec.alpha)?)?,
        TestKind::VnStar => scaled(vstar_stat(sample)?),
        TestKind::Ks => scaled(ks_stat(sample)),
        TestKind::WnGumbel => StatisticValue {
            kind: StatKind::Wn,
            n: spec.n,
            value: root_n * weighted_sup_one_sided(sample),
            argmax_index: None,
            argmax_u: None,
            weight_w: None,
        },
        TestKind::VnGumbel => StatisticValue {
            kind: StatKind::Vn,
            n: spec.n,
            value: root_n * weighted_sup_two_sided(sample),
            argmax_index: None,
            argmax_u: None,
            weight_w: None,
        },
    })
}

/// Null distribution function of the test statistic under `spec.method`
/// (exact or asymptotic).
pub fn null_cdf(spec: &TestSpec, x: f64) -> Result<f64> {
    let n = spec.n;
    let root_n = (n as f64).sqrt();
    let ctrl = SeriesControl::default();
    match (spec.method, spec.stat_kind) {
        (Method::Exact, TestKind::WnStar) => wstar_cdf(n, x / root_n),
        (Method::Exact, TestKind::Smirnov) => smirnov_cdf(n, x / root_n),
        (Method::Exact, TestKind::MsPlus) => tnplus_cdf(n, x, ms_plus_weight(spec.alpha)?),
        (Method::Asymptotic, TestKind::WnStar) => Ok(maxwell_cdf(x)),
        (Method::Asymptotic, TestKind::Smirnov) => Ok(smirnov_limit_cdf(x)),
        (Method::Asymptotic, TestKind::MsPlus) => {
            // T+ <= y  iff  L_n <= y/w, sqrt(n) M_n <= y and U_n <= y/w.
            let w = ms_plus_weight(spec.alpha)?;
            if x <= w {
                return Ok(0.0);
            }
            ms_limit(x / w, x, x / w, true)
        }
        (Method::Asymptotic, TestKind::VnStar) => vstar_limit_cdf(x, &ctrl),
        (Method::Asymptotic, TestKind::Ks) => kolmogorov_cdf(x, &ctrl),
        (Method::Asymptotic, TestKind::WnGumbel) => gumbel_cdf(x, n, false),
        (Method::Asymptotic, TestKind::VnGumbel) => gumbel_cdf(x, n, true),
        (method, kind) => Err(GofError::Capability(format!(
            "no closed-form null distribution for {kind} with method {method}"
        ))),
    }
}

/// Bisection for `cdf(c) = target` starting from a bracket around `hint`.
fn invert_near<F>(mut cdf: F, target: f64, hint: f64, tolerance: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = 0.95 * hint;
    let mut hi = 1.05 * hint;
    let mut guard = 0;
    while lo > 1e-12 && cdf(lo)? > target {
        lo *= 0.5;
        guard += 1;
        if guard > 60 {
            break;
        }
    }
    if cdf(lo)? > target {
        lo = 0.0;
    }
    let rule = Inversion {
        value_tol: tolerance,
        width_tol: 1e-14,
        max_iter: 200,
    };
    hi = hi.max(lo + 1e-6);
    invert_monotone(cdf, target, lo, hi, rule)
}

/// Critical value of the exact null distribution: the root of
/// `CDF(c) = 1 - alpha`.
pub fn exact_critical(spec: &TestSpec) -> Result<f64> {
    if spec.method != Method::Exact {
        return Err(GofError::Capability(format!("{} is not an exact-method spec", spec.stat_kind)));
    }
    let hint = asymptotic_critical(&TestSpec {
        method: Method::Asymptotic,
        ..*spec
    })?;
    invert_near(|x| null_cdf(spec, x), 1.0 - spec.alpha, hint, EXACT_TOLERANCE)
}

/// Critical value of the limiting null distribution.
pub fn asymptotic_critical(spec: &TestSpec) -> Result<f64> {
    if spec.method != Method::Asymptotic {
        return Err(GofError::Capability(format!("{} is not an asymptotic-method spec", spec.stat_kind)));
    }
    let alpha = spec.alpha;
    match spec.stat_kind {
        TestKind::Smirnov => Ok((-0.5 * alpha.ln()).sqrt()),
        TestKind::MsPlus => Ok(ms_weight(alpha, true)?.quantile),
        TestKind::WnGumbel => gumbel_critical(alpha, spec.n, false),
        TestKind::VnGumbel => gumbel_critical(alpha, spec.n, true),
        TestKind::WnStar | TestKind::VnStar | TestKind::Ks => {
            invert_near(|x| null_cdf(spec, x), 1.0 - alpha, 1.5, ASYMPTOTIC_TOLERANCE)
        }
    }
}

/// Empirical `(1 - alpha)` quantile of the simulated null distribution.
pub fn monte_carlo_critical(spec: &TestSpec, cfg: &MCConfig) -> Result<f64> {
    let values = simulate_test_null(spec, cfg)?;
    Ok(empirical_upper_quantile(&values, spec.alpha))
}

fn simulate_test_null(spec: &TestSpec, cfg: &MCConfig) -> Result<Vec<f64>> {
    simulate(spec.n, cfg, |s| Ok(test_statistic(spec, s)?.value))
}

/// Smallest simulated value `c` with at most `alpha * m` values above it.
fn empirical_upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let m = sorted.len();
    let k = ((1.0 - alpha) * m as f64).ceil() as usize;
    sorted[k.clamp(1, m) - 1]
}

/// `1 - CDF(observed)` under the exact or asymptotic null distribution.
pub fn p_value(spec: &TestSpec, observed: f64) -> Result<f64> {
    if !observed.is_finite() {
        if observed == f64::INFINITY {
            return Ok(0.0);
        }
        return Err(GofError::Input(format!("observed statistic {observed} is not finite")));
    }
    Ok((1.0 - null_cdf(spec, observed)?).clamp(0.0, 1.0))
}

/// Critical value for an exact or asymptotic spec, reading and filling the
/// cache for exact values.
pub fn critical_value(spec: &TestSpec, cache: Option<&CriticalCache>) -> Result<f64> {
    match spec.method {
        Method::Exact => match cache {
            Some(cache) => {
                if let Some(v) = cache.get(spec)? {
                    return Ok(v);
                }
                let v = exact_critical(spec)?;
                cache.insert(spec, v, EXACT_TOLERANCE)?;
                Ok(v)
            }
            None => exact_critical(spec),
        },
        Method::Asymptotic => asymptotic_critical(spec),
        Method::MonteCarlo => Err(GofError::Capability(
            "Monte-Carlo critical values need a simulation configuration".into(),
        )),
    }
}

/// Run `spec`'s test on `sample` with an exact or asymptotic null distribution.
pub fn run_test(spec: &TestSpec, sample: &UnitSample, cache: Option<&CriticalCache>) -> Result<TestReport> {
    let stat = test_statistic(spec, sample)?;
    let critical_value = critical_value(spec, cache)?;
    let p_value = p_value(spec, stat.value)?;
    Ok(report(spec, &stat, critical_value, p_value))
}

/// Run `spec`'s test with a simulated null distribution; the p-value is
/// `(1 + #{simulated >= observed}) / (reps + 1)`.
pub fn run_test_monte_carlo(spec: &TestSpec, sample: &UnitSample, cfg: &MCConfig) -> Result<TestReport> {
    let stat = test_statistic(spec, sample)?;
    let values = simulate_test_null(spec, cfg)?;
    let critical_value = empirical_upper_quantile(&values, spec.alpha);
    let at_least = values.len() - values.partition_point(|&v| v < stat.value);
    let p_value = (1 + at_least) as f64 / (values.len() + 1) as f64;
    Ok(report(spec, &stat, critical_value, p_value))
}

fn report(spec: &TestSpec, stat: &StatisticValue, critical_value: f64, p_value: f64) -> TestReport {
    TestReport {
        spec: *spec,
        statistic: stat.value,
        critical_value,
        p_value,
        reject: stat.value > critical_value,
        argmax_location: stat.argmax_u,
        weight_w: stat.weight_w,
    }
}

/// Append-only CSV table of exact critical values with header
/// `stat,n,alpha,value,method,tolerance`. Writers hold an exclusive file
/// lock; readers take a shared lock, so they always see whole rows.
#[derive(Debug, Clone)]
pub struct CriticalCache {
    path: PathBuf,
}

const CACHE_HEADER: [&str; 6] = ["stat", "n", "alpha", "value", "method", "tolerance"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CacheRow {
    stat: String,
    n: usize,
    alpha: f64,
    value: f64,
    method: String,
    tolerance: f64,
}

impl CriticalCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        CriticalCache { path: path.into() }
    }

    /// Path from `GOF_CACHE`, else `./.gof_cache.csv`.
    pub fn from_env() -> Self {
        let path = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_PATH));
        CriticalCache::new(path)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn parse(&self, text: &str) -> Result<HashMap<(TestKind, usize, u64, Method), f64>> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let mut table = HashMap::new();
        for row in reader.deserialize::<CacheRow>() {
            let row = row.map_err(|e| GofError::Input(format!("corrupt cache {}: {e}", self.path.display())))?;
            let key = (row.stat.parse()?, row.n, row.alpha.to_bits(), row.method.parse()?);
            table.insert(key, row.value);
        }
        Ok(table)
    }

    /// All cached entries.
    pub fn load(&self) -> Result<HashMap<(TestKind, usize, u64, Method), f64>> {
        let mut file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashMap::new()),
            Err(e) => return Err(GofError::io(&self.path, e)),
        };
        file.lock_shared().map_err(|e| GofError::io(&self.path, e))?;
        let mut text = String::new();
        let read = file.read_to_string(&mut text);
        file.unlock().map_err(|e| GofError::io(&self.path, e))?;
        read.map_err(|e| GofError::io(&self.path, e))?;
        self.parse(&text)
    }

    pub fn get(&self, spec: &TestSpec) -> Result<Option<f64>> {
        Ok(self
            .load()?
            .get(&(spec.stat_kind, spec.n, spec.alpha.to_bits(), spec.method))
            .copied())
    }

    /// Append one entry, writing the header first if the file is new.
    pub fn insert(&self, spec: &TestSpec, value: f64, tolerance: f64) -> Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| GofError::io(dir, e))?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .read(true)
            .open(&self.path)
            .map_err(|e| GofError::io(&self.path, e))?;
        file.lock().map_err(|e| GofError::io(&self.path, e))?;
        let result = (|| -> std::io::Result<()> {
            let empty = file.seek(SeekFrom::End(0))? == 0;
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            if empty {
                writer.write_record(CACHE_HEADER)?;
            }
            writer.serialize(CacheRow {
                stat: spec.stat_kind.name().to_string(),
                n: spec.n,
                alpha: spec.alpha,
                value,
                method: spec.method.name().to_string(),
                tolerance,
            })?;
            let bytes = writer.into_inner().map_err(|e| e.into_error())?;
            file.write_all(&bytes)?;
            file.flush()
        })();
        file.unlock().map_err(|e| GofError::io(&self.path, e))?;
        result.map_err(|e| GofError::io(&self.path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::UnitSample;

    fn spec(kind: TestKind, n: usize, alpha: f64, method: Method) -> TestSpec {
        TestSpec::new(kind, n, alpha, method).unwrap()
    }

    #[test]
    fn ms_weight_examples() {
        let one = ms_weight(0.05, true).unwrap();
        assert!((one.quantile - 1.42787).abs() < 1e-4);
        assert!((one.w - 0.024205).abs() < 1e-5);
        assert!((one.quantile - 1.427_820_758_984_269_3).abs() < 1e-12);
        let two = ms_weight(0.05, false).unwrap();
        assert!((two.quantile - 1.544).abs() < 1e-3);
        assert!((two.w - 0.0261).abs() < 1e-4);
        assert!(ms_weight(1e-9, true).unwrap().w < 1e-7);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            TestSpec::new(TestKind::VnStar, 10, 0.05, Method::Exact),
            Err(GofError::Capability(_))
        ));
        assert!(matches!(
            TestSpec::new(TestKind::Ks, 10, 0.05, Method::Exact),
            Err(GofError::Capability(_))
        ));
        assert!(TestSpec::new(TestKind::WnGumbel, 30, 0.1, Method::Exact).is_err());
        assert!(TestSpec::new(TestKind::WnStar, 10, 1.5, Method::Exact).is_err());
        assert!(TestSpec::new(TestKind::VnStar, 10, 0.05, Method::MonteCarlo).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for k in TestKind::ALL {
            assert_eq!(k.name().parse::<TestKind>().unwrap(), k);
        }
        assert_eq!("msplus".parse::<TestKind>().unwrap(), TestKind::MsPlus);
        for m in [Method::Exact, Method::Asymptotic, Method::MonteCarlo] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<TestKind>().is_err());
    }

    #[test]
    fn asymptotic_row() {
        let asym = |k| asymptotic_critical(&spec(k, 100, 0.05, Method::Asymptotic)).unwrap();
        assert!((asym(TestKind::WnStar) - 2.79548).abs() < 1e-4);
        assert!((asym(TestKind::Smirnov) - 1.22387).abs() < 1e-4);
        assert!((asym(TestKind::MsPlus) - 1.42782).abs() < 1e-4);
        assert!((asym(TestKind::Ks) - 1.358_098_8).abs() < 1e-6);
        let v = asym(TestKind::VnStar);
        let ctrl = SeriesControl::default();
        assert!((vstar_limit_cdf(v, &ctrl).unwrap() - 0.95).abs() < 1e-9);
    }

    #[test]
    fn exact_critical_inverts_cdf() {
        for kind in [TestKind::WnStar, TestKind::Smirnov, TestKind::MsPlus] {
            for n in [1usize, 5, 30] {
                let s = spec(kind, n, 0.05, Method::Exact);
                let c = exact_critical(&s).unwrap();
                assert!((null_cdf(&s, c).unwrap() - 0.95).abs() < 1e-7, "{kind} n={n}");
                assert!((p_value(&s, c).unwrap() - 0.05).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn exact_critical_verified_values() {
        // Roots of the exact distribution functions, confirmed by Monte-Carlo
        // simulation with 2e8 replicates.
        let c = exact_critical(&spec(TestKind::WnStar, 30, 0.05, Method::Exact)).unwrap();
        assert!((c - 2.835_489).abs() < 2e-5, "{c}");
        let c = exact_critical(&spec(TestKind::Smirnov, 100, 0.05, Method::Exact)).unwrap();
        assert!((c - 1.206_657).abs() < 2e-5, "{c}");
        let c = exact_critical(&spec(TestKind::MsPlus, 50, 0.05, Method::Exact)).unwrap();
        assert!((c - 1.287_204).abs() < 2e-5, "{c}");
    }

    #[test]
    fn exact_critical_decreases_in_alpha() {
        for kind in [TestKind::WnStar, TestKind::Smirnov, TestKind::MsPlus] {
            let a = exact_critical(&spec(kind, 20, 0.01, Method::Exact)).unwrap();
            let b = exact_critical(&spec(kind, 20, 0.05, Method::Exact)).unwrap();
            let c = exact_critical(&spec(kind, 20, 0.1, Method::Exact)).unwrap();
            assert!(a > b && b > c, "{kind}: {a} {b} {c}");
        }
    }

    #[test]
    fn p_value_examples() {
        let w = spec(TestKind::WnStar, 1, 0.05, Method::Exact);
        assert!((p_value(&w, 1.0).unwrap() - 0.5).abs() < 1e-12);
        let s = spec(TestKind::Smirnov, 1, 0.05, Method::Exact);
        assert!((p_value(&s, 0.4).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(p_value(&s, f64::INFINITY).unwrap(), 0.0);
        let mc = TestSpec::new(TestKind::Ks, 10, 0.05, Method::MonteCarlo).unwrap();
        assert!(matches!(p_value(&mc, 1.0), Err(GofError::Capability(_))));
    }

    #[test]
    fn run_test_examples() {
        let w = spec(TestKind::WnStar, 1, 0.05, Method::Exact);
        let r = run_test(&w, &UnitSample::new(vec![0.5]).unwrap(), None).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!((r.p_value - 0.5).abs() < 1e-12);
        assert!(!r.reject);
        assert_eq!(r.argmax_location, Some(0.5));
        let mismatch = run_test(&spec(TestKind::Smirnov, 3, 0.05, Method::Exact), &UnitSample::new(vec![0.5]).unwrap(), None);
        assert!(matches!(mismatch, Err(GofError::Input(_))));
    }

    #[test]
    fn ms_plus_report_uses_weighted_statistic() {
        let s = spec(TestKind::MsPlus, 30, 0.05, Method::Exact);
        let sample = crate::rng::uniform_sample(30, 8);
        let r = run_test(&s, &sample, None).unwrap();
        let w = ms_weight(0.05, true).unwrap().w;
        assert_eq!(r.statistic, tnplus_stat(&sample, w).unwrap().value);
        assert_eq!(r.reject, r.statistic > r.critical_value);
        assert_eq!(r.weight_w, Some(w));
    }

    #[test]
    fn monte_carlo_test_is_consistent() {
        let s = TestSpec::new(TestKind::VnStar, 15, 0.05, Method::MonteCarlo).unwrap();
        let cfg = MCConfig::new(2000, 3, 1).unwrap();
        let sample = crate::rng::uniform_sample(15, 1);
        let r = run_test_monte_carlo(&s, &sample, &cfg).unwrap();
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
        assert_eq!(r.reject, r.statistic > r.critical_value);
        let c = monte_carlo_critical(&s, &cfg).unwrap();
        assert_eq!(c, r.critical_value);
    }

    #[test]
    fn empirical_quantile_convention() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(empirical_upper_quantile(&v, 0.05), 95.0);
        assert_eq!(empirical_upper_quantile(&v, 0.999), 1.0);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CriticalCache::new(dir.path().join("sub").join("cache.csv"));
        let s = spec(TestKind::Smirnov, 12, 0.05, Method::Exact);
        assert_eq!(cache.get(&s).unwrap(), None);
        let v = critical_value(&s, Some(&cache)).unwrap();
        assert_eq!(cache.get(&s).unwrap(), Some(v));
        let other = spec(TestKind::WnStar, 12, 0.05, Method::Exact);
        cache.insert(&other, 2.5, 1e-9).unwrap();
        let text = std::fs::read_to_string(cache.path()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "stat,n,alpha,value,method,tolerance");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("WnStar,12,0.05,2.5,exact,"));
        // A cached value is returned verbatim.
        assert_eq!(critical_value(&other, Some(&cache)).unwrap(), 2.5);
    }

    #[test]
    fn corrupt_cache_is_an_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        std::fs::write(&path, "stat,n,alpha,value,method,tolerance\nWnStar,x,0.05,1,exact,1e-9\n").unwrap();
        let cache = CriticalCache::new(&path);
        assert!(matches!(cache.load(), Err(GofError::Input(_))));
    }
}
