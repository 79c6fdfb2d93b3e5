//! Subcommand implementations. Each returns the text to print on success.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use gof_core::asymptotic::maxwell_cdf;
use gof_core::critical::{
    asymptotic_critical, critical_value, null_cdf, run_test, run_test_monte_carlo, CriticalCache,
    Method, TestKind, TestReport, TestSpec,
};
use gof_core::distfn::{pit, read_sample_csv, HypothesisModel};
use gof_core::exact::wstar_cdf;
use gof_core::mc::{power_curve, type_one_error, MCConfig, PowerTest};
use gof_core::{GofError, Result};

use crate::grid::{Grid, SampleSize};

/// Shared Monte-Carlo options.
#[derive(Args, Debug, Clone)]
pub struct McArgs {
    /// Monte-Carlo replicates
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    /// Master seed of the replicate streams
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Worker threads (defaults to GOF_WORKERS or the available cores)
    #[arg(long)]
    pub workers: Option<usize>,
}

impl McArgs {
    fn config(&self) -> Result<MCConfig> {
        match self.workers {
            Some(w) => MCConfig::new(self.reps, self.seed, w),
            None => MCConfig::with_default_workers(self.reps, self.seed),
        }
    }
}

#[derive(Args, Debug)]
pub struct TestArgs {
    /// One observation per line, optional header
    #[arg(long)]
    pub data: PathBuf,
    /// Hypothesized distribution: uniform:a,b | normal:mu,sigma | exp:lambda | pwl:knots.csv
    #[arg(long)]
    pub f0: String,
    /// Test statistic: WnStar, Smirnov, MSplus, VnStar, KS, WnGumbel, VnGumbel
    #[arg(long)]
    pub stat: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// exact, asymptotic or mc
    #[arg(long, default_value = "exact")]
    pub method: String,
    /// Exit with status 2 when the hypothesis is rejected
    #[arg(long)]
    pub exitcode: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

/// JSON document emitted by `gof test`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub stat: String,
    pub n: usize,
    pub value: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    pub method: String,
    pub argmax_location: Option<f64>,
}

impl From<&TestReport> for JsonReport {
    fn from(r: &TestReport) -> Self {
        JsonReport {
            stat: r.spec.stat_kind.name().to_string(),
            n: r.spec.n,
            value: r.statistic,
            critical_value: r.critical_value,
            p_value: r.p_value,
            reject: r.reject,
            method: r.spec.method.name().to_string(),
            argmax_location: r.argmax_location,
        }
    }
}

/// Outcome of `gof test`: the JSON text and the decision.
pub struct TestOutcome {
    pub json: String,
    pub reject: bool,
}

pub fn cmd_test(args: &TestArgs) -> Result<TestOutcome> {
    let model = HypothesisModel::parse(&args.f0)?;
    let raw = read_sample_csv(&args.data)?;
    let sample = pit(&raw, &model)?;
    let kind: TestKind = args.stat.parse()?;
    let method: Method = args.method.parse()?;
    let spec = TestSpec::new(kind, sample.n(), args.alpha, method)?;
    let report = match method {
        Method::MonteCarlo => run_test_monte_carlo(&spec, &sample, &args.mc.config()?)?,
        _ => run_test(&spec, &sample, Some(&CriticalCache::from_env()))?,
    };
    let json = serde_json::to_string_pretty(&JsonReport::from(&report))
        .map_err(|e| GofError::Input(format!("cannot serialize report: {e}")))?;
    Ok(TestOutcome {
        json,
        reject: report.reject,
    })
}

#[derive(Args, Debug)]
pub struct CritvalArgs {
    #[arg(long)]
    pub stat: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Comma-separated sample sizes; `inf` selects the limiting distribution
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<SampleSize>,
    /// exact or asymptotic (rows with n = inf are always asymptotic)
    #[arg(long, default_value = "exact")]
    pub method: String,
}

const CRITVAL_HEADER: &str = "stat,n,alpha,method,value";

fn critval_row(kind: TestKind, n: SampleSize, alpha: f64, method: Method, precision: usize, cache: &CriticalCache) -> Result<String> {
    let (spec_n, method) = match n {
        SampleSize::Finite(n) => (n, method),
        // The limiting laws ignore n except for the Gumbel norming.
        SampleSize::Infinite => (usize::MAX, Method::Asymptotic),
    };
    if n == SampleSize::Infinite && matches!(kind, TestKind::WnGumbel | TestKind::VnGumbel) {
        return Err(GofError::Capability(format!("{kind} critical values depend on a finite n")));
    }
    let spec = TestSpec::new(kind, spec_n, alpha, method)?;
    let value = match method {
        Method::Asymptotic => asymptotic_critical(&spec)?,
        _ => critical_value(&spec, Some(cache))?,
    };
    Ok(format!("{kind},{n},{alpha},{method},{value:.precision$}"))
}

pub fn cmd_critval(args: &CritvalArgs, precision: usize) -> Result<String> {
    let kind: TestKind = args.stat.parse()?;
    let method: Method = args.method.parse()?;
    if method == Method::MonteCarlo {
        return Err(GofError::Capability("critval tabulates exact or asymptotic values only".into()));
    }
    let cache = CriticalCache::from_env();
    let mut out = String::from(CRITVAL_HEADER);
    out.push('\n');
    for &n in &args.n {
        out.push_str(&critval_row(kind, n, args.alpha, method, precision, &cache)?);
        out.push('\n');
    }
    Ok(out)
}

#[derive(Args, Debug)]
pub struct Table1Args {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Sample sizes of the table rows
    #[arg(long, value_delimiter = ',', default_value = "30,50,100,500,1000,inf")]
    pub n: Vec<SampleSize>,
}

pub fn cmd_table1(args: &Table1Args, precision: usize) -> Result<String> {
    let cache = CriticalCache::from_env();
    let mut out = String::from(CRITVAL_HEADER);
    out.push('\n');
    for &n in &args.n {
        for kind in [TestKind::WnStar, TestKind::Smirnov, TestKind::MsPlus] {
            out.push_str(&critval_row(kind, n, args.alpha, Method::Exact, precision, &cache)?);
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Args, Debug)]
pub struct CdfArgs {
    #[arg(long)]
    pub stat: String,
    /// Sample size (ignored with --asymptotic)
    #[arg(long)]
    pub n: Option<usize>,
    /// Single evaluation point on the test-statistic scale
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub x: Option<f64>,
    /// Evaluation grid lo:hi:step
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Evaluate the limiting distribution
    #[arg(long)]
    pub asymptotic: bool,
    /// Level fixing the Mason-Schuenemeyer weight
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

pub fn cmd_cdf(args: &CdfArgs, precision: usize) -> Result<String> {
    let kind: TestKind = args.stat.parse()?;
    let (n, method) = if args.asymptotic {
        (args.n.unwrap_or(usize::MAX), Method::Asymptotic)
    } else {
        let n = args
            .n
            .ok_or_else(|| GofError::Input("--n is required unless --asymptotic is given".into()))?;
        (n, Method::Exact)
    };
    let spec = TestSpec::new(kind, n, args.alpha, method)?;
    match (args.x, args.grid) {
        (Some(x), _) => Ok(format!("{:.precision$}\n", null_cdf(&spec, x)?)),
        (None, Some(grid)) => {
            let mut out = String::from("x,cdf\n");
            for x in grid.points() {
                let _ = writeln!(out, "{x:.precision$},{:.precision$}", null_cdf(&spec, x)?);
            }
            Ok(out)
        }
        (None, None) => Err(GofError::Input("one of --x or --grid is required".into())),
    }
}

#[derive(Args, Debug)]
pub struct PowerArgs {
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// F0(tau), the kink of the alternative
    #[arg(long, default_value_t = 0.05)]
    pub tau: f64,
    /// Slope grid lo:hi:step
    #[arg(long, default_value = "1:19:0.5")]
    pub delta: Grid,
    #[command(flatten)]
    pub mc: McArgs,
}

pub fn cmd_power(args: &PowerArgs, precision: usize) -> Result<String> {
    let cfg = args.mc.config()?;
    let cache = CriticalCache::from_env();
    let curve = power_curve(args.n, args.alpha, args.tau, &args.delta.points(), &cfg, Some(&cache))?;
    let mut out = String::from("delta,power_N,se_N,power_S,se_S,power_MS,se_MS\n");
    for (g, delta) in curve.delta_grid.iter().enumerate() {
        let _ = write!(out, "{delta}");
        for t in PowerTest::ALL {
            let _ = write!(
                out,
                ",{:.precision$},{:.precision$}",
                curve.power_of(t)[g],
                curve.stderr_of(t)[g]
            );
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Args, Debug)]
pub struct Type1Args {
    #[arg(long, default_value = "WnGumbel")]
    pub stat: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// exact or asymptotic critical values
    #[arg(long, default_value = "asymptotic")]
    pub method: String,
    #[command(flatten)]
    pub mc: McArgs,
}

pub fn cmd_type1(args: &Type1Args, precision: usize) -> Result<String> {
    let kind: TestKind = args.stat.parse()?;
    let method: Method = args.method.parse()?;
    let spec = TestSpec::new(kind, args.n, args.alpha, method)?;
    let cfg = args.mc.config()?;
    let est = type_one_error(&spec, &cfg, Some(&CriticalCache::from_env()))?;
    Ok(format!(
        "stat,n,alpha,method,reps,rate,stderr\n{kind},{},{},{method},{},{:.precision$},{:.precision$}\n",
        args.n, args.alpha, cfg.reps, est.rate, est.stderr
    ))
}

#[derive(Args, Debug)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 15)]
    pub n: usize,
    #[arg(long, default_value = "0:4:0.02")]
    pub grid: Grid,
}

pub fn cmd_figure1(args: &Figure1Args, precision: usize) -> Result<String> {
    if args.n == 0 {
        return Err(GofError::Input("sample size must be at least 1".into()));
    }
    let root_n = (args.n as f64).sqrt();
    let mut out = String::from("x,H_n,H\n");
    let mut sup_diff: f64 = 0.0;
    for x in args.grid.points() {
        let h_n = wstar_cdf(args.n, x / root_n)?;
        let h = maxwell_cdf(x);
        sup_diff = sup_diff.max((h_n - h).abs());
        let _ = writeln!(out, "{x:.precision$},{h_n:.precision$},{h:.precision$}");
    }
    let _ = writeln!(out, "# sup|H_n - H| = {sup_diff:.precision$}");
    Ok(out)
}
