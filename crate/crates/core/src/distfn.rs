//! Hypothesized continuous distribution functions `F0` and the
//! probability-integral transform.

use std::fmt;
use std::path::Path;

use crate::numeric::{normal_cdf, normal_quantile};
use crate::{GofError, Result};

/// A continuous hypothesized distribution function.
#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisModel {
    Uniform { a: f64, b: f64 },
    Normal { mu: f64, sigma: f64 },
    Exponential { lambda: f64 },
    /// Linear interpolation through `(x, F0(x))` knots. `F0` is 0 left of the
    /// first knot and 1 right of the last one.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl HypothesisModel {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let m = HypothesisModel::Uniform { a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        let m = HypothesisModel::Normal { mu, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        let m = HypothesisModel::Exponential { lambda };
        m.validate()?;
        Ok(m)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        let m = HypothesisModel::PiecewiseLinear { knots };
        m.validate()?;
        Ok(m)
    }

    /// Standard uniform on `[0, 1]`, the model every statistic reduces to.
    pub fn standard_uniform() -> Self {
        HypothesisModel::Uniform { a: 0.0, b: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HypothesisModel::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && b > a) {
                    return Err(GofError::Parameter(format!(
                        "uniform needs finite a < b, got a={a}, b={b}"
                    )));
                }
            }
            HypothesisModel::Normal { mu, sigma } => {
                if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
                    return Err(GofError::Parameter(format!(
                        "normal needs finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
                    )));
                }
            }
            HypothesisModel::Exponential { lambda } => {
                if !(lambda.is_finite() && lambda > 0.0) {
                    return Err(GofError::Parameter(format!(
                        "exponential needs lambda > 0, got {lambda}"
                    )));
                }
            }
            HypothesisModel::PiecewiseLinear { ref knots } => validate_knots(knots)?,
        }
        Ok(())
    }

    /// Closed support `[lo, hi]` (possibly infinite ends).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            HypothesisModel::Uniform { a, b } => (a, b),
            HypothesisModel::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            HypothesisModel::Exponential { .. } => (0.0, f64::INFINITY),
            HypothesisModel::PiecewiseLinear { ref knots } => {
                (knots[0].0, knots[knots.len() - 1].0)
            }
        }
    }

    /// `F0(x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            HypothesisModel::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            HypothesisModel::Normal { mu, sigma } => normal_cdf((x - mu) / sigma),
            HypothesisModel::Exponential { lambda } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-lambda * x).exp_m1()
                }
            }
            HypothesisModel::PiecewiseLinear { ref knots } => pwl_cdf(knots, x),
        }
    }

    /// `F0^{-1}(p)` for `p` in `(0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(GofError::Domain(format!("quantile needs p in (0, 1), got {p}")));
        }
        Ok(match *self {
            HypothesisModel::Uniform { a, b } => a + p * (b - a),
            HypothesisModel::Normal { mu, sigma } => mu + sigma * normal_quantile(p)?,
            HypothesisModel::Exponential { lambda } => -(-p).ln_1p() / lambda,
            HypothesisModel::PiecewiseLinear { ref knots } => pwl_quantile(knots, p),
        })
    }

    /// Parse the model grammar `uniform:a,b | normal:mu,sigma | exp:lambda |
    /// pwl:file.csv`. The `pwl` form reads its knots from disk.
    pub fn parse(spec: &str) -> Result<Self> {
        let (family, args) = spec
            .split_once(':')
            .ok_or_else(|| GofError::Input(format!("model '{spec}' lacks a ':' separator")))?;
        let numbers = |expected: usize| -> Result<Vec<f64>> {
            let parsed: std::result::Result<Vec<f64>, _> =
                args.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let parsed = parsed
                .map_err(|e| GofError::Input(format!("bad number in model '{spec}': {e}")))?;
            if parsed.len() != expected {
                return Err(GofError::Input(format!(
                    "model '{spec}' needs {expected} parameter(s), got {}",
                    parsed.len()
                )));
            }
            Ok(parsed)
        };
        match family.trim().to_ascii_lowercase().as_str() {
            "uniform" | "unif" => {
                let v = numbers(2)?;
                HypothesisModel::uniform(v[0], v[1])
            }
            "normal" | "norm" => {
                let v = numbers(2)?;
                HypothesisModel::normal(v[0], v[1])
            }
            "exp" | "exponential" => {
                let v = numbers(1)?;
                HypothesisModel::exponential(v[0])
            }
            "pwl" => HypothesisModel::piecewise_linear(read_knots_csv(args.trim())?),
            other => Err(GofError::Input(format!("unknown model family '{other}'"))),
        }
    }
}

impl fmt::Display for HypothesisModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisModel::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            HypothesisModel::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            HypothesisModel::Exponential { lambda } => write!(f, "exp:{lambda}"),
            HypothesisModel::PiecewiseLinear { knots } => write!(f, "pwl:<{} knots>", knots.len()),
        }
    }
}

/// `F0(x)` for a validated model.
pub fn eval_cdf(model: &HypothesisModel, x: f64) -> Result<f64> {
    model.validate()?;
    Ok(model.cdf(x))
}

/// `F0^{-1}(p)` for a validated model.
pub fn eval_quantile(model: &HypothesisModel, p: f64) -> Result<f64> {
    model.validate()?;
    model.quantile(p)
}

fn validate_knots(knots: &[(f64, f64)]) -> Result<()> {
    if knots.len() < 2 {
        return Err(GofError::Parameter(
            "piecewise-linear model needs at least two knots".into(),
        ));
    }
    if knots.iter().any(|&(x, p)| !x.is_finite() || !p.is_finite()) {
        return Err(GofError::Parameter("knots must be finite".into()));
    }
    if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(GofError::Parameter(
            "knot x-values must be strictly increasing".into(),
        ));
    }
    if knots.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err(GofError::Parameter("knot F-values must be nondecreasing".into()));
    }
    if knots[0].1 != 0.0 || knots[knots.len() - 1].1 != 1.0 {
        return Err(GofError::Parameter(
            "knot F-values must run from 0 to 1".into(),
        ));
    }
    Ok(())
}

fn pwl_cdf(knots: &[(f64, f64)], x: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if x <= first.0 {
        return 0.0;
    }
    if x >= last.0 {
        return 1.0;
    }
    // First knot strictly right of x.
    let hi = knots.partition_point(|&(kx, _)| kx <= x);
    let (x0, p0) = knots[hi - 1];
    let (x1, p1) = knots[hi];
    p0 + (p1 - p0) * (x - x0) / (x1 - x0)
}

fn pwl_quantile(knots: &[(f64, f64)], p: f64) -> f64 {
    // Smallest x with F(x) >= p: the first knot with F >= p closes the segment.
    let hi = knots.partition_point(|&(_, kp)| kp < p);
    let (x0, p0) = knots[hi - 1];
    let (x1, p1) = knots[hi];
    x0 + (x1 - x0) * (p - p0) / (p1 - p0)
}

/// Sorted probability-integral-transformed observations `u_{1:n} <= ... <= u_{n:n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSample {
    values: Vec<f64>,
}

impl UnitSample {
    /// Wrap already sorted values in `[0, 1]`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GofError::Input("sample must not be empty".into()));
        }
        if values.iter().any(|u| !(0.0..=1.0).contains(u)) {
            return Err(GofError::Input("unit sample values must lie in [0, 1]".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(GofError::Input("unit sample must be sorted ascending".into()));
        }
        Ok(UnitSample { values })
    }

    /// Sort and wrap values in `[0, 1]`.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|u| u.is_nan()) {
            return Err(GofError::Input("unit sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Self::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `u_{i:n}` with the 1-based order-statistic index.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Probability-integral transform: sorted `F0(x_i)`.
///
/// Values at the support endpoints map to 0 or 1 and are accepted; values
/// outside the support are an input error.
pub fn pit(raw: &[f64], model: &HypothesisModel) -> Result<UnitSample> {
    model.validate()?;
    if raw.is_empty() {
        return Err(GofError::Input("sample must not be empty".into()));
    }
    let (lo, hi) = model.support();
    let mut values = Vec::with_capacity(raw.len());
    for &x in raw {
        if !x.is_finite() {
            return Err(GofError::Input(format!("non-finite observation {x}")));
        }
        if x < lo || x > hi {
            return Err(GofError::Input(format!(
                "observation {x} lies outside the support [{lo}, {hi}] of {model}"
            )));
        }
        values.push(model.cdf(x));
    }
    UnitSample::from_unsorted(values)
}

/// Read one numeric value per line. A single non-numeric first line is
/// treated as a header; blank lines are skipped.
pub fn read_sample_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| GofError::io(path, e))?;
    parse_sample_text(&text).map_err(|e| match e {
        GofError::Input(msg) => GofError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_sample_text(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let field = line.trim().trim_end_matches(',').trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if idx == 0 => continue,
            Err(_) => {
                return Err(GofError::Input(format!(
                    "line {}: '{field}' is not a number",
                    idx + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(GofError::Input("no numeric values found".into()));
    }
    Ok(values)
}

/// Read `x,F0(x)` knot pairs, with an optional header line.
pub fn read_knots_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| GofError::io(path, e))?;
    let mut knots = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)));
        match parsed {
            Some(knot) => knots.push(knot),
            None if idx == 0 => continue,
            None => {
                return Err(GofError::Input(format!(
                    "{}: line {} is not an 'x,F' pair",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(knots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cdf_examples() {
        assert_eq!(eval_cdf(&HypothesisModel::standard_uniform(), 0.3).unwrap(), 0.3);
        assert_eq!(eval_cdf(&HypothesisModel::normal(0.0, 1.0).unwrap(), 0.0).unwrap(), 0.5);
        assert_eq!(eval_cdf(&HypothesisModel::exponential(1.0).unwrap(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_examples() {
        let u = HypothesisModel::standard_uniform();
        assert_eq!(eval_quantile(&u, 0.25).unwrap(), 0.25);
        let z = HypothesisModel::normal(0.0, 1.0).unwrap();
        assert_eq!(eval_quantile(&z, 0.5).unwrap(), 0.0);
        let e = HypothesisModel::exponential(1.0).unwrap();
        let p = 1.0 - (-1.0f64).exp();
        assert!((eval_quantile(&e, p).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(eval_quantile(&u, 0.0), Err(GofError::Domain(_))));
        assert!(matches!(eval_quantile(&u, 1.2), Err(GofError::Domain(_))));
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(HypothesisModel::normal(0.0, 0.0), Err(GofError::Parameter(_))));
        assert!(matches!(HypothesisModel::exponential(-1.0), Err(GofError::Parameter(_))));
        assert!(matches!(HypothesisModel::uniform(1.0, 1.0), Err(GofError::Parameter(_))));
        let bad = HypothesisModel::Normal { mu: 0.0, sigma: -2.0 };
        assert!(eval_cdf(&bad, 0.0).is_err());
        assert!(HypothesisModel::piecewise_linear(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(HypothesisModel::piecewise_linear(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(HypothesisModel::piecewise_linear(vec![(0.0, 0.0), (1.0, 0.6), (2.0, 0.5), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn pit_examples() {
        let u = HypothesisModel::standard_uniform();
        assert_eq!(pit(&[0.7, 0.2], &u).unwrap().values(), &[0.2, 0.7]);
        let z = HypothesisModel::normal(0.0, 1.0).unwrap();
        assert_eq!(pit(&[0.0], &z).unwrap().values(), &[0.5]);
        let raw: Vec<f64> = [0.2, 0.7].iter().map(|&p| eval_quantile(&z, p).unwrap()).collect();
        let back = pit(&raw, &z).unwrap();
        assert!((back.values()[0] - 0.2).abs() < 1e-12);
        assert!((back.values()[1] - 0.7).abs() < 1e-12);
        assert!(matches!(pit(&[], &u), Err(GofError::Input(_))));
    }

    #[test]
    fn pit_support() {
        let e = HypothesisModel::exponential(1.0).unwrap();
        assert!(matches!(pit(&[-0.5, 1.0], &e), Err(GofError::Input(_))));
        // Endpoint maps to 0 and is accepted.
        assert_eq!(pit(&[0.0, 1.0], &e).unwrap().values()[0], 0.0);
        let u = HypothesisModel::uniform(2.0, 4.0).unwrap();
        assert_eq!(pit(&[4.0], &u).unwrap().values(), &[1.0]);
        assert!(pit(&[4.5], &u).is_err());
    }

    #[test]
    fn piecewise_linear_model() {
        let m = HypothesisModel::piecewise_linear(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (4.0, 1.0)])
            .unwrap();
        assert_eq!(m.cdf(-1.0), 0.0);
        assert_eq!(m.cdf(0.5), 0.25);
        assert_eq!(m.cdf(1.5), 0.5);
        assert_eq!(m.cdf(3.0), 0.75);
        assert_eq!(m.cdf(9.0), 1.0);
        // Flat segment: smallest x reaching p.
        assert_eq!(m.quantile(0.5).unwrap(), 1.0);
        assert_eq!(m.quantile(0.75).unwrap(), 3.0);
    }

    #[test]
    fn model_grammar() {
        assert_eq!(HypothesisModel::parse("uniform:0,1").unwrap(), HypothesisModel::standard_uniform());
        assert_eq!(
            HypothesisModel::parse("normal:1.5, 2").unwrap(),
            HypothesisModel::Normal { mu: 1.5, sigma: 2.0 }
        );
        assert_eq!(HypothesisModel::parse("exp:3").unwrap(), HypothesisModel::Exponential { lambda: 3.0 });
        assert!(HypothesisModel::parse("exp:0").is_err());
        assert!(HypothesisModel::parse("gamma:1,2").is_err());
        assert!(HypothesisModel::parse("normal:1").is_err());
        assert!(HypothesisModel::parse("normal").is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("knots.csv");
        std::fs::write(&path, "x,F\n0,0\n1,0.25\n3,1\n").unwrap();
        let m = HypothesisModel::parse(&format!("pwl:{}", path.display())).unwrap();
        assert_eq!(m.cdf(2.0), 0.625);
    }

    #[test]
    fn sample_text_parsing() {
        assert_eq!(parse_sample_text("value\n1.5\n\n-2\n").unwrap(), vec![1.5, -2.0]);
        assert_eq!(parse_sample_text("0.5\n0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_sample_text("x\n1\nfoo\n").is_err());
        assert!(parse_sample_text("header\n").is_err());
    }

    fn any_model() -> impl Strategy<Value = HypothesisModel> {
        prop_oneof![
            (-5.0..5.0f64, 0.1..10.0f64).prop_map(|(a, w)| HypothesisModel::Uniform { a, b: a + w }),
            (-5.0..5.0f64, 0.1..10.0f64).prop_map(|(mu, sigma)| HypothesisModel::Normal { mu, sigma }),
            (0.05..20.0f64).prop_map(|lambda| HypothesisModel::Exponential { lambda }),
            Just(HypothesisModel::PiecewiseLinear {
                knots: vec![(-1.0, 0.0), (0.0, 0.1), (0.5, 0.6), (3.0, 1.0)]
            }),
        ]
    }

    proptest! {
        #[test]
        fn quantile_then_pit_round_trips(model in any_model(), us in prop::collection::vec(0.001..0.999f64, 1..40)) {
            let raw: Vec<f64> = us.iter().map(|&u| model.quantile(u).unwrap()).collect();
            let back = pit(&raw, &model).unwrap();
            let mut sorted = us.clone();
            sorted.sort_by(f64::total_cmp);
            for (a, b) in back.values().iter().zip(&sorted) {
                prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }

        #[test]
        fn cdf_is_monotone(model in any_model(), mut xs in prop::collection::vec(-20.0..20.0f64, 2..60)) {
            xs.sort_by(f64::total_cmp);
            for w in xs.windows(2) {
                prop_assert!(model.cdf(w[0]) <= model.cdf(w[1]));
            }
        }
    }
}
