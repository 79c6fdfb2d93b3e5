//! Argument value parsers shared by the subcommands.

use std::fmt;
use std::str::FromStr;

/// Inclusive arithmetic grid written `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    /// Grid points computed as `lo + k * step`, so long grids do not drift.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' must have the form lo:hi:step"));
        }
        let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("grid '{s}': {e}"));
        let (lo, hi, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if !(lo.is_finite() && hi.is_finite() && step > 0.0 && step.is_finite()) {
            return Err(format!("grid '{s}' needs finite bounds and a positive step"));
        }
        if hi < lo {
            return Err(format!("grid '{s}' has hi < lo"));
        }
        Ok(Grid { lo, hi, step })
    }
}

/// A sample size, or `inf` for the limiting distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSize {
    Finite(usize),
    Infinite,
}

impl FromStr for SampleSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(SampleSize::Infinite);
        }
        match s.parse::<usize>() {
            Ok(0) => Err("sample size must be at least 1".into()),
            Ok(n) => Ok(SampleSize::Finite(n)),
            Err(e) => Err(format!("bad sample size '{s}': {e}")),
        }
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(n) => write!(f, "{n}"),
            SampleSize::Infinite => f.write_str("inf"),
        }
    }
}
