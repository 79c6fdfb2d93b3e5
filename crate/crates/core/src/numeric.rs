//! Numerical building blocks shared by the distribution code: the standard
//! normal law, log-factorials, compensated summation and monotone inversion.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{GofError, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function, via the complementary error
/// function so that both tails keep full relative precision.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal quantile.
///
/// Acklam's rational approximation (relative error about 1.15e-9) followed by
/// two Newton steps on `normal_cdf`, which brings the round trip
/// `normal_cdf(normal_quantile(p))` down to a few ulps.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(GofError::Domain(format!(
            "normal quantile needs p in (0, 1), got {p}"
        )));
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    for _ in 0..2 {
        let density = normal_pdf(x);
        if density <= 0.0 {
            break;
        }
        // cdf(x) - p, evaluated on the smaller tail.
        let err = if x > 0.0 {
            (1.0 - p) - 0.5 * libm::erfc(x * FRAC_1_SQRT_2)
        } else {
            normal_cdf(x) - p
        };
        x -= err / density;
    }
    Ok(x)
}

/// `sqrt(2 / pi)`
pub(crate) fn sqrt_2_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

/// Table of `ln(k!)` for `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let table = (0..=n).map(|k| libm::lgamma(k as f64 + 1.0)).collect();
        LnFactorials { table }
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `ln C(n, k)` for `k <= n`.
    #[inline]
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// Neumaier's variant of Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Stopping rule for [`invert_monotone`].
#[derive(Debug, Clone, Copy)]
pub struct Inversion {
    /// Stop once `|f(x) - target|` falls below this.
    pub value_tol: f64,
    /// Stop once the bracket is narrower than this.
    pub width_tol: f64,
    pub max_iter: usize,
}

impl Default for Inversion {
    fn default() -> Self {
        Inversion {
            value_tol: 1e-10,
            width_tol: 1e-13,
            max_iter: 200,
        }
    }
}

/// Solve `f(x) = target` for a nondecreasing `f` by bisection.
///
/// The bracket starts at `[lo, hi]`; `hi` is doubled (in distance from `lo`)
/// until `f(hi) >= target`. Returns the midpoint of the final bracket, or
/// the first midpoint whose value is within `value_tol` of the target.
pub fn invert_monotone<F>(mut f: F, target: f64, lo: f64, hi: f64, rule: Inversion) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = lo;
    let mut hi = hi;
    let mut f_hi = f(hi)?;
    let mut expansions = 0;
    while f_hi < target {
        let width = hi - lo;
        lo = hi;
        hi += 2.0 * width.max(1e-3);
        f_hi = f(hi)?;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(GofError::Domain(format!(
                "could not bracket a root of f(x) = {target}"
            )));
        }
    }
    if f(lo)? > target {
        return Err(GofError::Domain(format!(
            "lower bracket end {lo} already exceeds target {target}"
        )));
    }
    for _ in 0..rule.max_iter {
        let mid = 0.5 * (lo + hi);
        let value = f(mid)?;
        if (value - target).abs() < rule.value_tol {
            return Ok(mid);
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < rule.width_tol {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
