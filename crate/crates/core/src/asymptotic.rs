//! Limiting null distributions.
//!
//! * [`maxwell_cdf`]: the limit of `sqrt(n) W*_n` (chi law with 3 degrees of freedom).
//! * [`vstar_limit_cdf`]: the limit of `sqrt(n) V*_n`.
//! * [`kolmogorov_cdf`] and [`smirnov_limit_cdf`]: limits of `sqrt(n) K_n` and `sqrt(n) M_n`.
//! * [`gumbel_critical`]: extreme-value critical values for the weighted statistics `W_n`, `V_n`.
//! * [`ms_limit`]: the product limit of the Mason-Schuenemeyer statistics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numeric::{normal_pdf, sqrt_2_over_pi};
use crate::{GofError, Result};

/// Truncation policy for the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    /// Stop once a term falls below this in absolute value.
    pub abs_tol: f64,
    /// Give up with a convergence error after this many terms.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            abs_tol: 1e-12,
            max_terms: 200,
        }
    }
}

impl SeriesControl {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(GofError::Parameter(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_terms == 0 {
            return Err(GofError::Parameter("max_terms must be at least 1".into()));
        }
        Ok(SeriesControl { abs_tol, max_terms })
    }

    /// Sum `term(k)` for `k = first, first + 1, ...` until a term drops below
    /// `abs_tol`.
    fn sum<F: FnMut(usize) -> f64>(&self, first: usize, mut term: F) -> Result<f64> {
        let mut total = 0.0;
        let mut last = f64::NAN;
        for k in first..first + self.max_terms {
            last = term(k);
            total += last;
            if last.abs() < self.abs_tol {
                return Ok(total);
            }
        }
        Err(GofError::Convergence {
            terms: self.max_terms,
            last_term: last,
            tolerance: self.abs_tol,
        })
    }
}

/// Maxwell-Boltzmann distribution function `2 Phi(x) - sqrt(2/pi) x exp(-x^2/2) - 1`.
pub fn maxwell_cdf(x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    // 2 Phi(x) - 1 = erf(x / sqrt 2), which keeps precision near zero.
    let value = libm::erf(x / std::f64::consts::SQRT_2) - sqrt_2_over_pi() * x * (-0.5 * x * x).exp();
    value.clamp(0.0, 1.0)
}

/// Maxwell-Boltzmann density `sqrt(2/pi) x^2 exp(-x^2/2)`.
pub fn maxwell_pdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    sqrt_2_over_pi() * x * x * (-0.5 * x * x).exp()
}

/// Limit distribution `G` of `sqrt(n) V*_n`.
///
/// The defining double series over `alpha_j = 2j + 1` converges only like
/// `1/l` in the outer index; resummed in closed form it equals
///
/// ```text
/// G(x) = 1 - 4x sum_{j>=0} phi((2j+1) x)
///      = 2 sum_{k>=1} (-1)^(k+1) exp(-k^2 pi^2 / (2 x^2))
/// ```
///
/// (the second line by Poisson summation). The first form is used for
/// `x >= 1.5`, the second below, so both series need only a handful of terms.
pub fn vstar_limit_cdf(x: f64, ctrl: &SeriesControl) -> Result<f64> {
    if x.is_nan() {
        return Err(GofError::Domain("vstar_limit_cdf argument is not a number".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let value = if x < 1.5 {
        let scale = PI * PI / (2.0 * x * x);
        2.0 * ctrl.sum(1, |k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-((k * k) as f64) * scale).exp()
        })?
    } else {
        1.0 - 4.0 * x * ctrl.sum(0, |j| normal_pdf((2 * j + 1) as f64 * x))?
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Kolmogorov distribution function, the limit of `sqrt(n) K_n`.
///
/// `1 - 2 sum (-1)^(k-1) exp(-2 k^2 b^2)` for `b >= 1`; the Jacobi-transformed
/// `sqrt(2 pi)/b sum exp(-(2k-1)^2 pi^2 / (8 b^2))` below, where the first
/// series converges slowly.
pub fn kolmogorov_cdf(b: f64, ctrl: &SeriesControl) -> Result<f64> {
    if b.is_nan() {
        return Err(GofError::Domain("kolmogorov_cdf argument is not a number".into()));
    }
    if b <= 0.0 {
        return Ok(0.0);
    }
    if b == f64::INFINITY {
        return Ok(1.0);
    }
    let value = if b >= 1.0 {
        1.0 - 2.0
            * ctrl.sum(1, |k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (k * k) as f64 * b * b).exp()
            })?
    } else {
        let scale = PI * PI / (8.0 * b * b);
        (2.0 * PI).sqrt() / b
            * ctrl.sum(1, |k| {
                let odd = (2 * k - 1) as f64;
                (-odd * odd * scale).exp()
            })?
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Limit of `sqrt(n) M_n`: `1 - exp(-2 b^2)` for `b >= 0`.
pub fn smirnov_limit_cdf(b: f64) -> f64 {
    if !(b > 0.0) {
        return 0.0;
    }
    -(-2.0 * b * b).exp_m1()
}

/// Norming constants `(a_n, b_n)` of the Gumbel limit.
fn gumbel_norming(n: usize) -> Result<(f64, f64)> {
    if n < 16 {
        return Err(GofError::Domain(format!(
            "Gumbel normalization needs n >= 16 so that log log log n > 0, got n = {n}"
        )));
    }
    let ll = (n as f64).ln().ln();
    let a_n = (2.0 * ll).sqrt();
    let b_n = 2.0 * ll + 0.5 * ll.ln() - 0.5 * PI.ln();
    Ok((a_n, b_n))
}

/// Critical value `c_{alpha,n} = (q_alpha + b_n) / a_n` of the weighted
/// statistic `sqrt(n) W_n` (or `sqrt(n) V_n` when `two_sided`) from its
/// Gumbel limit, with natural logarithms throughout:
///
/// ```text
/// a_n = sqrt(2 log log n)
/// b_n = 2 log log n + log log log n / 2 - log(pi) / 2
/// q_alpha = -log(-log(1 - alpha))       one-sided
/// q_alpha = -log(-log(1 - alpha) / 2)   two-sided
/// ```
pub fn gumbel_critical(alpha: f64, n: usize, two_sided: bool) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GofError::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let (a_n, b_n) = gumbel_norming(n)?;
    let tail = -(-alpha).ln_1p();
    let q = if two_sided { -(tail / 2.0).ln() } else { -tail.ln() };
    Ok((q + b_n) / a_n)
}

/// Gumbel approximation of `P(sqrt(n) W_n <= c)` (or of `sqrt(n) V_n` when
/// `two_sided`), the distribution function inverted by [`gumbel_critical`].
pub fn gumbel_cdf(c: f64, n: usize, two_sided: bool) -> Result<f64> {
    if c.is_nan() {
        return Err(GofError::Domain("gumbel_cdf argument is not a number".into()));
    }
    let (a_n, b_n) = gumbel_norming(n)?;
    let multiplicity: f64 = if two_sided { 2.0 } else { 1.0 };
    Ok((-multiplicity * (-(a_n * c - b_n)).exp()).exp())
}

/// Limit of `P(L_n <= a, sqrt(n) K <= b, U_n <= c)` for the three
/// asymptotically independent components: `(1 - 1/a) F(b) (1 - 1/c)` with `F`
/// the Kolmogorov law (two-sided) or `1 - exp(-2 b^2)` (one-sided).
pub fn ms_limit(a: f64, b: f64, c: f64, one_sided: bool) -> Result<f64> {
    if !(a >= 1.0) || !(c >= 1.0) {
        return Err(GofError::Domain(format!("ms_limit needs a, c >= 1, got a = {a}, c = {c}")));
    }
    if !(b >= 0.0) {
        return Err(GofError::Domain(format!("ms_limit needs b >= 0, got {b}")));
    }
    let middle = if one_sided {
        smirnov_limit_cdf(b)
    } else {
        kolmogorov_cdf(b, &SeriesControl::default())?
    };
    Ok((1.0 - 1.0 / a) * middle * (1.0 - 1.0 / c))
}
