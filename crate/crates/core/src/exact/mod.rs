//! Exact finite-sample null distribution functions.
//!
//! * [`smirnov_cdf`]: the one-sided statistic `M_n`.
//! * [`wstar_cdf`]: the standardized statistic `W*_n`, built from the joint
//!   law [`qnk`] of the maximizing order statistic and its index.
//! * [`tnplus_cdf`]: the one-sided weighted product statistic `T+_n(w)` as a
//!   rectangle probability ([`steck_rectangle`]).
//! * [`daniels_ln_cdf`]: the ratio statistic `L_n`.

mod fixed;
mod hessenberg;
mod steck;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::numeric::{KahanSum, LnFactorials};
use crate::{GofError, Result};

pub use hessenberg::{hessenberg_det, HessenbergMatrix};
pub use steck::{steck_rectangle, RectangleBounds};

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GofError::Domain("sample size must be at least 1".into()));
    }
    Ok(())
}

/// `P(M_n <= x)` where `M_n = sup (F_n - F)`.
pub fn smirnov_cdf(n: usize, x: f64) -> Result<f64> {
    check_n(n)?;
    if x.is_nan() {
        return Err(GofError::Domain("smirnov_cdf argument is not a number".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let lf = LnFactorials::new(n);
    let top = (nf * (1.0 - x)).floor() as usize;
    let mut tail = KahanSum::new();
    for i in 0..=top.min(n) {
        let rest = 1.0 - x - i as f64 / nf;
        if rest <= 0.0 {
            continue;
        }
        let ln_term = x.ln() + lf.ln_binomial(n, i) + (i as f64 - 1.0) * (x + i as f64 / nf).ln()
            + (n - i) as f64 * rest.ln();
        tail.add(ln_term.exp());
    }
    Ok((1.0 - tail.value()).clamp(0.0, 1.0))
}

/// The root `s` in `(0, c)` of `(c - s) / sqrt(s (1 - s)) = x`.
pub fn threshold_s(c: f64, x: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(GofError::Domain(format!("threshold needs c in (0, 1], got {c}")));
    }
    if !(x >= 0.0) {
        return Err(GofError::Domain(format!("threshold needs x > 0, got {x}")));
    }
    // Rationalized form of (2c + x^2 - x sqrt(4c(1-c) + x^2)) / (2(1 + x^2)),
    // free of cancellation for large x.
    let x2 = x * x;
    Ok(2.0 * c * c / (2.0 * c + x2 + x * (4.0 * c * (1.0 - c) + x2).sqrt()))
}

/// Per-`(n, k)` quantities of the `q_n[z, k]` double sum that do not depend on `z`.
struct QnkTables {
    n: usize,
    lf: LnFactorials,
    ln_n: f64,
}

impl QnkTables {
    fn new(n: usize) -> Self {
        QnkTables {
            n,
            lf: LnFactorials::new(n),
            ln_n: (n as f64).ln(),
        }
    }

    /// `P(X_{R:n} <= z, R = k)` for `z` in `[0, 1)`, `k` in `1..=n`.
    fn eval(&self, z: f64, k: usize) -> f64 {
        let n = self.n;
        let nf = n as f64;
        let lf = &self.lf;
        if z <= 0.0 {
            return 0.0;
        }
        let c = z.min(k as f64 / nf);
        let first = (lf.ln_binomial(n - 1, k - 1) + k as f64 * c.ln() + (n - k) as f64 * (-c).ln_1p()).exp();

        let m = (nf * z).min(k as f64);
        let i_top = k.min((nf * z).floor() as usize);
        if i_top == 0 {
            return first.clamp(0.0, 1.0);
        }
        // ln of n^{-n} n! (n-m)^{n-j-1} (j-m) / (n-j)!, per j; the j = n factor is 1.
        let ln_nm = (nf - m).ln();
        let base_const = lf.get(n) - nf * self.ln_n;
        let g: Vec<f64> = (k..=n)
            .map(|j| {
                let jm = j as f64 - m;
                if jm <= 0.0 {
                    f64::NEG_INFINITY
                } else if j == n {
                    -lf.get(0)
                } else {
                    (n - j - 1) as f64 * ln_nm + jm.ln() - lf.get(n - j)
                }
            })
            .collect();
        let mut sum = KahanSum::new();
        for i in 0..i_top {
            let base = m - i as f64 - 1.0;
            if base <= 0.0 {
                continue;
            }
            let ln_base = base.ln();
            // (i+1)^{i-1} (m-i-1)^{j-i} / (i! (j-i)!)
            let h = base_const + (i as f64 - 1.0) * ((i + 1) as f64).ln() - lf.get(i) - i as f64 * ln_base;
            let mut inner = 0.0;
            for (offset, &gj) in g.iter().enumerate() {
                let j = k + offset;
                if gj == f64::NEG_INFINITY {
                    continue;
                }
                inner += (h + gj + j as f64 * ln_base - lf.get(j - i)).exp();
            }
            sum.add(inner);
        }
        (first - sum.value()).clamp(0.0, 1.0)
    }
}

/// `q_n[z, k] = P(X_{R:n} <= z, R = k)`, the joint law of the order statistic
/// at which `W*_n` is attained and its index.
pub fn qnk(n: usize, z: f64, k: usize) -> Result<f64> {
    check_n(n)?;
    if !(0.0..1.0).contains(&z) {
        return Err(GofError::Domain(format!("qnk needs z in [0, 1), got {z}")));
    }
    if k == 0 || k > n {
        return Err(GofError::Domain(format!("qnk needs k in 1..={n}, got {k}")));
    }
    Ok(QnkTables::new(n).eval(z, k))
}

fn wstar_memo() -> &'static Mutex<HashMap<(usize, u64), f64>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, u64), f64>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `P(W*_n <= x)`. Evaluation costs `O(n^3)`; results are memoized per `(n, x)`.
pub fn wstar_cdf(n: usize, x: f64) -> Result<f64> {
    check_n(n)?;
    if x.is_nan() {
        return Err(GofError::Domain("wstar_cdf argument is not a number".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let key = (n, x.to_bits());
    if let Some(&v) = wstar_memo().lock().expect("memo lock").get(&key) {
        return Ok(v);
    }
    let tables = QnkTables::new(n);
    let nf = n as f64;
    let mut exceed = KahanSum::new();
    for k in 1..=n {
        let s = threshold_s(k as f64 / nf, x)?;
        exceed.add(tables.eval(s, k));
    }
    let value = (1.0 - exceed.value()).clamp(0.0, 1.0);
    wstar_memo().lock().expect("memo lock").insert(key, value);
    Ok(value)
}

/// Band `[a_i, b_i]` for the order statistics under which `T+_n(w) <= y`.
pub fn tnplus_bounds(n: usize, y: f64, w: f64) -> Result<RectangleBounds> {
    check_n(n)?;
    if !(w > 0.0) {
        return Err(GofError::Parameter(format!("weight w must be positive, got {w}")));
    }
    if !(y > 0.0) {
        return Err(GofError::Domain(format!("T+ bounds need y > 0, got {y}")));
    }
    let nf = n as f64;
    let ratio = w / y;
    let shift = y / nf.sqrt();
    let a = (1..=n).map(|i| {
        let t = i as f64 / nf;
        (ratio * t).max(t - shift)
    });
    let b = (1..=n).map(|i| 1.0 - ratio * (1.0 - i as f64 / nf));
    RectangleBounds::new(a.collect(), b.collect())
}

/// `P(T+_n(w) <= y)`.
pub fn tnplus_cdf(n: usize, y: f64, w: f64) -> Result<f64> {
    check_n(n)?;
    if !(w > 0.0) {
        return Err(GofError::Parameter(format!("weight w must be positive, got {w}")));
    }
    if y.is_nan() {
        return Err(GofError::Domain("tnplus_cdf argument is not a number".into()));
    }
    if y <= 0.0 {
        return Ok(0.0);
    }
    if y == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(steck_rectangle(&tnplus_bounds(n, y, w)?))
}

/// `P(L_n <= x) = 1 - 1/x` for `x >= 1`, the same for every `n`.
pub fn daniels_ln_cdf(x: f64) -> f64 {
    if x >= 1.0 {
        1.0 - 1.0 / x
    } else {
        0.0
    }
}

/// Statistics with an exact finite-sample distribution function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactKind {
    Smirnov,
    WnStar,
    TnPlus,
}

/// An exact CDF on the raw (unscaled) statistic scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactCdfRequest {
    pub kind: ExactKind,
    pub n: usize,
    pub weight_w: Option<f64>,
}

impl ExactCdfRequest {
    pub fn new(kind: ExactKind, n: usize, weight_w: Option<f64>) -> Result<Self> {
        check_n(n)?;
        match (kind, weight_w) {
            (ExactKind::TnPlus, Some(w)) if w > 0.0 => {}
            (ExactKind::TnPlus, Some(w)) => {
                return Err(GofError::Parameter(format!("weight w must be positive, got {w}")))
            }
            (ExactKind::TnPlus, None) => {
                return Err(GofError::Parameter("T+ needs a weight w".into()))
            }
            (_, Some(_)) => {
                return Err(GofError::Parameter(format!("{kind:?} takes no weight")))
            }
            (_, None) => {}
        }
        Ok(ExactCdfRequest { kind, n, weight_w })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self.kind {
            ExactKind::Smirnov => smirnov_cdf(self.n, x),
            ExactKind::WnStar => wstar_cdf(self.n, x),
            ExactKind::TnPlus => tnplus_cdf(self.n, x, self.weight_w.unwrap_or(f64::NAN)),
        }
    }
}
