//! Test statistics evaluated on a [`UnitSample`].
//!
//! All maximizer indices follow the smallest-maximizer convention: among
//! tied maxima the smallest order-statistic index wins.

use serde::{Deserialize, Serialize};

use crate::distfn::UnitSample;
use crate::{GofError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatKind {
    /// Smirnov `M_n = max_i (i/n - u_i)`.
    Mn,
    /// Kolmogorov-Smirnov `K_n`.
    Kn,
    /// Weighted one-sided supremum (Jaeschke).
    Wn,
    /// Weighted two-sided supremum (Jaeschke).
    Vn,
    /// `M_n` rescaled at its own argmax location.
    WnStar,
    /// `K_n` rescaled at its own argmax location.
    VnStar,
    Ln,
    Un,
    TnPlus,
    Tn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticValue {
    pub kind: StatKind,
    pub n: usize,
    pub value: f64,
    /// 1-based maximizer index (`R` or `r`), for the rescaled statistics.
    pub argmax_index: Option<usize>,
    /// `u_{R:n}` or `u_{r:n}`.
    pub argmax_u: Option<f64>,
    pub weight_w: Option<f64>,
}

impl StatisticValue {
    fn plain(kind: StatKind, n: usize, value: f64) -> Self {
        StatisticValue {
            kind,
            n,
            value,
            argmax_index: None,
            argmax_u: None,
            weight_w: None,
        }
    }
}

#[inline]
fn upper_gap(i: usize, n: usize, u: f64) -> f64 {
    i as f64 / n as f64 - u
}

#[inline]
fn lower_gap(i: usize, n: usize, u: f64) -> f64 {
    u - (i - 1) as f64 / n as f64
}

/// Largest value of `terms` and the smallest 1-based index attaining it.
fn smallest_argmax(terms: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (idx, t) in terms.enumerate() {
        if t > best.1 {
            best = (idx + 1, t);
        }
    }
    best
}

fn one_sided_terms(s: &UnitSample) -> impl Iterator<Item = f64> + '_ {
    let n = s.n();
    s.values().iter().enumerate().map(move |(k, &u)| upper_gap(k + 1, n, u))
}

fn two_sided_terms(s: &UnitSample) -> impl Iterator<Item = f64> + '_ {
    let n = s.n();
    s.values()
        .iter()
        .enumerate()
        .map(move |(k, &u)| upper_gap(k + 1, n, u).max(lower_gap(k + 1, n, u)))
}

/// Smirnov statistic `M_n`. Never negative: the `i = n` term is `1 - u_{n:n}`.
pub fn smirnov_stat(s: &UnitSample) -> StatisticValue {
    let (_, m) = smallest_argmax(one_sided_terms(s));
    StatisticValue::plain(StatKind::Mn, s.n(), m)
}

/// Kolmogorov-Smirnov statistic `K_n`.
pub fn ks_stat(s: &UnitSample) -> StatisticValue {
    let (_, k) = smallest_argmax(two_sided_terms(s));
    StatisticValue::plain(StatKind::Kn, s.n(), k)
}

/// Smallest index `R` maximizing `i/n - u_{i:n}`.
pub fn argmax_one_sided(s: &UnitSample) -> usize {
    smallest_argmax(one_sided_terms(s)).0
}

/// Smallest index `r` maximizing `max{i/n - u_{i:n}, u_{i:n} - (i-1)/n}`.
pub fn argmax_two_sided(s: &UnitSample) -> usize {
    smallest_argmax(two_sided_terms(s)).0
}

fn rescale_at(kind: StatKind, n: usize, index: usize, u: f64, deviation: f64) -> Result<StatisticValue> {
    if !(u > 0.0 && u < 1.0) {
        return Err(GofError::DegenerateSample(format!(
            "argmax order statistic u_({index}) = {u} is on the boundary of [0, 1]"
        )));
    }
    Ok(StatisticValue {
        kind,
        n,
        value: deviation / (u * (1.0 - u)).sqrt(),
        argmax_index: Some(index),
        argmax_u: Some(u),
        weight_w: None,
    })
}

/// `W*_n = (R/n - u_{R:n}) / sqrt(u_{R:n}(1 - u_{R:n}))`.
pub fn wstar_stat(s: &UnitSample) -> Result<StatisticValue> {
    let (r, m) = smallest_argmax(one_sided_terms(s));
    rescale_at(StatKind::WnStar, s.n(), r, s.order_stat(r), m)
}

/// `V*_n`: the two-sided deviation at `r`, rescaled by `sqrt(u_{r:n}(1 - u_{r:n}))`.
pub fn vstar_stat(s: &UnitSample) -> Result<StatisticValue> {
    let (r, k) = smallest_argmax(two_sided_terms(s));
    rescale_at(StatKind::VnStar, s.n(), r, s.order_stat(r), k)
}

/// `L_n = max_i i / (n u_{i:n})`; `+inf` when `u_{1:n} = 0`.
pub fn ln_stat(s: &UnitSample) -> StatisticValue {
    let n = s.n();
    let value = s
        .values()
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            if u > 0.0 {
                (k + 1) as f64 / (n as f64 * u)
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    StatisticValue::plain(StatKind::Ln, n, value)
}

/// `U_n = max_i (n - i) / (n (1 - u_{i:n}))`. The `i = n` term is zero.
pub fn un_stat(s: &UnitSample) -> StatisticValue {
    let n = s.n();
    let value = s
        .values()
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            let remaining = (n - (k + 1)) as f64;
            if remaining == 0.0 {
                0.0
            } else if u < 1.0 {
                remaining / (n as f64 * (1.0 - u))
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    StatisticValue::plain(StatKind::Un, n, value)
}

fn check_weight(w: f64) -> Result<()> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(GofError::Parameter(format!("weight must be positive, got {w}")));
    }
    Ok(())
}

/// One-sided Mason-Schuenemeyer statistic `T+_n(w) = max{w L_n, sqrt(n) M_n, w U_n}`.
pub fn tnplus_stat(s: &UnitSample, w: f64) -> Result<StatisticValue> {
    check_weight(w)?;
    let root_n = (s.n() as f64).sqrt();
    let value = (w * ln_stat(s).value)
        .max(root_n * smirnov_stat(s).value)
        .max(w * un_stat(s).value);
    Ok(StatisticValue {
        weight_w: Some(w),
        ..StatisticValue::plain(StatKind::TnPlus, s.n(), value)
    })
}

/// Two-sided Mason-Schuenemeyer statistic `T_n(w) = max{w L_n, sqrt(n) K_n, w U_n}`.
pub fn tn_stat(s: &UnitSample, w: f64) -> Result<StatisticValue> {
    check_weight(w)?;
    let root_n = (s.n() as f64).sqrt();
    let value = (w * ln_stat(s).value)
        .max(root_n * ks_stat(s).value)
        .max(w * un_stat(s).value);
    Ok(StatisticValue {
        weight_w: Some(w),
        ..StatisticValue::plain(StatKind::Tn, s.n(), value)
    })
}

/// Weighted one-sided supremum `W_n = sup (F_n - F0) / sqrt(F0 (1 - F0))`.
///
/// On `[u_i, u_{i+1})` the standardized deviation decreases in `t`, so the
/// supremum is attained at the order statistics themselves.
pub fn weighted_sup_one_sided(s: &UnitSample) -> f64 {
    let n = s.n();
    s.values()
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            if u <= 0.0 {
                f64::INFINITY
            } else if u >= 1.0 {
                f64::NEG_INFINITY
            } else {
                upper_gap(k + 1, n, u) / (u * (1.0 - u)).sqrt()
            }
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Weighted two-sided supremum `V_n = sup |F_n - F0| / sqrt(F0 (1 - F0))`.
pub fn weighted_sup_two_sided(s: &UnitSample) -> f64 {
    let n = s.n();
    s.values()
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            if u <= 0.0 || u >= 1.0 {
                f64::INFINITY
            } else {
                upper_gap(k + 1, n, u).max(lower_gap(k + 1, n, u)) / (u * (1.0 - u)).sqrt()
            }
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Evaluate any statistic by kind. `weight` is required for `TnPlus`/`Tn`.
pub fn evaluate(kind: StatKind, s: &UnitSample, weight: Option<f64>) -> Result<StatisticValue> {
    let need_weight = || {
        weight.ok_or_else(|| GofError::Parameter(format!("{kind:?} needs a weight w")))
    };
    Ok(match kind {
        StatKind::Mn => smirnov_stat(s),
        StatKind::Kn => ks_stat(s),
        StatKind::Wn => StatisticValue::plain(kind, s.n(), weighted_sup_one_sided(s)),
        StatKind::Vn => StatisticValue::plain(kind, s.n(), weighted_sup_two_sided(s)),
        StatKind::WnStar => wstar_stat(s)?,
        StatKind::VnStar => vstar_stat(s)?,
        StatKind::Ln => ln_stat(s),
        StatKind::Un => un_stat(s),
        StatKind::TnPlus => tnplus_stat(s, need_weight()?)?,
        StatKind::Tn => tn_stat(s, need_weight()?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::{pit, HypothesisModel};
    use proptest::prelude::*;

    fn sample(v: &[f64]) -> UnitSample {
        UnitSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn smirnov_examples() {
        assert!((smirnov_stat(&sample(&[0.3])).value - 0.7).abs() < 1e-15);
        assert_eq!(smirnov_stat(&sample(&[0.2, 0.5])).value, 0.5);
        assert_eq!(smirnov_stat(&sample(&[0.5, 1.0])).value, 0.0);
    }

    #[test]
    fn ks_examples() {
        assert!((ks_stat(&sample(&[0.3])).value - 0.7).abs() < 1e-15);
        assert_eq!(ks_stat(&sample(&[0.9])).value, 0.9);
        assert_eq!(ks_stat(&sample(&[0.25, 0.75])).value, 0.25);
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax_one_sided(&sample(&[0.2, 0.5])), 2);
        assert_eq!(argmax_one_sided(&sample(&[0.25, 0.75])), 1);
        assert_eq!(argmax_one_sided(&sample(&[0.8])), 1);
        assert_eq!(argmax_two_sided(&sample(&[0.9])), 1);
        assert_eq!(argmax_two_sided(&sample(&[0.25, 0.75])), 1);
        // Terms: i=1 -> max(0.45, 0.05), i=2 -> max(1 - 0.5, 0.5 - 0.5) = 0.5.
        assert_eq!(argmax_two_sided(&sample(&[0.05, 0.5])), 2);
    }

    #[test]
    fn wstar_examples() {
        assert_eq!(wstar_stat(&sample(&[0.5])).unwrap().value, 1.0);
        let w = wstar_stat(&sample(&[0.2, 0.5])).unwrap();
        assert_eq!(w.value, 1.0);
        assert_eq!(w.argmax_index, Some(2));
        assert_eq!(w.argmax_u, Some(0.5));
        assert!((wstar_stat(&sample(&[0.2])).unwrap().value - 2.0).abs() < 1e-15);
        assert!(matches!(
            wstar_stat(&sample(&[0.0, 0.9])),
            Err(GofError::DegenerateSample(_))
        ));
    }

    #[test]
    fn vstar_examples() {
        assert_eq!(vstar_stat(&sample(&[0.5])).unwrap().value, 1.0);
        assert!((vstar_stat(&sample(&[0.9])).unwrap().value - 3.0).abs() < 1e-14);
        let v = vstar_stat(&sample(&[0.05, 0.5])).unwrap();
        assert_eq!(v.argmax_index, Some(2));
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn ln_un_examples() {
        let s = sample(&[0.5]);
        assert_eq!(ln_stat(&s).value, 2.0);
        assert_eq!(un_stat(&s).value, 0.0);
        assert_eq!(ln_stat(&sample(&[0.25, 0.5])).value, 2.0);
        assert_eq!(un_stat(&sample(&[0.5, 0.75])).value, 1.0);
        assert_eq!(ln_stat(&sample(&[0.0, 0.5])).value, f64::INFINITY);
        assert_eq!(un_stat(&sample(&[0.2, 1.0])).value, 0.625);
    }

    #[test]
    fn tn_examples() {
        let t = tnplus_stat(&sample(&[0.5]), 0.024205).unwrap();
        assert_eq!(t.value, 0.5);
        assert_eq!(t.weight_w, Some(0.024205));
        let s = sample(&[0.25, 0.5]);
        assert_eq!(tnplus_stat(&s, 1.0).unwrap().value, 2.0);
        let tiny = tnplus_stat(&s, 1e-300).unwrap().value;
        assert!((tiny - 2f64.sqrt() * smirnov_stat(&s).value).abs() < 1e-15);
        assert!(tnplus_stat(&s, 0.0).is_err());
        assert!(tn_stat(&s, 1.0).unwrap().value >= tnplus_stat(&s, 1.0).unwrap().value);
    }

    #[test]
    fn weighted_sups_match_brute_force() {
        // Oracle: evaluate the standardized empirical process on a dense grid.
        let s = sample(&[0.03, 0.2, 0.21, 0.6, 0.97]);
        let n = s.n() as f64;
        let (mut w_grid, mut v_grid) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for k in 1..200_000 {
            let t = k as f64 / 200_000.0;
            let fn_t = s.values().iter().filter(|&&u| u <= t).count() as f64 / n;
            let d = (fn_t - t) / (t * (1.0 - t)).sqrt();
            w_grid = w_grid.max(d);
            v_grid = v_grid.max(d.abs());
        }
        assert!(weighted_sup_one_sided(&s) >= w_grid);
        assert!(weighted_sup_one_sided(&s) - w_grid < 1e-3);
        assert!(weighted_sup_two_sided(&s) >= v_grid - 1e-12);
        assert!(weighted_sup_two_sided(&s) - v_grid < 5e-3);
    }

    #[test]
    fn evaluate_dispatch() {
        let s = sample(&[0.1, 0.4, 0.8]);
        assert_eq!(evaluate(StatKind::Mn, &s, None).unwrap().value, smirnov_stat(&s).value);
        assert!(evaluate(StatKind::TnPlus, &s, None).is_err());
        assert!(evaluate(StatKind::Tn, &s, Some(0.1)).is_ok());
    }

    fn unit_values() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.001..0.999f64, 1..60).prop_map(|mut v| {
            v.sort_by(f64::total_cmp);
            v
        })
    }

    proptest! {
        #[test]
        fn smallest_maximizer(v in unit_values()) {
            let s = sample(&v);
            let n = s.n();
            let r = argmax_one_sided(&s);
            let best = upper_gap(r, n, s.order_stat(r));
            for i in 1..=n {
                let t = upper_gap(i, n, s.order_stat(i));
                prop_assert!(t <= best);
                if i < r {
                    prop_assert!(t < best);
                }
            }
        }

        #[test]
        fn rescaling_identities(v in unit_values()) {
            let s = sample(&v);
            let m = smirnov_stat(&s).value;
            prop_assert!(m >= 0.0);
            prop_assert!(m <= ks_stat(&s).value);
            let w = wstar_stat(&s).unwrap();
            let u = w.argmax_u.unwrap();
            prop_assert!((w.value * (u * (1.0 - u)).sqrt() - m).abs() < 1e-14);
            let vs = vstar_stat(&s).unwrap();
            let u2 = vs.argmax_u.unwrap();
            prop_assert!((vs.value * (u2 * (1.0 - u2)).sqrt() - ks_stat(&s).value).abs() < 1e-14);
            prop_assert!(ln_stat(&s).value >= 1.0);
        }

        #[test]
        fn distribution_free_under_monotone_transform(v in unit_values(), mu in -3.0..3.0f64, sigma in 0.2..4.0f64) {
            // Route 1: identity model on the unit scale. Route 2: map through a
            // normal quantile and test against that normal model.
            let unit = HypothesisModel::standard_uniform();
            let normal = HypothesisModel::normal(mu, sigma).unwrap();
            let raw: Vec<f64> = v.iter().map(|&u| normal.quantile(u).unwrap()).collect();
            let a = pit(&v, &unit).unwrap();
            let b = pit(&raw, &normal).unwrap();
            for kind in [StatKind::Mn, StatKind::Kn, StatKind::WnStar, StatKind::VnStar, StatKind::Ln, StatKind::Un] {
                let x = evaluate(kind, &a, None).unwrap();
                let y = evaluate(kind, &b, None).unwrap();
                let tol = 1e-12 * x.value.abs().max(1.0) * (v.len() as f64);
                prop_assert!((x.value - y.value).abs() < tol, "{:?}: {} vs {}", kind, x.value, y.value);
            }
        }
    }
}
