//! The polygonal alternative family `F_{tau,delta}` on the probability
//! integral transform scale (`F0` the identity on `[0, 1]`).
//!
//! `F(t) = delta t` for `t <= tau` and `F(t) = beta (t - tau) + delta tau`
//! above, with `beta = (1 - delta tau) / (1 - tau)` so that `F(1) = 1`. For
//! `delta > 1` the deviation `D = F - F0` is positive on `(0, 1)` and peaks at
//! `tau`.

use serde::{Deserialize, Serialize};

use crate::distfn::{HypothesisModel, UnitSample};
use crate::rng::{open_uniforms, stream};
use crate::{GofError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSpec {
    /// `F0(tau)`, the location of the kink on the unit scale.
    pub tau_prob: f64,
    /// Slope below the kink.
    pub delta: f64,
}

impl AlternativeSpec {
    pub fn new(tau_prob: f64, delta: f64) -> Result<Self> {
        if !(tau_prob > 0.0 && tau_prob < 1.0) {
            return Err(GofError::Parameter(format!("tau_prob must lie in (0, 1), got {tau_prob}")));
        }
        if !(delta >= 1.0) {
            return Err(GofError::Domain(format!("delta must be at least 1, got {delta}")));
        }
        if !(delta * tau_prob < 1.0) {
            return Err(GofError::Domain(format!(
                "delta * tau_prob must stay below 1, got {delta} * {tau_prob}"
            )));
        }
        Ok(AlternativeSpec { tau_prob, delta })
    }

    /// The null member `delta = 1`.
    pub fn is_null(&self) -> bool {
        self.delta == 1.0
    }
}

/// Slope above the kink, `(1 - delta tau) / (1 - tau)`.
pub fn beta_coeff(spec: &AlternativeSpec) -> f64 {
    (1.0 - spec.delta * spec.tau_prob) / (1.0 - spec.tau_prob)
}

/// `F(t)` for `t` in `[0, 1]`, clamped outside.
pub fn alt_cdf(spec: &AlternativeSpec, t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    if spec.is_null() {
        return t;
    }
    let tau = spec.tau_prob;
    if t <= tau {
        spec.delta * t
    } else {
        (beta_coeff(spec) * (t - tau) + spec.delta * tau).min(1.0)
    }
}

/// Inverse of [`alt_cdf`] for `p` in `[0, 1]`.
pub fn alt_quantile(spec: &AlternativeSpec, p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    if spec.is_null() {
        return p;
    }
    let tau = spec.tau_prob;
    let knee = spec.delta * tau;
    if p <= knee {
        p / spec.delta
    } else {
        (tau + (p - knee) / beta_coeff(spec)).min(1.0)
    }
}

/// Closed-form maximum `M = max D` and supremum `S = sup Q` of the
/// deviation `D = F - F0` and its standardized form `Q = D / sqrt(F0 (1 - F0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSummaries {
    pub m: f64,
    pub s: f64,
}

impl AnalyticSummaries {
    /// `S / M = 1 / sqrt(tau (1 - tau))`; undefined for the null member.
    pub fn ratio(&self) -> f64 {
        self.s / self.m
    }
}

pub fn analytic_summaries(spec: &AlternativeSpec) -> AnalyticSummaries {
    let tau = spec.tau_prob;
    let gap = spec.delta - beta_coeff(spec);
    AnalyticSummaries {
        m: gap * tau * (1.0 - tau),
        s: gap * (tau * (1.0 - tau)).sqrt(),
    }
}

/// Deviation `D(t) = F(t) - t`.
pub fn deviation(spec: &AlternativeSpec, t: f64) -> f64 {
    alt_cdf(spec, t) - t.clamp(0.0, 1.0)
}

/// Standardized deviation `Q(t) = D(t) / sqrt(t (1 - t))` for `t` in `(0, 1)`.
pub fn standardized_deviation(spec: &AlternativeSpec, t: f64) -> f64 {
    deviation(spec, t) / (t * (1.0 - t)).sqrt()
}

/// Deviation rescaled at the kink, `Q*(t) = D(t) / sqrt(tau (1 - tau))`.
pub fn rescaled_deviation(spec: &AlternativeSpec, t: f64) -> f64 {
    let tau = spec.tau_prob;
    deviation(spec, t) / (tau * (1.0 - tau)).sqrt()
}

/// `n` draws from `F` mapped through `alt_quantile`, sorted. The null member
/// reproduces [`crate::rng::uniform_sample`] for the same seed.
pub fn sample_alt(spec: &AlternativeSpec, n: usize, seed: u64) -> UnitSample {
    sample_alt_with(spec, n, &mut stream(seed))
}

/// As [`sample_alt`], drawing from a caller-provided generator.
pub fn sample_alt_with<R: rand::Rng>(spec: &AlternativeSpec, n: usize, rng: &mut R) -> UnitSample {
    let draws = open_uniforms(rng, n).into_iter().map(|u| alt_quantile(spec, u)).collect();
    UnitSample::from_unsorted(draws).expect("alternative quantiles lie in [0, 1]")
}

/// Draws on the scale of a non-uniform hypothesis: `F0^{-1}(F^{-1}(U))`.
pub fn sample_alt_raw(spec: &AlternativeSpec, model: &HypothesisModel, n: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = stream(seed);
    open_uniforms(&mut rng, n)
        .into_iter()
        .map(|u| {
            let p = alt_quantile(spec, u).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
            model.quantile(p)
        })
        .collect()
}
