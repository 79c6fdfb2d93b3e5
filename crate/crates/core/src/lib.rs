//! Goodness-of-fit tests built on the maximum of the empirical process and
//! the location where it is attained.
//!
//! The crate evaluates the argmax-rescaled statistics `W*_n` (one-sided) and
//! `V*_n` (two-sided) next to the classical Smirnov, Kolmogorov-Smirnov,
//! weighted (Jaeschke) and Mason-Schuenemeyer statistics, provides their exact
//! and limiting null distributions, critical values and p-values, and a
//! deterministic Monte-Carlo engine for size and power studies.
//!
//! Every statistic depends on the data only through the probability-integral
//! transformed order statistics, see [`distfn::pit`].

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alternatives;
pub mod asymptotic;
pub mod critical;
pub mod distfn;
pub mod error;
pub mod exact;
pub mod mc;
pub mod numeric;
pub mod rng;
pub mod statistics;

pub use error::{GofError, Result};
