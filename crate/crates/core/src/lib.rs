//! Exact computation of additive representation functions and the tools for
//! studying when `R_{ℕ∖A,k}` is eventually increasing.
//!
//! * [`setkit`] builds and queries finite sets materialized up to a horizon.
//! * [`poly`], [`series`], [`pointwise`] and [`brute`] compute
//!   representation counts: full series through exact convolution, single
//!   values through sorted-sum counting, and a direct enumeration oracle.
//! * [`analysis`] evaluates the difference identity for complement sets,
//!   threshold conditions, monotonicity scans and the block-set experiment.
//! * [`formats`] reads and writes the set, series and report files.

pub mod analysis;
pub mod binomial;
pub mod brute;
pub mod error;
pub mod formats;
mod ntt;
pub mod pointwise;
pub mod poly;
pub mod series;
pub mod setkit;

pub use error::{Error, Result};
pub use series::{rep_series, Mode, RepSeries};
pub use setkit::{rudin_shapiro_set, thm14_set, thue_morse_set, Provenance, SetSpec, Thm14Config, COMPLETE};
