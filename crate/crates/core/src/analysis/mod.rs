//! Difference identity, threshold checks, monotonicity scans and the
//! block-set experiment.

pub mod bounds;
pub mod identity;
pub mod monotone;
pub mod thm14;

pub use bounds::{
    lemma22_bound, thm11_condition, thm11_holds_for_count, thm13_condition, thm13_holds_for_count,
    thm14_margin_holds, tuple_count_bound,
};
pub use identity::{
    diff_at, diff_at_with, diff_series, lemma21_rhs, lemma21_rhs_routed, lemma21_rhs_series,
    lemma21_rhs_tuples, sign_label, tuple_route_cost, DiffMethod, DiffValue, Route,
};
pub use monotone::{monotonicity_report, MonotonicityReport};
pub use thm14::{thm14_experiment, MarginCheck, PointStatus, Thm14Options, Thm14Point, Thm14Report};
