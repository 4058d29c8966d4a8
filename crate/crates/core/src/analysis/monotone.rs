use serde::{Deserialize, Serialize};

use crate::series::RepSeries;

pub const HORIZON_CAVEAT: &str =
    "finite-horizon evidence only: a prefix cannot establish monotonicity from some point on";

/// First-difference scan of a series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub horizon: u64,
    /// `n` with `R(n) < R(n−1)`.
    pub strict_decreases: Vec<u64>,
    /// `n` with `R(n) = R(n−1)`.
    pub plateaus: Vec<u64>,
    pub last_violation: Option<u64>,
    /// True when no decrease or plateau occurs at the horizon itself, i.e.
    /// the scanned prefix ends in a strictly increasing run.
    pub eventually_strictly_increasing_up_to_horizon: bool,
    pub caveat: String,
}

impl MonotonicityReport {
    /// Scans `values[0..=horizon]`.
    pub fn scan<T: Ord>(values: &[T]) -> Self {
        let horizon = values.len().saturating_sub(1) as u64;
        let mut strict_decreases = Vec::new();
        let mut plateaus = Vec::new();
        for (i, w) in values.windows(2).enumerate() {
            let n = i as u64 + 1;
            match w[1].cmp(&w[0]) {
                std::cmp::Ordering::Less => strict_decreases.push(n),
                std::cmp::Ordering::Equal => plateaus.push(n),
                std::cmp::Ordering::Greater => {}
            }
        }
        let last_violation = strict_decreases.last().copied();
        let last_any = last_violation.max(plateaus.last().copied());
        Self {
            horizon,
            eventually_strictly_increasing_up_to_horizon: last_any.is_none_or(|m| m < horizon),
            strict_decreases,
            plateaus,
            last_violation,
            caveat: HORIZON_CAVEAT.to_owned(),
        }
    }

    /// Index after which the prefix is strictly increasing (0 when it is throughout).
    pub fn increasing_from(&self) -> u64 {
        self.last_violation
            .max(self.plateaus.last().copied())
            .unwrap_or(0)
    }
}

pub fn monotonicity_report(series: &RepSeries) -> MonotonicityReport {
    MonotonicityReport::scan(&series.values())
}
