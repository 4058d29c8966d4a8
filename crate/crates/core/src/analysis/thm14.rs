//! Evaluates the complement-difference at the candidate decrease points of a
//! block set and records everything needed to judge the outcome.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::thm14_margin_holds;
use super::identity::{diff_at_with, diff_series, lemma21_rhs_tuples, sign_label, DiffMethod};
use crate::error::Error;
use crate::formats::decimal;
use crate::pointwise::{PointwiseEngine, DEFAULT_BUDGET};
use crate::setkit::{thm14_set, Thm14Config};

#[derive(Debug, Clone)]
pub struct Thm14Options {
    pub budget: u64,
    /// Points with `n` at most this are re-derived from the complement series.
    pub series_check_limit: u64,
    /// Materialization horizon; `None` sizes it to the largest candidate point.
    pub horizon: Option<u64>,
}

impl Default for Thm14Options {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            series_check_limit: 2_000_000,
            horizon: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointStatus {
    Ok,
    BudgetExceeded,
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm14Point {
    pub j: usize,
    pub block: u64,
    #[serde(with = "decimal::biguint")]
    pub u: num_bigint::BigUint,
    /// Candidate point: `u_j` for odd `k`, `u_j + 1` for even `k`.
    pub n: Option<u64>,
    #[serde(with = "decimal::opt_bigint")]
    pub diff: Option<BigInt>,
    pub sign: Option<String>,
    pub rep_k_at_n_minus_1_zero: Option<bool>,
    /// Odd `k` with an all-even schedule, where `R_{A,k}(n−1) = 0` is forced.
    pub parity_argument_applies: bool,
    pub method: DiffMethod,
    /// Pointwise value re-derived from the complement series.
    pub series_check: Option<bool>,
    /// `k = 3` fast path compared against the general identity.
    pub tuple_check: Option<bool>,
    pub status: PointStatus,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginCheck {
    pub n: u64,
    pub count: u64,
    /// `A(n)^{k−1} ≤ (k−1)·n^{k−2}`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm14Report {
    pub k: u32,
    pub schedule: Vec<u64>,
    pub strict_paper_mode: bool,
    pub paper_schedule_ok: Vec<bool>,
    pub horizon: u64,
    pub set_size: usize,
    pub points: Vec<Thm14Point>,
    pub margin_checks: Vec<MarginCheck>,
    pub identity_checks_passed: u64,
    pub identity_checks_failed: u64,
    pub budget_exceeded: u64,
}

impl Thm14Report {
    pub fn first_failure(&self) -> Option<&Thm14Point> {
        self.points
            .iter()
            .find(|p| p.series_check == Some(false) || p.tuple_check == Some(false))
    }
}

pub fn thm14_experiment(cfg: &Thm14Config, opts: &Thm14Options) -> Thm14Report {
    let k = cfg.k();
    let u_points = cfg.u_points();
    let candidates: Vec<Option<u64>> = cfg.candidate_points().iter().map(ToPrimitive::to_u64).collect();
    let horizon = opts
        .horizon
        .unwrap_or_else(|| candidates.iter().flatten().copied().max().unwrap_or(0));
    let set = thm14_set(cfg, horizon);
    let engine = PointwiseEngine::with_budget(&set, opts.budget);
    let top = set.max().unwrap_or(0);
    let parity = k % 2 == 1 && cfg.schedule().iter().all(|n| n % 2 == 0);

    let points: Vec<Thm14Point> = cfg
        .schedule()
        .par_iter()
        .enumerate()
        .map(|(idx, &block)| {
            let mut point = Thm14Point {
                j: idx + 1,
                block,
                u: u_points[idx].clone(),
                n: candidates[idx],
                diff: None,
                sign: None,
                rep_k_at_n_minus_1_zero: None,
                parity_argument_applies: parity,
                method: DiffMethod::Lemma21Pointwise,
                series_check: None,
                tuple_check: None,
                status: PointStatus::Ok,
                notes: Vec::new(),
            };
            let Some(n) = point.n else {
                point.status = PointStatus::Overflow;
                point.notes.push("candidate point does not fit in 64 bits".into());
                return point;
            };
            if n > horizon {
                point.notes.push(format!(
                    "n exceeds the materialization horizon {horizon}; counts use the truncated set"
                ));
            }
            if (n as u128) > k as u128 * top as u128 {
                point
                    .notes
                    .push(format!("n exceeds k·max(A) = {}; R_(A,k)(n) = 0", k as u128 * top as u128));
            }
            match diff_at_with(&engine, k, n) {
                Ok(d) => {
                    point.sign = Some(sign_label(&d.value).to_owned());
                    point.diff = Some(d.value);
                }
                Err(Error::BudgetExceeded { .. }) => {
                    point.status = PointStatus::BudgetExceeded;
                    return point;
                }
                Err(e) => {
                    point.status = PointStatus::Overflow;
                    point.notes.push(e.to_string());
                    return point;
                }
            }
            point.rep_k_at_n_minus_1_zero = engine.rep(k, n - 1).ok().map(|r| r.is_zero());

            let diff = point.diff.as_ref().expect("set above");
            if k == 3 {
                if let Ok(general) = lemma21_rhs_tuples(&engine, k, n) {
                    point.tuple_check = Some(&general == diff);
                }
            }
            if n <= opts.series_check_limit && n <= horizon {
                if let Ok(series) = diff_series(&set.truncate(n), k, n) {
                    point.series_check = Some(&series[n as usize - 1].value == diff);
                }
            }
            point
        })
        .collect();

    let mut margin_checks = Vec::new();
    for (idx, &block) in cfg.schedule().iter().enumerate() {
        let mut samples = vec![block];
        if let Some(m) = cfg.block_max(block).to_u64() {
            samples.push(m);
        }
        if let Some(n) = candidates[idx] {
            samples.push(n);
        }
        for n in samples.into_iter().filter(|&n| n <= horizon) {
            let count = engine.count_le(n);
            margin_checks.push(MarginCheck {
                n,
                count,
                holds: thm14_margin_holds(count, k, n),
            });
        }
    }
    margin_checks.sort_by_key(|m| m.n);
    margin_checks.dedup();

    let checks = points
        .iter()
        .flat_map(|p| [p.series_check, p.tuple_check])
        .flatten();
    let (passed, failed) = checks.fold((0, 0), |(p, f), ok| if ok { (p + 1, f) } else { (p, f + 1) });
    let budget_exceeded = points
        .iter()
        .filter(|p| p.status == PointStatus::BudgetExceeded)
        .count() as u64;

    Thm14Report {
        k,
        schedule: cfg.schedule().to_vec(),
        strict_paper_mode: cfg.strict_paper_mode(),
        paper_schedule_ok: cfg.paper_schedule_ok(),
        horizon,
        set_size: set.len(),
        points,
        margin_checks,
        identity_checks_passed: passed,
        identity_checks_failed: failed,
        budget_exceeded,
    }
}
