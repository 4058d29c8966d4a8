//! Finite sets of nonnegative integers materialized up to a horizon, and the
//! constructors used by the experiments: explicit lists, prefix complements,
//! block sets built from a schedule, and the digit-parity sets.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Where a [`SetSpec`] came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Explicit,
    ComplementOf { of: Box<Provenance> },
    Thm14 {
        k: u32,
        schedule: Vec<u64>,
        paper_schedule_ok: Vec<bool>,
    },
    ThueMorse,
    RudinShapiro,
}

/// A sorted, duplicate-free set `A ⊆ [0, horizon]`.
///
/// Everything downstream treats the stored elements as the whole set, so a
/// set truncated at `horizon` gives exact representation counts for every
/// `n ≤ horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSpec {
    elements: Vec<u64>,
    horizon: u64,
    provenance: Provenance,
}

/// Horizon of a set listed in full: nothing past its stored elements belongs to it.
pub const COMPLETE: u64 = u64::MAX;

impl SetSpec {
    /// Builds an explicit set, sorting and dropping repeated values.
    pub fn finite(values: &[u64], horizon: u64) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v > horizon) {
            return Err(Error::OutOfRange {
                value: bad,
                horizon,
            });
        }
        let mut elements = values.to_vec();
        elements.sort_unstable();
        elements.dedup();
        Ok(Self {
            elements,
            horizon,
            provenance: Provenance::Explicit,
        })
    }

    /// Like [`SetSpec::finite`] but rejects repeated values instead of
    /// merging them. Used by the file readers.
    pub fn from_distinct(values: &[u64], horizon: u64) -> Result<Self> {
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(w[0]));
        }
        Self::finite(&sorted, horizon)
    }

    /// `{0, 1, …, horizon}`.
    pub fn full(horizon: u64) -> Self {
        Self {
            elements: (0..=horizon).collect(),
            horizon,
            provenance: Provenance::Explicit,
        }
    }

    pub(crate) fn from_sorted_unchecked(
        elements: Vec<u64>,
        horizon: u64,
        provenance: Provenance,
    ) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.last().is_none_or(|&m| m <= horizon));
        Self {
            elements,
            horizon,
            provenance,
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn is_complete(&self) -> bool {
        self.horizon == COMPLETE
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn contains(&self, n: u64) -> Result<bool> {
        self.check_in_horizon(n)?;
        Ok(self.elements.binary_search(&n).is_ok())
    }

    /// The counting function `A(n) = |A ∩ [0, n]|`; zero is counted when present.
    pub fn counting_function(&self, n: u64) -> Result<u64> {
        self.check_in_horizon(n)?;
        Ok(self.count_up_to(n))
    }

    /// `|A ∩ [0, n]|` without the horizon check, treating the stored
    /// elements as the complete (finite) set.
    pub fn count_up_to(&self, n: u64) -> u64 {
        self.elements.partition_point(|&a| a <= n) as u64
    }

    pub fn elements_up_to(&self, n: u64) -> &[u64] {
        &self.elements[..self.elements.partition_point(|&a| a <= n)]
    }

    /// `{0..H} ∖ A` at the same horizon.
    pub fn complement_prefix(&self) -> Self {
        assert!(!self.is_complete(), "the complement of a complete set is infinite; truncate first");
        let mut out = Vec::with_capacity((self.horizon as usize + 1).saturating_sub(self.len()));
        let mut members = self.elements.iter().peekable();
        for n in 0..=self.horizon {
            if members.peek() == Some(&&n) {
                members.next();
            } else {
                out.push(n);
            }
        }
        let provenance = match &self.provenance {
            Provenance::ComplementOf { of } => (**of).clone(),
            other => Provenance::ComplementOf {
                of: Box::new(other.clone()),
            },
        };
        Self {
            elements: out,
            horizon: self.horizon,
            provenance,
        }
    }

    /// Restricts to a smaller horizon.
    pub fn truncate(&self, horizon: u64) -> Self {
        if horizon >= self.horizon {
            return self.clone();
        }
        Self {
            elements: self.elements_up_to(horizon).to_vec(),
            horizon,
            provenance: self.provenance.clone(),
        }
    }

    fn check_in_horizon(&self, n: u64) -> Result<()> {
        if n > self.horizon {
            Err(Error::OutsideHorizon {
                n,
                horizon: self.horizon,
            })
        } else {
            Ok(())
        }
    }
}

/// Block schedule for the counterexample construction
/// `A = ⋃_j {N_j, 2N_j, …, (k−1)N_j^{k−1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm14Config {
    k: u32,
    schedule: Vec<u64>,
    strict_paper_mode: bool,
}

impl Thm14Config {
    pub fn new(k: u32, schedule: Vec<u64>, strict_paper_mode: bool) -> Result<Self> {
        if k < 3 {
            return Err(invalid("k", format!("must be at least 3, got {k}")));
        }
        if schedule.is_empty() {
            return Err(invalid("schedule", "must not be empty"));
        }
        if schedule[0] == 0 {
            return Err(invalid("schedule", "block sizes must be positive"));
        }
        if let Some(w) = schedule.windows(2).find(|w| w[0] >= w[1]) {
            return Err(invalid(
                "schedule",
                format!("must be strictly increasing ({} is followed by {})", w[0], w[1]),
            ));
        }
        if strict_paper_mode {
            if let Some(odd) = schedule.iter().find(|&&n| n % 2 == 1) {
                return Err(invalid(
                    "schedule",
                    format!("strict mode requires even block sizes, got {odd}"),
                ));
            }
        }
        Ok(Self {
            k,
            schedule,
            strict_paper_mode,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn schedule(&self) -> &[u64] {
        &self.schedule
    }

    pub fn strict_paper_mode(&self) -> bool {
        self.strict_paper_mode
    }

    /// Largest element `(k−1)·N^{k−1}` of the block generated by `n_j`.
    pub fn block_max(&self, n_j: u64) -> BigUint {
        BigUint::from(self.k - 1) * BigUint::from(n_j).pow(self.k - 1)
    }

    /// Per-block growth flags. Entry 0 checks `N_1 ≥ 100k⁴`; entry `j > 0`
    /// checks `N_{j+1} > 100k⁴·N_j^{k−1}`.
    pub fn paper_schedule_ok(&self) -> Vec<bool> {
        let base = BigUint::from(100u32) * BigUint::from(self.k).pow(4);
        let mut flags = Vec::with_capacity(self.schedule.len());
        flags.push(BigUint::from(self.schedule[0]) >= base);
        for w in self.schedule.windows(2) {
            let bound = &base * BigUint::from(w[0]).pow(self.k - 1);
            flags.push(BigUint::from(w[1]) > bound);
        }
        flags
    }

    /// `u_j = (k−1)N_j^{k−1} + 100(k−2)(k−1)³N_j^{k−2}` for every block.
    pub fn u_points(&self) -> Vec<BigUint> {
        self.schedule.iter().map(|&n| self.u_point(n)).collect()
    }

    pub fn u_point(&self, n_j: u64) -> BigUint {
        let k = self.k;
        let n = BigUint::from(n_j);
        self.block_max(n_j)
            + BigUint::from(100u32)
                * BigUint::from(k - 2)
                * BigUint::from(k - 1).pow(3)
                * n.pow(k - 2)
    }

    /// Where the decrease is expected: `u_j` for odd `k`, `u_j + 1` for even `k`.
    pub fn candidate_points(&self) -> Vec<BigUint> {
        let shift = if self.k.is_multiple_of(2) { 1u32 } else { 0 };
        self.u_points().into_iter().map(|u| u + shift).collect()
    }
}

/// The block set of `cfg`, truncated at `horizon`.
pub fn thm14_set(cfg: &Thm14Config, horizon: u64) -> SetSpec {
    let mut elements = Vec::new();
    for &n_j in cfg.schedule() {
        if n_j > horizon {
            break;
        }
        let block_max = cfg.block_max(n_j);
        let top = block_max.to_u64().map_or(horizon, |m| m.min(horizon));
        elements.extend((1..=top / n_j).map(|m| m * n_j));
    }
    elements.sort_unstable();
    elements.dedup();
    SetSpec::from_sorted_unchecked(
        elements,
        horizon,
        Provenance::Thm14 {
            k: cfg.k(),
            schedule: cfg.schedule().to_vec(),
            paper_schedule_ok: cfg.paper_schedule_ok(),
        },
    )
}

/// Evil numbers: even binary digit sum.
pub fn thue_morse_set(horizon: u64) -> SetSpec {
    let elements = (0..=horizon).filter(|n| n.count_ones() % 2 == 0).collect();
    SetSpec::from_sorted_unchecked(elements, horizon, Provenance::ThueMorse)
}

/// Numbers whose binary expansion has an even count of (overlapping) `11` factors.
pub fn rudin_shapiro_set(horizon: u64) -> SetSpec {
    let elements = (0..=horizon)
        .filter(|n| (n & (n >> 1)).count_ones() % 2 == 0)
        .collect();
    SetSpec::from_sorted_unchecked(elements, horizon, Provenance::RudinShapiro)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_sorts_and_dedupes() {
        let s = SetSpec::finite(&[3, 1, 1, 2], 10).unwrap();
        assert_eq!(s.elements(), &[1, 2, 3]);
        assert_eq!(s.horizon(), 10);
        assert_eq!(s.provenance(), &Provenance::Explicit);

        let e = SetSpec::finite(&[], 5).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.horizon(), 5);

        assert_eq!(SetSpec::finite(&[0, 4, 9], 9).unwrap().elements(), &[0, 4, 9]);
    }

    #[test]
    fn finite_rejects_values_past_horizon() {
        assert!(matches!(
            SetSpec::finite(&[1, 11], 10),
            Err(Error::OutOfRange { value: 11, horizon: 10 })
        ));
    }

    #[test]
    fn distinct_reader_rejects_duplicates() {
        assert!(matches!(SetSpec::from_distinct(&[1, 2, 2], 5), Err(Error::Duplicate(2))));
    }

    #[test]
    fn complement_examples() {
        let s = SetSpec::finite(&[0, 2], 4).unwrap();
        assert_eq!(s.complement_prefix().elements(), &[1, 3, 4]);
        let e = SetSpec::finite(&[], 3).unwrap();
        assert_eq!(e.complement_prefix().elements(), &[0, 1, 2, 3]);
        assert!(SetSpec::full(7).complement_prefix().is_empty());
        assert_eq!(s.complement_prefix().complement_prefix(), s);
    }

    #[test]
    fn membership_outside_horizon_is_an_error() {
        let s = SetSpec::finite(&[1], 4).unwrap();
        assert!(s.contains(4).is_ok());
        assert!(matches!(s.contains(5), Err(Error::OutsideHorizon { .. })));
        assert!(s.counting_function(5).is_err());
    }

    #[test]
    fn counting_function_examples() {
        let s = SetSpec::finite(&[2, 4, 6], 10).unwrap();
        assert_eq!(s.counting_function(5).unwrap(), 2);
        let z = SetSpec::finite(&[0, 1, 2], 3).unwrap();
        assert_eq!(z.counting_function(3).unwrap(), 3);
        let e = SetSpec::finite(&[], 9).unwrap();
        assert!((0..=9).all(|n| e.counting_function(n).unwrap() == 0));
    }

    #[test]
    fn block_sets() {
        let cfg = Thm14Config::new(3, vec![4], false).unwrap();
        assert_eq!(thm14_set(&cfg, 40).elements(), &[4, 8, 12, 16, 20, 24, 28, 32]);
        assert_eq!(thm14_set(&cfg, 10).elements(), &[4, 8]);
        let cfg = Thm14Config::new(4, vec![2], false).unwrap();
        let expected: Vec<u64> = (1..=12).map(|m| 2 * m).collect();
        assert_eq!(thm14_set(&cfg, 100).elements(), expected.as_slice());
    }

    #[test]
    fn block_set_skips_blocks_past_horizon() {
        let cfg = Thm14Config::new(3, vec![2, 100], false).unwrap();
        let s = thm14_set(&cfg, 50);
        assert_eq!(s.elements(), &[2, 4, 6, 8]);
    }

    #[test]
    fn schedule_validation() {
        assert!(Thm14Config::new(2, vec![4], false).is_err());
        assert!(Thm14Config::new(3, vec![], false).is_err());
        assert!(Thm14Config::new(3, vec![4, 4], false).is_err());
        assert!(Thm14Config::new(3, vec![0, 4], false).is_err());
        assert!(Thm14Config::new(3, vec![3], false).is_ok());
        assert!(Thm14Config::new(3, vec![3], true).is_err());
    }

    #[test]
    fn u_points_examples() {
        let u = |k, n| Thm14Config::new(k, vec![n], false).unwrap().u_points()[0].clone();
        assert_eq!(u(3, 10), BigUint::from(8200u32));
        assert_eq!(u(3, 400), BigUint::from(640_000u32));
        assert_eq!(u(4, 2), BigUint::from(21_624u32));
        let cfg = Thm14Config::new(4, vec![2], false).unwrap();
        assert_eq!(cfg.candidate_points()[0], BigUint::from(21_625u32));
    }

    #[test]
    fn growth_flags() {
        let cfg = Thm14Config::new(3, vec![8100, 8100 * 8100 * 100 * 81 + 2], true).unwrap();
        assert_eq!(cfg.paper_schedule_ok(), vec![true, true]);
        let cfg = Thm14Config::new(3, vec![4, 40], true).unwrap();
        assert_eq!(cfg.paper_schedule_ok(), vec![false, false]);
    }

    #[test]
    fn block_max_is_exact_for_huge_blocks() {
        let cfg = Thm14Config::new(9, vec![u64::MAX / 2], false).unwrap();
        assert!(cfg.block_max(u64::MAX / 2).bits() > 500);
        let s = thm14_set(&cfg, 1000);
        assert!(s.is_empty());
    }

    #[test]
    fn digit_parity_sets() {
        assert_eq!(thue_morse_set(6).elements(), &[0, 3, 5, 6]);
        assert_eq!(rudin_shapiro_set(7).elements(), &[0, 1, 2, 4, 5, 7]);
        assert_eq!(thue_morse_set(0).elements(), &[0]);
    }
}
