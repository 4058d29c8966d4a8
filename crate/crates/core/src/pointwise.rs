//! Single-point representation counts for huge `n` and sparse `A`.
//!
//! A [`PointwiseEngine`] sorts `A` once and answers many queries against it;
//! for `k = 3` it also keeps a sorted table of pairwise sums so each query
//! costs `O(|A| log |A|)`.

use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::binomial::{binomial, binomial_u128};
use crate::error::{invalid, Error, Result};
use crate::setkit::SetSpec;

/// Default cap on tuple visits for a single query.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest `|A|²` for which the pair-sum table is materialized.
const PAIR_TABLE_LIMIT: u128 = 1 << 24;

/// Largest half-tuple table built by the meet-in-the-middle counter.
const HALF_TABLE_LIMIT: u128 = 1 << 27;

/// u128 accumulator that spills into a big integer instead of wrapping.
#[derive(Debug, Default, Clone)]
pub(crate) struct WideAcc {
    low: u128,
    spill: BigUint,
}

impl WideAcc {
    pub(crate) fn add(&mut self, v: u128) {
        match self.low.checked_add(v) {
            Some(s) => self.low = s,
            None => {
                self.spill += self.low;
                self.low = v;
            }
        }
    }

    pub(crate) fn add_big(&mut self, v: &BigUint) {
        self.spill += v;
    }

    pub(crate) fn mul_add(&mut self, a: u128, b: u128) {
        match a.checked_mul(b) {
            Some(p) => self.add(p),
            None => self.spill += BigUint::from(a) * b,
        }
    }

    pub(crate) fn finish(self) -> BigUint {
        self.spill + self.low
    }
}

/// Sorted distinct pair sums with multiplicities (ordered pairs).
#[derive(Debug)]
struct SumTable {
    sums: Vec<u64>,
    counts: Vec<u64>,
}

impl SumTable {
    fn from_unsorted(mut raw: Vec<u64>) -> Self {
        raw.sort_unstable();
        let mut sums = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for s in raw {
            if sums.last() == Some(&s) {
                *counts.last_mut().unwrap() += 1;
            } else {
                sums.push(s);
                counts.push(1);
            }
        }
        Self { sums, counts }
    }

    fn count(&self, s: u64) -> u64 {
        match self.sums.binary_search(&s) {
            Ok(i) => self.counts[i],
            Err(_) => 0,
        }
    }
}

/// Reusable pointwise counter over a fixed finite set.
#[derive(Debug)]
pub struct PointwiseEngine {
    elems: Vec<u64>,
    budget: u64,
    pairs: OnceLock<Option<SumTable>>,
}

impl PointwiseEngine {
    pub fn new(set: &SetSpec) -> Self {
        Self::with_budget(set, DEFAULT_BUDGET)
    }

    pub fn with_budget(set: &SetSpec, budget: u64) -> Self {
        Self {
            elems: set.elements().to_vec(),
            budget,
            pairs: OnceLock::new(),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    /// `A(n)`, treating the stored elements as the whole set.
    pub fn count_le(&self, n: u64) -> u64 {
        self.elems.partition_point(|&a| a <= n) as u64
    }

    fn up_to(&self, n: u64) -> &[u64] {
        &self.elems[..self.count_le(n) as usize]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elems.binary_search(&n).is_ok()
    }

    fn check(&self, needed: u128) -> Result<()> {
        if needed > self.budget as u128 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn pair_table(&self) -> Option<&SumTable> {
        self.pairs
            .get_or_init(|| {
                let m = self.elems.len() as u128;
                if m * m > PAIR_TABLE_LIMIT {
                    return None;
                }
                let raw = self
                    .elems
                    .iter()
                    .flat_map(|&a| self.elems.iter().map(move |&b| a + b))
                    .collect();
                Some(SumTable::from_unsorted(raw))
            })
            .as_ref()
    }

    /// Ordered pairs from `A` summing to `n`, by two pointers over `A ∩ [0, n]`.
    pub fn rep2(&self, n: u64) -> u64 {
        let e = self.up_to(n);
        if e.is_empty() {
            return 0;
        }
        let (mut lo, mut hi) = (0usize, e.len() - 1);
        let mut count = 0;
        while lo <= hi {
            let s = e[lo] + e[hi];
            if s == n {
                count += if lo == hi { 1 } else { 2 };
                if hi == 0 {
                    break;
                }
                lo += 1;
                hi -= 1;
            } else if s < n {
                lo += 1;
            } else {
                if hi == 0 {
                    break;
                }
                hi -= 1;
            }
        }
        count
    }

    fn rep3_cost(&self, n: u64) -> u128 {
        let m = self.count_le(n) as u128;
        if self.elems.len() as u128 * self.elems.len() as u128 <= PAIR_TABLE_LIMIT {
            m.max(1) * 32
        } else {
            m * m
        }
    }

    /// Ordered triples from `A` summing to `n`.
    pub fn rep3(&self, n: u64) -> Result<u128> {
        self.check(self.rep3_cost(n))?;
        let heads = self.up_to(n);
        let total = match self.pair_table() {
            Some(table) => heads.iter().map(|&a| table.count(n - a) as u128).sum(),
            None => heads.iter().map(|&a| self.rep2(n - a) as u128).sum(),
        };
        Ok(total)
    }

    /// `R_{A,k}(n)` for any `k ≥ 1`.
    pub fn rep(&self, k: u32, n: u64) -> Result<BigUint> {
        match k {
            0 => Err(invalid("k", "must be at least 1")),
            1 => Ok(BigUint::from(self.contains(n) as u8)),
            2 => Ok(BigUint::from(self.rep2(n))),
            3 => self.rep3(n).map(BigUint::from),
            _ => self.rep_split(k, n),
        }
    }

    /// Meet in the middle: sums of `⌈k/2⌉`-tuples against sums of `⌊k/2⌋`-tuples.
    fn rep_split(&self, k: u32, n: u64) -> Result<BigUint> {
        let left_len = k.div_ceil(2);
        let right_len = k / 2;
        let m = self.count_le(n) as u128;
        let half = m.saturating_pow(left_len);
        if half > HALF_TABLE_LIMIT {
            return Err(Error::BudgetExceeded {
                needed: half.saturating_mul(2),
                budget: self.budget.min(HALF_TABLE_LIMIT as u64),
            });
        }
        self.check(half.saturating_mul(2))?;
        let left = self.tuple_sums(left_len, n);
        let right = if right_len == left_len {
            None
        } else {
            Some(self.tuple_sums(right_len, n))
        };
        let right = right.as_ref().unwrap_or(&left);
        let mut acc = WideAcc::default();
        for (&s, &c) in left.sums.iter().zip(&left.counts) {
            let other = right.count(n - s);
            if other > 0 {
                acc.mul_add(c as u128, other as u128);
            }
        }
        Ok(acc.finish())
    }

    /// All sums `≤ limit` of ordered `len`-tuples, with multiplicity.
    fn tuple_sums(&self, len: u32, limit: u64) -> SumTable {
        let e = self.up_to(limit);
        let mut raw = Vec::new();
        fn go(e: &[u64], left: u32, acc: u64, limit: u64, out: &mut Vec<u64>) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for &a in e {
                if acc + a > limit {
                    break;
                }
                go(e, left - 1, acc + a, limit, out);
            }
        }
        go(e, len, 0, limit, &mut raw);
        SumTable::from_unsorted(raw)
    }

    /// Tuple visits [`PointwiseEngine::weighted_tuple_sum`] may need.
    pub fn weighted_sum_cost(&self, n: u64, len: u32, degree: u32) -> u128 {
        let m = self.count_le(n) as u128;
        if degree == 0 {
            m.saturating_pow(len.saturating_sub(1)).max(1)
        } else {
            m.saturating_pow(len).max(1)
        }
    }

    /// `Σ C(n − s + degree, degree)` over ordered `len`-tuples of `A` whose
    /// sum `s` is at most `n`. This equals `Σ_{m=0}^{n} C(m+degree, degree)·R_{A,len}(n−m)`.
    pub fn weighted_tuple_sum(&self, n: u64, len: u32, degree: u32) -> Result<BigUint> {
        self.check(self.weighted_sum_cost(n, len, degree))?;
        let e = self.up_to(n);
        let mut acc = WideAcc::default();
        if len == 0 {
            add_weight(&mut acc, n, degree);
            return Ok(acc.finish());
        }
        // With degree 0 every tuple has weight 1, so the last coordinate
        // collapses to a counting-function lookup.
        let collapse = degree == 0;
        let depth = if collapse { len - 1 } else { len };
        walk_sums(e, depth, 0, n, &mut |s| {
            if collapse {
                acc.add(e.partition_point(|&a| a <= n - s) as u128);
            } else {
                add_weight(&mut acc, n - s, degree);
            }
        });
        Ok(acc.finish())
    }
}

fn add_weight(acc: &mut WideAcc, gap: u64, degree: u32) {
    let top = gap + degree as u64;
    match binomial_u128(top, degree as u64) {
        Some(w) => acc.add(w),
        None => acc.add_big(&binomial(top, degree as u64)),
    }
}

fn walk_sums(e: &[u64], left: u32, acc: u64, limit: u64, visit: &mut dyn FnMut(u64)) {
    if left == 0 {
        visit(acc);
        return;
    }
    for &a in e {
        if acc + a > limit {
            break;
        }
        walk_sums(e, left - 1, acc + a, limit, visit);
    }
}

/// `R_{A,k}(n)` at a single point with the default budget.
pub fn rep_at(a: &SetSpec, k: u32, n: u64) -> Result<BigUint> {
    PointwiseEngine::new(a).rep(k, n)
}
