//! Differences `R_{ℕ∖A,k}(n) − R_{ℕ∖A,k}(n−1)` of the complement
//! representation function, computed either from the complement's own series
//! or from counts over `A` alone through the difference identity
//!
//! ```text
//! C(n+k−2, k−2)
//!   + Σ_{i=1}^{k−2} (−1)^i C(k,i) Σ_{m=0}^{n} C(m+k−i−2, k−i−2) R_{A,i}(n−m)
//!   + (−1)^{k−1} k R_{A,k−1}(n)
//!   + (−1)^k (R_{A,k}(n) − R_{A,k}(n−1)).
//! ```

use num_bigint::{BigInt, BigUint, Sign};
use serde::{Deserialize, Serialize};

use crate::binomial::{binomial, binomial_series};
use crate::error::{invalid, Error, Result};
use crate::pointwise::PointwiseEngine;
use crate::poly::{self, CoeffPoly};
use crate::series::{rep_series, Mode};
use crate::setkit::SetSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffMethod {
    Series,
    Lemma21Pointwise,
}

impl DiffMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DiffMethod::Series => "series",
            DiffMethod::Lemma21Pointwise => "lemma21-pointwise",
        }
    }
}

/// One difference of the complement representation function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffValue {
    pub n: u64,
    pub value: BigInt,
    pub method: DiffMethod,
}

impl DiffValue {
    pub fn sign_label(&self) -> &'static str {
        sign_label(&self.value)
    }
}

pub fn sign_label(v: &BigInt) -> &'static str {
    match v.sign() {
        Sign::Minus => "negative",
        Sign::NoSign => "zero",
        Sign::Plus => "positive",
    }
}

/// How the inner sums of the identity are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Pick the cheaper of the two by comparing `|A|`-power and `n` costs.
    Auto,
    /// Enumerate tuples of `A` directly; cost depends on `|A|`, not `n`.
    Tuples,
    /// Convolve the series of `A` with binomial series up to `n`.
    Series,
}

fn check_k(k: u32) -> Result<()> {
    if k < 3 {
        Err(invalid("k", format!("the difference identity needs k ≥ 3, got {k}")))
    } else {
        Ok(())
    }
}

fn signed(v: BigUint) -> BigInt {
    BigInt::from(v)
}

fn alternating(i: u32) -> i32 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Tuple visits the enumeration route needs at `n`.
pub fn tuple_route_cost(engine: &PointwiseEngine, k: u32, n: u64) -> u128 {
    let m = engine.count_le(n) as u128;
    let mut cost = 0u128;
    for i in 1..=k - 2 {
        cost = cost.saturating_add(engine.weighted_sum_cost(n, i, k - i - 2));
    }
    let rep_cost = |j: u32| match j {
        0..=2 => m.max(1),
        3 => m.saturating_mul(m),
        _ => m.saturating_pow(j.div_ceil(2)).saturating_mul(2),
    };
    cost.saturating_add(rep_cost(k - 1))
        .saturating_add(rep_cost(k).saturating_mul(2))
}

fn series_route_cost(k: u32, n: u64) -> u128 {
    let len = n as u128 + 1;
    len * (k as u128 + 2) * (128 - len.leading_zeros() as u128)
}

/// Right-hand side of the identity at one `n`, from counts over `A`.
pub fn lemma21_rhs(a: &SetSpec, k: u32, n: u64) -> Result<BigInt> {
    lemma21_rhs_routed(a, k, n, Route::Auto)
}

pub fn lemma21_rhs_routed(a: &SetSpec, k: u32, n: u64, route: Route) -> Result<BigInt> {
    check_k(k)?;
    if n == 0 {
        return Err(invalid("n", "differences start at n = 1"));
    }
    let engine = PointwiseEngine::new(a);
    let route = match route {
        Route::Auto if n > a.horizon() => Route::Tuples,
        Route::Auto => {
            if tuple_route_cost(&engine, k, n) <= series_route_cost(k, n) {
                Route::Tuples
            } else {
                Route::Series
            }
        }
        r => r,
    };
    match route {
        Route::Tuples | Route::Auto => lemma21_rhs_tuples(&engine, k, n),
        Route::Series => {
            let all = lemma21_rhs_series(a, k, n)?;
            Ok(all[n as usize - 1].clone())
        }
    }
}

/// Enumeration route over a prepared engine.
pub fn lemma21_rhs_tuples(engine: &PointwiseEngine, k: u32, n: u64) -> Result<BigInt> {
    check_k(k)?;
    if n == 0 {
        return Err(invalid("n", "differences start at n = 1"));
    }
    let needed = tuple_route_cost(engine, k, n);
    if needed > engine.budget() as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: engine.budget(),
        });
    }
    let mut total = signed(binomial(n + k as u64 - 2, k as u64 - 2));
    for i in 1..=k - 2 {
        let inner = engine.weighted_tuple_sum(n, i, k - i - 2)?;
        total += alternating(i) * signed(binomial(k as u64, i as u64)) * signed(inner);
    }
    total += alternating(k - 1) * (k as i32) * signed(engine.rep(k - 1, n)?);
    let rk = signed(engine.rep(k, n)?) - signed(engine.rep(k, n - 1)?);
    total += alternating(k) * rk;
    Ok(total)
}

/// Right-hand side for every `n = 1..=horizon` through series convolution.
/// Entry `i` of the result corresponds to `n = i + 1`.
pub fn lemma21_rhs_series(a: &SetSpec, k: u32, horizon: u64) -> Result<Vec<BigInt>> {
    check_k(k)?;
    if horizon > a.horizon() {
        return Err(invalid(
            "horizon",
            format!("{horizon} exceeds the set horizon {}", a.horizon()),
        ));
    }
    let set = a.truncate(horizon);
    let len = horizon as usize + 1;
    let g = CoeffPoly::generating(&set);

    // powers[i] = G_A^i mod x^{H+1}, i = 1..=k
    let mut powers = vec![CoeffPoly::one(len), g.clone()];
    for _ in 2..=k {
        let next = poly::convolve(powers.last().unwrap(), &g, horizon)?;
        powers.push(next);
    }

    let mut inner = Vec::with_capacity(k as usize);
    inner.push(CoeffPoly::one(len));
    for i in 1..=k - 2 {
        let weights = binomial_series((k - i - 1) as u64, len);
        inner.push(poly::convolve(&powers[i as usize], &weights, horizon)?);
    }

    let k64 = k as u64;
    let mut out = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        let idx = n as usize;
        let mut total = signed(binomial(n + k64 - 2, k64 - 2));
        for i in 1..=k - 2 {
            total += alternating(i)
                * signed(binomial(k64, i as u64))
                * signed(inner[i as usize].get(idx));
        }
        total += alternating(k - 1) * (k as i32) * signed(powers[k as usize - 1].get(idx));
        let rk = signed(powers[k as usize].get(idx)) - signed(powers[k as usize].get(idx - 1));
        total += alternating(k) * rk;
        out.push(total);
    }
    Ok(out)
}

/// Differences of `R_{ℕ∖A,k}` for `n = 1..=horizon` from the complement series.
pub fn diff_series(a: &SetSpec, k: u32, horizon: u64) -> Result<Vec<DiffValue>> {
    if horizon > a.horizon() {
        return Err(invalid(
            "horizon",
            format!("{horizon} exceeds the set horizon {}", a.horizon()),
        ));
    }
    let complement = a.truncate(horizon).complement_prefix();
    let series = rep_series(&complement, k, Mode::Ordered, horizon)?;
    let values = series.values();
    Ok((1..=horizon)
        .map(|n| DiffValue {
            n,
            value: signed(values[n as usize].clone()) - signed(values[n as usize - 1].clone()),
            method: DiffMethod::Series,
        })
        .collect())
}

/// `R_{ℕ∖A,k}(n) − R_{ℕ∖A,k}(n−1)` at one point without building the complement.
pub fn diff_at(a: &SetSpec, k: u32, n: u64) -> Result<DiffValue> {
    diff_at_with(&PointwiseEngine::new(a), k, n)
}

/// [`diff_at`] against a prepared engine (reuses its sorted set and pair table).
///
/// For `k = 3` this is `n + 1 − 3A(n) + 3R_{A,2}(n) − (R_{A,3}(n) − R_{A,3}(n−1))`.
pub fn diff_at_with(engine: &PointwiseEngine, k: u32, n: u64) -> Result<DiffValue> {
    check_k(k)?;
    if n == 0 {
        return Err(invalid("n", "differences start at n = 1"));
    }
    let value = if k == 3 {
        let count = BigInt::from(engine.count_le(n));
        let r2 = BigInt::from(engine.rep2(n));
        let r3 = BigInt::from(engine.rep3(n)?);
        let r3_prev = BigInt::from(engine.rep3(n - 1)?);
        BigInt::from(n) + 1 - 3 * count + 3 * r2 - r3 + r3_prev
    } else {
        lemma21_rhs_tuples(engine, k, n)?
    };
    Ok(DiffValue {
        n,
        value,
        method: DiffMethod::Lemma21Pointwise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_zero_set() {
        let a = SetSpec::finite(&[0], 10).unwrap();
        assert_eq!(lemma21_rhs(&a, 3, 3).unwrap(), BigInt::from(1));
        assert_eq!(diff_at(&a, 3, 3).unwrap().value, BigInt::from(1));
        let s = diff_series(&a, 3, 10).unwrap();
        assert_eq!(s[2].value, BigInt::from(1));
    }

    #[test]
    fn empty_set_gives_stars_and_bars_differences() {
        let a = SetSpec::finite(&[], 40).unwrap();
        assert_eq!(lemma21_rhs(&a, 3, 5).unwrap(), BigInt::from(6));
        for d in diff_series(&a, 3, 40).unwrap() {
            assert_eq!(d.value, BigInt::from(d.n + 1));
            assert_eq!(diff_at(&a, 3, d.n).unwrap().value, d.value);
        }
    }

    #[test]
    fn full_set_complement_is_empty() {
        let a = SetSpec::full(30);
        assert!(diff_series(&a, 3, 30)
            .unwrap()
            .iter()
            .all(|d| d.value == BigInt::default()));
    }

    #[test]
    fn small_set_k4_routes_agree() {
        let a = SetSpec::finite(&[0, 1, 2], 10).unwrap();
        let series = diff_series(&a, 4, 10).unwrap();
        let tuples = lemma21_rhs_routed(&a, 4, 2, Route::Tuples).unwrap();
        let conv = lemma21_rhs_routed(&a, 4, 2, Route::Series).unwrap();
        assert_eq!(series[1].value, tuples);
        assert_eq!(series[1].value, conv);
    }

    #[test]
    fn rejects_small_k_and_zero_n() {
        let a = SetSpec::finite(&[1], 5).unwrap();
        assert!(lemma21_rhs(&a, 2, 3).is_err());
        assert!(diff_at(&a, 2, 3).is_err());
        assert!(diff_at(&a, 3, 0).is_err());
    }

    #[test]
    fn budget_refusal_is_explicit() {
        let a = SetSpec::full(3000);
        let engine = PointwiseEngine::with_budget(&a, 10_000);
        assert!(matches!(
            diff_at_with(&engine, 6, 2500),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
