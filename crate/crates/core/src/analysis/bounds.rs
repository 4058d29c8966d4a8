//! Exact integer forms of the counting-function thresholds and tuple bounds.
//!
//! Every threshold `A(n) ≤ c·n^α − 2` is raised to an integer power so the
//! comparison is between integers; no floating point is involved.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{invalid, Result};
use crate::setkit::SetSpec;

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn pow(base: u64, e: u32) -> BigUint {
    BigUint::from(base).pow(e)
}

/// `(count + 2)^{k−1}·(k−2)! ≤ n^{k−2}`, the integer form of
/// `A(n) ≤ n^{(k−2)/(k−1)} / ((k−2)!)^{1/(k−1)} − 2`.
pub fn thm11_holds_for_count(count: u64, k: u32, n: u64) -> bool {
    assert!(k >= 3, "threshold defined for k ≥ 3");
    pow(count + 2, k - 1) * factorial(k as u64 - 2) <= pow(n, k - 2)
}

pub fn thm11_condition(a: &SetSpec, k: u32, n: u64) -> Result<bool> {
    if k < 3 {
        return Err(invalid("k", format!("threshold needs k ≥ 3, got {k}")));
    }
    Ok(thm11_holds_for_count(a.counting_function(n)?, k, n))
}

/// `3·(count + 2)² ≤ 4n`, the integer form of `A(n) ≤ (2/√3)·√n − 2`.
pub fn thm13_holds_for_count(count: u64, n: u64) -> bool {
    let c = count as u128 + 2;
    3 * c * c <= 4 * n as u128
}

pub fn thm13_condition(a: &SetSpec, n: u64) -> Result<bool> {
    Ok(thm13_holds_for_count(a.counting_function(n)?, n))
}

/// `m·⌊m/2⌋ + (m − ⌊m/2⌋)²`, equal to `(3/4)m² + {m²/4}`.
pub fn lemma22_bound(m: u64) -> u128 {
    let half = (m / 2) as u128;
    let m = m as u128;
    m * half + (m - half) * (m - half)
}

/// `count^{k−1} ≤ (k−1)·n^{k−2}`, the integer form of
/// `A(n) ≤ (k−1)^{1/(k−1)}·n^{(k−2)/(k−1)}`.
pub fn thm14_margin_holds(count: u64, k: u32, n: u64) -> bool {
    assert!(k >= 3, "margin defined for k ≥ 3");
    pow(count, k - 1) <= BigUint::from(k - 1) * pow(n, k - 2)
}

/// Upper bound `A(n)^{i−1}` on `R_{A,i}(n)`.
pub fn tuple_count_bound(count: u64, i: u32) -> BigUint {
    assert!(i >= 1);
    pow(count, i - 1)
}
