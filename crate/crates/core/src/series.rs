//! Full representation series `R(0..=H)` for one set, tuple length and mode.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly::{self, CoeffPoly};
use crate::setkit::SetSpec;

/// Which tuples are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All ordered k-tuples.
    Ordered,
    /// `a₁ < a₂ < … < a_k`.
    Strict,
    /// `a₁ ≤ a₂ ≤ … ≤ a_k`.
    Nondecreasing,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Ordered, Mode::Strict, Mode::Nondecreasing];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ordered => "ordered",
            Mode::Strict => "strict",
            Mode::Nondecreasing => "nondecreasing",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordered" => Ok(Mode::Ordered),
            "strict" => Ok(Mode::Strict),
            "nondecreasing" => Ok(Mode::Nondecreasing),
            other => Err(invalid("mode", format!("unknown mode `{other}`"))),
        }
    }
}

/// Exact values `R(n)` for `n = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSeries {
    k: u32,
    mode: Mode,
    values: CoeffPoly,
}

impl RepSeries {
    pub fn new(k: u32, mode: Mode, values: Vec<BigUint>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("values", "a series needs at least the n = 0 entry"));
        }
        Ok(Self {
            k,
            mode,
            values: CoeffPoly::from_big(values),
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> BigUint {
        self.values.get(n as usize)
    }

    pub fn values(&self) -> Vec<BigUint> {
        self.values.to_biguints()
    }

    pub fn as_poly(&self) -> &CoeffPoly {
        &self.values
    }
}

/// `R_{A,k}(n)`, `R^<_{A,k}(n)` or `R^≤_{A,k}(n)` for every `n ≤ horizon`.
pub fn rep_series(a: &SetSpec, k: u32, mode: Mode, horizon: u64) -> Result<RepSeries> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if horizon > a.horizon() {
        return Err(invalid(
            "horizon",
            format!("{horizon} exceeds the set horizon {}", a.horizon()),
        ));
    }
    let set = a.truncate(horizon);
    let values = match mode {
        Mode::Ordered => poly::power(&CoeffPoly::generating(&set), k, horizon)?,
        Mode::Strict | Mode::Nondecreasing => {
            let strict = mode == Mode::Strict;
            let elems = set.elements();
            match tuple_dp(elems, k, horizon, strict, 0u128, 1u128, |x, y| x.checked_add(*y)) {
                Some(v) => CoeffPoly::from_big(v.into_iter().map(BigUint::from).collect()),
                None => {
                    let v = tuple_dp(
                        elems,
                        k,
                        horizon,
                        strict,
                        BigUint::default(),
                        BigUint::from(1u32),
                        |x, y| Some(x + y),
                    )
                    .expect("unbounded accumulation cannot overflow");
                    CoeffPoly::from_big(v)
                }
            }
        }
    };
    Ok(RepSeries { k, mode, values })
}

/// Bounded-parts dynamic program: `dp[j][s]` counts j-element selections
/// (multisets, or sets when `strict`) from the elements seen so far with
/// sum `s`. Returns `None` if `add` reports overflow.
fn tuple_dp<T: Clone>(
    elems: &[u64],
    k: u32,
    horizon: u64,
    strict: bool,
    zero: T,
    one: T,
    add: impl Fn(&T, &T) -> Option<T>,
) -> Option<Vec<T>> {
    let width = horizon as usize + 1;
    let k = k as usize;
    let mut dp = vec![zero; (k + 1) * width];
    dp[0] = one;
    for &a in elems {
        let a = a as usize;
        let rows: Box<dyn Iterator<Item = usize>> = if strict {
            Box::new((1..=k).rev())
        } else {
            Box::new(1..=k)
        };
        for j in rows {
            for s in (a..width).rev() {
                let from = (j - 1) * width + s - a;
                let to = j * width + s;
                let v = add(&dp[to], &dp[from])?;
                dp[to] = v;
            }
        }
    }
    Some(dp.split_off(k * width))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(a: &SetSpec, k: u32, mode: Mode, h: u64) -> Vec<u64> {
        rep_series(a, k, mode, h)
            .unwrap()
            .values()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        let a = SetSpec::finite(&[0, 1], 2).unwrap();
        assert_eq!(vals(&a, 2, Mode::Ordered, 2), vec![1, 2, 1]);

        let a = SetSpec::finite(&[0, 1, 2], 3).unwrap();
        assert_eq!(vals(&a, 3, Mode::Ordered, 3)[3], 7);
        assert_eq!(vals(&a, 3, Mode::Strict, 3)[3], 1);
        assert_eq!(vals(&a, 3, Mode::Nondecreasing, 3)[3], 2);

        let full = SetSpec::full(4);
        assert_eq!(vals(&full, 3, Mode::Ordered, 4)[4], 15);
    }

    #[test]
    fn strict_needs_k_distinct_elements() {
        let a = SetSpec::finite(&[1, 5], 40).unwrap();
        assert!(vals(&a, 3, Mode::Strict, 40).iter().all(|&v| v == 0));
        assert_eq!(vals(&a, 3, Mode::Nondecreasing, 40)[15], 1);
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = SetSpec::finite(&[1], 5).unwrap();
        assert!(rep_series(&a, 0, Mode::Ordered, 5).is_err());
        assert!(rep_series(&a, 2, Mode::Ordered, 6).is_err());
    }

    #[test]
    fn dp_reports_overflow_of_narrow_accumulators() {
        let elems: Vec<u64> = (0..=30).collect();
        let narrow = tuple_dp(&elems, 4, 30, false, 0u8, 1u8, |x, y| x.checked_add(*y));
        assert!(narrow.is_none());
        let wide = tuple_dp(&elems, 4, 30, false, 0u128, 1u128, |x, y| x.checked_add(*y)).unwrap();
        // Partitions of 30 into at most 4 parts.
        assert_eq!(wide[30], 297);
        let small = SetSpec::full(10);
        let s = rep_series(&small, 3, Mode::Nondecreasing, 10).unwrap();
        assert_eq!(s.get(10), BigUint::from(14u32));
    }

    #[test]
    fn mode_parsing() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("sorted".parse::<Mode>().is_err());
    }
}
