//! Direct tuple enumeration. Slow on purpose: this is the oracle the fast
//! paths are checked against, so it shares no code with them.

use crate::series::Mode;
use crate::setkit::SetSpec;

/// Counts tuples `(a₁, …, a_k) ∈ A^k` with `Σ aᵢ = n`, subject to `mode`.
pub fn brute_force_rep(a: &SetSpec, k: u32, mode: Mode, n: u64) -> u64 {
    let mut count = 0u64;
    walk(a.elements(), k, mode, n, None, 0, &mut |sum| {
        if sum == n {
            count += 1;
        }
    });
    count
}

/// `brute_force_rep` for every `n ≤ horizon` from a single enumeration.
pub fn brute_force_histogram(a: &SetSpec, k: u32, mode: Mode, horizon: u64) -> Vec<u64> {
    let mut hist = vec![0u64; horizon as usize + 1];
    walk(a.elements(), k, mode, horizon, None, 0, &mut |sum| {
        hist[sum as usize] += 1;
    });
    hist
}

/// Visits the sum of every admissible tuple whose sum does not exceed
/// `limit`. `prev` is the previous coordinate, if any.
fn walk(
    elems: &[u64],
    left: u32,
    mode: Mode,
    limit: u64,
    prev: Option<u64>,
    sum: u64,
    visit: &mut dyn FnMut(u64),
) {
    if left == 0 {
        visit(sum);
        return;
    }
    for &a in elems {
        if sum + a > limit {
            break;
        }
        let admissible = match (mode, prev) {
            (Mode::Strict, Some(p)) => p < a,
            (Mode::Nondecreasing, Some(p)) => p <= a,
            _ => true,
        };
        if admissible {
            walk(elems, left - 1, mode, limit, Some(a), sum + a, visit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = SetSpec::finite(&[0, 1, 2], 3).unwrap();
        assert_eq!(brute_force_rep(&a, 3, Mode::Ordered, 3), 7);
        let b = SetSpec::finite(&[1, 2], 3).unwrap();
        assert_eq!(brute_force_rep(&b, 2, Mode::Strict, 3), 1);
        let c = SetSpec::finite(&[5], 10).unwrap();
        assert_eq!(brute_force_rep(&c, 2, Mode::Ordered, 10), 1);
    }

    #[test]
    fn histogram_agrees_with_pointwise() {
        let a = SetSpec::finite(&[0, 2, 3, 7], 12).unwrap();
        for mode in Mode::ALL {
            let h = brute_force_histogram(&a, 3, mode, 12);
            for n in 0..=12 {
                assert_eq!(h[n as usize], brute_force_rep(&a, 3, mode, n), "{mode} n={n}");
            }
        }
    }
}
