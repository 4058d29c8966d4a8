use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::poly::CoeffPoly;

/// Exact `C(n, r)`; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::default();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, r)` in 128 bits, or `None` on overflow.
pub fn binomial_u128(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        // acc·(n−i)/(i+1) is exact at every step; split to delay overflow.
        let num = n as u128 - i;
        let g = num.gcd(&(i + 1));
        let (num, d) = (num / g, (i + 1) / g);
        acc = (acc / d).checked_mul(num)?;
    }
    Some(acc)
}

/// Coefficient of `xⁿ` in `1/(1−x)^m`, which is `C(n+m−1, m−1)`.
pub fn binomial_series_coeff(m: u64, n: u64) -> BigUint {
    assert!(m >= 1, "series exponent must be positive");
    binomial(n + m - 1, m - 1)
}

/// `1/(1−x)^m mod x^{len}` as a polynomial.
pub fn binomial_series(m: u64, len: usize) -> CoeffPoly {
    if m == 0 {
        return CoeffPoly::one(len);
    }
    // Consecutive ratios C(n+m, m−1)/C(n+m−1, m−1) = (n+m)/(n+1).
    let mut out = Vec::with_capacity(len);
    let mut cur = BigUint::one();
    for n in 0..len as u64 {
        out.push(cur.clone());
        cur = cur * (n + m) / (n + 1);
    }
    CoeffPoly::from_big(out)
}
