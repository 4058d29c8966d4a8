//! Truncated power series with exact nonnegative integer coefficients and
//! the convolution engine behind every representation series.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntt::{self, Garner, Recombined};
use crate::setkit::SetSpec;

/// Coefficient storage. `Word` is the fast path; anything that might not fit
/// in 64 bits lives in `Big`.
#[derive(Debug, Clone)]
enum Coeffs {
    Word(Vec<u64>),
    Big(Vec<BigUint>),
}

/// `Σ coeffs[n]·xⁿ`, indexed `0..len`.
#[derive(Debug, Clone)]
pub struct CoeffPoly {
    coeffs: Coeffs,
}

impl PartialEq for CoeffPoly {
    fn eq(&self, other: &Self) -> bool {
        match (&self.coeffs, &other.coeffs) {
            (Coeffs::Word(a), Coeffs::Word(b)) => a == b,
            _ => self.len() == other.len() && (0..self.len()).all(|i| self.get(i) == other.get(i)),
        }
    }
}

impl Eq for CoeffPoly {}

impl CoeffPoly {
    pub fn from_words(coeffs: Vec<u64>) -> Self {
        Self {
            coeffs: Coeffs::Word(coeffs),
        }
    }

    /// Stores word-size values compactly when every coefficient fits.
    pub fn from_big(coeffs: Vec<BigUint>) -> Self {
        let words: Option<Vec<u64>> = coeffs.iter().map(ToPrimitive::to_u64).collect();
        match words {
            Some(w) => Self::from_words(w),
            None => Self {
                coeffs: Coeffs::Big(coeffs),
            },
        }
    }

    /// The generating polynomial `G_A(x) mod x^{H+1}` of a set. A complete
    /// set stops at its largest element.
    pub fn generating(set: &SetSpec) -> Self {
        let top = if set.is_complete() { set.max().unwrap_or(0) } else { set.horizon() };
        let mut c = vec![0u64; top as usize + 1];
        for &a in set.elements() {
            c[a as usize] = 1;
        }
        Self::from_words(c)
    }

    /// `1` (the multiplicative identity) truncated to length `len`.
    pub fn one(len: usize) -> Self {
        let mut c = vec![0u64; len.max(1)];
        c[0] = 1;
        Self::from_words(c)
    }

    pub fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Word(v) => v.len(),
            Coeffs::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> BigUint {
        match &self.coeffs {
            Coeffs::Word(v) => BigUint::from(v[i]),
            Coeffs::Big(v) => v[i].clone(),
        }
    }

    pub fn to_biguints(&self) -> Vec<BigUint> {
        match &self.coeffs {
            Coeffs::Word(v) => v.iter().map(|&x| BigUint::from(x)).collect(),
            Coeffs::Big(v) => v.clone(),
        }
    }

    /// The coefficients as words, if every one fits.
    pub fn as_words(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Word(v) => Some(v),
            Coeffs::Big(_) => None,
        }
    }

    pub fn max_coeff(&self) -> BigUint {
        match &self.coeffs {
            Coeffs::Word(v) => BigUint::from(v.iter().copied().max().unwrap_or(0)),
            Coeffs::Big(v) => v.iter().max().cloned().unwrap_or_default(),
        }
    }

    pub fn truncated(mut self, len: usize) -> Self {
        match &mut self.coeffs {
            Coeffs::Word(v) => v.truncate(len),
            Coeffs::Big(v) => v.truncate(len),
        }
        self
    }

    fn residues(&self, p: u64) -> Vec<u64> {
        match &self.coeffs {
            Coeffs::Word(v) => v.iter().map(|&x| x % p).collect(),
            Coeffs::Big(v) => v
                .iter()
                .map(|x| (x % p).to_u64().expect("residue below a word modulus"))
                .collect(),
        }
    }
}

fn output_len(p: &CoeffPoly, q: &CoeffPoly, truncate_at: u64) -> usize {
    if p.is_empty() || q.is_empty() {
        return 0;
    }
    let full = p.len() + q.len() - 1;
    full.min(truncate_at.saturating_add(1).min(usize::MAX as u64) as usize)
}

/// Largest value any output coefficient can take.
fn coefficient_bound(p: &CoeffPoly, q: &CoeffPoly, out_len: usize) -> BigUint {
    let terms = p.len().min(q.len()).min(out_len);
    p.max_coeff() * q.max_coeff() * BigUint::from(terms)
}

/// Reference `O(len²)` product, truncated at degree `truncate_at`.
pub fn convolve_schoolbook(p: &CoeffPoly, q: &CoeffPoly, truncate_at: u64) -> CoeffPoly {
    let out_len = output_len(p, q, truncate_at);
    if let (Some(a), Some(b)) = (p.as_words(), q.as_words()) {
        // 192-bit accumulator: u128 low part plus a carry count.
        let out: Vec<BigUint> = (0..out_len)
            .into_par_iter()
            .map(|n| {
                let lo_i = n.saturating_sub(b.len() - 1);
                let hi_i = n.min(a.len() - 1);
                let mut low: u128 = 0;
                let mut carries: u64 = 0;
                for i in lo_i..=hi_i {
                    let prod = a[i] as u128 * b[n - i] as u128;
                    let (s, over) = low.overflowing_add(prod);
                    low = s;
                    carries += over as u64;
                }
                (BigUint::from(carries) << 128) + low
            })
            .collect();
        return CoeffPoly::from_big(out);
    }
    let a = p.to_biguints();
    let b = q.to_biguints();
    let out: Vec<BigUint> = (0..out_len)
        .into_par_iter()
        .map(|n| {
            let lo_i = n.saturating_sub(b.len() - 1);
            let hi_i = n.min(a.len() - 1);
            let mut acc = BigUint::zero();
            for i in lo_i..=hi_i {
                if !a[i].is_zero() && !b[n - i].is_zero() {
                    acc += &a[i] * &b[n - i];
                }
            }
            acc
        })
        .collect();
    CoeffPoly::from_big(out)
}

/// Number of transform primes needed for `p·q` truncated at `truncate_at`.
pub fn primes_needed(p: &CoeffPoly, q: &CoeffPoly, truncate_at: u64) -> usize {
    let bound = coefficient_bound(p, q, output_len(p, q, truncate_at));
    // Each prime exceeds 2^61, so this count always suffices; trim afterwards.
    let mut count = (bound.bits() / 61 + 1) as usize;
    if let Some(ps) = ntt::primes(count) {
        while count > 1 && ntt::capacity(&ps[..count - 1]) > bound {
            count -= 1;
        }
    }
    count
}

/// Transform-based product using exactly `prime_count` residue channels.
///
/// Fails with [`Error::ModulusCapacity`] when the worst-case coefficient
/// bound does not fit below the product of the primes.
pub fn convolve_ntt_with_primes(
    p: &CoeffPoly,
    q: &CoeffPoly,
    truncate_at: u64,
    prime_count: usize,
) -> Result<CoeffPoly> {
    let out_len = output_len(p, q, truncate_at);
    if out_len == 0 {
        return Ok(CoeffPoly::from_words(Vec::new()));
    }
    let full = p.len() + q.len() - 1;
    if full.next_power_of_two() > 1usize << ntt::MAX_LOG {
        return Err(Error::TransformTooLong(full));
    }
    // Input past the truncation point cannot reach the output.
    let p = p.clone().truncated(out_len);
    let q = q.clone().truncated(out_len);
    let bound = coefficient_bound(&p, &q, out_len);
    let primes = ntt::primes(prime_count).ok_or(Error::ModulusCapacity {
        needed_bits: bound.bits(),
        available_bits: 0,
    })?;
    let capacity = ntt::capacity(&primes);
    if capacity <= bound {
        return Err(Error::ModulusCapacity {
            needed_bits: bound.bits() + 1,
            available_bits: capacity.bits(),
        });
    }
    let square = p == q;
    let channels: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|np| {
            let a = p.residues(np.p);
            if square {
                np.multiply(&a, None, out_len)
            } else {
                let b = q.residues(np.p);
                np.multiply(&a, Some(&b), out_len)
            }
        })
        .collect();

    let fits_word = bound.bits() <= 64;
    let garner = Garner::new(primes);
    let t = channels.len();
    let chunk = 4096;
    let recombine_chunk = |start: usize, end: usize| -> Vec<Recombined> {
        let mut residues = vec![0u64; t];
        let mut scratch = Vec::with_capacity(t);
        (start..end)
            .map(|i| {
                for (r, ch) in residues.iter_mut().zip(&channels) {
                    *r = ch[i];
                }
                garner.recombine(&residues, &mut scratch)
            })
            .collect()
    };
    let values: Vec<Recombined> = (0..out_len.div_ceil(chunk))
        .into_par_iter()
        .flat_map_iter(|c| recombine_chunk(c * chunk, ((c + 1) * chunk).min(out_len)))
        .collect();

    if fits_word {
        let words = values
            .into_iter()
            .map(|v| match v {
                Recombined::Word(w) => u64::try_from(w).map_err(|_| Error::Overflow("coefficient")),
                Recombined::Big(b) => b.to_u64().ok_or(Error::Overflow("coefficient")),
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(CoeffPoly::from_words(words))
    } else {
        let big = values
            .into_iter()
            .map(|v| match v {
                Recombined::Word(w) => BigUint::from(w),
                Recombined::Big(b) => b,
            })
            .collect();
        Ok(CoeffPoly::from_big(big))
    }
}

/// Transform-based product with as many primes as the coefficient bound requires.
pub fn convolve_ntt(p: &CoeffPoly, q: &CoeffPoly, truncate_at: u64) -> Result<CoeffPoly> {
    let count = primes_needed(p, q, truncate_at);
    convolve_ntt_with_primes(p, q, truncate_at, count)
}

/// Exact `p·q mod x^{truncate_at+1}`, choosing schoolbook for small inputs.
pub fn convolve(p: &CoeffPoly, q: &CoeffPoly, truncate_at: u64) -> Result<CoeffPoly> {
    let out_len = output_len(p, q, truncate_at);
    let short = p.len().min(q.len()).min(out_len);
    if short <= 64 || (out_len as u128) * (short as u128) <= 1 << 16 {
        Ok(convolve_schoolbook(p, q, truncate_at))
    } else {
        convolve_ntt(p, q, truncate_at)
    }
}

/// `p^k mod x^{truncate_at+1}` by repeated squaring, truncating after every product.
pub fn power(p: &CoeffPoly, k: u32, truncate_at: u64) -> Result<CoeffPoly> {
    let len = (truncate_at as usize).saturating_add(1);
    let mut result: Option<CoeffPoly> = None;
    let mut base = p.clone().truncated(len);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => convolve(&r, &base, truncate_at)?,
            });
        }
        e >>= 1;
        if e > 0 {
            base = convolve(&base, &base, truncate_at)?;
        }
    }
    Ok(result.unwrap_or_else(|| CoeffPoly::one(len)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(v: &[u64]) -> CoeffPoly {
        CoeffPoly::from_words(v.to_vec())
    }

    #[test]
    fn generating_polynomial() {
        let s = SetSpec::finite(&[0, 2], 3).unwrap();
        assert_eq!(CoeffPoly::generating(&s), words(&[1, 0, 1, 0]));
        let e = SetSpec::finite(&[], 2).unwrap();
        assert_eq!(CoeffPoly::generating(&e), words(&[0, 0, 0]));
        assert_eq!(CoeffPoly::generating(&SetSpec::full(4)), words(&[1; 5]));
    }

    #[test]
    fn small_products() {
        let p = words(&[1, 1]);
        assert_eq!(convolve_schoolbook(&p, &p, 2), words(&[1, 2, 1]));
        assert_eq!(convolve_ntt(&p, &p, 2).unwrap(), words(&[1, 2, 1]));
        let q = words(&[5, 0, 7, 9]);
        assert_eq!(convolve(&q, &words(&[1]), 10).unwrap(), q);
        assert_eq!(convolve_ntt(&q, &words(&[1]), 10).unwrap(), q);
        assert_eq!(convolve(&q, &q, 1).unwrap(), words(&[25, 0]));
    }

    #[test]
    fn insufficient_capacity_is_reported() {
        let big = words(&[u64::MAX; 300]);
        let err = convolve_ntt_with_primes(&big, &big, 1000, 2).unwrap_err();
        assert!(matches!(err, Error::ModulusCapacity { .. }));
        assert_eq!(primes_needed(&big, &big, 1000), 3);
        let ok = convolve_ntt_with_primes(&big, &big, 1000, 3).unwrap();
        assert_eq!(ok, convolve_schoolbook(&big, &big, 1000));
    }

    #[test]
    fn wide_coefficients_escalate() {
        let huge: BigUint = BigUint::from(1u32) << 300usize;
        let p = CoeffPoly::from_big(vec![huge.clone(), BigUint::from(3u32), huge.clone()]);
        let fast = convolve_ntt(&p, &p, 10).unwrap();
        let slow = convolve_schoolbook(&p, &p, 10);
        assert_eq!(fast, slow);
        assert_eq!(slow.get(2), (&huge * &huge) * 2u32 + 9u32);
    }

    #[test]
    fn power_matches_binomials() {
        let p = words(&[1, 1]);
        let p5 = power(&p, 5, 10).unwrap();
        assert_eq!(p5, words(&[1, 5, 10, 10, 5, 1]));
        assert_eq!(power(&p, 0, 3).unwrap(), words(&[1, 0, 0, 0]));
    }
}
