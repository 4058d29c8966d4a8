//! Number-theoretic transforms over a family of word-size primes
//! `p = c·2^28 + 1 < 2^62`, with Montgomery arithmetic and Garner
//! recombination.
//!
//! Primes are discovered on demand (largest first) and cached for the
//! process lifetime, so the number of residue channels is limited only by
//! how many such primes exist below 2^62.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;

/// Maximum supported transform length is `2^MAX_LOG`.
pub const MAX_LOG: u32 = 28;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery {
    p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < 1 << 62);
        // Newton iteration for p^{-1} mod 2^64.
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub(crate) fn enter(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub(crate) fn leave(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.enter(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NttPrime {
    pub(crate) p: u64,
    pub(crate) mont: Montgomery,
    /// Montgomery form of a root of unity of order exactly `2^MAX_LOG`.
    root: u64,
}

impl NttPrime {
    fn new(p: u64) -> Option<Self> {
        let mont = Montgomery::new(p);
        let odd = (p - 1) >> MAX_LOG;
        let one = mont.enter(1);
        let minus_one = mont.sub(0, one);
        // A quadratic non-residue g gives g^odd of order exactly 2^MAX_LOG.
        (2u64..200).find_map(|g| {
            let gm = mont.enter(g);
            if mont.pow(gm, (p - 1) / 2) == minus_one {
                Some(Self {
                    p,
                    mont,
                    root: mont.pow(gm, odd),
                })
            } else {
                None
            }
        })
    }

    fn root_of_order(&self, log_n: u32) -> u64 {
        let mut w = self.root;
        for _ in log_n..MAX_LOG {
            w = self.mont.mul(w, w);
        }
        w
    }

    fn transform(&self, a: &mut [u64], inverse: bool) {
        let n = a.len();
        debug_assert!(n.is_power_of_two());
        if n == 1 {
            return;
        }
        let log_n = n.trailing_zeros();
        let m = &self.mont;

        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }

        let mut w_n = self.root_of_order(log_n);
        if inverse {
            w_n = m.pow(w_n, (1u64 << log_n) - 1);
        }
        let half_n = n / 2;
        let mut twiddles = Vec::with_capacity(half_n);
        let mut w = m.enter(1);
        for _ in 0..half_n {
            twiddles.push(w);
            w = m.mul(w, w_n);
        }

        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for (i, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = m.mul(*y, twiddles[i * step]);
                    *y = m.sub(*x, t);
                    *x = m.add(*x, t);
                }
            }
            len <<= 1;
        }

        if inverse {
            let n_inv = m.pow(m.enter(n as u64), self.p - 2);
            for x in a.iter_mut() {
                *x = m.mul(*x, n_inv);
            }
        }
    }

    /// Cyclic-free product of two residue vectors (already reduced mod p,
    /// plain form), truncated to `out_len`.
    pub(crate) fn multiply(&self, a: &[u64], b: Option<&[u64]>, out_len: usize) -> Vec<u64> {
        let full = a.len() + b.map_or(a.len(), <[u64]>::len) - 1;
        let size = full.next_power_of_two();
        let m = &self.mont;
        let lift = |src: &[u64]| {
            let mut v = vec![0u64; size];
            for (d, &s) in v.iter_mut().zip(src) {
                *d = m.enter(s);
            }
            v
        };
        let mut fa = lift(a);
        self.transform(&mut fa, false);
        match b {
            Some(b) => {
                let mut fb = lift(b);
                self.transform(&mut fb, false);
                for (x, y) in fa.iter_mut().zip(&fb) {
                    *x = m.mul(*x, *y);
                }
            }
            None => {
                for x in fa.iter_mut() {
                    *x = m.mul(*x, *x);
                }
            }
        }
        self.transform(&mut fa, true);
        fa.truncate(out_len);
        for x in fa.iter_mut() {
            *x = m.leave(*x);
        }
        fa
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

struct PrimeCache {
    primes: Vec<NttPrime>,
    next_multiplier: u64,
}

fn cache() -> &'static Mutex<PrimeCache> {
    static CACHE: OnceLock<Mutex<PrimeCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(PrimeCache {
            primes: Vec::new(),
            next_multiplier: ((1u64 << 62) - 1) >> MAX_LOG,
        })
    })
}

/// The first `count` transform primes, or `None` if fewer exist.
pub(crate) fn primes(count: usize) -> Option<Vec<NttPrime>> {
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    while guard.primes.len() < count {
        let c = guard.next_multiplier;
        if c == 0 {
            return None;
        }
        guard.next_multiplier -= 1;
        let p = (c << MAX_LOG) + 1;
        if is_prime(p) {
            if let Some(np) = NttPrime::new(p) {
                guard.primes.push(np);
            }
        }
    }
    Some(guard.primes[..count].to_vec())
}

/// Product of the first `count` transform primes.
pub(crate) fn capacity(primes: &[NttPrime]) -> BigUint {
    primes
        .iter()
        .fold(BigUint::from(1u32), |acc, p| acc * BigUint::from(p.p))
}

/// Garner mixed-radix recombination of one coefficient's residues.
pub(crate) struct Garner {
    primes: Vec<NttPrime>,
    /// `inv[i][j]` = Montgomery form of `(p_j)^{-1} mod p_i`, for `j < i`.
    inv: Vec<Vec<u64>>,
}

pub(crate) enum Recombined {
    Word(u128),
    Big(BigUint),
}

impl Garner {
    pub(crate) fn new(primes: Vec<NttPrime>) -> Self {
        let inv = primes
            .iter()
            .enumerate()
            .map(|(i, pi)| {
                primes[..i]
                    .iter()
                    .map(|pj| pi.mont.enter(pow_mod(pj.p % pi.p, pi.p - 2, pi.p)))
                    .collect()
            })
            .collect();
        Self { primes, inv }
    }

    fn digits(&self, residues: &[u64], out: &mut Vec<u64>) {
        out.clear();
        for (i, pi) in self.primes.iter().enumerate() {
            let mut v = residues[i];
            for (j, &xj) in out.iter().enumerate() {
                v = pi.mont.sub(v, xj % pi.p);
                v = pi.mont.mul(v, self.inv[i][j]);
            }
            out.push(v);
        }
    }

    pub(crate) fn recombine(&self, residues: &[u64], scratch: &mut Vec<u64>) -> Recombined {
        self.digits(residues, scratch);
        match scratch.len() {
            1 => Recombined::Word(scratch[0] as u128),
            2 => Recombined::Word(scratch[0] as u128 + scratch[1] as u128 * self.primes[0].p as u128),
            t => {
                let mut acc = BigUint::from(scratch[t - 1]);
                for i in (0..t - 1).rev() {
                    acc = acc * self.primes[i].p + scratch[i];
                }
                Recombined::Big(acc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_small() {
        let sieve: Vec<u64> = (0..200).filter(|&n| is_prime(n)).collect();
        let naive: Vec<u64> = (0..200u64)
            .filter(|&n| n >= 2 && (2..n).all(|d| n % d != 0))
            .collect();
        assert_eq!(sieve, naive);
        assert!(is_prime(998_244_353));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn primes_have_roots_of_the_right_order() {
        for np in primes(3).unwrap() {
            assert_eq!((np.p - 1) % (1 << MAX_LOG), 0);
            let m = np.mont;
            let one = m.enter(1);
            let w = np.root;
            assert_eq!(m.pow(w, 1 << MAX_LOG), one);
            assert_ne!(m.pow(w, 1 << (MAX_LOG - 1)), one);
        }
    }

    #[test]
    fn transform_round_trip() {
        let np = primes(1).unwrap()[0];
        let orig: Vec<u64> = (0..64).map(|i| np.mont.enter(i * 7919 + 3)).collect();
        let mut a = orig.clone();
        np.transform(&mut a, false);
        np.transform(&mut a, true);
        assert_eq!(a, orig);
    }

    #[test]
    fn garner_recovers_products_of_primes() {
        let ps = primes(3).unwrap();
        let g = Garner::new(ps.clone());
        let value = BigUint::from(ps[0].p - 5) * BigUint::from(ps[1].p - 7) + 11u32;
        let residues: Vec<u64> = ps
            .iter()
            .map(|p| (&value % BigUint::from(p.p)).try_into().unwrap())
            .collect();
        let mut scratch = Vec::new();
        match g.recombine(&residues, &mut scratch) {
            Recombined::Big(v) => assert_eq!(v, value),
            Recombined::Word(_) => panic!("expected a wide value"),
        }
    }
}
