//! Deterministic primality testing, prime iteration on u64 ranges, and
//! Montgomery multiplication for the modulus-heavy inner loops.

/// Witnesses making Miller-Rabin deterministic for every u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Multiplication mod a fixed odd modulus below 2^63 without hardware
/// division. Values are kept in Montgomery form (x mapped to x * 2^64
/// mod m), where a product costs three word multiplies; the per-prime
/// residue loops run an order of 10^9 of these, so the difference
/// against `(a as u128 * b as u128) % m` is minutes of wall clock.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Montgomery {
    m: u64,
    /// -m^{-1} mod 2^64.
    neg_inv: u64,
    /// 2^64 mod m, which is 1 in Montgomery form.
    one: u64,
    /// 2^128 mod m, the conversion factor into Montgomery form.
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(m: u64) -> Self {
        assert!(m & 1 == 1 && m >= 3 && m < 1 << 63);
        // Newton iteration on the 2-adic inverse: odd m is self-inverse
        // mod 8 and every step doubles the number of correct low bits,
        // so five steps reach 64.
        let mut inv = m;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let one = (u64::MAX % m) + 1;
        let r2 = ((one as u128 * one as u128) % m as u128) as u64;
        Montgomery {
            m,
            neg_inv: inv.wrapping_neg(),
            one,
            r2,
        }
    }

    /// t * 2^{-64} mod m for t < m * 2^64.
    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let q = (t as u64).wrapping_mul(self.neg_inv);
        let r = ((t + q as u128 * self.m as u128) >> 64) as u64;
        if r >= self.m {
            r - self.m
        } else {
            r
        }
    }

    /// 1 in Montgomery form.
    #[inline]
    pub(crate) fn one(&self) -> u64 {
        self.one
    }

    /// Product of two Montgomery-form values below m, in Montgomery form.
    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    /// x < m into Montgomery form.
    #[inline]
    pub(crate) fn to_mont(&self, x: u64) -> u64 {
        self.mul(x, self.r2)
    }

    /// Montgomery-form value back to an ordinary residue.
    #[inline]
    pub(crate) fn from_mont(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin over the fixed witness set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd.
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
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

/// Primes in the half-open range [lo, hi), ascending.
pub fn primes_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..hi).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_matches_wide_reference() {
        // Odd moduli only; compositeness is fine, the reduction does not
        // care. The last two sit near the 2^63 admissibility bound.
        let moduli = [
            3u64,
            5,
            15,
            2_000_003,
            4_294_967_291,
            2_305_843_009_213_693_951,
            9_223_372_036_854_775_783,
        ];
        for &m in &moduli {
            let mont = Montgomery::new(m);
            assert_eq!(mont.from_mont(mont.one()), 1 % m);
            let mut x = 0xdead_beef_u64 % m;
            let mut y = (m - 1) % m;
            for _ in 0..200 {
                let xm = mont.to_mont(x);
                let ym = mont.to_mont(y);
                assert_eq!(mont.from_mont(xm), x);
                assert_eq!(mont.from_mont(mont.mul(xm, ym)), mul_mod(x, y, m));
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) % m;
                y = y.wrapping_mul(2862933555777941757).wrapping_add(3037000493) % m;
            }
        }
    }

    #[test]
    #[should_panic]
    fn montgomery_rejects_even_modulus() {
        Montgomery::new(10);
    }

    #[test]
    fn small_classification() {
        let primes: Vec<u64> = primes_in(0, 60).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn counts_match_pi() {
        // pi(10^4) = 1229, pi(10^5) = 9592.
        assert_eq!(primes_in(0, 10_000).count(), 1229);
        assert_eq!(primes_in(0, 100_000).count(), 9592);
    }

    #[test]
    fn known_large_cases() {
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(2_147_483_649));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn carmichael_numbers_rejected() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime(n), "{n}");
        }
    }
}
