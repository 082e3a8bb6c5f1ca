//! Left-factorial congruence checks.
//!
//! The left factorial !n = sum_{i<n} i! conjecturally satisfies
//! gcd(!n, n!) = 2 for every n >= 2; equivalently !p is never divisible
//! by an odd prime p. This module has the exact gcd form, the weighted-sum
//! variants that are provably never violated, per-prime residue profiles
//! of sum i! i^k mod p, the finite-field identities anchoring those
//! residues to the u/v tables, and the Fermat exponent-shift collapse.

use std::collections::BTreeMap;

use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, gcd, mod_u64, Integer, Sign};
use crate::poly::Polynomial;
use crate::primes::{is_prime, Montgomery};
use crate::seq::{uv_table, uv_table_mod};

/// Default bound on p for `uv_wraparound_check`, which costs O(p^2).
pub const DEFAULT_WRAPAROUND_CAP: u64 = 2000;

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

// Operands must already be reduced mod m. Moduli below 2^32 keep the
// product inside u64, which avoids the much slower 128-bit division in
// the per-prime residue loops.
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
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

/// The left factorial !n = sum_{i<n} i!, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftFactorial {
    pub n: u64,
    pub value: Integer,
}

pub fn left_factorial(n: u64) -> LeftFactorial {
    let mut acc = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        acc += &f;
        f *= i + 1;
    }
    LeftFactorial { n, value: acc }
}

/// !p mod p by one pass of word arithmetic.
pub fn left_factorial_mod(p: u64) -> u64 {
    let mut acc = 0u64;
    let mut f = 1 % p;
    for i in 0..p {
        acc = add_mod(acc, f, p);
        f = mul_mod(f, (i + 1) % p, p);
    }
    acc
}

/// gcd(!n, n!) == 2, the hypothesis in its gcd form. Defined for n >= 2.
pub fn kh_gcd_check(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::NTooSmall { n, min: 2 });
    }
    let mut lf = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        lf += &f;
        f *= i + 1;
    }
    Ok(gcd(&lf, &f)? == Integer::from(2))
}

/// Unconditional facts about the weighted sum sum_{i<n} i! i = n! - 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSumVerdict {
    /// sum_{i<n} i! i is nonzero mod n.
    pub nonzero_mod_n: bool,
    /// Same statement read mod a prime; only evaluated when n is prime.
    pub nonzero_mod_prime: Option<bool>,
    /// gcd(n! - 1, n!) = 1.
    pub coprime_to_factorial: bool,
}

impl WeightedSumVerdict {
    pub fn pass(&self) -> bool {
        self.nonzero_mod_n && self.nonzero_mod_prime.unwrap_or(true) && self.coprime_to_factorial
    }
}

fn weighted_sum_verdict(n: u64, nf: &Integer) -> Result<WeightedSumVerdict> {
    let sum = nf - 1; // sum_{i<n} i! i telescopes to n! - 1
    let nonzero_mod_n = mod_u64(&sum, n) != 0;
    let nonzero_mod_prime = is_prime(n).then_some(nonzero_mod_n);
    let coprime_to_factorial = gcd(&sum, nf)?.is_one();
    Ok(WeightedSumVerdict {
        nonzero_mod_n,
        nonzero_mod_prime,
        coprime_to_factorial,
    })
}

/// Checks the three weighted-sum facts at a single n >= 2.
pub fn weighted_sum_check(n: u64) -> Result<WeightedSumVerdict> {
    if n < 2 {
        return Err(Error::NTooSmall { n, min: 2 });
    }
    weighted_sum_verdict(n, &factorial(n))
}

/// Verdicts for every n in [lo, hi), carrying the running factorial so the
/// whole sweep costs one big multiplication per step.
pub fn weighted_sum_scan(
    lo: u64,
    hi: u64,
) -> impl Iterator<Item = (u64, Result<WeightedSumVerdict>)> {
    assert!(lo >= 2, "weighted-sum facts start at n = 2");
    let mut f = factorial(lo.min(hi));
    (lo..hi).map(move |n| {
        let verdict = weighted_sum_verdict(n, &f);
        f *= n + 1;
        (n, verdict)
    })
}

/// Checks sum_{i<n} eps^i i! (i^k + u_k) == v_k (mod n!) exactly, for
/// n >= 1 and k >= 1. The n = 1 case is mod 1 and trivially true.
pub fn congruence_mod_factorial(n: u64, k: u32, eps: Sign) -> bool {
    assert!(n >= 1 && k >= 1);
    let entry = Polynomial::solve(k, eps).uv();
    let mut lhs = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        lhs += eps
            .pow(i)
            .apply(&f * (Integer::from(i).pow(k) + &entry.u));
        f *= i + 1;
    }
    // f is n! here.
    ((lhs - entry.v) % f).is_zero()
}

/// Residues of sum_{i<p} i! i^k mod p for each k in a k-set, and optionally
/// the same sums with every exponent shifted by r (p - 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueProfile {
    pub p: u64,
    /// k -> sum_{i<p} i! i^k mod p. The k = 0 entry is !p mod p.
    pub residues: BTreeMap<u32, u64>,
    /// The factor r of the exponent shift, when requested.
    pub fermat_factor: Option<u32>,
    /// k -> sum_{i<p} i! i^(k + r(p-1)) mod p.
    pub fermat_residues: BTreeMap<u32, u64>,
}

impl ResidueProfile {
    /// Every k >= 1 entry must satisfy r[k] == v_k - u_k r[0] (mod p),
    /// the closed form read at n = p where the n! term vanishes.
    pub fn internal_consistency(&self) -> bool {
        let r0 = self.residues[&0];
        let max_k = *self.residues.keys().max().unwrap();
        if max_k == 0 {
            return true;
        }
        let table = uv_table(max_k);
        self.residues.iter().filter(|(k, _)| **k >= 1).all(|(k, r)| {
            let e = table.get(*k);
            let expect = sub_mod(
                mod_u64(&e.v, self.p),
                mul_mod(mod_u64(&e.u, self.p), r0, self.p),
                self.p,
            );
            *r == expect
        })
    }
}

/// One O(p) pass accumulating sum i! i^k mod p for every k in the set,
/// with incremental factorials and chained powers of i. The k-set must
/// contain 0. When fermat_factor = r is given, the shifted sums with
/// exponents k + r(p-1) accumulate in the same pass via modular powers.
pub fn residues_for_prime(p: u64, ks: &[u32], fermat_factor: Option<u32>) -> Result<ResidueProfile> {
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    if !ks.contains(&0) {
        return Err(Error::MissingZeroK);
    }
    if fermat_factor == Some(0) {
        return Err(Error::ZeroExponentFactor);
    }
    let mut ks: Vec<u32> = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let max_k = *ks.last().unwrap() as usize;
    let mut member = vec![false; max_k + 1];
    for &k in &ks {
        member[k as usize] = true;
    }

    if p == 2 {
        // Two-term sums written out directly; the Montgomery form below
        // needs an odd modulus. Only i = 1 contributes to exponents >= 1,
        // and 0! + 1! is even.
        let residues = ks.iter().map(|&k| (k, u64::from(k >= 1))).collect();
        let fermat_residues = if fermat_factor.is_some() {
            ks.iter().map(|&k| (k, 1)).collect()
        } else {
            BTreeMap::new()
        };
        return Ok(ResidueProfile {
            p,
            residues,
            fermat_factor,
            fermat_residues,
        });
    }

    // One pass over i < p with all values in Montgomery form: f tracks
    // i!, im tracks i (advanced by adding Montgomery 1), and the inner
    // walk raises i through the requested exponents. Sums of Montgomery
    // forms are the Montgomery form of the sum, so the accumulators
    // convert back only once at the end.
    let mont = Montgomery::new(p);
    let mut acc = vec![0u64; max_k + 1];
    let mut fermat_acc = vec![0u64; max_k + 1];
    let mut f = mont.one();
    let mut im = 0u64;
    for i in 0..p {
        // k = 0 term; i^0 = 1 including 0^0.
        acc[0] = add_mod(acc[0], f, p);
        let mut g = f;
        for k in 1..=max_k {
            g = mont.mul(g, im);
            if member[k] {
                acc[k] = add_mod(acc[k], g, p);
            }
        }
        if let Some(r) = fermat_factor {
            // Exponents k + r(p-1) are all >= 1, so the i = 0 term drops.
            let shift = mont.to_mont(pow_mod(i, r as u64 * (p - 1), p));
            let mut g = mont.mul(f, shift);
            for k in 0..=max_k {
                if member[k] {
                    fermat_acc[k] = add_mod(fermat_acc[k], g, p);
                }
                g = mont.mul(g, im);
            }
        }
        im = add_mod(im, mont.one(), p);
        f = mont.mul(f, im);
    }

    let residues = ks
        .iter()
        .map(|&k| (k, mont.from_mont(acc[k as usize])))
        .collect();
    let fermat_residues = if fermat_factor.is_some() {
        ks.iter()
            .map(|&k| (k, mont.from_mont(fermat_acc[k as usize])))
            .collect()
    } else {
        BTreeMap::new()
    };
    Ok(ResidueProfile {
        p,
        residues,
        fermat_factor,
        fermat_residues,
    })
}

/// The four identities in GF(p) tying the u/v table entries around k = p
/// to the left-factorial residue r0 = !p mod p:
///
/// ```text
/// (u_{p-1} + 1) r0 = v_{p-1} + 1        u_p r0       = v_p + 1
/// (u_{p+1} - 1) r0 = v_{p+1} - 1        (u_{p+2} + 1) r0 = v_{p+2} - 1
/// ```
///
/// Needs the table up to k = p + 2, an O(p^2) computation, so p is capped.
pub fn uv_wraparound_check(p: u64, cap: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    Ok(wraparound_holds(p, left_factorial_mod(p)))
}

/// The identity core, reusing an already-computed r0 = !p mod p.
pub(crate) fn wraparound_holds(p: u64, r0: u64) -> bool {
    let table = uv_table_mod(p as u32 + 2, p).expect("p checked prime");
    let uv = |k: u32| {
        let e = table.get(k);
        (e.u.to_u64().unwrap(), e.v.to_u64().unwrap())
    };
    let pk = p as u32;
    let (u1, v1) = uv(pk - 1);
    let (u2, v2) = uv(pk);
    let (u3, v3) = uv(pk + 1);
    let (u4, v4) = uv(pk + 2);
    mul_mod(add_mod(u1, 1, p), r0, p) == add_mod(v1, 1, p)
        && mul_mod(u2, r0, p) == add_mod(v2, 1, p)
        && mul_mod(sub_mod(u3, 1, p), r0, p) == sub_mod(v3, 1, p)
        && mul_mod(add_mod(u4, 1, p), r0, p) == sub_mod(v4, 1, p)
}

/// The three mod-p shifts of the table across k = p:
///
/// ```text
/// (u_{p+2}, v_{p+2}) = (-u_p - 1, -v_p)
/// (u_{p+1}, v_{p+1}) = (1, 1)
/// (u_p,     v_p)     = (u_{p-1} + 1, v_{p-1})
/// ```
pub fn uv_shift_check(p: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    let table = uv_table_mod(p as u32 + 2, p)?;
    let uv = |k: u32| {
        let e = table.get(k);
        (e.u.to_u64().unwrap(), e.v.to_u64().unwrap())
    };
    let pk = p as u32;
    let (u1, v1) = uv(pk - 1);
    let (u2, v2) = uv(pk);
    let (u3, v3) = uv(pk + 1);
    let (u4, v4) = uv(pk + 2);
    Ok(u4 == sub_mod(sub_mod(0, u2, p), 1, p)
        && v4 == sub_mod(0, v2, p)
        && u3 == 1 % p
        && v3 == 1 % p
        && u2 == add_mod(u1, 1, p)
        && v2 == v1)
}

/// Brute check that shifting every exponent by r (p - 1) only removes the
/// i = 0 contribution:
///
/// ```text
/// sum_{i<p} eps^i i! i^(k + r(p-1)) == sum_{i<p} eps^i i! i^k - delta_{0k}  (mod p)
/// ```
pub fn fermat_shift_check(p: u64, k: u32, r: u32, eps: Sign) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    if r == 0 {
        return Err(Error::ZeroExponentFactor);
    }
    let signed_add = |acc: u64, term: u64, sign: Sign| match sign {
        Sign::Plus => add_mod(acc, term, p),
        Sign::Minus => sub_mod(acc, term, p),
    };
    let mut lhs = 0u64;
    let mut rhs = 0u64;
    let mut f = 1 % p;
    let shift = k as u64 + r as u64 * (p - 1);
    for i in 0..p {
        let base = if i == 0 && k == 0 { 1 % p } else { pow_mod(i, k as u64, p) };
        lhs = signed_add(lhs, mul_mod(f, pow_mod(i, shift, p), p), eps.pow(i));
        rhs = signed_add(rhs, mul_mod(f, base, p), eps.pow(i));
        f = mul_mod(f, (i + 1) % p, p);
    }
    if k == 0 {
        rhs = sub_mod(rhs, 1 % p, p);
    }
    Ok(lhs == rhs)
}
