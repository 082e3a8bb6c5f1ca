//! p-adic views of the factorial power sums.
//!
//! Because |i!|_p -> 0, the series sum eps^i i! (i^k + u_k) converges in
//! the p-adic integers for every prime p, and its limit is the ordinary
//! integer v_k. Digits here always mean the canonical expansion of a
//! truncated partial sum reduced into [0, p^m); negative integers pick up
//! the usual trailing (p-1)s.

use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Integer, Residue, Sign};
use crate::poly::Polynomial;
use crate::primes::is_prime;

/// A p-adic order: finite, or infinite for the zero element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// v_p(n!) = sum_j floor(n / p^j), by Legendre's formula.
pub fn legendre_valuation(n: u64, p: u64) -> u64 {
    assert!(is_prime(p), "{p} is not prime");
    let mut acc = 0;
    let mut q = p;
    loop {
        acc += n / q;
        match q.checked_mul(p) {
            Some(next) if next <= n => q = next,
            _ => break,
        }
    }
    acc
}

/// Exact power of p dividing x; Infinite for x = 0.
pub fn padic_valuation(x: &Integer, p: u64) -> Valuation {
    assert!(is_prime(p), "{p} is not prime");
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = Integer::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = (&x / &pb, &x % &pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        x = q;
        v += 1;
    }
}

/// Smallest M such that p^m divides i! for every i >= M; always a
/// multiple of p.
pub fn truncation_index(p: u64, m: u32) -> u64 {
    assert!(is_prime(p), "{p} is not prime");
    let mut idx = 0;
    while legendre_valuation(idx, p) < m as u64 {
        idx += p;
    }
    idx
}

/// The first m base-p digits of a canonical residue mod p^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicExpansion {
    pub p: u64,
    /// digits[j] multiplies p^j.
    pub digits: Vec<u64>,
}

impl PadicExpansion {
    /// Expands x mod p^m, embedding negative integers canonically.
    pub fn of_integer(x: &Integer, p: u64, m: u32) -> PadicExpansion {
        assert!(m >= 1, "need at least one digit");
        let modulus = Integer::from(p).pow(m);
        let mut r = Residue::new(x, &modulus).value().clone();
        let pb = Integer::from(p);
        let mut digits = Vec::with_capacity(m as usize);
        for _ in 0..m {
            let d = (&r % &pb).to_u64().unwrap();
            digits.push(d);
            r /= &pb;
        }
        PadicExpansion { p, digits }
    }
}

impl fmt::Display for PadicExpansion {
    /// Least significant digit first, space separated: "1 0 2".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Digits of sum eps^i i! (i^k + u_k) in Z_p to m places: the partial sum
/// to the truncation index already equals the limit mod p^m, and that
/// limit is v_k.
pub fn series_digits(k: u32, eps: Sign, p: u64, m: u32) -> Result<PadicExpansion> {
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    assert!(k >= 1, "power k must be at least 1");
    let u = Polynomial::solve(k, eps).uv().u;
    let partial = partial_sum(truncation_index(p, m), k, eps, &u);
    Ok(PadicExpansion::of_integer(&partial, p, m))
}

/// Digits of the left factorial !M mod p^m at the truncation index, the
/// k-free analogue. For odd p the hypothesis says digit a_0 is never 0;
/// p = 2 is the excluded case (a_0 = 0 there: !2 = 2).
pub fn left_factorial_digits(p: u64, m: u32) -> Result<PadicExpansion> {
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    let upper = truncation_index(p, m);
    let mut acc = Integer::zero();
    let mut f = Integer::one();
    for i in 0..upper {
        acc += &f;
        f *= i + 1;
    }
    Ok(PadicExpansion::of_integer(&acc, p, m))
}

/// One row of a convergence table: how deep the partial sum to M agrees
/// with the limit, against the valuation of M! driving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub upper: u64,
    /// v_p(S_M - v_k).
    pub sum_valuation: Valuation,
    /// v_p(M!).
    pub factorial_valuation: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceProfile {
    pub k: u32,
    pub eps: Sign,
    pub p: u64,
    pub rows: Vec<ConvergenceRow>,
}

/// Rows for M = 1..=m_max. Since S_M - v_k = eps^(M-1) M! A(M), the sum
/// valuation is at least the factorial valuation, exceeding it exactly
/// when p divides A(M).
pub fn convergence_profile(k: u32, eps: Sign, p: u64, m_max: u64) -> Result<ConvergenceProfile> {
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    assert!(k >= 1, "power k must be at least 1");
    let entry = Polynomial::solve(k, eps).uv();
    let (u, v) = (entry.u, entry.v);
    let mut rows = Vec::new();
    let mut partial = Integer::zero();
    let mut f = Integer::one();
    for i in 0..m_max {
        partial += eps.pow(i).apply(&f * (Integer::from(i).pow(k) + &u));
        f *= i + 1;
        let upper = i + 1;
        rows.push(ConvergenceRow {
            upper,
            sum_valuation: padic_valuation(&(&partial - &v), p),
            factorial_valuation: legendre_valuation(upper, p),
        });
    }
    Ok(ConvergenceProfile { k, eps, p, rows })
}

fn partial_sum(upper: u64, k: u32, eps: Sign, u: &Integer) -> Integer {
    let mut acc = Integer::zero();
    let mut f = Integer::one();
    for i in 0..upper {
        acc += eps.pow(i).apply(&f * (Integer::from(i).pow(k) + u));
        f *= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_fixed_values() {
        assert_eq!(legendre_valuation(10, 3), 4);
        assert_eq!(legendre_valuation(25, 5), 6);
        assert_eq!(legendre_valuation(0, 7), 0);
        assert_eq!(legendre_valuation(6, 7), 0);
    }

    #[test]
    fn valuation_fixed_values() {
        assert_eq!(padic_valuation(&Integer::from(120), 2), Valuation::Finite(3));
        assert_eq!(padic_valuation(&Integer::from(-5), 5), Valuation::Finite(1));
        assert_eq!(padic_valuation(&Integer::zero(), 3), Valuation::Infinite);
        assert_eq!(padic_valuation(&Integer::from(7), 3), Valuation::Finite(0));
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Infinite > Valuation::Finite(u64::MAX));
        assert!(Valuation::Finite(3) > Valuation::Finite(2));
    }

    #[test]
    fn truncation_fixed_values() {
        assert_eq!(truncation_index(3, 1), 3);
        assert_eq!(truncation_index(3, 2), 6);
        assert_eq!(truncation_index(5, 1), 5);
        assert_eq!(truncation_index(3, 8), 18);
        assert_eq!(truncation_index(13, 8), 104);
        // Legendre valuation is monotone, so the index is tight: one step
        // of p less already misses.
        for (p, m) in [(3u64, 4u32), (5, 3), (7, 6)] {
            let idx = truncation_index(p, m);
            assert!(legendre_valuation(idx, p) >= m as u64);
            assert!(legendre_valuation(idx - p, p) < m as u64);
        }
    }

    #[test]
    fn integer_expansion_handles_negatives() {
        let e = PadicExpansion::of_integer(&Integer::from(-1), 7, 3);
        assert_eq!(e.digits, vec![6, 6, 6]);
        let e = PadicExpansion::of_integer(&Integer::from(9), 5, 4);
        assert_eq!(e.digits, vec![4, 1, 0, 0]);
        let e = PadicExpansion::of_integer(&Integer::from(-5), 5, 2);
        assert_eq!(e.digits, vec![0, 4]);
    }

    #[test]
    fn series_digits_fixed_values() {
        assert_eq!(series_digits(2, Sign::Plus, 3, 2).unwrap().digits, vec![1, 0]);
        assert_eq!(series_digits(4, Sign::Plus, 5, 2).unwrap().digits, vec![0, 4]);
        assert_eq!(
            series_digits(1, Sign::Plus, 7, 3).unwrap().digits,
            vec![6, 6, 6]
        );
        assert_eq!(
            series_digits(3, Sign::Minus, 5, 4).unwrap().digits,
            vec![4, 1, 0, 0]
        );
    }

    #[test]
    fn left_factorial_digits_fixed_values() {
        assert_eq!(left_factorial_digits(3, 1).unwrap().digits, vec![1]);
        assert_eq!(left_factorial_digits(3, 2).unwrap().digits, vec![1, 0]);
        assert_eq!(left_factorial_digits(2, 1).unwrap().digits, vec![0]);
        assert_eq!(
            left_factorial_digits(3, 8).unwrap().digits,
            vec![1, 0, 1, 2, 1, 0, 1, 1]
        );
        assert_eq!(
            left_factorial_digits(5, 6).unwrap().digits,
            vec![4, 2, 2, 2, 4, 0]
        );
        assert_eq!(
            left_factorial_digits(7, 5).unwrap().digits,
            vec![6, 6, 1, 1, 6]
        );
    }

    #[test]
    fn digit_prefix_is_stable_in_m() {
        for p in [3u64, 5, 7] {
            let wide = left_factorial_digits(p, 12).unwrap();
            for m in 1..=11u32 {
                let narrow = left_factorial_digits(p, m).unwrap();
                assert_eq!(narrow.digits[..], wide.digits[..m as usize], "p={p} m={m}");
            }
        }
    }

    #[test]
    fn convergence_profile_inequality() {
        let prof = convergence_profile(2, Sign::Plus, 3, 30).unwrap();
        let poly = Polynomial::solve(2, Sign::Plus);
        for row in &prof.rows {
            assert!(
                row.sum_valuation >= Valuation::Finite(row.factorial_valuation),
                "M={}",
                row.upper
            );
            // Excess exactly when p | A(M).
            let am = poly.eval(&Integer::from(row.upper));
            let divides = padic_valuation(&am, 3) != Valuation::Finite(0);
            let excess = row.sum_valuation > Valuation::Finite(row.factorial_valuation);
            assert_eq!(excess, divides, "M={}", row.upper);
        }
        // Spot value: S_3 - v_2 = 12 has 3-adic valuation 1.
        assert_eq!(prof.rows[2].sum_valuation, Valuation::Finite(1));
        assert_eq!(prof.rows[2].factorial_valuation, 1);
    }
}
