//! Recurrence routes to the sum constants u_k, v_k and to whole vectors
//! of power sums S_k(n) = sum_{i<n} eps^i i! i^k.
//!
//! The recurrences for u and v are specific to eps = +1:
//!
//! ```text
//! u_{k+1} = -k u_k - sum_{l=1}^{k-1} C(k+1, l) u_l + 1,    u_1 = 0,
//! v_{k+1} = -k v_k - sum_{l=1}^{k-1} C(k+1, l) v_l,        v_1 = -1,
//! ```
//!
//! where v_1 = -1 is the k = 0 instance of the v recurrence (only the
//! constant -delta_{0k} survives there). For eps = -1 the polynomial
//! route is the defining one; `uv_table_eps` uses it for both signs.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, Integer, Sign};
use crate::poly::{Polynomial, UvEntry};
use crate::primes::is_prime;

/// Table of (u_k, v_k) for k = 1..=k_max, possibly reduced mod a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UvTable {
    pub eps: Sign,
    pub modulus: Option<u64>,
    entries: Vec<UvEntry>,
}

impl UvTable {
    /// Entry for power k (1-based).
    pub fn get(&self, k: u32) -> &UvEntry {
        &self.entries[k as usize - 1]
    }

    pub fn k_max(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[UvEntry] {
        &self.entries
    }
}

/// Next Pascal row from the previous one (exact).
fn pascal_next(row: &[Integer]) -> Vec<Integer> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(Integer::one());
    for w in row.windows(2) {
        next.push(&w[0] + &w[1]);
    }
    next.push(Integer::one());
    next
}

/// Exact (u_k, v_k) for k = 1..=k_max via the eps = +1 recurrences.
pub fn uv_table(k_max: u32) -> UvTable {
    let mut u = vec![Integer::zero()];
    let mut v = vec![Integer::from(-1)];
    // row holds C(k+1, *) while computing the k -> k+1 step.
    let mut row = vec![Integer::one(), Integer::one()];
    for k in 1..k_max as usize {
        row = pascal_next(&row);
        let mut su = Integer::zero();
        let mut sv = Integer::zero();
        for l in 1..k {
            su += &row[l] * &u[l - 1];
            sv += &row[l] * &v[l - 1];
        }
        let kb = Integer::from(k as u64);
        u.push(-&kb * &u[k - 1] - su + 1);
        v.push(-kb * &v[k - 1] - sv);
    }
    let entries = u
        .into_iter()
        .zip(v)
        .enumerate()
        .map(|(i, (u, v))| UvEntry {
            k: i as u32 + 1,
            eps: Sign::Plus,
            u,
            v,
        })
        .collect();
    UvTable {
        eps: Sign::Plus,
        modulus: None,
        entries,
    }
}

/// Exact (u_k, v_k) for k = 1..=k_max via the polynomial route, which is
/// valid for either sign.
pub fn uv_table_eps(k_max: u32, eps: Sign) -> UvTable {
    let entries = (1..=k_max)
        .map(|k| Polynomial::solve(k, eps).uv())
        .collect();
    UvTable {
        eps,
        modulus: None,
        entries,
    }
}

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

// Operands must already be reduced mod m; the narrow branch keeps the
// Pascal row updates on u64 division for word-sized moduli.
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

/// (u_k, v_k) mod a prime p for k = 1..=k_max, eps = +1, running the
/// recurrences entirely in machine words with one Pascal row mod p per
/// step. k_max may exceed p; entries land in [0, p).
pub fn uv_table_mod(k_max: u32, p: u64) -> Result<UvTable> {
    if !is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    let mut u = vec![0u64];
    let mut v = vec![(p - 1) % p];
    let mut row = vec![1 % p, 1 % p];
    for k in 1..k_max as usize {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1 % p);
        for w in row.windows(2) {
            next.push(add_mod(w[0], w[1], p));
        }
        next.push(1 % p);
        row = next;
        let mut su = 0u64;
        let mut sv = 0u64;
        for l in 1..k {
            su = add_mod(su, mul_mod(row[l], u[l - 1], p), p);
            sv = add_mod(sv, mul_mod(row[l], v[l - 1], p), p);
        }
        let kr = k as u64 % p;
        u.push(add_mod(
            sub_mod(sub_mod(0, mul_mod(kr, u[k - 1], p), p), su, p),
            1 % p,
            p,
        ));
        v.push(sub_mod(sub_mod(0, mul_mod(kr, v[k - 1], p), p), sv, p));
    }
    let entries = u
        .into_iter()
        .zip(v)
        .enumerate()
        .map(|(i, (u, v))| UvEntry {
            k: i as u32 + 1,
            eps: Sign::Plus,
            u: Integer::from(u),
            v: Integer::from(v),
        })
        .collect();
    Ok(UvTable {
        eps: Sign::Plus,
        modulus: Some(p),
        entries,
    })
}

/// The vector (S_0(n), ..., S_k_max(n)) for fixed n and eps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumVector {
    pub n: u64,
    pub eps: Sign,
    /// values[k] = S_k(n); index 0 holds the plain factorial sum.
    pub values: Vec<Integer>,
}

/// Computes S_0 directly and lifts upward through
///
/// ```text
/// S_{k+1} = eps (S_k - delta_{0k} + eps^n n! n^k) - sum_{l=0}^{k} C(k+1, l) S_l,
/// ```
///
/// with 0^0 = 1 throughout.
pub fn sum_vector(n: u64, k_max: u32, eps: Sign) -> SumVector {
    let mut s0 = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        s0 += eps.pow(i).apply(f.clone());
        f *= i + 1;
    }
    let mut values = vec![s0];
    let tail_sign = eps.pow(n);
    let nf = factorial(n);
    // n^k, starting at n^0 = 1 (so 0^0 = 1).
    let mut npow = Integer::one();
    let mut row = vec![Integer::one()]; // C(k, *) of the previous step
    for k in 0..k_max as usize {
        row = pascal_next(&row); // C(k+1, *)
        let delta: Integer = if k == 0 { Integer::one() } else { Integer::zero() };
        let tail = tail_sign.apply(&nf * &npow);
        let mut coupled = Integer::zero();
        for l in 0..=k {
            coupled += &row[l] * &values[l];
        }
        values.push(eps.apply(&values[k] - delta + tail) - coupled);
        npow *= n;
    }
    SumVector { n, eps, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn uv_i64(t: &UvTable) -> (Vec<i64>, Vec<i64>) {
        (
            t.entries().iter().map(|e| e.u.to_i64().unwrap()).collect(),
            t.entries().iter().map(|e| e.v.to_i64().unwrap()).collect(),
        )
    }

    #[test]
    fn first_eleven_uv_values() {
        let (u, v) = uv_i64(&uv_table(11));
        assert_eq!(u, vec![0, 1, -1, -2, 9, -9, -50, 267, -413, -2180, 17731]);
        assert_eq!(v, vec![-1, 1, 1, -5, 5, 21, -105, 141, 777, -5513, 13209]);
    }

    #[test]
    fn recurrence_and_polynomial_routes_agree() {
        let rec = uv_table(13);
        let pol = uv_table_eps(13, Sign::Plus);
        for k in 1..=13 {
            assert_eq!(rec.get(k).u, pol.get(k).u, "u_{k}");
            assert_eq!(rec.get(k).v, pol.get(k).v, "v_{k}");
        }
    }

    #[test]
    fn minus_route_fixed_values() {
        let t = uv_table_eps(3, Sign::Minus);
        assert_eq!(t.get(2).u, Integer::from(-5));
        assert_eq!(t.get(2).v, Integer::from(-3));
        assert_eq!(t.get(3).u, Integer::from(15));
        assert_eq!(t.get(3).v, Integer::from(9));
    }

    #[test]
    fn mod_table_matches_exact_reduction() {
        for p in [3u64, 5, 13, 101] {
            let exact = uv_table(12);
            let modded = uv_table_mod(12, p).unwrap();
            for k in 1..=12 {
                let e = exact.get(k);
                assert_eq!(
                    crate::exact::mod_u64(&e.u, p),
                    modded.get(k).u.to_u64().unwrap(),
                    "u_{k} mod {p}"
                );
                assert_eq!(
                    crate::exact::mod_u64(&e.v, p),
                    modded.get(k).v.to_u64().unwrap(),
                    "v_{k} mod {p}"
                );
            }
        }
    }

    #[test]
    fn mod_table_past_the_prime() {
        // Entries at k = p + 1 collapse to (1, 1).
        for p in [3u64, 5, 7, 11] {
            let t = uv_table_mod(p as u32 + 2, p).unwrap();
            assert_eq!(t.get(p as u32 + 1).u, Integer::one(), "p={p}");
            assert_eq!(t.get(p as u32 + 1).v, Integer::one(), "p={p}");
        }
        // Spot values mod 3: u_4 = -2 == 1, v_4 = -5 == 1, u_5 = 9 == 0.
        let t = uv_table_mod(5, 3).unwrap();
        assert_eq!(t.get(4).u, Integer::one());
        assert_eq!(t.get(4).v, Integer::one());
        assert_eq!(t.get(5).u, Integer::zero());
    }

    #[test]
    fn mod_table_rejects_composite_modulus() {
        assert!(matches!(
            uv_table_mod(5, 10),
            Err(Error::NotPrime { n: 10 })
        ));
    }

    #[test]
    fn sum_vector_fixed_values() {
        let s = sum_vector(5, 1, Sign::Plus);
        assert_eq!(s.values[1], Integer::from(119));
        let s = sum_vector(4, 2, Sign::Minus);
        assert_eq!(s.values[2], Integer::from(-47));
        let s = sum_vector(6, 2, Sign::Plus);
        assert_eq!(s.values[2], Integer::from(3447));
    }

    #[test]
    fn sum_vector_at_n_zero_is_zero() {
        for eps in [Sign::Plus, Sign::Minus] {
            let s = sum_vector(0, 8, eps);
            assert!(s.values.iter().all(|x| x.is_zero()), "eps={eps}");
        }
    }
}
