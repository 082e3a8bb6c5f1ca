//! Exact integer arithmetic: factorials, binomials, gcd, signs, and
//! residues to an arbitrary modulus.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer used throughout the crate.
pub type Integer = BigInt;

/// The sign eps = +1 or -1 weighting each series term as eps^i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// eps^exp, reduced by parity.
    pub fn pow(self, exp: u64) -> Sign {
        if exp % 2 == 0 {
            Sign::Plus
        } else {
            self
        }
    }

    /// eps^(n-1), read at n = 0 as eps^(-1) = eps. Same parity as eps^(n+1).
    pub fn pow_pred(self, n: u64) -> Sign {
        self.pow(n + 1)
    }

    /// x negated when the sign is minus.
    pub fn apply(self, x: Integer) -> Integer {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            _ => Err(format!("expected +1 or -1, got {s:?}")),
        }
    }
}

/// n! computed by iterated multiplication.
///
/// # Examples
///
/// ```
/// use factsum::exact::{factorial, Integer};
/// assert_eq!(factorial(5), Integer::from(120));
/// ```
pub fn factorial(n: u64) -> Integer {
    let mut acc = Integer::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient C(n, k), exact, via the multiplicative formula.
/// Every intermediate division is exact.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Greatest common divisor by the Euclidean algorithm on magnitudes.
/// Rejects gcd(0, 0), which has no greatest element.
pub fn gcd(a: &Integer, b: &Integer) -> Result<Integer> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    Ok(a)
}

/// Canonical residue of x in [0, m). The modulus must be at least 2.
pub fn mod_reduce(x: &Integer, m: &Integer) -> Integer {
    debug_assert!(*m >= Integer::from(2));
    let r = x % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

/// Canonical residue of x mod a machine-word modulus.
pub fn mod_u64(x: &Integer, m: u64) -> u64 {
    mod_reduce(x, &Integer::from(m)).to_u64().unwrap()
}

/// An exact residue class to a fixed modulus m >= 2. The modulus may be
/// composite; factorial moduli are the main composite use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    value: Integer,
    modulus: Integer,
}

impl Residue {
    /// Reduces value into [0, modulus). Panics when modulus < 2.
    pub fn new(value: &Integer, modulus: &Integer) -> Residue {
        assert!(
            *modulus >= Integer::from(2),
            "residue modulus must be at least 2"
        );
        Residue {
            value: mod_reduce(value, modulus),
            modulus: modulus.clone(),
        }
    }

    pub fn value(&self) -> &Integer {
        &self.value
    }

    pub fn modulus(&self) -> &Integer {
        &self.modulus
    }

    fn check_same_modulus(&self, rhs: &Residue) {
        assert_eq!(
            self.modulus, rhs.modulus,
            "residue arithmetic requires a common modulus"
        );
    }

    pub fn add(&self, rhs: &Residue) -> Residue {
        self.check_same_modulus(rhs);
        Residue::new(&(&self.value + &rhs.value), &self.modulus)
    }

    pub fn sub(&self, rhs: &Residue) -> Residue {
        self.check_same_modulus(rhs);
        Residue::new(&(&self.value - &rhs.value), &self.modulus)
    }

    pub fn mul(&self, rhs: &Residue) -> Residue {
        self.check_same_modulus(rhs);
        Residue::new(&(&self.value * &rhs.value), &self.modulus)
    }

    pub fn neg(&self) -> Residue {
        Residue::new(&(-&self.value), &self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), Integer::one());
        assert_eq!(factorial(1), Integer::one());
        assert_eq!(factorial(5), Integer::from(120));
        assert_eq!(factorial(10), Integer::from(3_628_800));
        assert_eq!(factorial(20), Integer::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn binomial_fixed_values() {
        assert_eq!(binomial(10, 4), Integer::from(210));
        assert_eq!(binomial(6, 0), Integer::one());
        assert_eq!(binomial(6, 6), Integer::one());
        assert_eq!(binomial(5, 7), Integer::zero());
        assert_eq!(binomial(52, 5), Integer::from(2_598_960));
    }

    #[test]
    fn gcd_fixed_values() {
        let g = gcd(&Integer::from(34), &Integer::from(120)).unwrap();
        assert_eq!(g, Integer::from(2));
        let g = gcd(&Integer::from(-34), &Integer::from(120)).unwrap();
        assert_eq!(g, Integer::from(2));
        let g = gcd(&Integer::zero(), &Integer::from(7)).unwrap();
        assert_eq!(g, Integer::from(7));
        assert!(matches!(
            gcd(&Integer::zero(), &Integer::zero()),
            Err(Error::GcdOfZeros)
        ));
    }

    #[test]
    fn gcd_of_consecutive_integers_is_one_and_cheap() {
        // n! and n! - 1 are consecutive, so Euclid needs two steps even
        // for large n.
        let f = factorial(2000);
        let g = gcd(&(&f - 1), &f).unwrap();
        assert_eq!(g, Integer::one());
    }

    #[test]
    fn sign_powers() {
        assert_eq!(Sign::Minus.pow(0), Sign::Plus);
        assert_eq!(Sign::Minus.pow(3), Sign::Minus);
        assert_eq!(Sign::Plus.pow(7), Sign::Plus);
        // eps^(n-1) at n = 0 is eps^(-1) = eps.
        assert_eq!(Sign::Minus.pow_pred(0), Sign::Minus);
        assert_eq!(Sign::Minus.pow_pred(1), Sign::Plus);
        assert_eq!(Sign::Minus.pow_pred(4), Sign::Minus);
    }

    #[test]
    fn residue_reduction_is_canonical() {
        let m = Integer::from(7);
        let r = Residue::new(&Integer::from(-3), &m);
        assert_eq!(*r.value(), Integer::from(4));
        let r = Residue::new(&Integer::from(23), &m);
        assert_eq!(*r.value(), Integer::from(2));
    }

    #[test]
    fn residue_ops_match_integer_ops() {
        let m = Integer::from(720);
        let a = Residue::new(&Integer::from(519), &m);
        let b = Residue::new(&Integer::from(-77), &m);
        assert_eq!(*a.add(&b).value(), mod_reduce(&Integer::from(519 - 77), &m));
        assert_eq!(*a.sub(&b).value(), mod_reduce(&Integer::from(519 + 77), &m));
        assert_eq!(
            *a.mul(&b).value(),
            mod_reduce(&Integer::from(519i64 * -77), &m)
        );
        assert_eq!(*a.neg().value(), mod_reduce(&Integer::from(-519), &m));
    }

    #[test]
    #[should_panic(expected = "modulus must be at least 2")]
    fn residue_rejects_unit_modulus() {
        Residue::new(&Integer::from(5), &Integer::one());
    }
}
