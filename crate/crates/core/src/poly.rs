//! Closed-form polynomials for alternating factorial power sums.
//!
//! For each k >= 1 and eps = +/-1 there is exactly one monic integer
//! polynomial A of degree k - 1 satisfying
//!
//! ```text
//! (n + 1) A(n + 1) - eps A(n) = n^k + u      for all n,
//! ```
//!
//! and then sum_{i<n} eps^i i! (i^k + u) = v + eps^(n-1) n! A(n) with
//! u = A(1) - eps A(0) and v = -eps A(0). Matching coefficients of n^m
//! gives a unit-triangular linear system in the coefficients of A, solved
//! here by forward substitution from the leading coefficient down.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, Integer, Sign};

/// The pair of integer constants attached to power k: u completes the
/// summand i^k + u, v is the constant term of the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UvEntry {
    pub k: u32,
    pub eps: Sign,
    pub u: Integer,
    pub v: Integer,
}

/// Monic integer polynomial of degree k - 1 tied to power k and sign eps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    /// Coefficients from constant term up; length k, leading entry 1.
    coeffs: Vec<Integer>,
    eps: Sign,
}

impl Polynomial {
    /// Solves the coefficient system for power k >= 1.
    ///
    /// Coefficient a[k-1] = 1 is forced; each lower coefficient follows
    /// from one row: a[m-1] = eps a[m] - sum_{j=m}^{k-1} C(j+1, m) a[j].
    pub fn solve(k: u32, eps: Sign) -> Polynomial {
        assert!(k >= 1, "power k must be at least 1");
        let k = k as usize;
        let mut a = vec![Integer::zero(); k];
        a[k - 1] = Integer::one();
        for m in (1..k).rev() {
            let mut s = Integer::zero();
            for j in m..k {
                s += binomial(j as u64 + 1, m as u64) * &a[j];
            }
            a[m - 1] = eps.apply(a[m].clone()) - s;
        }
        Polynomial { coeffs: a, eps }
    }

    /// Wraps explicit coefficients (constant term first). The polynomial
    /// must be monic and non-empty.
    pub fn from_coeffs(coeffs: Vec<Integer>, eps: Sign) -> Result<Polynomial> {
        if coeffs.last().map(|c| c.is_one()) != Some(true) {
            return Err(Error::NotMonic);
        }
        Ok(Polynomial { coeffs, eps })
    }

    /// The power k this polynomial serves (= number of coefficients).
    pub fn power(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    /// Coefficients from constant term up.
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, n: &Integer) -> Integer {
        let mut acc = Integer::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    /// u = A(1) - eps A(0) and v = -eps A(0).
    pub fn uv(&self) -> UvEntry {
        let a1 = self.eval(&Integer::one());
        let a0 = self.eval(&Integer::zero());
        UvEntry {
            k: self.power(),
            eps: self.eps,
            u: a1 - self.eps.apply(a0.clone()),
            v: -self.eps.apply(a0),
        }
    }

    /// Checks (n+1) A(n+1) - eps A(n) = n^k + u for every n in 0..=n_max,
    /// with u read off this polynomial.
    pub fn identity_holds_to(&self, n_max: u64) -> bool {
        let u = self.uv().u;
        let k = self.power();
        for n in 0..=n_max {
            let nb = Integer::from(n);
            let lhs = (&nb + 1) * self.eval(&(&nb + 1)) - self.eps.apply(self.eval(&nb));
            let rhs = (&nb).pow(k) + &u;
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Polynomial {
    /// Renders like "n^2 - 2n - 1", highest power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let mag = if c < &Integer::zero() { -c.clone() } else { c.clone() };
            if wrote {
                write!(f, " {} ", if c < &Integer::zero() { "-" } else { "+" })?;
            } else if c < &Integer::zero() {
                write!(f, "-")?;
            }
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if j == 1 {
                        write!(f, "n")?;
                    } else {
                        write!(f, "n^{j}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}
