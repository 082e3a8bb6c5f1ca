//! Exact arithmetic for alternating factorial power sums.
//!
//! The central identity: for every k >= 1 and eps = +/-1 there are integer
//! constants u_k, v_k and a monic integer polynomial A of degree k - 1 with
//!
//! ```text
//! sum_{i=0}^{n-1} eps^i i! (i^k + u_k) = v_k + eps^(n-1) n! A(n).
//! ```
//!
//! Around it this crate provides:
//!
//! * [`poly`]: solving for A and reading off (u_k, v_k);
//! * [`seq`]: recurrence routes to whole u/v tables (exact or mod p) and
//!   to vectors of power sums;
//! * [`sums`]: brute-force evaluation and closed-form cross-checks,
//!   including arbitrary integer combinations of powers;
//! * [`kurepa`]: left-factorial congruences; the identity read mod p makes
//!   sum i! i^k mod p a proxy for !p mod p, giving equivalent forms of the
//!   conjecture gcd(!n, n!) = 2;
//! * [`scan`]: a deterministic parallel scanner hunting for violations of
//!   those congruences across prime ranges, with checkpoint/resume;
//! * [`padic`]: the same series in Z_p, where it converges to v_k, with
//!   digit expansions and convergence profiles.
//!
//! # Examples
//!
//! ```
//! use factsum::exact::{Integer, Sign};
//! use factsum::poly::Polynomial;
//!
//! let p = Polynomial::solve(3, Sign::Plus);
//! assert_eq!(p.to_string(), "n^2 - 2n - 1");
//! let e = p.uv();
//! assert_eq!(e.u, Integer::from(-1));
//! assert_eq!(e.v, Integer::from(1));
//! ```
//!
//! ```
//! use factsum::exact::Sign;
//! use factsum::sums::verify_closed_form;
//!
//! let verdict = verify_closed_form(7, 4, Sign::Plus);
//! assert!(verdict.matched);
//! assert_eq!(verdict.lhs, verdict.rhs);
//! ```

pub mod error;
pub mod exact;
pub mod kurepa;
pub mod padic;
pub mod poly;
pub mod primes;
pub mod scan;
pub mod seq;
pub mod sums;

pub use error::{Error, Result};
pub use exact::{Integer, Residue, Sign};
pub use poly::{Polynomial, UvEntry};
pub use scan::{ScanOptions, ScanReport};
