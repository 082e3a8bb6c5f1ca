//! Brute-force evaluation of the factorial power sums and cross-checks of
//! their closed forms. Everything here recomputes sums term by term; the
//! closed-form side always comes from the polynomial route, so a verdict
//! compares two genuinely independent computations.

use num_traits::{One, Pow, Zero};
use rand::Rng;

use crate::exact::{factorial, Integer, Sign};
use crate::poly::Polynomial;

/// Outcome of one identity check: both sides exactly, plus the parameters
/// that produced them.
#[derive(Clone, Debug)]
pub struct SumVerdict {
    pub case: String,
    pub n: u64,
    pub eps: Sign,
    pub lhs: Integer,
    pub rhs: Integer,
    pub matched: bool,
}

impl SumVerdict {
    fn new(case: String, n: u64, eps: Sign, lhs: Integer, rhs: Integer) -> SumVerdict {
        let matched = lhs == rhs;
        SumVerdict {
            case,
            n,
            eps,
            lhs,
            rhs,
            matched,
        }
    }
}

/// sum_{i<n} eps^i i! i^k by direct accumulation, with 0^0 = 1.
pub fn brute_sum_power(n: u64, k: u32, eps: Sign) -> Integer {
    let mut acc = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        let pw = if i == 0 && k == 0 {
            Integer::one()
        } else {
            Integer::from(i).pow(k)
        };
        acc += eps.pow(i).apply(&f * pw);
        f *= i + 1;
    }
    acc
}

/// Checks sum_{i<n} eps^i i! (i^k + u) = v + eps^(n-1) n! A(n) for one
/// (n, k, eps): the left side by brute accumulation, the right side from
/// the solved polynomial.
pub fn verify_closed_form(n: u64, k: u32, eps: Sign) -> SumVerdict {
    assert!(k >= 1, "power k must be at least 1");
    let p = Polynomial::solve(k, eps);
    let entry = p.uv();
    let mut lhs = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        let pw = Integer::from(i).pow(k);
        lhs += eps.pow(i).apply(&f * (pw + &entry.u));
        f *= i + 1;
    }
    let rhs = &entry.v
        + eps
            .pow_pred(n)
            .apply(factorial(n) * p.eval(&Integer::from(n)));
    SumVerdict::new(format!("closed form k={k}"), n, eps, lhs, rhs)
}

/// Coefficients C_1..C_K of a summand polynomial P(i) = sum C_r i^r + C_0.
/// The constant C_0 is not free: the closed form exists exactly when
/// C_0 = sum C_r u_r, and that derived value depends on eps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPolySpec {
    coeffs: Vec<Integer>,
}

impl GeneralPolySpec {
    /// Takes C_1..C_K in order; K must be at least 1.
    pub fn new(coeffs: Vec<Integer>) -> GeneralPolySpec {
        assert!(!coeffs.is_empty(), "need at least one coefficient");
        GeneralPolySpec { coeffs }
    }

    /// Uniform random coefficients with |C_r| <= coeff_bound and
    /// 1 <= K <= k_max.
    pub fn random(rng: &mut impl Rng, k_max: u32, coeff_bound: i64) -> GeneralPolySpec {
        let k = rng.gen_range(1..=k_max);
        let coeffs = (0..k)
            .map(|_| Integer::from(rng.gen_range(-coeff_bound..=coeff_bound)))
            .collect();
        GeneralPolySpec { coeffs }
    }

    pub fn k_max(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// C_1..C_K as given.
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// The forced constant term sum C_r u_r.
    pub fn derived_c0(&self, eps: Sign) -> Integer {
        self.fold(eps, |p| p.uv().u)
    }

    /// The closed form's constant sum C_r v_r.
    pub fn derived_v(&self, eps: Sign) -> Integer {
        self.fold(eps, |p| p.uv().v)
    }

    /// The closed form's polynomial factor sum C_r A_{r-1} evaluated at n.
    pub fn combined_poly_at(&self, eps: Sign, n: &Integer) -> Integer {
        self.fold(eps, |p| p.eval(n))
    }

    fn fold(&self, eps: Sign, f: impl Fn(&Polynomial) -> Integer) -> Integer {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * f(&Polynomial::solve(i as u32 + 1, eps)))
            .sum()
    }

    /// P(i) with the given constant term.
    fn summand_at(&self, c0: &Integer, i: u64) -> Integer {
        let ib = Integer::from(i);
        let mut acc = Integer::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc + c) * &ib;
        }
        acc + c0
    }
}

/// Checks sum_{i<n} eps^i i! P(i) = V + eps^(n-1) n! B(n) with
/// P, V, B all derived from the spec's coefficients.
pub fn verify_general(spec: &GeneralPolySpec, n: u64, eps: Sign) -> SumVerdict {
    let c0 = spec.derived_c0(eps);
    verify_general_with_c0(spec, &c0, n, eps)
}

/// Same check with an explicit constant term. Any c0 other than the
/// derived one must produce mismatches.
pub fn verify_general_with_c0(
    spec: &GeneralPolySpec,
    c0: &Integer,
    n: u64,
    eps: Sign,
) -> SumVerdict {
    let mut lhs = Integer::zero();
    let mut f = Integer::one();
    for i in 0..n {
        lhs += eps.pow(i).apply(&f * spec.summand_at(c0, i));
        f *= i + 1;
    }
    let rhs = spec.derived_v(eps)
        + eps
            .pow_pred(n)
            .apply(factorial(n) * spec.combined_poly_at(eps, &Integer::from(n)));
    SumVerdict::new(
        format!("general K={} c0={c0}", spec.k_max()),
        n,
        eps,
        lhs,
        rhs,
    )
}

/// The four classical identities at eps = +1, checked for n = 0..=n_max
/// with hand-written right sides:
///
/// ```text
/// sum i!  i        = -1 + n!
/// sum i! (i^2 + 1) =  1 + n! (n - 1)
/// sum i! (i^3 - 1) =  1 + n! (n^2 - 2n - 1)
/// sum i! (i^4 - 2) = -5 + n! (n^3 - 3n^2 + 5)
/// ```
pub fn worked_examples(n_max: u64) -> Vec<SumVerdict> {
    type Rhs = fn(&Integer, &Integer) -> Integer;
    let cases: [(&str, i64, Rhs); 4] = [
        ("i! * i", 0, |nf, _n| nf - 1),
        ("i! * (i^2 + 1)", 1, |nf, n| 1 + nf * (n - 1)),
        ("i! * (i^3 - 1)", -1, |nf, n| 1 + nf * (n * n - 2 * n - 1)),
        ("i! * (i^4 - 2)", -2, |nf, n| {
            -5 + nf * (n * n * n - 3 * n * n + 5)
        }),
    ];
    let mut out = Vec::new();
    for n in 0..=n_max {
        let nb = Integer::from(n);
        let nf = factorial(n);
        for (idx, (label, u, rhs_fn)) in cases.iter().enumerate() {
            let k = idx as u32 + 1;
            let mut lhs = Integer::zero();
            let mut f = Integer::one();
            for i in 0..n {
                lhs += &f * (Integer::from(i).pow(k) + *u);
                f *= i + 1;
            }
            out.push(SumVerdict::new(
                (*label).to_string(),
                n,
                Sign::Plus,
                lhs,
                rhs_fn(&nf, &nb),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_sums_fixed_values() {
        assert_eq!(brute_sum_power(6, 2, Sign::Plus), Integer::from(3447));
        assert_eq!(brute_sum_power(5, 1, Sign::Plus), Integer::from(119));
        assert_eq!(brute_sum_power(4, 2, Sign::Minus), Integer::from(-47));
        assert_eq!(brute_sum_power(0, 3, Sign::Plus), Integer::zero());
        // 0^0 = 1: the i = 0 term contributes 1 to the k = 0 sum.
        assert_eq!(brute_sum_power(1, 0, Sign::Plus), Integer::one());
        assert_eq!(brute_sum_power(1, 5, Sign::Plus), Integer::zero());
    }

    #[test]
    fn closed_form_fixed_case() {
        let v = verify_closed_form(7, 4, Sign::Plus);
        assert!(v.matched);
        assert_eq!(v.lhs, Integer::from(1_013_035));
        // Empty sum against eps^(-1): both sides collapse to zero.
        let v = verify_closed_form(0, 3, Sign::Minus);
        assert!(v.matched);
        assert_eq!(v.lhs, Integer::zero());
    }

    #[test]
    fn closed_form_small_grid() {
        for k in 1..=8 {
            for n in 0..=25 {
                for eps in [Sign::Plus, Sign::Minus] {
                    assert!(verify_closed_form(n, k, eps).matched, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn general_fixed_case() {
        // C_2 = C_3 = 1: sum i! (i^3 + i^2) = 2 + n! (n^2 - n - 2) at eps = +1.
        let spec = GeneralPolySpec::new(vec![
            Integer::zero(),
            Integer::one(),
            Integer::one(),
        ]);
        assert_eq!(spec.derived_c0(Sign::Plus), Integer::zero());
        assert_eq!(spec.derived_v(Sign::Plus), Integer::from(2));
        let v = verify_general(&spec, 6, Sign::Plus);
        assert!(v.matched);
        assert_eq!(v.lhs, Integer::from(20_162));
    }

    #[test]
    fn inconsistent_constant_fails() {
        let spec = GeneralPolySpec::new(vec![
            Integer::zero(),
            Integer::one(),
            Integer::one(),
        ]);
        let bad = spec.derived_c0(Sign::Plus) + 1;
        let failed = (0..=spec.k_max() as u64 + 2)
            .any(|n| !verify_general_with_c0(&spec, &bad, n, Sign::Plus).matched);
        assert!(failed);
    }

    #[test]
    fn worked_examples_hold_to_forty() {
        for v in worked_examples(40) {
            assert!(v.matched, "{} at n={}", v.case, v.n);
        }
    }

    #[test]
    fn worked_example_values_spot_checked() {
        let all = worked_examples(5);
        let at = |case: &str, n: u64| {
            all.iter()
                .find(|v| v.case == case && v.n == n)
                .unwrap()
                .lhs
                .clone()
        };
        assert_eq!(at("i! * i", 5), Integer::from(119));
        assert_eq!(at("i! * (i^3 - 1)", 4), Integer::from(169));
        assert_eq!(at("i! * (i^4 - 2)", 1), Integer::from(-2));
    }
}
