//! Property tests tying the independent computation routes to each other.
//!
//! Most invariants here have two or more implementations in the crate: a
//! brute-force sum against a closed form, a recurrence against a solved
//! polynomial, word arithmetic against bignum reduction. The properties
//! assert the routes agree on random inputs, so a bug has to hit both
//! sides identically to slip through.

use proptest::prelude::*;
use proptest::sample::select;

use num_traits::Zero;

use factsum::exact::{factorial, mod_reduce, mod_u64, Residue, Sign};
use factsum::kurepa::{
    congruence_mod_factorial, kh_gcd_check, left_factorial_mod, residues_for_prime,
    uv_shift_check, uv_wraparound_check, weighted_sum_check, weighted_sum_scan,
};
use factsum::padic::{series_digits, PadicExpansion};
use factsum::poly::Polynomial;
use factsum::primes::primes_in;
use factsum::seq::{sum_vector, uv_table, uv_table_eps, uv_table_mod};
use factsum::sums::{brute_sum_power, verify_closed_form};
use factsum::Integer;

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn odd_primes_below(hi: u64) -> Vec<u64> {
    primes_in(3, hi).collect()
}

proptest! {
    #[test]
    fn closed_form_matches_brute_sum(n in 0u64..=80, k in 1u32..=12, eps in sign()) {
        let verdict = verify_closed_form(n, k, eps);
        prop_assert!(verdict.matched, "lhs {} rhs {}", verdict.lhs, verdict.rhs);
    }

    #[test]
    fn solved_polynomial_satisfies_its_identity(k in 1u32..=10, eps in sign()) {
        prop_assert!(Polynomial::solve(k, eps).identity_holds_to(60));
    }

    #[test]
    fn perturbed_polynomial_fails_the_identity(
        k in 2u32..=8,
        idx in 0usize..7,
        delta in 1i64..=5,
        eps in sign(),
    ) {
        let poly = Polynomial::solve(k, eps);
        let mut coeffs = poly.coeffs().to_vec();
        let idx = idx % (coeffs.len() - 1);
        coeffs[idx] += delta;
        let tampered = Polynomial::from_coeffs(coeffs, eps).unwrap();
        prop_assert!(!tampered.identity_holds_to(k as u64 + 1));
    }

    #[test]
    fn sum_vector_components_match_brute_sums(n in 0u64..=50, k_max in 0u32..=10, eps in sign()) {
        let vector = sum_vector(n, k_max, eps);
        for k in 0..=k_max {
            prop_assert_eq!(
                &vector.values[k as usize],
                &brute_sum_power(n, k, eps),
                "k = {}", k
            );
        }
    }

    #[test]
    fn sum_vector_recombines_into_the_closed_form(n in 0u64..=60, k in 1u32..=12, eps in sign()) {
        let vector = sum_vector(n, k, eps);
        let entry = Polynomial::solve(k, eps).uv();
        let lhs = &vector.values[k as usize] + &entry.u * &vector.values[0];
        let rhs = entry.v
            + eps
                .pow_pred(n)
                .apply(factorial(n) * Polynomial::solve(k, eps).eval(&Integer::from(n)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn uv_recurrences_match_the_polynomial_route(k_max in 1u32..=25) {
        let by_recurrence = uv_table(k_max);
        let by_polynomial = uv_table_eps(k_max, Sign::Plus);
        for k in 1..=k_max {
            prop_assert_eq!(&by_recurrence.get(k).u, &by_polynomial.get(k).u, "u_{}", k);
            prop_assert_eq!(&by_recurrence.get(k).v, &by_polynomial.get(k).v, "v_{}", k);
        }
    }

    #[test]
    fn uv_mod_table_matches_exact_reduction(
        k_max in 1u32..=40,
        p in select(odd_primes_below(200)),
    ) {
        let exact = uv_table(k_max);
        let modular = uv_table_mod(k_max, p).unwrap();
        for k in 1..=k_max {
            prop_assert_eq!(mod_u64(&exact.get(k).u, p), mod_u64(&modular.get(k).u, p), "u_{}", k);
            prop_assert_eq!(mod_u64(&exact.get(k).v, p), mod_u64(&modular.get(k).v, p), "v_{}", k);
        }
    }

    #[test]
    fn summand_total_is_v_modulo_the_factorial(n in 1u64..=35, k in 1u32..=10, eps in sign()) {
        prop_assert!(congruence_mod_factorial(n, k, eps));
    }
}

proptest! {
    #[test]
    fn residue_wrapper_matches_direct_reduction(
        a in -10_000i64..=10_000,
        b in -10_000i64..=10_000,
        m in 2i64..=999,
    ) {
        let (a, b, m) = (Integer::from(a), Integer::from(b), Integer::from(m));
        let ra = Residue::new(&a, &m);
        let rb = Residue::new(&b, &m);
        let (sum, diff, prod, neg) = (ra.add(&rb), ra.sub(&rb), ra.mul(&rb), ra.neg());
        prop_assert_eq!(sum.value(), &mod_reduce(&(&a + &b), &m));
        prop_assert_eq!(diff.value(), &mod_reduce(&(&a - &b), &m));
        prop_assert_eq!(prod.value(), &mod_reduce(&(&a * &b), &m));
        prop_assert_eq!(neg.value(), &mod_reduce(&(-&a), &m));
    }

    #[test]
    fn padic_expansion_reconstructs_the_residue(
        x in any::<i64>(),
        p in select(vec![2u64, 3, 5, 7, 11, 13]),
        m in 1u32..=10,
    ) {
        let x = Integer::from(x);
        let expansion = PadicExpansion::of_integer(&x, p, m);
        prop_assert_eq!(expansion.digits.len(), m as usize);
        let mut acc = Integer::zero();
        for &d in expansion.digits.iter().rev() {
            prop_assert!(d < p);
            acc = acc * p + d;
        }
        let modulus = Integer::from(p).pow(m);
        prop_assert_eq!(acc, mod_reduce(&x, &modulus));
    }

    #[test]
    fn series_digits_are_prefix_stable(
        k in 1u32..=8,
        p in select(vec![3u64, 5, 7, 11, 13]),
        m in 1u32..=10,
        eps in sign(),
    ) {
        let shorter = series_digits(k, eps, p, m).unwrap();
        let longer = series_digits(k, eps, p, m + 1).unwrap();
        prop_assert_eq!(&shorter.digits[..], &longer.digits[..m as usize]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_loop_agrees_with_the_plain_left_factorial(p in select(odd_primes_below(3000))) {
        let profile = residues_for_prime(p, &[0, 2, 3, 4], None).unwrap();
        prop_assert_eq!(profile.residues[&0], left_factorial_mod(p));
        prop_assert!(profile.internal_consistency());
    }

    #[test]
    fn wraparound_and_shift_identities_hold(p in select(odd_primes_below(1000))) {
        prop_assert!(uv_wraparound_check(p, 1000).unwrap());
        prop_assert!(uv_shift_check(p).unwrap());
    }

    #[test]
    fn weighted_sum_scan_agrees_with_single_checks(lo in 2u64..=60, span in 0u64..=25) {
        let scanned: Vec<_> = weighted_sum_scan(lo, lo + span).collect();
        prop_assert_eq!(scanned.len() as u64, span);
        for (n, verdict) in scanned {
            let verdict = verdict.unwrap();
            let direct = weighted_sum_check(n).unwrap();
            prop_assert_eq!(verdict, direct, "n = {}", n);
        }
    }

    #[test]
    fn factorial_gcd_stays_at_two(n in 2u64..=150) {
        prop_assert!(kh_gcd_check(n).unwrap());
    }
}
