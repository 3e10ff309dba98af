mod common;

use cyclofactor_core::arith::{
    checked_pow, euler_phi, factorize, gcd, mult_order, radical, radical_split, valuation, Nat,
};
use proptest::prelude::*;

#[test]
fn radical_split_round_trips_on_the_grid() {
    for (q, n, case) in common::acceptance_grid() {
        let split = radical_split(n, q, case.w).unwrap();
        let we = if case.w > 1 { case.w.pow(split.w_exponent) } else { 1 };
        assert_eq!(we * split.n1 * split.n2, n, "q={q} n={n}");
        assert_eq!(gcd(split.n1, split.n2), 1);
        assert_eq!((q - 1) % radical(&factorize(split.n1)), 0);
        if case.w > 1 {
            let b = (checked_pow(q, case.w as u32).unwrap() - 1) / (q - 1);
            assert_eq!(b % radical(&factorize(split.n2)), 0);
            assert_eq!(gcd(case.w, split.n1 * split.n2), 1);
        }
        if case.w == 2 {
            assert_eq!(split.n1 % 2, 1);
            assert_eq!(split.n2 % 2, 1);
        }
    }
}

#[test]
fn radical_split_examples() {
    let s = radical_split(104, 3, 3).unwrap();
    assert_eq!((s.w_exponent, s.n1, s.n2), (0, 8, 13));
    let s = radical_split(7, 2, 3).unwrap();
    assert_eq!((s.w_exponent, s.n1, s.n2), (0, 1, 7));
    let s = radical_split(1, 5, 2).unwrap();
    assert_eq!((s.w_exponent, s.n1, s.n2), (0, 1, 1));
    // 5 divides neither 2 - 1 nor 2^3 - 1
    assert!(radical_split(35, 2, 3).is_err());
}

#[test]
fn phi_examples() {
    for (n, phi) in [(1u128, 1u128), (13, 12), (104, 48)] {
        assert_eq!(euler_phi(&factorize(n)), phi);
    }
}

proptest! {
    #[test]
    fn factorize_multiplies_back(n in 1u128..(1u128 << 80)) {
        let f = factorize(n);
        let back = f.factors().iter().fold(1u128, |acc, &(p, e)| acc * p.pow(e));
        prop_assert_eq!(back, n);
        for &(p, e) in f.factors() {
            prop_assert_eq!(valuation(p, n).unwrap(), e);
        }
    }

    #[test]
    fn mult_order_is_minimal(q in 2u128..1000, m in 2u128..5000) {
        prop_assume!(gcd(q, m) == 1);
        let k = mult_order(q, m).unwrap();
        prop_assert_eq!(cyclofactor_core::arith::pow_mod(q, k, m), 1);
        for d in factorize(k).primes() {
            prop_assert_ne!(cyclofactor_core::arith::pow_mod(q, k / d, m), 1);
        }
    }
}

#[test]
fn u128_limits_are_reported() {
    assert!(checked_pow(2, 128).is_err());
    let n: Nat = (1u128 << 61) - 1; // Mersenne prime
    assert_eq!(factorize(n).factors(), &[(n, 1)]);
}
