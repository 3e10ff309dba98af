use std::collections::BTreeSet;
use std::sync::Arc;

use cyclofactor_core::arith::Nat;
use cyclofactor_core::field::prime_power;
use cyclofactor_core::{build_tower, find_primitive_polynomial, FieldContext, Limits, Polynomial};

fn field(q: Nat) -> Arc<FieldContext> {
    let (p, s) = prime_power(q).unwrap();
    Arc::new(find_primitive_polynomial(p, s as usize, 1 << 63).unwrap())
}

#[test]
fn ring_examples() {
    let f2 = field(2);
    let x1 = Polynomial::from_ints(f2.clone(), &[1, 1]);
    assert_eq!(x1.mul(&x1).unwrap(), Polynomial::from_ints(f2.clone(), &[1, 0, 1]));
    let f5 = field(5);
    let a = Polynomial::from_ints(f5.clone(), &[4, 0, 1]);
    let b = Polynomial::from_ints(f5.clone(), &[4, 1]);
    assert_eq!(a.gcd(&b).unwrap(), b);
    let x7 = Polynomial::x_n_minus_one(f2.clone(), 7);
    let c = Polynomial::from_ints(f2.clone(), &[1, 1, 0, 1]);
    let (quot, rem) = x7.divrem(&c).unwrap();
    assert!(rem.is_zero());
    assert_eq!(quot.mul(&c).unwrap(), x7);
    assert!(x7.divrem(&Polynomial::zero(f2)).is_err());
}

#[test]
fn pow_mod_examples() {
    let f2 = field(2);
    let x = Polynomial::x(f2.clone());
    let f = Polynomial::from_ints(f2.clone(), &[1, 1, 1]);
    assert_eq!(x.pow_mod(4, &f).unwrap(), x);
    assert_eq!(x.pow_mod(1, &f).unwrap(), x);
    assert_eq!(x.pow_mod(2, &f).unwrap(), Polynomial::from_ints(f2.clone(), &[1, 1]));
    // x^{q^d} = x modulo an irreducible of degree d over F_9
    let f9 = field(9);
    let g = Polynomial::from_coeffs(f9.clone(), vec![f9.x(), f9.one(), f9.zero(), f9.one()]).unwrap();
    assert!(cyclofactor_core::is_irreducible(&g, 9));
    let x9 = Polynomial::x(f9.clone());
    assert_eq!(x9.pow_mod(729, &g).unwrap(), x9);
}

#[test]
fn frobenius_examples() {
    let t = build_tower(2, 1, 3, &Limits::default()).unwrap();
    let big = t.big().clone();
    let lin = Polynomial::from_coeffs(big.clone(), vec![big.neg(t.delta()), big.one()]).unwrap();
    let conj = lin.frobenius_coeffs(2);
    assert_eq!(conj.coeff(0), big.neg(&big.pow(t.delta(), 2)));
    let mut f = lin.clone();
    for _ in 0..3 {
        f = f.frobenius_coeffs(2);
    }
    assert_eq!(f, lin);
    let fixed = Polynomial::x_n_minus_one(big, 5);
    assert_eq!(fixed.frobenius_coeffs(2), fixed);
}

#[test]
fn rendering() {
    let f2 = field(2);
    assert_eq!(Polynomial::from_ints(f2, &[1, 1, 0, 1]).render(), "x^3 + x + 1");
    let f9 = field(9);
    let two_one = f9.add(&f9.from_int(2), &f9.x());
    let g = Polynomial::from_coeffs(f9.clone(), vec![f9.x(), two_one, f9.one()]).unwrap();
    assert_eq!(g.render(), "x^2 + (2,1)*x + (0,1)");
    assert_eq!(Polynomial::zero(f9).render(), "0");
}

#[test]
fn keys_injective_up_to_degree_three() {
    for q in [2u128, 3, 4, 5, 7, 8, 9] {
        let ctx = field(q);
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for d in 0..=3u32 {
            for code in 0..q.pow(d) {
                let mut coeffs = Vec::new();
                let mut c = code;
                for _ in 0..d {
                    coeffs.push(ctx.from_encoding(c % q));
                    c /= q;
                }
                coeffs.push(ctx.one());
                let f = Polynomial::from_coeffs(ctx.clone(), coeffs).unwrap();
                seen.insert(f.canonical_key());
                count += 1;
            }
        }
        assert_eq!(seen.len(), count, "q={q}");
    }
}
