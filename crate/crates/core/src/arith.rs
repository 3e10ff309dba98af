//! Number-theoretic primitives: factorization, radicals, valuations,
//! multiplicative orders, totients and the `n = w^e * n1 * n2` split used by
//! the explicit factorization.
//!
//! All quantities are `u128`; anything that would overflow is reported as
//! [`Error::Overflow`] instead of wrapping.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Nonnegative integer used for every exponent, order and gcd.
pub type Nat = u128;

/// Primes below this bound are found by trial division before Pollard rho.
const TRIAL_DIVISION_LIMIT: Nat = 1_000_000;

pub fn gcd(mut a: Nat, mut b: Nat) -> Nat {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: Nat, b: Nat) -> Result<Nat> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

pub fn checked_pow(base: Nat, exp: u32) -> Result<Nat> {
    base.checked_pow(exp).ok_or(Error::Overflow("power"))
}

fn add_mod(a: Nat, b: Nat, m: Nat) -> Nat {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `a * b mod m` without overflow for any `m < 2^128`.
pub fn mul_mod(a: Nat, b: Nat, m: Nat) -> Nat {
    let (a, b) = (a % m, b % m);
    if m <= u64::MAX as Nat {
        return a * b % m;
    }
    let mut acc = 0;
    let mut base = a;
    let mut e = b;
    while e > 0 {
        if e & 1 == 1 {
            acc = add_mod(acc, base, m);
        }
        base = add_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub fn pow_mod(base: Nat, mut exp: Nat, m: Nat) -> Nat {
    if m == 1 {
        return 0;
    }
    let mut result = 1;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

const SMALL_PRIMES: [Nat; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Strong probable-prime test with the first twenty prime bases.
///
/// Deterministic below 3.3 * 10^24; above that it is a fixed-base test.
pub fn is_prime(n: Nat) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn diff(a: Nat, b: Nat) -> Nat {
    a.abs_diff(b)
}

/// Brent's cycle-finding variant of Pollard rho. `n` must be odd and composite.
fn rho_split(n: Nat) -> Nat {
    // c = 1, 2, 3, ... is the fixed seed sequence
    for c in 1.. {
        let f = |x: Nat| add_mod(mul_mod(x, x, n), c % n, n);
        let mut y: Nat = 2;
        let mut r: u64 = 1;
        let mut q: Nat = 1;
        let mut g: Nat = 1;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, diff(x, y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(diff(x, ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_into(n: Nat, out: &mut Vec<Nat>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho_split(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization with primes in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredNat {
    value: Nat,
    factors: Vec<(Nat, u32)>,
}

impl FactoredNat {
    /// Build from `(prime, exponent)` pairs; the pairs are sorted and merged.
    pub fn from_factors(mut factors: Vec<(Nat, u32)>) -> Result<Self> {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable();
        let mut merged: Vec<(Nat, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        let mut value: Nat = 1;
        for &(p, e) in &merged {
            value = value
                .checked_mul(checked_pow(p, e)?)
                .ok_or(Error::Overflow("factored value"))?;
        }
        Ok(FactoredNat {
            value,
            factors: merged,
        })
    }

    pub fn value(&self) -> Nat {
        self.value
    }

    pub fn factors(&self) -> &[(Nat, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = Nat> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in this number (0 when absent).
    pub fn exponent_of(&self, p: Nat) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<Nat> {
        let mut divs = vec![1];
        for &(p, e) in &self.factors {
            let current = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..current {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Exact prime factorization: trial division up to 10^6, then Pollard rho.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn factorize(n: Nat) -> FactoredNat {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |p: Nat, rest: &mut Nat| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut d: Nat = 5;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= rest {
        push(d, &mut rest);
        push(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        let mut big = Vec::new();
        factor_into(rest, &mut big);
        big.sort_unstable();
        for p in big {
            match factors.last_mut() {
                Some((last, e)) if *last == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    factors.sort_unstable();
    FactoredNat { value: n, factors }
}

/// Product of the distinct primes of `n`.
pub fn radical(n: &FactoredNat) -> Nat {
    n.primes().product()
}

/// Largest `e` with `p^e | n`.
pub fn valuation(p: Nat, n: Nat) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(format!("valuation of 0 at {p}")));
    }
    let mut n = n;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// 2-adic valuation of a positive integer.
pub fn v2(n: Nat) -> u32 {
    debug_assert!(n > 0);
    n.trailing_zeros()
}

/// Euler's totient computed from the factorization.
pub fn euler_phi(n: &FactoredNat) -> Nat {
    n.factors()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Multiplicative order of `q` modulo `m`.
///
/// Starts from the factored totient and strips prime factors while the
/// reduced exponent still maps `q` to 1, so no iteration over the group
/// happens.
pub fn mult_order(q: Nat, m: Nat) -> Result<Nat> {
    if m == 0 {
        return Err(Error::InvalidArgument("order modulo 0".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    if gcd(q % m, m) != 1 {
        return Err(Error::NotCoprime { a: q, b: m });
    }
    let fm = factorize(m);
    let mut group = Vec::new();
    for &(p, e) in fm.factors() {
        if e > 1 {
            group.push((p, e - 1));
        }
        group.extend(factorize(p - 1).factors().iter().copied());
    }
    let group = FactoredNat::from_factors(group)?;
    let mut order = group.value();
    for &(r, e) in group.factors() {
        for _ in 0..e {
            if pow_mod(q, order / r, m) == 1 {
                order /= r;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Decomposition `n = w^w_exponent * n1 * n2`.
///
/// `rad(n1) | q - 1` and `rad(n2) | (q^w - 1)/(q - 1)`. For odd `w` the whole
/// `w`-part of `n` sits in the first slot; for `w = 2` the 2-part does and
/// `n1`, `n2` are odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadicalSplit {
    pub w_exponent: u32,
    pub n1: Nat,
    pub n2: Nat,
}

pub fn radical_split(n: Nat, q: Nat, w: Nat) -> Result<RadicalSplit> {
    if n == 0 || q < 2 || w == 0 {
        return Err(Error::InvalidArgument(format!(
            "radical_split(n={n}, q={q}, w={w})"
        )));
    }
    if gcd(n, q) != 1 {
        return Err(Error::NotCoprime { a: n, b: q });
    }
    let w32 = u32::try_from(w).map_err(|_| Error::Overflow("w"))?;
    let qw = checked_pow(q, w32)?;
    let base = q - 1;
    let cofactor = (qw - 1) / base;
    let mut split = RadicalSplit {
        w_exponent: 0,
        n1: 1,
        n2: 1,
    };
    for &(p, e) in factorize(n).factors() {
        let pe = p.pow(e);
        if w > 1 && p == w && (w == 2 || (base.is_multiple_of(p) && cofactor.is_multiple_of(p))) {
            split.w_exponent = e;
        } else if base.is_multiple_of(p) {
            split.n1 *= pe;
        } else if cofactor.is_multiple_of(p) {
            split.n2 *= pe;
        } else {
            return Err(Error::RadicalNotDividing { n, q, w });
        }
    }
    Ok(split)
}
