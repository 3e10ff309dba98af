//! Finite fields F_{p^d} realized as F_p[x]/(f).
//!
//! Elements are coefficient vectors in the residue basis `1, x, ..., x^{d-1}`.
//! Contexts are built deterministically: the defining polynomial is the first
//! suitable one in the integer encoding of its coefficient vector (constant
//! coefficient least significant).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, FactoredNat, Nat};
use crate::error::{Error, Result};
use crate::primepoly;

/// Default cap on `p^d` for generator-bearing contexts.
pub const DEFAULT_FIELD_BOUND: Nat = 1 << 63;

/// Primes below this bound use lazy 64-bit accumulation in products.
const SMALL_PRIME_LIMIT: u64 = 1 << 16;

/// An element of some [`FieldContext`], as residue-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coords: Vec<u64>,
}

impl FieldElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `"(c0,c1,...)"`.
    pub fn render(&self) -> String {
        let mut out = String::from("(");
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{c}");
        }
        out.push(')');
        out
    }
}

/// A concrete realization of F_{p^d}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    /// `(j, p - modulus[j])` for the nonzero low coefficients.
    neg_taps: Vec<(usize, u64)>,
    generator_check: bool,
    order: BigUint,
    order_factors: Option<FactoredNat>,
}

impl FieldContext {
    fn from_modulus(p: u64, modulus: Vec<u64>, order_factors: Option<FactoredNat>) -> Self {
        let degree = modulus.len() - 1;
        let neg_taps = modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, p - c))
            .collect();
        let order = BigUint::from(p).pow(degree as u32) - 1u32;
        FieldContext {
            p,
            degree,
            modulus,
            neg_taps,
            generator_check: order_factors.is_some(),
            order,
            order_factors,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monic defining polynomial, constant-first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Whether the residue of `x` generates the multiplicative group.
    pub fn generator_check(&self) -> bool {
        self.generator_check
    }

    /// `p^d - 1`.
    pub fn group_order(&self) -> &BigUint {
        &self.order
    }

    pub fn group_order_u128(&self) -> Option<Nat> {
        self.order.to_u128()
    }

    /// Size of the field, when it fits in 128 bits.
    pub fn size(&self) -> Option<Nat> {
        self.group_order_u128().and_then(|o| o.checked_add(1))
    }

    /// Factored group order; present for generator-bearing contexts.
    pub fn group_order_factors(&self) -> Option<&FactoredNat> {
        self.order_factors.as_ref()
    }

    fn is_small(&self) -> bool {
        self.p < SMALL_PRIME_LIMIT
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The prime-field element `c mod p`.
    pub fn from_int(&self, c: u64) -> FieldElement {
        let mut e = self.zero();
        e.coords[0] = c % self.p;
        e
    }

    /// The residue of `x`.
    pub fn x(&self) -> FieldElement {
        if self.degree == 1 {
            return self.from_int(self.p - self.modulus[0]);
        }
        let mut e = self.zero();
        e.coords[1] = 1;
        e
    }

    pub fn from_coords(&self, coords: Vec<u64>) -> Result<FieldElement> {
        if coords.len() != self.degree {
            return Err(Error::ContextMismatch);
        }
        if coords.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coordinate out of range for GF({})",
                self.p
            )));
        }
        Ok(FieldElement { coords })
    }

    /// Element whose coordinates are the base-`p` digits of `code`.
    pub fn from_encoding(&self, mut code: Nat) -> FieldElement {
        let mut e = self.zero();
        for slot in e.coords.iter_mut() {
            *slot = (code % self.p as Nat) as u64;
            code /= self.p as Nat;
        }
        e
    }

    /// Inverse of [`FieldContext::from_encoding`].
    pub fn encode(&self, a: &FieldElement) -> Nat {
        a.coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p as Nat + c as Nat)
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.coords.len() == self.degree && a.coords.iter().all(|&c| c < self.p)
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        a.coords[0] == 1 % self.p && a.coords[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = a.clone();
        self.add_assign(&mut out.coords, &b.coords);
        out
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = a.clone();
        self.sub_assign(&mut out.coords, &b.coords);
        out
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut out = self.zero();
        self.sub_assign(&mut out.coords, &a.coords);
        out
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = self.zero();
        self.mul_into(&a.coords, &b.coords, &mut out.coords);
        out
    }

    /// Multiply by a prime-field scalar.
    pub fn scale(&self, a: &FieldElement, c: u64) -> FieldElement {
        FieldElement {
            coords: a
                .coords
                .iter()
                .map(|&x| primepoly::mul_p(x, c % self.p, self.p))
                .collect(),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        let poly = primepoly::trim(a.coords.clone());
        if poly.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let inv = primepoly::inv_mod(&poly, &self.modulus, self.p).ok_or(Error::DivisionByZero)?;
        let mut out = self.zero();
        out.coords[..inv.len()].copy_from_slice(&inv);
        Ok(out)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e`, with `e` reduced modulo the group order for nonzero `a`.
    pub fn pow(&self, a: &FieldElement, e: Nat) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return self.zero();
        }
        let e = match self.group_order_u128() {
            Some(o) => e % o,
            None => e,
        };
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        if e.is_zero() {
            return self.one();
        }
        if a.is_zero() {
            return self.zero();
        }
        let e = e % &self.order;
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// `a^{p^k}`.
    pub fn frobenius(&self, a: &FieldElement, k: usize) -> FieldElement {
        let mut out = a.clone();
        for _ in 0..k % self.degree.max(1) {
            out = self.pow(&out, self.p as Nat);
        }
        out
    }

    /// Multiplicative order of a nonzero element, from the factored group
    /// order.
    pub fn element_order(&self, a: &FieldElement) -> Result<Nat> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let factors = self
            .order_factors
            .as_ref()
            .ok_or(Error::Overflow("group order"))?;
        let mut order = factors.value();
        for &(r, e) in factors.factors() {
            for _ in 0..e {
                if self.is_one(&self.pow(a, order / r)) {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// Whether `a` lies in the subfield of degree `k` (i.e. `a^{p^k} = a`).
    pub fn in_subfield(&self, a: &FieldElement, k: usize) -> bool {
        &self.frobenius(a, k) == a
    }

    /// `"GF(p^d), modulus = c0 + c1*x + ... + x^d"`.
    pub fn render(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => String::from("x"),
                _ => format!("x^{i}"),
            };
            terms.push(match (i, c) {
                (0, _) => format!("{c}"),
                (_, 1) => var,
                _ => format!("{c}*{var}"),
            });
        }
        format!(
            "GF({}^{}), modulus = {}",
            self.p,
            self.degree,
            terms.join(" + ")
        )
    }

    // Slice-level kernels shared with the polynomial module.

    pub(crate) fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = primepoly::add_p(*x, y, self.p);
        }
    }

    pub(crate) fn sub_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = primepoly::sub_p(*x, y, self.p);
        }
    }

    /// Length of the unreduced product buffer.
    pub(crate) fn acc_len(&self) -> usize {
        2 * self.degree - 1
    }

    /// How many products may be accumulated before [`Self::fold_acc`] must run.
    pub(crate) fn acc_capacity(&self) -> usize {
        if self.is_small() {
            ((1usize << 31) / self.degree).max(1)
        } else {
            usize::MAX
        }
    }

    /// `acc += a * b` as polynomials in the residue basis, unreduced.
    pub(crate) fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        let p = self.p;
        if self.is_small() {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (slot, &y) in acc[i..].iter_mut().zip(b) {
                    *slot += x * y;
                }
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (slot, &y) in acc[i..].iter_mut().zip(b) {
                    *slot = primepoly::add_p(*slot, primepoly::mul_p(x, y, p), p);
                }
            }
        }
    }

    pub(crate) fn fold_acc(&self, acc: &mut [u64]) {
        if self.is_small() {
            for slot in acc.iter_mut() {
                *slot %= self.p;
            }
        }
    }

    /// Reduce an accumulated product modulo `p` and the defining polynomial.
    /// `acc` is clobbered.
    pub(crate) fn reduce_acc(&self, acc: &mut [u64], out: &mut [u64]) {
        let p = self.p;
        let d = self.degree;
        self.fold_acc(acc);
        let small = self.is_small();
        for i in (d..acc.len()).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            let base = i - d;
            for &(j, nt) in &self.neg_taps {
                let slot = &mut acc[base + j];
                if small {
                    *slot += c * nt;
                } else {
                    *slot = primepoly::add_p(*slot, primepoly::mul_p(c, nt, p), p);
                }
            }
        }
        for (o, &a) in out.iter_mut().zip(acc.iter()) {
            *o = a % p;
        }
    }

    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let mut acc = vec![0u64; self.acc_len()];
        self.mul_acc(&mut acc, a, b);
        self.reduce_acc(&mut acc, out);
    }
}

/// Field-size and work limits applied when building contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest allowed `p^d` for generator-bearing contexts (towers and the
    /// canonical F_q).
    pub field_bound: Nat,
    /// Largest extension degree over F_p the oracle will construct.
    pub oracle_max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            field_bound: DEFAULT_FIELD_BOUND,
            oracle_max_degree: 1024,
        }
    }
}

/// Odometer over monic degree-`d` polynomials in encoding order, skipping
/// those with zero constant term.
struct Candidates {
    p: u64,
    low: Vec<u64>,
    done: bool,
}

impl Candidates {
    fn new(p: u64, d: usize) -> Self {
        let mut low = vec![0; d];
        low[0] = 1;
        Candidates {
            p,
            low,
            done: false,
        }
    }
}

impl Iterator for Candidates {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let mut f = self.low.clone();
        f.push(1);
        // advance, keeping the constant term nonzero
        let mut i = 0;
        loop {
            if i == self.low.len() {
                self.done = true;
                break;
            }
            self.low[i] += 1;
            if self.low[i] < self.p {
                break;
            }
            self.low[i] = if i == 0 { 1 } else { 0 };
            i += 1;
        }
        Some(f)
    }
}

fn check_prime(p: Nat) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    u64::try_from(p).map_err(|_| Error::Overflow("characteristic"))
}

/// The first monic primitive polynomial of degree `d` over F_p in encoding
/// order, as a context whose residue `x` generates the multiplicative group.
pub fn find_primitive_polynomial(p: Nat, d: usize, bound: Nat) -> Result<FieldContext> {
    let p64 = check_prime(p)?;
    if d == 0 {
        return Err(Error::InvalidArgument("field degree must be positive".into()));
    }
    let size = u32::try_from(d)
        .ok()
        .and_then(|d32| p.checked_pow(d32))
        .filter(|&s| s <= bound)
        .ok_or(Error::FieldTooLarge { p: p64, degree: d })?;
    let order = size - 1;
    let factors = factorize(order.max(1));
    let x = [0u64, 1];
    for f in Candidates::new(p64, d) {
        if !primepoly::is_irreducible(&f, p64) {
            continue;
        }
        let primitive = factors.primes().all(|r| {
            let h = primepoly::pow_mod(&x, order / r, &f, p64);
            h != [1]
        });
        if primitive {
            return Ok(FieldContext::from_modulus(p64, f, Some(factors)));
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// The first monic irreducible polynomial of degree `d` over F_p in encoding
/// order. No generator is promised, so the size bound does not apply.
pub fn find_irreducible_polynomial(p: Nat, d: usize) -> Result<FieldContext> {
    let p64 = check_prime(p)?;
    if d == 0 {
        return Err(Error::InvalidArgument("field degree must be positive".into()));
    }
    let f = Candidates::new(p64, d)
        .find(|f| primepoly::is_irreducible(f, p64))
        .expect("irreducible polynomials exist in every degree");
    Ok(FieldContext::from_modulus(p64, f, None))
}

/// Split a prime power `q` into `(p, s)`.
pub fn prime_power(q: Nat) -> Result<(Nat, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let f = factorize(q);
    match f.factors() {
        [(p, s)] => Ok((*p, *s)),
        _ => Err(Error::NotPrimePower(q)),
    }
}
