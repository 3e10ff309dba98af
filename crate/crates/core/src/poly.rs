//! Dense univariate polynomials over a [`FieldContext`].
//!
//! Coefficients are stored flat: coefficient `i` occupies
//! `data[i*k .. (i+1)*k]` where `k` is the context degree. The zero
//! polynomial has no coefficients.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;

use crate::arith::{gcd as int_gcd, Nat};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<FieldContext>,
    data: Vec<u64>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.ctx.render(), self.render())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.data == other.data
    }
}

impl Eq for Polynomial {}

fn same_ctx(a: &Arc<FieldContext>, b: &Arc<FieldContext>) -> bool {
    Arc::ptr_eq(a, b) || (a.p() == b.p() && a.modulus() == b.modulus())
}

/// Sort key for factor multisets: degree first, then the coefficient codes
/// from the leading coefficient down.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    pub degree: Nat,
    pub code: Vec<Nat>,
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.code.cmp(&other.code))
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Polynomial {
    fn k(&self) -> usize {
        self.ctx.degree()
    }

    fn normalize(mut self) -> Self {
        let k = self.k();
        while self.data.len() >= k && self.data[self.data.len() - k..].iter().all(|&c| c == 0) {
            self.data.truncate(self.data.len() - k);
        }
        self
    }

    fn from_raw(ctx: Arc<FieldContext>, data: Vec<u64>) -> Self {
        Polynomial { ctx, data }.normalize()
    }

    pub fn zero(ctx: Arc<FieldContext>) -> Self {
        Polynomial { ctx, data: Vec::new() }
    }

    pub fn one(ctx: Arc<FieldContext>) -> Self {
        let c = ctx.one();
        Self::monomial(ctx, &c, 0)
    }

    pub fn x(ctx: Arc<FieldContext>) -> Self {
        let c = ctx.one();
        Self::monomial(ctx, &c, 1)
    }

    /// `c * x^deg`.
    pub fn monomial(ctx: Arc<FieldContext>, c: &FieldElement, deg: usize) -> Self {
        let k = ctx.degree();
        let mut data = vec![0; (deg + 1) * k];
        data[deg * k..].copy_from_slice(c.coords());
        Self::from_raw(ctx, data)
    }

    /// Constant-first coefficient list.
    pub fn from_coeffs(ctx: Arc<FieldContext>, coeffs: Vec<FieldElement>) -> Result<Self> {
        let mut data = Vec::with_capacity(coeffs.len() * ctx.degree());
        for c in &coeffs {
            if !ctx.contains(c) {
                return Err(Error::ContextMismatch);
            }
            data.extend_from_slice(c.coords());
        }
        Ok(Self::from_raw(ctx, data))
    }

    /// Polynomial with prime-field coefficients given as integers mod p,
    /// constant-first.
    pub fn from_ints(ctx: Arc<FieldContext>, coeffs: &[u64]) -> Self {
        let k = ctx.degree();
        let mut data = vec![0; coeffs.len() * k];
        for (i, &c) in coeffs.iter().enumerate() {
            data[i * k] = c % ctx.p();
        }
        Self::from_raw(ctx, data)
    }

    /// `x^n - 1`.
    pub fn x_n_minus_one(ctx: Arc<FieldContext>, n: usize) -> Self {
        let mut coeffs = vec![0u64; n + 1];
        coeffs[n] = 1;
        coeffs[0] = ctx.p() - 1;
        if n == 0 {
            return Self::zero(ctx);
        }
        Self::from_ints(ctx, &coeffs)
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    /// Number of stored coefficients (degree + 1, or 0 for zero).
    pub fn len(&self) -> usize {
        self.data.len() / self.k()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.len().checked_sub(1)
    }

    fn slot(&self, i: usize) -> &[u64] {
        let k = self.k();
        &self.data[i * k..(i + 1) * k]
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        if i >= self.len() {
            return self.ctx.zero();
        }
        self.ctx
            .from_coords(self.slot(i).to_vec())
            .expect("stored coefficients are reduced")
    }

    pub fn coeffs(&self) -> Vec<FieldElement> {
        (0..self.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.degree().map(|d| self.coeff(d))
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.ctx.is_one(&c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (long, short) = if self.data.len() >= other.data.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut data = long.data.clone();
        self.ctx.add_assign(&mut data[..short.data.len()], &short.data);
        Ok(Self::from_raw(self.ctx.clone(), data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut data = vec![0; self.data.len()];
        self.ctx.sub_assign(&mut data, &self.data);
        Polynomial {
            ctx: self.ctx.clone(),
            data,
        }
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &FieldElement) -> Self {
        let k = self.k();
        let mut data = vec![0; self.data.len()];
        for i in 0..self.len() {
            self.ctx
                .mul_into(self.slot(i), c.coords(), &mut data[i * k..(i + 1) * k]);
        }
        Self::from_raw(self.ctx.clone(), data)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ctx.clone()));
        }
        let ctx = &self.ctx;
        let k = self.k();
        let (la, lb) = (self.len(), other.len());
        let mut data = vec![0u64; (la + lb - 1) * k];
        let mut acc = vec![0u64; ctx.acc_len()];
        let cap = ctx.acc_capacity();
        for c in 0..la + lb - 1 {
            acc.fill(0);
            let lo = c.saturating_sub(lb - 1);
            let hi = c.min(la - 1);
            let mut pending = 0;
            for i in lo..=hi {
                ctx.mul_acc(&mut acc, self.slot(i), other.slot(c - i));
                pending += 1;
                if pending == cap {
                    ctx.fold_acc(&mut acc);
                    pending = 0;
                }
            }
            ctx.reduce_acc(&mut acc, &mut data[c * k..(c + 1) * k]);
        }
        Ok(Self::from_raw(ctx.clone(), data))
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        self.check(b)?;
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let ctx = &self.ctx;
        let k = self.k();
        if self.len() <= db {
            return Ok((Self::zero(ctx.clone()), self.clone()));
        }
        let lc = b.coeff(db);
        let monic = ctx.is_one(&lc);
        let lc_inv = ctx.inv(&lc)?;
        let mut r = self.data.clone();
        let mut quot = vec![0u64; (self.len() - db) * k];
        let mut acc = vec![0u64; ctx.acc_len()];
        let mut c = vec![0u64; k];
        let mut prod = vec![0u64; k];
        for i in (db..self.len()).rev() {
            let top = &r[i * k..(i + 1) * k];
            if top.iter().all(|&x| x == 0) {
                continue;
            }
            if monic {
                c.copy_from_slice(top);
            } else {
                acc.fill(0);
                ctx.mul_acc(&mut acc, top, lc_inv.coords());
                ctx.reduce_acc(&mut acc, &mut c);
            }
            let base = i - db;
            quot[base * k..(base + 1) * k].copy_from_slice(&c);
            for j in 0..=db {
                let bj = b.slot(j);
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                acc.fill(0);
                ctx.mul_acc(&mut acc, &c, bj);
                ctx.reduce_acc(&mut acc, &mut prod);
                ctx.sub_assign(&mut r[(base + j) * k..(base + j + 1) * k], &prod);
            }
        }
        r.truncate(db * k);
        Ok((
            Self::from_raw(ctx.clone(), quot),
            Self::from_raw(ctx.clone(), r),
        ))
    }

    pub fn rem(&self, m: &Self) -> Result<Self> {
        Ok(self.divrem(m)?.1)
    }

    /// Scale to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) if self.ctx.is_one(&lc) => self.clone(),
            Some(lc) => self.scale(&self.ctx.inv(&lc).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn pow(&self, mut e: Nat) -> Result<Self> {
        let mut acc = Self::one(self.ctx.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: Nat, m: &Self) -> Result<Self> {
        if m.degree().is_none_or(|d| d == 0) {
            return Err(Error::InvalidArgument("modulus must be nonconstant".into()));
        }
        let mut acc = Self::one(self.ctx.clone()).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?.rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_mod_big(&self, e: &BigUint, m: &Self) -> Result<Self> {
        if m.degree().is_none_or(|d| d == 0) {
            return Err(Error::InvalidArgument("modulus must be nonconstant".into()));
        }
        let base = self.rem(m)?;
        let mut acc = Self::one(self.ctx.clone()).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc)?.rem(m)?;
            if e.bit(i) {
                acc = acc.mul(&base)?.rem(m)?;
            }
        }
        Ok(acc)
    }

    /// `sum_i self_i * table[i]`, where `table` holds polynomials of length at
    /// most `width`. Used to apply a linear map given by its columns.
    pub(crate) fn combine(&self, table: &[Self], width: usize) -> Result<Self> {
        let ctx = &self.ctx;
        let k = self.k();
        let al = ctx.acc_len();
        let cap = ctx.acc_capacity();
        let mut acc = vec![0u64; width * al];
        let mut pending = 0;
        for i in 0..self.len() {
            let c = self.slot(i);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let col = table.get(i).ok_or(Error::InvalidArgument("table too short".into()))?;
            col.check(self)?;
            for j in 0..col.len().min(width) {
                ctx.mul_acc(&mut acc[j * al..(j + 1) * al], c, col.slot(j));
            }
            pending += 1;
            if pending == cap {
                ctx.fold_acc(&mut acc);
                pending = 0;
            }
        }
        let mut data = vec![0u64; width * k];
        for j in 0..width {
            ctx.reduce_acc(&mut acc[j * al..(j + 1) * al], &mut data[j * k..(j + 1) * k]);
        }
        Ok(Self::from_raw(ctx.clone(), data))
    }

    /// Apply `a -> a^q` to every coefficient.
    pub fn frobenius_coeffs(&self, q: Nat) -> Self {
        let coeffs = self.coeffs().iter().map(|c| self.ctx.pow(c, q)).collect();
        Self::from_coeffs(self.ctx.clone(), coeffs).expect("same context")
    }

    pub fn eval(&self, a: &FieldElement) -> FieldElement {
        let mut acc = self.ctx.zero();
        for i in (0..self.len()).rev() {
            acc = self.ctx.mul(&acc, a);
            acc = self.ctx.add(&acc, &self.coeff(i));
        }
        acc
    }

    /// Substitute `x -> x^t`.
    pub fn expand(&self, t: usize) -> Self {
        let k = self.k();
        if self.is_zero() || t == 1 {
            return self.clone();
        }
        let mut data = vec![0u64; ((self.len() - 1) * t + 1) * k];
        for i in 0..self.len() {
            data[i * t * k..(i * t + 1) * k].copy_from_slice(self.slot(i));
        }
        Self::from_raw(self.ctx.clone(), data)
    }

    /// Largest `t` such that `self` is a polynomial in `x^t` (0 for constants).
    pub fn stride(&self) -> usize {
        (1..self.len())
            .filter(|&i| self.slot(i).iter().any(|&c| c != 0))
            .fold(0, |g, i| int_gcd(g as Nat, i as Nat) as usize)
    }

    /// Substitute `x^t -> x`; `t` must divide [`Polynomial::stride`].
    pub fn compress(&self, t: usize) -> Self {
        let k = self.k();
        if self.is_zero() || t <= 1 {
            return self.clone();
        }
        debug_assert!(self.stride().is_multiple_of(t));
        let n = (self.len() - 1) / t + 1;
        let mut data = vec![0u64; n * k];
        for i in 0..n {
            data[i * k..(i + 1) * k].copy_from_slice(self.slot(i * t));
        }
        Self::from_raw(self.ctx.clone(), data)
    }

    /// Key from the context coordinates of each coefficient. Meaningful as a
    /// cross-engine identifier only for polynomials over the canonical F_q.
    pub fn canonical_key(&self) -> CanonicalKey {
        let p = self.ctx.p() as Nat;
        let code = (0..self.len())
            .rev()
            .map(|i| self.slot(i).iter().rev().fold(0, |acc, &c| acc * p + c as Nat))
            .collect();
        CanonicalKey {
            degree: self.degree().unwrap_or(0) as Nat,
            code,
        }
    }

    /// Text form: terms by decreasing degree, e.g. `x^3 + x + 1` over a prime
    /// field or `x^2 + (2,1)*x + (0,1)` over an extension. Coefficients equal
    /// to one are omitted on non-constant terms.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let prime = self.k() == 1;
        let mut terms = Vec::new();
        for i in (0..self.len()).rev() {
            let c = self.slot(i);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let is_one = c[0] == 1 && c[1..].iter().all(|&x| x == 0);
            let coef = if prime {
                format!("{}", c[0])
            } else {
                self.coeff(i).render()
            };
            let var = match i {
                0 => String::new(),
                1 => String::from("x"),
                _ => format!("x^{i}"),
            };
            terms.push(match (i, is_one) {
                (0, _) => coef,
                (_, true) => var,
                _ => format!("{coef}*{var}"),
            });
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
