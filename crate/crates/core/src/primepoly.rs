//! Minimal dense arithmetic in F_p[x], used to search for defining polynomials
//! and to invert field elements. Polynomials are constant-first `Vec<u64>`
//! with no trailing zeros; the zero polynomial is empty.

use alloc::vec;
use alloc::vec::Vec;

#[inline]
pub(crate) fn mul_p(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

#[inline]
pub(crate) fn add_p(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    if s >= p as u128 {
        (s - p as u128) as u64
    } else {
        s as u64
    }
}

#[inline]
pub(crate) fn sub_p(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_p(mut base: u64, mut e: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_p(acc, base, p);
        }
        base = mul_p(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_p(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_p(a, (p - 2) as u128, p)
}

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = sub_p(x, y, p);
    }
    trim(out)
}

/// Whether `terms` products below `p^2` can be summed in a u64 before
/// reducing.
fn lazy_ok(terms: usize, p: u64) -> bool {
    let sq = (p as u128 - 1) * (p as u128 - 1);
    (terms as u128 + 1) * sq < u64::MAX as u128
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    if lazy_ok(a.len().min(b.len()), p) {
        let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        for o in &mut out {
            *o %= p;
        }
        return trim(out);
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_p(out[i + j], mul_p(x, y, p), p);
        }
    }
    trim(out)
}

/// Remainder of `a` (reduced coefficients) modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    if a.len() <= dm {
        return trim(a.to_vec());
    }
    let mut r = a.to_vec();
    let lead_inv = inv_p(m[dm], p);
    // Moduli met in practice are sparse, so only nonzero terms are visited.
    let terms: Vec<(usize, u64)> = m[..dm].iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    if lazy_ok(r.len(), p) {
        // Slots hold unreduced sums; each is reduced when it becomes the top.
        for i in (dm..r.len()).rev() {
            let c = mul_p(r[i] % p, lead_inv, p);
            if c == 0 {
                continue;
            }
            let neg = p - c;
            let base = i - dm;
            for &(j, mj) in &terms {
                r[base + j] += neg * mj;
            }
        }
        r.truncate(dm);
        for x in &mut r {
            *x %= p;
        }
        return trim(r);
    }
    for i in (dm..r.len()).rev() {
        let c = mul_p(r[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        let base = i - dm;
        for &(j, mj) in &terms {
            r[base + j] = sub_p(r[base + j], mul_p(c, mj, p), p);
        }
    }
    r.truncate(dm);
    trim(r)
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, m, p);
        }
    }
    acc
}

pub(crate) fn monic(a: Vec<u64>, p: u64) -> Vec<u64> {
    match a.last() {
        None => a,
        Some(&lc) => {
            let inv = inv_p(lc, p);
            a.into_iter().map(|c| mul_p(c, inv, p)).collect()
        }
    }
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = monic(trim(b.to_vec()), p);
    // In-place Euclid with a monic divisor: one multiply-subtract per term.
    while !b.is_empty() {
        let db = b.len() - 1;
        while a.len() > db {
            let top = a.len() - 1;
            let c = a[top];
            if c != 0 {
                let neg = p - c;
                let base = top - db;
                for (x, &y) in a[base..top].iter_mut().zip(&b[..db]) {
                    *x = add_p(*x, mul_p(neg, y, p), p);
                }
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        core::mem::swap(&mut a, &mut b);
        b = monic(b, p);
    }
    monic(a, p)
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, or `None`
/// when they are not coprime.
pub(crate) fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (qt, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&qt, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_p(r0[0], p);
    Some(rem(&s0.iter().map(|&x| mul_p(x, c, p)).collect::<Vec<_>>(), m, p))
}

pub(crate) fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dm = m.len() - 1;
    if a.len() <= dm {
        return (Vec::new(), trim(a.to_vec()));
    }
    let mut r = a.to_vec();
    let mut qt = vec![0u64; a.len() - dm];
    let lead_inv = inv_p(m[dm], p);
    for i in (dm..r.len()).rev() {
        let c = mul_p(r[i], lead_inv, p);
        qt[i - dm] = c;
        if c == 0 {
            continue;
        }
        let base = i - dm;
        for (j, &mj) in m.iter().enumerate() {
            r[base + j] = sub_p(r[base + j], mul_p(c, mj, p), p);
        }
    }
    r.truncate(dm);
    (trim(qt), trim(r))
}

/// `h^p mod f`, using `h(x)^p = h(x^p)` over F_p.
pub(crate) fn frobenius_mod(h: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if p as u128 * h.len() as u128 > 1 << 22 {
        return pow_mod(h, p as u128, f, p);
    }
    let stride = p as usize;
    let mut spread = vec![0u64; h.len().saturating_sub(1) * stride + 1];
    for (i, &c) in h.iter().enumerate() {
        spread[i * stride] = c;
    }
    rem(&trim(spread), f, p)
}

/// Ben-Or irreducibility test: `f` (monic, degree d) is irreducible iff
/// `gcd(x^{p^k} - x, f) = 1` for every `k <= d/2`. Reducible inputs usually
/// fail within the first few rounds, so those get a gcd each; later rounds
/// are multiplied together mod `f` and checked at doubling intervals, which
/// is equivalent since a product is coprime to `f` iff every factor is.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut h = rem(&x, f, p);
    let mut acc: Option<Vec<u64>> = None;
    let (mut next, mut gap) = (1, 1);
    for k in 1..=d / 2 {
        h = frobenius_mod(&h, f, p);
        let t = sub(&h, &x, p);
        acc = Some(match acc {
            None => t,
            Some(a) => mul_mod(&a, &t, f, p),
        });
        if k == next || k == d / 2 {
            let a = acc.take().unwrap_or_default();
            if gcd(&a, f, p).len() != 1 {
                return false;
            }
            if k >= 8 {
                gap *= 2;
            }
            next = k + gap;
        }
    }
    true
}
