//! Ground truth by q-cyclotomic cosets.
//!
//! The irreducible factors of `x^n - 1` over F_q (with `gcd(n, q) = 1`) are
//! the minimal polynomials `prod_{i in C} (x - beta^i)` over the cosets
//! `C = {j, jq, jq^2, ...} mod n`, for any primitive n-th root of unity
//! `beta`. This module finds them by linear algebra in F_{q^m}, `m = ord_n(q)`,
//! sharing nothing with the explicit engine beyond the canonical F_q.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::arith::{factorize, gcd, mul_mod, mult_order, Nat};
use crate::error::{Error, Result};
use crate::explicit::{classify_case, Engine, Factorization, LabeledFactor, Source};
use crate::field::{
    find_irreducible_polynomial, find_primitive_polynomial, prime_power, FieldContext, FieldElement,
    Limits,
};
use crate::poly::Polynomial;
use crate::primepoly::{inv_p, mul_p, sub_p};
use crate::subfield::SubfieldEmbedding;

/// The orbits of `j -> qj` on `Z/n`, each sorted, listed by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    pub n: Nat,
    pub q: Nat,
    pub cosets: Vec<Vec<Nat>>,
}

impl CosetPartition {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Number of cosets of each size.
    pub fn size_counts(&self) -> alloc::collections::BTreeMap<Nat, Nat> {
        let mut out = alloc::collections::BTreeMap::new();
        for c in &self.cosets {
            *out.entry(c.len() as Nat).or_insert(0) += 1;
        }
        out
    }
}

pub fn cyclotomic_cosets(n: Nat, q: Nat) -> Result<CosetPartition> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if gcd(n, q) != 1 {
        return Err(Error::NotCoprime { a: n, b: q });
    }
    let len = usize::try_from(n).map_err(|_| Error::Overflow("coset table"))?;
    let mut seen = vec![false; len];
    let mut cosets = Vec::new();
    for j in 0..len {
        if seen[j] {
            continue;
        }
        let mut coset = Vec::new();
        let mut x = j as Nat;
        while !seen[x as usize] {
            seen[x as usize] = true;
            coset.push(x);
            x = mul_mod(x, q, n);
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    Ok(CosetPartition { n, q, cosets })
}

/// Whether `a` has multiplicative order exactly `order` (given factored).
fn has_order(ctx: &FieldContext, a: &FieldElement, order: Nat, primes: &[Nat]) -> bool {
    ctx.is_one(&ctx.pow(a, order)) && primes.iter().all(|&r| !ctx.is_one(&ctx.pow(a, order / r)))
}

/// First `gamma^{(p^D-1)/k}` in encoding order with exact order `k`.
fn root_of_unity(ctx: &FieldContext, k: Nat) -> FieldElement {
    let primes: Vec<Nat> = factorize(k).primes().collect();
    let cofactor = ctx.group_order() / BigUint::from(k);
    let mut code: Nat = 1;
    loop {
        let gamma = ctx.from_encoding(code);
        let c = ctx.pow_big(&gamma, &cofactor);
        if has_order(ctx, &c, k, &primes) {
            return c;
        }
        code += 1;
    }
}

/// Factor `x^n - 1` over F_q by cosets. Requires `gcd(n, q) = 1` and
/// `ord_n(q) * s <= limits.oracle_max_degree`.
pub fn oracle_factor(n: Nat, q: Nat, limits: &Limits) -> Result<Factorization> {
    let (p, s) = prime_power(q)?;
    let part = cyclotomic_cosets(n, q)?;
    let m = if n == 1 { 1 } else { mult_order(q, n)? };
    let p64 = u64::try_from(p).map_err(|_| Error::Overflow("characteristic"))?;
    let degree = usize::try_from(m)
        .ok()
        .and_then(|m| m.checked_mul(s as usize))
        .filter(|&d| d <= limits.oracle_max_degree)
        .ok_or(Error::FieldTooLarge {
            p: p64,
            degree: (m as usize).saturating_mul(s as usize),
        })?;
    let big = find_irreducible_polynomial(p, degree)?;
    let fq = Arc::new(find_primitive_polynomial(p, s as usize, limits.field_bound)?);
    let beta = root_of_unity(&big, n);
    let xi = root_of_unity(&big, q - 1);
    let emb = SubfieldEmbedding::new(&big, &xi, fq.clone())?;
    let mut powers = Vec::with_capacity(n as usize);
    let mut b = big.one();
    for _ in 0..n {
        powers.push(b.clone());
        b = big.mul(&b, &beta);
    }

    let mut factors = Vec::with_capacity(part.len());
    for coset in &part.cosets {
        let coeffs = coset_minpoly(&big, &powers, coset[0], coset.len(), emb.basis())?
            .into_iter()
            .map(|c| fq.from_coords(c))
            .collect::<Result<Vec<_>>>()?;
        let poly = Polynomial::from_coeffs(fq.clone(), coeffs)?;
        factors.push(LabeledFactor::new(poly, Source::Coset));
    }
    let case = classify_case(n, q)?;
    Ok(Factorization::assemble(
        n,
        q,
        case,
        Engine::Oracle,
        fq,
        factors,
        Vec::new(),
    ))
}

/// Minimal polynomial over F_q of `alpha = beta^j`, whose coset has `m`
/// elements, as F_q coordinate vectors (constant first, monic).
///
/// With `basis = 1, rho, ..., rho^{s-1}` spanning F_q inside the big field,
/// the products `rho^t alpha^i` (`i < m`, `t < s`) are F_p-independent, so
/// `alpha^m = -sum c_{i,t} rho^t alpha^i` has exactly one solution over F_p.
/// This needs about `m s` big-field products plus one elimination, instead
/// of the `m^2 / 2` products of expanding `prod (x - alpha^{q^k})`.
fn coset_minpoly(
    big: &FieldContext,
    powers: &[FieldElement],
    j: Nat,
    m: usize,
    basis: &[FieldElement],
) -> Result<Vec<Vec<u64>>> {
    let p = big.p();
    let d = big.degree();
    let s = basis.len();
    let n = powers.len();
    let alpha_pow = |i: usize| &powers[((j as usize) * i) % n];
    let cols = m * s;
    let mut rows = vec![vec![0u64; cols + 1]; d];
    for i in 0..m {
        let a = alpha_pow(i);
        for (t, r) in basis.iter().enumerate() {
            let e = if t == 0 { a.clone() } else { big.mul(r, a) };
            for (row, &c) in rows.iter_mut().zip(e.coords()) {
                row[i * s + t] = c;
            }
        }
    }
    for (row, &c) in rows.iter_mut().zip(alpha_pow(m).coords()) {
        row[cols] = sub_p(0, c, p);
    }

    // Gauss-Jordan; the column rank is `cols`.
    for col in 0..cols {
        let piv = (col..d)
            .find(|&r| rows[r][col] != 0)
            .ok_or_else(|| Error::InvalidArgument(format!("singular coset system at column {col}")))?;
        rows.swap(col, piv);
        let inv = inv_p(rows[col][col], p);
        for x in rows[col][col..].iter_mut() {
            *x = mul_p(*x, inv, p);
        }
        let pivot = core::mem::take(&mut rows[col]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = sub_p(*x, mul_p(f, y, p), p);
            }
        }
        rows[col] = pivot;
    }
    if rows[cols..].iter().any(|row| row[cols] != 0) {
        return Err(Error::InvalidArgument("inconsistent coset system".into()));
    }

    let mut out: Vec<Vec<u64>> = (0..m)
        .map(|i| (0..s).map(|t| rows[i * s + t][cols]).collect())
        .collect();
    let mut one = vec![0u64; s];
    one[0] = 1;
    out.push(one);
    Ok(out)
}

/// Rabin's test over F_q: `f` (made monic) is irreducible of degree `d` iff
/// its coefficients lie in F_q, `x^{q^d} ≡ x (mod f)` and
/// `gcd(x^{q^{d/r}} - x, f) = 1` for every prime `r | d`.
pub fn is_irreducible(f: &Polynomial, q: Nat) -> bool {
    let Some(d) = f.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let ctx = f.ctx();
    if f.coeffs().iter().any(|c| &ctx.pow(c, q) != c) {
        return false;
    }
    if d == 1 {
        return true;
    }
    let f = f.monic();
    rabin(&f, q, d).unwrap_or(false)
}

fn rabin(f: &Polynomial, q: Nat, d: usize) -> Result<bool> {
    let ctx = f.ctx().clone();
    let x = Polynomial::x(ctx.clone());
    // Columns x^{qi} mod f, i < d. Residues mod f have F_q coefficients, so
    // g^q mod f is the combination of these columns with g's coefficients.
    let xq = x.pow_mod(q, f)?;
    let mut table = Vec::with_capacity(d);
    let mut col = Polynomial::one(ctx.clone());
    for _ in 0..d {
        table.push(col.clone());
        col = col.mul(&xq)?.rem(f)?;
    }
    let primes: Vec<usize> = factorize(d as Nat).primes().map(|r| r as usize).collect();
    let mut h = xq;
    for k in 1..=d {
        if k > 1 {
            h = h.combine(&table, d)?;
        }
        if k < d && primes.iter().any(|&r| d / r == k) {
            let g = h.sub(&x)?.gcd(f)?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
    }
    Ok(h == x)
}

/// Outcome of [`verify_factorization`]; accepted iff all four flags hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub product_ok: bool,
    pub all_irreducible: bool,
    pub degrees_ok: bool,
    pub count_match: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        self.product_ok && self.all_irreducible && self.degrees_ok && self.count_match
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.product_ok {
            out.push("product");
        }
        if !self.all_irreducible {
            out.push("irreducibility");
        }
        if !self.degrees_ok {
            out.push("degrees");
        }
        if !self.count_match {
            out.push("coset count");
        }
        out
    }
}

/// Product of a list of polynomials by pairwise merging.
fn product(mut items: Vec<Polynomial>, ctx: &Arc<FieldContext>) -> Result<Polynomial> {
    if items.is_empty() {
        return Ok(Polynomial::one(ctx.clone()));
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.mul(&b)?,
                None => a,
            });
        }
        items = next;
    }
    Ok(items.pop().expect("nonempty"))
}

/// Check a claimed factorization of `x^n - 1` over F_q.
///
/// With `n = p^e n0`, the distinct factors are compared against the cosets
/// of `n0`.
pub fn verify_factorization(fz: &Factorization) -> VerificationReport {
    let mut notes = Vec::new();
    let ctx = &fz.fq;

    let mut items = Vec::new();
    for f in &fz.factors {
        for _ in 0..f.multiplicity {
            items.push(f.poly.clone());
        }
    }
    let product_ok = match (product(items, ctx), usize::try_from(fz.n)) {
        (Ok(prod), Ok(n)) => {
            let ok = prod == Polynomial::x_n_minus_one(ctx.clone(), n);
            if !ok {
                notes.push(format!("product of factors is not x^{} - 1", fz.n));
            }
            ok
        }
        (Err(e), _) => {
            notes.push(format!("product failed: {e}"));
            false
        }
        (_, Err(_)) => {
            notes.push(String::from("n too large to expand"));
            false
        }
    };

    let bad: Vec<String> = fz
        .factors
        .iter()
        .filter(|f| !f.poly.is_monic() || !is_irreducible(&f.poly, fz.q))
        .map(|f| f.poly.render())
        .collect();
    let all_irreducible = bad.is_empty();
    if let Some(first) = bad.first() {
        notes.push(format!("{} reducible or non-monic factors, e.g. {first}", bad.len()));
    }

    let labels_ok = fz
        .factors
        .iter()
        .all(|f| f.poly.degree().map(|d| d as Nat) == Some(f.degree));
    let sum: Nat = fz.factors.iter().map(|f| f.degree * f.multiplicity).sum();
    let degrees_ok = labels_ok && sum == fz.n;
    if !degrees_ok {
        notes.push(format!("degree sum {sum} != n = {}", fz.n));
    }

    let mut n0 = fz.n;
    while fz.p > 1 && n0.is_multiple_of(fz.p) {
        n0 /= fz.p;
    }
    let count_match = match cyclotomic_cosets(n0, fz.q) {
        Ok(part) => {
            let ok = part.len() == fz.factors.len();
            if !ok {
                notes.push(format!(
                    "{} distinct factors but {} cyclotomic cosets",
                    fz.factors.len(),
                    part.len()
                ));
            }
            ok
        }
        Err(e) => {
            notes.push(format!("coset count unavailable: {e}"));
            false
        }
    };

    VerificationReport {
        product_ok,
        all_irreducible,
        degrees_ok,
        count_match,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::CaseTag;

    fn fq(p: Nat, s: usize) -> Arc<FieldContext> {
        Arc::new(find_primitive_polynomial(p, s, Limits::default().field_bound).unwrap())
    }

    #[test]
    fn coset_examples() {
        let c = cyclotomic_cosets(7, 2).unwrap();
        assert_eq!(c.cosets, vec![vec![0], vec![1, 2, 4], vec![3, 5, 6]]);
        assert_eq!(cyclotomic_cosets(3, 2).unwrap().len(), 2);
        assert_eq!(cyclotomic_cosets(6, 7).unwrap().len(), 6);
        assert!(cyclotomic_cosets(6, 4).is_err());
    }

    #[test]
    fn coset_sizes_are_orders() {
        for (n, q) in [(91u128, 3u128), (104, 3), (255, 2), (120, 7)] {
            let part = cyclotomic_cosets(n, q).unwrap();
            let total: usize = part.cosets.iter().map(Vec::len).sum();
            assert_eq!(total as Nat, n);
            for c in &part.cosets {
                let j = c[0];
                let m = n / gcd(n, j);
                let ord = if m == 1 { 1 } else { mult_order(q, m).unwrap() };
                assert_eq!(c.len() as Nat, ord);
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let lim = Limits::default();
        let fz = oracle_factor(7, 2, &lim).unwrap();
        let r: Vec<_> = fz.factors.iter().map(|f| f.poly.render()).collect();
        assert_eq!(r, ["x + 1", "x^3 + x + 1", "x^3 + x^2 + 1"]);
        let fz = oracle_factor(1, 9, &lim).unwrap();
        assert_eq!(fz.total, 1);
        let fz = oracle_factor(104, 3, &lim).unwrap();
        assert_eq!(fz.total, 25);
        assert_eq!(fz.case.tag, CaseTag::WOdd8n);
        assert!(verify_factorization(&fz).accepted());
    }

    #[test]
    fn oracle_degree_limit() {
        let lim = Limits { oracle_max_degree: 4, ..Limits::default() };
        assert!(oracle_factor(7, 2, &lim).is_ok());
        assert!(matches!(oracle_factor(11, 2, &lim), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = fq(2, 1);
        assert!(is_irreducible(&Polynomial::from_ints(f2.clone(), &[1, 1, 1]), 2));
        assert!(!is_irreducible(&Polynomial::from_ints(f2.clone(), &[1, 0, 1]), 2));
        assert!(!is_irreducible(&Polynomial::from_ints(f2.clone(), &[0, 1, 1]), 2));
        // product of two distinct irreducible cubics
        let a = Polynomial::from_ints(f2.clone(), &[1, 1, 0, 1]);
        let b = Polynomial::from_ints(f2.clone(), &[1, 0, 1, 1]);
        assert!(!is_irreducible(&a.mul(&b).unwrap(), 2));
        // x^4 + x + 1 irreducible, x^4 + x^2 + 1 = (x^2+x+1)^2 not
        assert!(is_irreducible(&Polynomial::from_ints(f2.clone(), &[1, 1, 0, 0, 1]), 2));
        assert!(!is_irreducible(&Polynomial::from_ints(f2.clone(), &[1, 0, 1, 0, 1]), 2));
        // x^2 + 1 over F_3 is irreducible, over F_9 it splits
        let f3 = fq(3, 1);
        let f9 = fq(3, 2);
        assert!(is_irreducible(&Polynomial::from_ints(f3, &[1, 0, 1]), 3));
        assert!(!is_irreducible(&Polynomial::from_ints(f9.clone(), &[1, 0, 1]), 9));
        // a polynomial over F_9 read as one over F_3 is rejected
        let y = f9.x();
        let g = Polynomial::from_coeffs(f9.clone(), vec![y, f9.one()]).unwrap();
        assert!(is_irreducible(&g, 9));
        assert!(!is_irreducible(&g, 3));
    }

    /// Trial division by every monic polynomial of degree at most d/2.
    fn brute_irreducible(f: &Polynomial, ctx: &Arc<FieldContext>, q: Nat) -> bool {
        let d = f.degree().unwrap();
        for e in 1..=d / 2 {
            let count = q.pow(e as u32);
            for code in 0..count {
                let mut coeffs = Vec::with_capacity(e + 1);
                let mut c = code;
                for _ in 0..e {
                    coeffs.push(ctx.from_encoding(c % q));
                    c /= q;
                }
                coeffs.push(ctx.one());
                let g = Polynomial::from_coeffs(ctx.clone(), coeffs).unwrap();
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, s) in [(2u128, 1usize), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let ctx = fq(p, s);
            let q = p.pow(s as u32);
            for d in 1..=6usize {
                let trials = if q.pow(d as u32 / 2) > 5000 { 10 } else { 40 };
                for _ in 0..trials {
                    let mut coeffs: Vec<_> =
                        (0..d).map(|_| ctx.from_encoding(rng.gen_range(0..q))).collect();
                    coeffs.push(ctx.one());
                    let f = Polynomial::from_coeffs(ctx.clone(), coeffs).unwrap();
                    assert_eq!(
                        is_irreducible(&f, q),
                        brute_irreducible(&f, &ctx, q),
                        "{} over F_{q}",
                        f.render()
                    );
                }
            }
        }
    }

    #[test]
    fn verify_catches_tampering() {
        let lim = Limits::default();
        let fz = crate::explicit::factor(7, 2, &lim).unwrap();
        assert!(verify_factorization(&fz).accepted());
        let mut bad = fz.clone();
        bad.factors[1].multiplicity = 2;
        let rep = verify_factorization(&bad);
        assert!(!rep.product_ok && !rep.degrees_ok);
        let mut bad = fz.clone();
        let sq = bad.factors[0].poly.mul(&bad.factors[0].poly).unwrap();
        bad.factors[0] = LabeledFactor::new(sq, Source::Binomial);
        let rep = verify_factorization(&bad);
        assert!(!rep.product_ok && !rep.all_irreducible);
        assert_eq!(rep.failures()[0], "product");
    }
}
