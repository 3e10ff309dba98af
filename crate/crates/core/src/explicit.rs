//! The explicit factorization engine.
//!
//! Let `w = ord_{rad(n)}(q)`. When `w = 1` the factors are binomials
//! `x^t - theta^{u l1}`, plus conjugate-pair trinomials when `q ≡ 3 (mod 4)`
//! and `8 | n`. When `w` is prime the factorization over F_{q^w} (or F_{q^2w})
//! is pushed down to F_q: binomials whose constant already lies in F_q stay
//! as they are, the rest are multiplied over their Frobenius orbits.
//!
//! Index sets follow the "orbit minimum" convention: residues are taken in
//! `[1, G]` with 0 represented by `G`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::arith::{
    checked_pow, euler_phi, factorize, gcd, is_prime, mult_order, pow_mod, radical, radical_split,
    valuation, v2, Nat, RadicalSplit,
};
use crate::error::{Error, Result};
use crate::field::{prime_power, FieldContext, FieldElement, Limits};
use crate::poly::{CanonicalKey, Polynomial};
use crate::tower::{build_tower, Tower};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    /// `rad(n) | q - 1`, and `q ≢ 3 (mod 4)` or `8 ∤ n`.
    BaseSimple,
    /// `rad(n) | q - 1`, `q ≡ 3 (mod 4)` and `8 | n`.
    BaseTrinomial,
    /// `w` an odd prime, and `q ≢ 3 (mod 4)` or `8 ∤ n`.
    WOddSimple,
    /// `w` an odd prime, `q ≡ 3 (mod 4)` and `8 | n`.
    WOdd8n,
    /// `w = 2`.
    WTwo,
    /// `w` composite; only the oracle applies.
    Unsupported,
}

impl CaseTag {
    pub const ALL: [CaseTag; 6] = [
        CaseTag::BaseSimple,
        CaseTag::BaseTrinomial,
        CaseTag::WOddSimple,
        CaseTag::WOdd8n,
        CaseTag::WTwo,
        CaseTag::Unsupported,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::BaseSimple => "BaseSimple",
            CaseTag::BaseTrinomial => "BaseTrinomial",
            CaseTag::WOddSimple => "WOddSimple",
            CaseTag::WOdd8n => "WOdd8n",
            CaseTag::WTwo => "WTwo",
            CaseTag::Unsupported => "Unsupported",
        }
    }

    pub fn from_name(name: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|t| t.name() == name)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Case {
    pub tag: CaseTag,
    pub w: Nat,
}

/// Where a factor came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Binomial,
    Trinomial,
    OrbitBinomialProduct,
    OrbitTrinomialProduct,
    /// Repeated factor from `x^{p^e n0} - 1 = (x^{n0} - 1)^{p^e}`.
    CharPower,
    /// Minimal polynomial of a cyclotomic coset (oracle output).
    Coset,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Binomial => "Binomial",
            Source::Trinomial => "Trinomial",
            Source::OrbitBinomialProduct => "OrbitBinomialProduct",
            Source::OrbitTrinomialProduct => "OrbitTrinomialProduct",
            Source::CharPower => "CharPower",
            Source::Coset => "Coset",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Explicit,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledFactor {
    pub poly: Polynomial,
    pub degree: Nat,
    pub source: Source,
    pub multiplicity: Nat,
}

impl LabeledFactor {
    pub fn new(poly: Polynomial, source: Source) -> Self {
        let degree = poly.degree().unwrap_or(0) as Nat;
        LabeledFactor {
            poly,
            degree,
            source,
            multiplicity: 1,
        }
    }

    pub fn key(&self) -> CanonicalKey {
        self.poly.canonical_key()
    }
}

/// A multiset of monic irreducible factors over the canonical F_q.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub n: Nat,
    pub q: Nat,
    pub p: Nat,
    pub s: u32,
    pub case: Case,
    pub engine: Engine,
    pub fq: Arc<FieldContext>,
    /// Sorted by canonical key.
    pub factors: Vec<LabeledFactor>,
    /// Distinct factors per degree.
    pub counts_by_degree: BTreeMap<Nat, Nat>,
    /// Number of distinct irreducible factors.
    pub total: Nat,
    pub notes: Vec<String>,
}

impl Factorization {
    pub(crate) fn assemble(
        n: Nat,
        q: Nat,
        case: Case,
        engine: Engine,
        fq: Arc<FieldContext>,
        mut factors: Vec<LabeledFactor>,
        notes: Vec<String>,
    ) -> Self {
        factors.sort_by_cached_key(|f| f.key());
        let mut counts_by_degree = BTreeMap::new();
        for f in &factors {
            *counts_by_degree.entry(f.degree).or_insert(0) += 1;
        }
        let p = fq.p() as Nat;
        let s = fq.degree() as u32;
        Factorization {
            n,
            q,
            p,
            s,
            case,
            engine,
            fq,
            total: factors.len() as Nat,
            factors,
            counts_by_degree,
            notes,
        }
    }

    /// Sorted `(key, multiplicity)` pairs.
    pub fn keys(&self) -> Vec<(CanonicalKey, Nat)> {
        let mut keys: Vec<_> = self.factors.iter().map(|f| (f.key(), f.multiplicity)).collect();
        keys.sort();
        keys
    }

    /// Whether two factorizations have the same factor multiset.
    pub fn same_factors(&self, other: &Factorization) -> bool {
        self.n == other.n && self.q == other.q && self.keys() == other.keys()
    }

    /// Factors in `self` but not in `other`, and vice versa.
    pub fn diff(&self, other: &Factorization) -> (Vec<LabeledFactor>, Vec<LabeledFactor>) {
        let mine = self.keys();
        let theirs = other.keys();
        let only_self = self
            .factors
            .iter()
            .filter(|f| theirs.binary_search(&(f.key(), f.multiplicity)).is_err())
            .cloned()
            .collect();
        let only_other = other
            .factors
            .iter()
            .filter(|f| mine.binary_search(&(f.key(), f.multiplicity)).is_err())
            .cloned()
            .collect();
        (only_self, only_other)
    }

    fn duplicate_free(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].key() != w[1].key())
    }
}

fn check_coprime(n: Nat, q: Nat) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if gcd(n, q) != 1 {
        return Err(Error::NotCoprime { a: n, b: q });
    }
    Ok(())
}

/// Case of `(n, q)` with `w = ord_{rad(n)}(q)`.
pub fn classify_case(n: Nat, q: Nat) -> Result<Case> {
    check_coprime(n, q)?;
    let rad = radical(&factorize(n));
    let w = if rad == 1 { 1 } else { mult_order(q, rad)? };
    let eight = q % 4 == 3 && n.is_multiple_of(8);
    let tag = if w == 1 {
        if eight {
            CaseTag::BaseTrinomial
        } else {
            CaseTag::BaseSimple
        }
    } else if !is_prime(w) {
        CaseTag::Unsupported
    } else if w == 2 {
        CaseTag::WTwo
    } else if eight {
        CaseTag::WOdd8n
    } else {
        CaseTag::WOddSimple
    };
    Ok(Case { tag, w })
}

/// `gcd(n, q^s - 1)` without forming `q^s`.
fn gcd_pow_minus_one(n: Nat, q: Nat, s: Nat) -> Nat {
    let r = (pow_mod(q, s, n) + n - 1) % n;
    gcd(n, r)
}

/// The gcd-only part of the parameters, safe for any `w`.
#[derive(Debug, Clone, Copy)]
struct Shape {
    split: RadicalSplit,
    g1: Nat,
    g2: Nat,
    gw: Nat,
    g2w: Nat,
    mw1: Nat,
    r: u32,
}

impl Shape {
    fn new(n: Nat, q: Nat, case: Case) -> Result<Self> {
        if case.tag == CaseTag::Unsupported {
            return Err(Error::Unsupported { w: case.w });
        }
        let w = case.w;
        let split = radical_split(n, q, w)?;
        let g1 = gcd(n, q - 1);
        let g2 = gcd_pow_minus_one(n, q, 2);
        let gw = gcd_pow_minus_one(n, q, w);
        let g2w = gcd_pow_minus_one(n, q, 2 * w);
        let r = if n.is_multiple_of(2) && q % 2 == 1 {
            v2(n / 2).min(v2(q + 1))
        } else {
            0
        };
        let mw1 = match case.tag {
            CaseTag::WOdd8n => {
                let q2 = q
                    .checked_mul(q)
                    .map(|x| x - 1)
                    .ok_or(Error::Overflow("q^2"))?;
                split.n1 / gcd(split.n1, q2)
            }
            CaseTag::BaseSimple | CaseTag::BaseTrinomial => n / g1,
            _ => split.n1 / gcd(split.n1, q - 1),
        };
        Ok(Shape {
            split,
            g1,
            g2,
            gw,
            g2w,
            mw1,
            r,
        })
    }
}

/// Derived parameters of a case: `m_s = n / gcd(n, q^s - 1)` and
/// `l_s = (q^s - 1) / gcd(n, q^s - 1)` for `s = 1, 2, w, 2w`, together with
/// `m_{w,1}` and `r = min(v2(n/2), v2(q+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseParams {
    pub n: Nat,
    pub q: Nat,
    pub w: Nat,
    pub case: Case,
    pub split: RadicalSplit,
    pub g1: Nat,
    pub g2: Nat,
    pub gw: Nat,
    pub g2w: Nat,
    pub m1: Nat,
    pub l1: Nat,
    pub m2: Nat,
    pub l2: Nat,
    pub mw: Nat,
    pub lw: Nat,
    pub m2w: Nat,
    pub l2w: Nat,
    /// `n1 / gcd(n1, q - 1)`; in the `WOdd8n` case `n1 / gcd(n1, q^2 - 1)`.
    pub mw1: Nat,
    pub r: u32,
}

pub fn derive_params(n: Nat, q: Nat, case: Case) -> Result<CaseParams> {
    check_coprime(n, q)?;
    let sh = Shape::new(n, q, case)?;
    let w32 = u32::try_from(case.w).map_err(|_| Error::Overflow("w"))?;
    let l = |s: u32, g: Nat| -> Result<Nat> { Ok((checked_pow(q, s)? - 1) / g) };
    Ok(CaseParams {
        n,
        q,
        w: case.w,
        case,
        split: sh.split,
        g1: sh.g1,
        g2: sh.g2,
        gw: sh.gw,
        g2w: sh.g2w,
        m1: n / sh.g1,
        l1: (q - 1) / sh.g1,
        m2: n / sh.g2,
        l2: l(2, sh.g2)?,
        mw: n / sh.gw,
        lw: l(w32, sh.gw)?,
        m2w: n / sh.g2w,
        l2w: l(2 * w32, sh.g2w)?,
        mw1: sh.mw1,
        r: sh.r,
    })
}

/// `x mod g` in `[1, g]`.
fn residue(x: Nat, g: Nat) -> Nat {
    match x % g {
        0 => g,
        r => r,
    }
}

/// Whether `u` is the least of `u, u*m, ..., u*m^{len-1}` taken in `[1, g]`.
fn is_orbit_min(u: Nat, m: Nat, g: Nat, len: Nat) -> bool {
    let mut x = residue(u, g);
    for _ in 1..len {
        x = residue(crate::arith::mul_mod(x, m, g), g);
        if x < u {
            return false;
        }
    }
    true
}

/// The two printed readings of the "not already over F_q" condition on S_t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SCondition {
    /// `(q^w - 1)/(q - 1) ∤ u l_w`, i.e. `delta^{u l_w}` is not in F_q.
    NotFixed,
    /// `gcd(n, (q^w - 1)/(q - 1)) ∤ u`.
    GcdDivides,
}

/// S_t for the odd-`w` cases, with the condition the case uses: the
/// fixed-point form for `WOddSimple`, the gcd form for `WOdd8n`.
pub fn enum_s_t(t: Nat, params: &CaseParams) -> Vec<Nat> {
    let cond = if params.case.tag == CaseTag::WOdd8n {
        SCondition::GcdDivides
    } else {
        SCondition::NotFixed
    };
    enum_s_t_with(t, params, cond)
}

pub fn enum_s_t_with(t: Nat, params: &CaseParams, cond: SCondition) -> Vec<Nat> {
    let q = params.q;
    let g = params.gw;
    let big_b = (checked_pow(q, params.w as u32).expect("q^w fits") - 1) / (q - 1);
    let gb = gcd(params.n, big_b);
    (1..=g)
        .filter(|&u| gcd(u, t) == 1)
        .filter(|&u| match cond {
            SCondition::NotFixed => !(u * params.lw).is_multiple_of(big_b),
            SCondition::GcdDivides => u % gb != 0,
        })
        .filter(|&u| is_orbit_min(u, q, g, params.w))
        .collect()
}

/// R_t for the trinomial families over F_q.
///
/// `BaseTrinomial`: `2^r ∤ u` and `u < {qu}` modulo `gcd(n, q^2-1)`.
/// `WTwo`: `(q+1) ∤ u l_2` and `u` minimal in `{u, qu}`.
pub fn enum_r_t(t: Nat, params: &CaseParams) -> Vec<Nat> {
    let q = params.q;
    let g = params.g2;
    match params.case.tag {
        CaseTag::BaseTrinomial => {
            let two_r = 1 << params.r;
            (1..=g)
                .filter(|&u| gcd(u, t) == 1 && u % two_r != 0)
                .filter(|&u| u < crate::arith::mul_mod(q, u, g))
                .collect()
        }
        CaseTag::WTwo => (1..=g)
            .filter(|&u| gcd(u, t) == 1)
            .filter(|&u| !(u * params.l2).is_multiple_of(q + 1))
            .filter(|&u| is_orbit_min(u, q, g, 2))
            .collect(),
        _ => Vec::new(),
    }
}

/// R^(1)_t: trinomial indices `u' <= 2^r gcd(n, q-1)` with `2^r ∤ u'`, minimal
/// in `{u', u' q^w}` modulo `gcd(n, q^2-1)`.
pub fn enum_r1_t(t: Nat, params: &CaseParams) -> Vec<Nat> {
    let two_r: Nat = 1 << params.r;
    let g = params.g2;
    let qw = pow_mod(params.q, params.w, g);
    (1..=two_r * params.g1)
        .filter(|&u| gcd(u, t) == 1 && u % two_r != 0)
        .filter(|&u| is_orbit_min(u, qw, g, 2))
        .collect()
}

/// R^(2)_t: indices of the 2w-orbit products, `u <= gcd(n, q^{2w}-1)` with
/// `2^r ∤ u`, `gcd(n, (q^w-1)/(q-1)) ∤ u`, minimal in its q-orbit.
pub fn enum_r2_t(t: Nat, params: &CaseParams) -> Vec<Nat> {
    let q = params.q;
    let two_r: Nat = 1 << params.r;
    let g = params.g2w;
    let big_b = (checked_pow(q, params.w as u32).expect("q^w fits") - 1) / (q - 1);
    let gb = gcd(params.n, big_b);
    (1..=g)
        .filter(|&u| gcd(u, t) == 1 && u % two_r != 0 && u % gb != 0)
        .filter(|&u| is_orbit_min(u, q, g, 2 * params.w))
        .collect()
}

/// Serret's criterion: `x^t - eta` is irreducible over F_q iff `t = 1`, or
/// `rad(t) | o(eta)`, `gcd(t, (q-1)/o(eta)) = 1` and `4 | t ⇒ 4 | q - 1`.
pub fn serret_binomial_irreducible(t: Nat, eta_order: Nat, q: Nat) -> bool {
    if t == 1 {
        return true;
    }
    if t == 0 || eta_order == 0 || !(q - 1).is_multiple_of(eta_order) {
        return false;
    }
    let ft = factorize(t);
    ft.primes().all(|p| eta_order.is_multiple_of(p))
        && gcd(t, (q - 1) / eta_order) == 1
        && (!t.is_multiple_of(4) || (q - 1).is_multiple_of(4))
}

/// [`serret_binomial_irreducible`] for an element of a context whose group
/// order is `q - 1`.
pub fn serret_for_element(t: Nat, eta: &FieldElement, ctx: &FieldContext) -> Result<bool> {
    let q = ctx.size().ok_or(Error::Overflow("field size"))?;
    Ok(serret_binomial_irreducible(t, ctx.element_order(eta)?, q))
}

fn fq_binomial(tower: &Tower, t: Nat, c: &FieldElement) -> Result<Polynomial> {
    let fq = tower.fq().clone();
    let c = tower.to_fq(c)?;
    let lead = Polynomial::monomial(fq.clone(), &fq.one(), t as usize);
    lead.sub(&Polynomial::monomial(fq, &c, 0))
}

/// `x^{2t} - b x^t + c` with `b = a + a^q`, `c = a^{q+1}`.
fn fq_trinomial(tower: &Tower, t: Nat, a: &FieldElement) -> Result<Polynomial> {
    let big = tower.big();
    let conj = tower.frobenius(a);
    let b = tower.to_fq(&big.add(a, &conj))?;
    let c = tower.to_fq(&big.mul(a, &conj))?;
    let fq = tower.fq().clone();
    let t = t as usize;
    let mut coeffs = vec![fq.zero(); 2 * t + 1];
    coeffs[2 * t] = fq.one();
    coeffs[t] = fq.neg(&b);
    coeffs[0] = fq.add(&coeffs[0], &c);
    Polynomial::from_coeffs(fq, coeffs)
}

fn big_binomial(tower: &Tower, t: Nat, c: &FieldElement) -> Result<Polynomial> {
    let big = tower.big().clone();
    let lead = Polynomial::monomial(big.clone(), &big.one(), t as usize);
    lead.sub(&Polynomial::monomial(big, c, 0))
}

/// `f · f^σ · ... · f^{σ^{len-1}}` over the big field, with `σ` the q-power
/// map on coefficients, returned over the canonical F_q. Fails with
/// [`Error::NotInSubfield`] when the product is not defined over F_q.
pub fn frobenius_orbit_product(f: &Polynomial, tower: &Tower, orbit_len: Nat) -> Result<Polynomial> {
    if orbit_len == 0 {
        return Err(Error::InvalidArgument("orbit length must be positive".into()));
    }
    let stride = f.stride().max(1);
    let g = f.compress(stride);
    let mut conj = g.clone();
    let mut prod = g;
    for _ in 1..orbit_len {
        conj = conj.frobenius_coeffs(tower.q());
        prod = prod.mul(&conj)?;
    }
    tower.descend(&prod.expand(stride))
}

fn divisors(m: Nat) -> Vec<Nat> {
    factorize(m).divisors()
}

fn assemble(params: &CaseParams, tower: &Tower, factors: Vec<LabeledFactor>, notes: Vec<String>) -> Factorization {
    Factorization::assemble(
        params.n,
        params.q,
        params.case,
        Engine::Explicit,
        tower.fq().clone(),
        factors,
        notes,
    )
}

fn expect_case(params: &CaseParams, tag: CaseTag) -> Result<()> {
    if params.case.tag != tag {
        return Err(Error::InvalidArgument(format!(
            "expected case {tag}, got {}",
            params.case.tag
        )));
    }
    Ok(())
}

/// Binomials `x^t - theta^{u l1}` with `t | bound`, `1 <= u <= gcd(n, q-1)`,
/// `gcd(u, t) = 1`, restricted to odd `t` when asked.
fn prime_binomials(params: &CaseParams, tower: &Tower, bound: Nat, odd_only: bool) -> Result<Vec<LabeledFactor>> {
    let big = tower.big();
    let mut out = Vec::new();
    for t in divisors(bound) {
        if odd_only && t % 2 == 0 {
            continue;
        }
        for u in (1..=params.g1).filter(|&u| gcd(u, t) == 1) {
            let c = big.pow(tower.theta(), u * params.l1);
            out.push(LabeledFactor::new(fq_binomial(tower, t, &c)?, Source::Binomial));
        }
    }
    Ok(out)
}

pub fn factor_base_simple(params: &CaseParams, tower: &Tower) -> Result<Factorization> {
    expect_case(params, CaseTag::BaseSimple)?;
    let factors = prime_binomials(params, tower, params.m1, false)?;
    Ok(assemble(params, tower, factors, Vec::new()))
}

pub fn factor_base_trinomial(params: &CaseParams, tower: &Tower) -> Result<Factorization> {
    expect_case(params, CaseTag::BaseTrinomial)?;
    let big = tower.big();
    let mut factors = prime_binomials(params, tower, params.m2, true)?;
    for t in divisors(params.m2) {
        for u in enum_r_t(t, params) {
            let a = big.pow(tower.alpha(), u * params.l2);
            factors.push(LabeledFactor::new(fq_trinomial(tower, t, &a)?, Source::Trinomial));
        }
    }
    Ok(assemble(params, tower, factors, Vec::new()))
}

pub fn factor_w_odd_simple(params: &CaseParams, tower: &Tower) -> Result<Factorization> {
    expect_case(params, CaseTag::WOddSimple)?;
    let big = tower.big();
    let mut factors = prime_binomials(params, tower, params.mw1, false)?;
    for t in divisors(params.mw) {
        for u in enum_s_t(t, params) {
            let c = big.pow(tower.delta(), u * params.lw);
            let f = big_binomial(tower, t, &c)?;
            let poly = frobenius_orbit_product(&f, tower, params.w)?;
            factors.push(LabeledFactor::new(poly, Source::OrbitBinomialProduct));
        }
    }
    let notes = vec![String::from(
        "S_t uses the fixed-point condition (q^w-1)/(q-1) does not divide u*l_w",
    )];
    Ok(assemble(params, tower, factors, notes))
}

pub fn factor_w_odd_8n(params: &CaseParams, tower: &Tower) -> Result<Factorization> {
    expect_case(params, CaseTag::WOdd8n)?;
    let big = tower.big();
    let mut factors = prime_binomials(params, tower, params.mw1, true)?;
    for t in divisors(params.m2w) {
        if t % 2 == 1 {
            for v in enum_s_t(t, params) {
                let c = big.pow(tower.delta(), v * params.lw);
                let f = big_binomial(tower, t, &c)?;
                let poly = frobenius_orbit_product(&f, tower, params.w)?;
                factors.push(LabeledFactor::new(poly, Source::OrbitBinomialProduct));
            }
        }
        for u in enum_r2_t(t, params) {
            let c = big.pow(tower.pi(), u * params.l2w);
            let f = big_binomial(tower, t, &c)?;
            let poly = frobenius_orbit_product(&f, tower, 2 * params.w)?;
            factors.push(LabeledFactor::new(poly, Source::OrbitTrinomialProduct));
        }
    }
    for t in divisors(params.mw1) {
        for u in enum_r1_t(t, params) {
            let a = big.pow(tower.alpha(), u * params.l2);
            factors.push(LabeledFactor::new(fq_trinomial(tower, t, &a)?, Source::Trinomial));
        }
    }
    let notes = vec![
        String::from("m_{w,1} taken as n1/gcd(n1, q^2-1)"),
        String::from("w-orbit binomial products restricted to odd t"),
        String::from("trinomial middle coefficient uses the conjugate pair a + a^q"),
        String::from("R1_t conjugation by q^w, which equals q modulo gcd(n, q^2-1)"),
    ];
    Ok(assemble(params, tower, factors, notes))
}

pub fn factor_w_two(params: &CaseParams, tower: &Tower) -> Result<Factorization> {
    expect_case(params, CaseTag::WTwo)?;
    let big = tower.big();
    let mut factors = prime_binomials(params, tower, params.mw1, false)?;
    for t in divisors(params.m2) {
        for u in enum_r_t(t, params) {
            let a = big.pow(tower.alpha(), u * params.l2);
            factors.push(LabeledFactor::new(fq_trinomial(tower, t, &a)?, Source::Trinomial));
        }
    }
    Ok(assemble(params, tower, factors, Vec::new()))
}

/// Dispatch on the case of `params` using an already built tower (its `w`
/// must match the case, with `w = 1` for the base cases).
pub fn factor_explicit(params: &CaseParams, tower: &Tower) -> Result<Factorization> {
    let fz = match params.case.tag {
        CaseTag::BaseSimple => factor_base_simple(params, tower),
        CaseTag::BaseTrinomial => factor_base_trinomial(params, tower),
        CaseTag::WOddSimple => factor_w_odd_simple(params, tower),
        CaseTag::WOdd8n => factor_w_odd_8n(params, tower),
        CaseTag::WTwo => factor_w_two(params, tower),
        CaseTag::Unsupported => Err(Error::Unsupported { w: params.w }),
    }?;
    debug_assert!(fz.duplicate_free());
    Ok(fz)
}

/// Factor `x^n - 1` over F_q.
///
/// A characteristic part `n = p^e n0` is stripped first and restored as
/// multiplicity `p^e`. Composite `w` falls back to the coset oracle, with a
/// note saying so.
pub fn factor(n: Nat, q: Nat, limits: &Limits) -> Result<Factorization> {
    let (p, s) = prime_power(q)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let e = valuation(p, n)?;
    let pe = p.pow(e);
    let n0 = n / pe;
    let case = classify_case(n0, q)?;
    let mut fz = if case.tag == CaseTag::Unsupported {
        let mut fz = crate::oracle::oracle_factor(n0, q, limits)?;
        fz.notes.push(format!(
            "ord_rad(n)(q) = {} is composite; factors come from the coset oracle",
            case.w
        ));
        fz
    } else {
        let params = derive_params(n0, q, case)?;
        let tower = build_tower(p, s, case.w, limits)?;
        factor_explicit(&params, &tower)?
    };
    if pe > 1 {
        fz.n = n;
        for f in &mut fz.factors {
            f.multiplicity = pe;
            f.source = Source::CharPower;
        }
        fz.notes.push(format!("x^{n} - 1 = (x^{n0} - 1)^{pe} in characteristic {p}"));
    }
    Ok(fz)
}

/// Closed-form factor counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCount {
    pub case: Case,
    pub total: Nat,
    pub by_degree: BTreeMap<Nat, Nat>,
}

type Q = Ratio<Nat>;

/// `∏_{p | m} (1 + v_p(vm) (p-1)/p)`, optionally over odd `p` only.
fn divisor_sum(m: Nat, vm: Nat, odd_only: bool) -> Q {
    let mut acc = Q::from_integer(1);
    for p in factorize(m).primes() {
        if odd_only && p == 2 {
            continue;
        }
        let v = factorize(vm).exponent_of(p) as Nat;
        acc *= Q::new(p + v * (p - 1), p);
    }
    acc
}

fn add_count(by_degree: &mut BTreeMap<Nat, Nat>, degree: Nat, num: Nat, den: Nat) -> Result<()> {
    if !num.is_multiple_of(den) {
        return Err(Error::InvalidArgument(format!(
            "non-integral factor count {num}/{den} at degree {degree}"
        )));
    }
    if num > 0 {
        *by_degree.entry(degree).or_insert(0) += num / den;
    }
    Ok(())
}

/// Closed-form total and per-degree counts for a supported case, without
/// building any polynomial.
pub fn count_factors(n: Nat, q: Nat) -> Result<FactorCount> {
    check_coprime(n, q)?;
    let case = classify_case(n, q)?;
    let sh = Shape::new(n, q, case)?;
    let w = case.w;
    let (g1, g2, gw, g2w, r) = (sh.g1, sh.g2, sh.gw, sh.g2w, sh.r);
    let two_r: Nat = 1 << r;
    let phi = |t: Nat| euler_phi(&factorize(t));
    let mut by_degree = BTreeMap::new();
    let total: Q = match case.tag {
        CaseTag::BaseSimple => {
            let m1 = n / g1;
            for t in divisors(m1) {
                add_count(&mut by_degree, t, phi(t) * g1, t)?;
            }
            divisor_sum(m1, m1, false) * Q::from_integer(g1)
        }
        CaseTag::BaseTrinomial => {
            let m2 = n / g2;
            for t in divisors(m2) {
                if t % 2 == 1 {
                    add_count(&mut by_degree, t, phi(t) * g1, t)?;
                    add_count(&mut by_degree, 2 * t, phi(t) * (two_r - 1) * g1, 2 * t)?;
                } else {
                    add_count(&mut by_degree, 2 * t, phi(t) * two_r * g1, 2 * t)?;
                }
            }
            let v = v2(m2) as Nat;
            let middle = Q::new(1, 2) + Q::new(two_r * (2 + v), 4);
            Q::from_integer(g1) * middle * divisor_sum(m2, m2, true)
        }
        CaseTag::WOddSimple => {
            let mw = n / gw;
            let mw1 = sh.mw1;
            for t in divisors(mw) {
                if mw1 % t == 0 {
                    add_count(&mut by_degree, t, phi(t) * g1, t)?;
                    add_count(&mut by_degree, w * t, phi(t) * (gw - g1), w * t)?;
                } else {
                    add_count(&mut by_degree, w * t, phi(t) * gw, w * t)?;
                }
            }
            divisor_sum(mw, mw, false) * Q::new(gw, w)
                + divisor_sum(mw1, mw1, false) * Q::new((w - 1) * g1, w)
        }
        CaseTag::WOdd8n => {
            let m2w = n / g2w;
            let mw1 = sh.mw1;
            for t in divisors(m2w) {
                let p = phi(t);
                let (low, high) = if mw1 % t == 0 { (g1, gw - g1) } else { (0, gw) };
                if t % 2 == 1 {
                    add_count(&mut by_degree, t, p * low, t)?;
                    add_count(&mut by_degree, 2 * t, p * (two_r - 1) * low, 2 * t)?;
                    add_count(&mut by_degree, w * t, p * high, w * t)?;
                    add_count(&mut by_degree, 2 * w * t, p * (two_r - 1) * high, 2 * w * t)?;
                } else {
                    add_count(&mut by_degree, 2 * t, p * two_r * low, 2 * t)?;
                    add_count(&mut by_degree, 2 * w * t, p * two_r * high, 2 * w * t)?;
                }
            }
            divisor_sum(m2w, m2w, false) * Q::new((two_r / 2) * gw, w)
                + divisor_sum(m2w, m2w, true) * Q::new(gw, 2 * w)
                + divisor_sum(mw1, m2w, false) * Q::new((two_r / 2) * (w - 1) * g1, w)
                + divisor_sum(mw1, m2w, true) * Q::new((w - 1) * g1, 2 * w)
        }
        CaseTag::WTwo => {
            let m2 = n / g2;
            let m21 = sh.mw1;
            for t in divisors(m2) {
                if m21 % t == 0 {
                    add_count(&mut by_degree, t, phi(t) * g1, t)?;
                    add_count(&mut by_degree, 2 * t, phi(t) * (g2 - g1), 2 * t)?;
                } else {
                    add_count(&mut by_degree, 2 * t, phi(t) * g2, 2 * t)?;
                }
            }
            divisor_sum(m2, m2, false) * Q::new(g2, 2) + divisor_sum(m21, m21, false) * Q::new(g1, 2)
        }
        CaseTag::Unsupported => return Err(Error::Unsupported { w }),
    };
    if !total.is_integer() {
        return Err(Error::InvalidArgument(format!(
            "closed-form count {total} is not an integer at n={n}, q={q}"
        )));
    }
    Ok(FactorCount {
        case,
        total: total.to_integer(),
        by_degree,
    })
}
