//! The chain F_q ⊂ F_{q^w} ⊂ F_{q^{2w}} realized inside one field
//! F_{p^{2ws}}, with the generators pi, delta, alpha, theta all powers of the
//! residue of `x`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::arith::{checked_pow, Nat};
use crate::error::{Error, Result};
use crate::field::{find_primitive_polynomial, FieldContext, FieldElement, Limits};
use crate::poly::{CanonicalKey, Polynomial};
use crate::subfield::SubfieldEmbedding;

#[derive(Debug, Clone)]
pub struct Tower {
    big: Arc<FieldContext>,
    q: Nat,
    w: Nat,
    s: u32,
    pi: FieldElement,
    delta: FieldElement,
    alpha: FieldElement,
    theta: FieldElement,
    embedding: SubfieldEmbedding,
}

/// Build the tower for `q = p^s` and `w`.
///
/// `pi` is the residue of `x` in the first primitive polynomial of degree
/// `2ws`, and
/// `delta = pi^{q^w + 1}`, `alpha = pi^{(q^{2w}-1)/(q^2-1)}`,
/// `theta = pi^{(q^{2w}-1)/(q-1)}`.
pub fn build_tower(p: Nat, s: u32, w: Nat, limits: &Limits) -> Result<Tower> {
    if s == 0 || w == 0 {
        return Err(Error::InvalidArgument("tower needs s >= 1 and w >= 1".into()));
    }
    let q = checked_pow(p, s)?;
    let w32 = u32::try_from(w).map_err(|_| Error::Overflow("w"))?;
    let degree = 2 * (w as usize) * (s as usize);
    let p64 = u64::try_from(p).map_err(|_| Error::Overflow("characteristic"))?;
    let too_large = Error::FieldTooLarge { p: p64, degree };
    let qw = checked_pow(q, w32).map_err(|_| too_large.clone())?;
    let q2w = qw.checked_mul(qw).ok_or(too_large)?;
    let big = Arc::new(find_primitive_polynomial(p, degree, limits.field_bound)?);
    let fq = Arc::new(find_primitive_polynomial(p, s as usize, limits.field_bound)?);
    let pi = big.x();
    let delta = big.pow(&pi, qw + 1);
    let alpha = big.pow(&pi, (q2w - 1) / (q * q - 1));
    let theta = big.pow(&pi, (q2w - 1) / (q - 1));
    let embedding = SubfieldEmbedding::new(&big, &theta, fq)?;
    Ok(Tower {
        big,
        q,
        w,
        s,
        pi,
        delta,
        alpha,
        theta,
        embedding,
    })
}

impl Tower {
    pub fn big(&self) -> &Arc<FieldContext> {
        &self.big
    }

    /// The canonical F_q context all factors are reported in.
    pub fn fq(&self) -> &Arc<FieldContext> {
        self.embedding.fq()
    }

    pub fn q(&self) -> Nat {
        self.q
    }

    pub fn w(&self) -> Nat {
        self.w
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn pi(&self) -> &FieldElement {
        &self.pi
    }

    pub fn delta(&self) -> &FieldElement {
        &self.delta
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn theta(&self) -> &FieldElement {
        &self.theta
    }

    /// Basis `1, rho, ..., rho^{s-1}` of the F_q-subfield, where `rho` is the
    /// root of [`Tower::fq_modulus`] chosen among the powers of theta.
    pub fn fq_basis(&self) -> &[FieldElement] {
        self.embedding.basis()
    }

    /// Defining polynomial of the canonical F_q, constant-first.
    pub fn fq_modulus(&self) -> &[u64] {
        self.fq().modulus()
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.embedding
    }

    /// The q-power Frobenius map.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.big.pow(a, self.q)
    }

    pub fn in_fq(&self, a: &FieldElement) -> bool {
        &self.frobenius(a) == a
    }

    /// Canonical F_q element for a subfield element of the big field.
    pub fn to_fq(&self, e: &FieldElement) -> Result<FieldElement> {
        if !self.in_fq(e) {
            return Err(Error::NotInSubfield { q: self.q });
        }
        self.embedding.to_fq(&self.big, e)
    }

    /// Coordinates of a subfield element over F_p in the canonical basis.
    pub fn to_fq_coords(&self, e: &FieldElement) -> Result<Vec<u64>> {
        Ok(self.to_fq(e)?.coords().to_vec())
    }

    pub fn from_fq(&self, a: &FieldElement) -> FieldElement {
        self.embedding.from_fq(&self.big, a)
    }

    /// Rewrite a big-field polynomial with F_q coefficients over the
    /// canonical F_q context.
    pub fn descend(&self, f: &Polynomial) -> Result<Polynomial> {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| self.to_fq(c))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_coeffs(self.fq().clone(), coeffs)
    }

    /// Inverse of [`Tower::descend`].
    pub fn ascend(&self, f: &Polynomial) -> Result<Polynomial> {
        let coeffs = f.coeffs().iter().map(|c| self.from_fq(c)).collect();
        Polynomial::from_coeffs(self.big.clone(), coeffs)
    }

    pub fn canonical_key(&self, f: &Polynomial) -> Result<CanonicalKey> {
        Ok(self.descend(f)?.canonical_key())
    }
}
