//! Canonical coordinates for the F_q-subfield of a larger field.
//!
//! Every engine reports factors over one fixed presentation of F_q: the
//! context whose modulus `g` is the first primitive polynomial of degree `s`.
//! Inside a big field we locate a root `rho` of `g` and express subfield
//! elements in the basis `1, rho, ..., rho^{s-1}`. Because `y -> rho` is a
//! field embedding, polynomials produced in different big fields land in the
//! same F_q up to an automorphism, so their factor multisets can be compared
//! directly.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::Nat;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::primepoly::{inv_p, mul_p, sub_p};

#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    fq: Arc<FieldContext>,
    q: Nat,
    root: FieldElement,
    basis: Vec<FieldElement>,
    /// Coordinate positions of the big field that determine a subfield element.
    pivots: Vec<usize>,
    /// `s x s` matrix taking the pivot coordinates to F_q coordinates.
    solve: Vec<Vec<u64>>,
}

/// Evaluate a constant-first F_p polynomial at a big-field element.
fn eval_prime_poly(big: &FieldContext, f: &[u64], a: &FieldElement) -> FieldElement {
    let mut acc = big.zero();
    for &c in f.iter().rev() {
        acc = big.add(&big.mul(&acc, a), &big.from_int(c));
    }
    acc
}

impl SubfieldEmbedding {
    /// `generator` must have multiplicative order `q - 1` in `big`, where
    /// `q = |fq|`.
    pub fn new(big: &FieldContext, generator: &FieldElement, fq: Arc<FieldContext>) -> Result<Self> {
        let p = big.p();
        let s = fq.degree();
        if fq.p() != p || !big.degree().is_multiple_of(s) {
            return Err(Error::ContextMismatch);
        }
        let q = fq.size().ok_or(Error::Overflow("subfield size"))?;
        // The roots of the primitive modulus are among the powers of a
        // generator of F_q^*; the first exponent that works is taken.
        let mut root = None;
        let mut power = generator.clone();
        for _ in 1..q {
            if eval_prime_poly(big, fq.modulus(), &power).is_zero() {
                root = Some(power);
                break;
            }
            power = big.mul(&power, generator);
        }
        let root = root.ok_or(Error::NotInSubfield { q })?;

        let mut basis = Vec::with_capacity(s);
        let mut b = big.one();
        for _ in 0..s {
            basis.push(b.clone());
            b = big.mul(&b, &root);
        }

        // Row-reduce the s x D matrix whose rows are the basis vectors,
        // tracking the combination that produced each row.
        let d = big.degree();
        let mut rows: Vec<Vec<u64>> = basis.iter().map(|e| e.coords().to_vec()).collect();
        let mut combo: Vec<Vec<u64>> = (0..s)
            .map(|i| {
                let mut v = vec![0; s];
                v[i] = 1;
                v
            })
            .collect();
        let mut pivots = Vec::with_capacity(s);
        let mut rank = 0;
        for col in 0..d {
            if rank == s {
                break;
            }
            let Some(pr) = (rank..s).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            combo.swap(rank, pr);
            let inv = inv_p(rows[rank][col], p);
            for x in rows[rank].iter_mut() {
                *x = mul_p(*x, inv, p);
            }
            for x in combo[rank].iter_mut() {
                *x = mul_p(*x, inv, p);
            }
            for r in 0..s {
                if r == rank || rows[r][col] == 0 {
                    continue;
                }
                let f = rows[r][col];
                for j in 0..d {
                    let v = mul_p(f, rows[rank][j], p);
                    rows[r][j] = sub_p(rows[r][j], v, p);
                }
                for j in 0..s {
                    let v = mul_p(f, combo[rank][j], p);
                    combo[r][j] = sub_p(combo[r][j], v, p);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rank != s {
            return Err(Error::NotInSubfield { q });
        }
        // Row i of the reduced matrix is the unit vector on pivot i over the
        // pivot columns, so e = sum_i e[pivot_i] * row_i and the F_q
        // coordinates are sum_i e[pivot_i] * combo_i.
        Ok(SubfieldEmbedding {
            fq,
            q,
            root,
            basis,
            pivots,
            solve: combo,
        })
    }

    pub fn fq(&self) -> &Arc<FieldContext> {
        &self.fq
    }

    pub fn q(&self) -> Nat {
        self.q
    }

    /// The chosen root of the F_q modulus inside the big field.
    pub fn root(&self) -> &FieldElement {
        &self.root
    }

    /// `1, rho, ..., rho^{s-1}`.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Coordinates of a subfield element in the canonical F_q basis.
    pub fn to_fq(&self, big: &FieldContext, e: &FieldElement) -> Result<FieldElement> {
        let p = big.p();
        let s = self.basis.len();
        let mut coords = vec![0u64; s];
        for (i, &col) in self.pivots.iter().enumerate() {
            let c = e.coords()[col];
            if c == 0 {
                continue;
            }
            for (j, slot) in coords.iter_mut().enumerate() {
                *slot = (*slot + mul_p(c, self.solve[i][j], p)) % p;
            }
        }
        let out = self.fq.from_coords(coords)?;
        if &self.from_fq(big, &out) != e {
            return Err(Error::NotInSubfield { q: self.q });
        }
        Ok(out)
    }

    /// Image of an F_q element in the big field.
    pub fn from_fq(&self, big: &FieldContext, a: &FieldElement) -> FieldElement {
        let mut acc = big.zero();
        for (&c, b) in a.coords().iter().zip(&self.basis) {
            if c != 0 {
                acc = big.add(&acc, &big.scale(b, c));
            }
        }
        acc
    }
}
