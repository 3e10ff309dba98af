//! Explicit irreducible factorization of `x^n - 1` over finite fields `F_q`.
//!
//! The explicit engine covers the cases where `rad(n) | q - 1` or
//! `ord_{rad(n)}(q)` is prime, building every factor as a binomial, a
//! trinomial or a Frobenius-orbit product of binomials. An independent
//! cyclotomic-coset oracle provides ground truth and handles the remaining
//! cases.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod explicit;
pub mod field;
pub mod oracle;
pub mod poly;
mod primepoly;
pub mod subfield;
pub mod tower;

pub use arith::{FactoredNat, Nat, RadicalSplit};
pub use error::{Error, Result};
pub use explicit::{
    classify_case, count_factors, derive_params, factor, Case, CaseParams, CaseTag, Factorization,
    FactorCount, LabeledFactor, Source,
};
pub use field::{find_irreducible_polynomial, find_primitive_polynomial, FieldContext, FieldElement, Limits};
pub use oracle::{cyclotomic_cosets, is_irreducible, oracle_factor, verify_factorization, CosetPartition, VerificationReport};
pub use poly::{CanonicalKey, Polynomial};
pub use tower::{build_tower, Tower};
