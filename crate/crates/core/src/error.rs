use alloc::string::String;

use crate::arith::Nat;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("integer overflow while computing {0} (inputs are limited to 128 bits)")]
    Overflow(&'static str),
    #[error("{0} is not prime")]
    NotPrime(Nat),
    #[error("{0} is not a prime power")]
    NotPrimePower(Nat),
    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: Nat, b: Nat },
    #[error("rad({n}) does not divide {q}^{w} - 1")]
    RadicalNotDividing { n: Nat, q: Nat, w: Nat },
    #[error("field GF({p}^{degree}) exceeds the configured size bound")]
    FieldTooLarge { p: u64, degree: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("element is not in the GF({q}) subfield")]
    NotInSubfield { q: Nat },
    #[error("unsupported case: ord_rad(n)(q) = {w} is composite")]
    Unsupported { w: Nat },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
