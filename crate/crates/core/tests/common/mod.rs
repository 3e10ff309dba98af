#![allow(dead_code)]

use cyclofactor_core::arith::{checked_pow, gcd, Nat};
use cyclofactor_core::{classify_case, Case, CaseTag};

pub const GRID_Q: [Nat; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];
pub const GRID_N_MAX: Nat = 300;
pub const FIELD_BOUND: Nat = 1 << 63;

/// `q^{2w}`, the size of the largest field of the tower, if it fits.
pub fn tower_size(q: Nat, w: Nat) -> Option<Nat> {
    let w = u32::try_from(w).ok()?;
    checked_pow(q, 2 * w).ok()
}

/// Supported `(q, n, case)` triples with `n <= n_max` whose tower fits the
/// field bound, in `(q, n)` order.
pub fn grid(qs: &[Nat], n_max: Nat) -> Vec<(Nat, Nat, Case)> {
    let mut out = Vec::new();
    for &q in qs {
        for n in 1..=n_max {
            if gcd(n, q) != 1 {
                continue;
            }
            let case = classify_case(n, q).unwrap();
            if case.tag == CaseTag::Unsupported {
                continue;
            }
            if tower_size(q, case.w).is_some_and(|s| s <= FIELD_BOUND) {
                out.push((q, n, case));
            }
        }
    }
    out
}

pub fn acceptance_grid() -> Vec<(Nat, Nat, Case)> {
    grid(&GRID_Q, GRID_N_MAX)
}
