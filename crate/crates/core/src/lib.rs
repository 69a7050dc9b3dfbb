//! Weight computations for generalized Reed-Muller codes R_q(r, m).
//!
//! The crate is layered bottom-up:
//!
//! - [`gf`]: finite field arithmetic on integer element codes.
//! - [`polyring`]: reduced polynomials as functions on F_q^m.
//! - [`grm`]: closed forms for the first three weights, with provenance tags.
//! - [`arrangements`]: point counts of block hyperplane arrangements and the
//!   named configuration catalog.
//! - [`constructors`]: explicit codewords that realize the weight formulas.
//! - [`spectrum`]: exhaustive oracles and the verification suites.

// Range checks are written as closed intervals, e.g. `t <= m - 1`; matrix loops index rows.
#![allow(clippy::int_plus_one, clippy::needless_range_loop)]

pub mod arrangements;
pub mod constructors;
pub mod gf;
pub mod grm;
pub mod polyring;
pub mod spectrum;

pub(crate) fn ipow(base: u64, exp: i64) -> u64 {
    assert!(exp >= 0, "negative exponent {exp}");
    base.pow(exp as u32)
}
