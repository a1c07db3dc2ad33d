//! Exact computations in the extended category O for `gl∞` and `sl∞`.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: weights as eventually affine rational sequences, Borel orders, ρ,
//!   the root order and the (anti)dominance classification.
//! * [`coxeter`]: finitary (signed) permutation groups of types A, B and D with length,
//!   descents, reduced words, Bruhat order and strong exchange.
//! * [`hecke`]: Laurent polynomials in `v = q^{1/2}`, the Hecke algebra, R-polynomials and
//!   Kazhdan-Lusztig polynomials with a persistent cache.
//! * [`category_o`]: dot actions, blocks, Verma module structure, multiplicities, formal
//!   characters and truncated BGG reciprocity.

pub mod category_o;
pub mod coxeter;
pub mod hecke;
pub mod weights;
