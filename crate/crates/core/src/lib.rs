//! Exact alpha-invariants of smooth toric Fano manifolds.
//!
//! The input is a complete smooth fan, given by its primitive ray generators
//! `v_1, ..., v_d`. Everything is computed from the anticanonical polytope
//! `P = {y : ⟨y, -v_i⟩ ≤ 1}` with exact rational arithmetic.

pub mod catalog;
pub mod input;
pub mod invariants;
pub mod kernel;
pub mod lp;
pub mod oracle;
pub mod polytope;
pub mod symmetry;

pub use kernel::{Rat, RatMat, RatVec};
