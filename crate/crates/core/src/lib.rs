//! Exact computations behind the projective normal forms and Tyurin
//! degenerations of K3 surfaces polarised by `M = H ⊕ E8 ⊕ E8`.
//!
//! Everything here is pure and allocation-only: no IO, no floating point.
//! The modules map onto the mathematical layers:
//!
//! * [`lattice`]: integer bilinear forms, Smith normal form, finite quotients
//!   and A/D/E classification of root configurations.
//! * [`ns`]: the 21-generator model of the Néron–Severi lattice (the roots
//!   `E0..E18` plus the curves `S` and `T`).
//! * [`poly`]: Laurent polynomials with symbolic parameters.
//! * [`toric`]: polar duality and the Cox grading of `WP(1,1,4,6)°`.
//! * [`degen`]: the combinatorial flop engine on Tyurin central fibres.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod degen;
pub mod lattice;
pub mod ns;
pub mod poly;
pub mod rational;
pub mod toric;

pub use rational::Q;

/// One named, checkable clause of a verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: alloc::string::String,
    pub passed: bool,
    pub detail: alloc::string::String,
}

impl Clause {
    pub fn new(id: impl Into<alloc::string::String>, passed: bool, detail: impl Into<alloc::string::String>) -> Self {
        Clause {
            id: id.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// True iff every clause passed.
pub fn all_passed(clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| c.passed)
}
