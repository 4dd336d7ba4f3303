//! Exact combinatorics of Street's orientals in Steiner's chain model.
//!
//! The nerve `O(-,n)` of the `n`-th oriental is realised concretely: an
//! `m`-simplex is an integer linear combination of monotone maps `[m] -> [n]`
//! satisfying two positivity conditions ([`oriental::check_membership`]).
//! On top of that model the crate provides the pasting calculus
//! ([`pasting`]), the parent/child pairing that drives the filling of
//! `O(-,n)` from `Δ[n]` ([`anodyne`]), a replay checker for anodyne
//! certificates ([`certificate`]), and brute-force enumeration oracles
//! ([`enumeration`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod anodyne;
pub mod certificate;
pub mod chain;
pub mod enumeration;
pub mod error;
pub mod operator;
pub mod oriental;
pub mod pasting;

pub use chain::{parse_chain, Chain};
pub use error::Error;
pub use operator::Operator;
pub use oriental::{check_membership, OSimplex, Violation};
