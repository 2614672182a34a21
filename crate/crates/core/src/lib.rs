//! Exact computer algebra over Q and its simple algebraic extensions:
//! algebraic-circuit DAGs, brute-force dense oracles, pseudo-quotients and
//! pseudo-resultants, Newton lifting of approximate roots, minimal-polynomial
//! recovery via Cramer determinant circuits, and the candidate-factor
//! pipeline built from those pieces.
//!
//! Everything in this crate is `no_std` + `alloc`: pure functions on
//! immutable values, big-rational arithmetic throughout, no floating point.
//! IO, file formats and the command-line front end live in the companion
//! `circfactor-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod densepoly;
pub mod field;
pub mod hitting;
pub mod interp;
pub mod minpoly;
pub mod newton;
pub mod pipeline;
pub mod pseudo;
pub mod rng;
pub mod univar;
pub mod verify;

pub use circuit::{Circuit, CircuitBuilder, CircuitError, CircuitStats, Node, NodeId};
pub use field::{Field, FieldError, NumberField, NumberFieldElem, Rational};
