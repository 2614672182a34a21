//! Exact arithmetic over Q and over simple extensions K = Q[u]/(A(u)).

mod extension;
mod rational;

pub use extension::{nf_arith, nf_inverse, parse_u_poly, NfOp, NumberField, NumberFieldElem};
pub use rational::Rational;

use alloc::string::String;
use core::fmt;

/// Errors from field-level arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// Denominator is zero, or inversion of zero was requested.
    DivisionByZero,
    /// Element is not invertible.
    NotInvertible,
    /// Operands belong to different parent fields.
    MismatchedParents,
    /// A textual form could not be parsed.
    Parse(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::NotInvertible => write!(f, "not invertible"),
            FieldError::MismatchedParents => write!(f, "mismatched parent fields"),
            FieldError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

/// A field whose elements can live as circuit constants.
///
/// `Context` carries whatever is needed to mint fresh elements: nothing for
/// Q, the parent `NumberField` for extension elements. All operations are
/// exact. Implementations panic on cross-field operands; the checked entry
/// points (`nf_arith`, `nf_inverse`) return errors instead and are the only
/// way user input reaches this arithmetic.
pub trait Field: Clone + PartialEq + Eq + Ord + fmt::Debug + fmt::Display {
    type Context: Clone + PartialEq + fmt::Debug;

    fn context(&self) -> Self::Context;
    fn zero(ctx: &Self::Context) -> Self;
    fn one(ctx: &Self::Context) -> Self;
    fn from_rational(ctx: &Self::Context, r: &Rational) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inverse(&self) -> Result<Self, FieldError>;

    fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inverse()?))
    }

    fn is_one(&self) -> bool {
        let ctx = self.context();
        *self == Self::one(&ctx)
    }

    /// Description length of the element in bits, used by circuit size
    /// accounting (edge count + total constant description length).
    fn desc_bits(&self) -> u64;
}
