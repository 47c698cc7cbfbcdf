//! Exact sparse multivariate polynomials over the rationals.
//!
//! Every polynomial object in the crate (vector fields, Lyapunov ansatz pieces,
//! focal quantities, comitants, Hilbert numerators) is a [`Poly`]. Variables are
//! the phase variables `x`, `y` followed by coefficient symbols whose names live in
//! a [`Symbols`] table supplied for parsing and printing.

mod monomial;
mod parse;
mod polynomial;
mod var;

use num_bigint::BigInt;
use thiserror::Error;

pub use monomial::Monomial;
pub use polynomial::{Inhomogeneous, Poly};
pub use var::{Symbols, VarId, VarKind};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `num` or `num/den`.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let t = s.trim();
    let bad = || PolyError::Parse { pos: 0, msg: format!("invalid rational `{t}`") };
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(PolyError::Parse { pos: 0, msg: "zero denominator".into() });
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}
