//! Frobenius-splitting invariants in characteristic p.
//!
//! The crate computes Fedder-type F-purity tests, compatibility of F-pure
//! centers, F-differents of centers cut out by complete intersections, and
//! the moduli divisor of one-parameter families of plane cubics, where the
//! last two routes can be checked against each other.

pub mod arith;
pub mod divisor;
pub mod error;
pub mod fdifferent;
pub mod fedder;
pub mod fibration;
pub mod groebner;

pub use error::{Error, Result};

/// Exact rational numbers used for divisor coefficients and thresholds.
pub type Rational = num_rational::Ratio<i64>;
