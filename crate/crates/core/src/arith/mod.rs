//! Exact arithmetic over prime fields: field elements, sparse multivariate
//! polynomials, the expression parser and dense univariate polynomials.

pub mod field;
pub mod multipoly;
pub mod parse;
pub mod unipoly;

pub use field::FieldCtx;
pub use multipoly::{Monomial, MultiPoly, Term, VarCtx};
pub use parse::parse_poly;
pub use unipoly::{uni_gcd, Factor, UniPoly};
