//! Connectedness polynomials for weighted first-order model counting.
//!
//! The library computes, for a two-variable sentence with a distinguished
//! binary relation, exact polynomials that classify the sentence's models by
//! connectivity data of the relation's graph:
//!
//! * the weak connectedness polynomial (WCP) and its bivariate extension that
//!   additionally tracks edge counts,
//! * the strict and non-strict connectedness polynomials (SSCP / NSCP) that
//!   fold in directed chromatic polynomials.
//!
//! Coefficient extraction and point evaluation on these polynomials answer
//! weighted model counting queries under graph-structural axioms
//! (connectivity, bipartiteness, trees and forests, acyclicity, strong
//! connectedness, linear orders, and combinations), and recover the Tutte
//! polynomial and directed chromatic polynomials of logic-encodable graph
//! families. All arithmetic is exact over arbitrary-precision rationals.
//!
//! ```
//! use liftpoly::axioms::wfomc_with_axiom;
//! use liftpoly::fol::parse_sentence;
//! use liftpoly::poly::rat;
//!
//! // connected simple graphs on four labeled vertices
//! let query = parse_sentence(
//!     "predicate R/2\nsentence: true\naxiom: connected_1(R)",
//! )?;
//! assert_eq!(wfomc_with_axiom(&query, 4)?, rat(38));
//! # Ok::<(), liftpoly::Error>(())
//! ```

pub mod axioms;
pub mod cells;
pub mod error;
pub mod fol;
pub mod graphpoly;
pub mod normalize;
pub mod oracle;
pub mod poly;
pub mod scp;
pub mod wcp;

pub use error::{Error, Result};
pub use poly::{Poly, Rational, Symbol};
