//! Exact computational engine for Hall algebras of quiver-representation
//! categories over finite fields.
//!
//! The library is organized around a [`repcat::Category`]: a fixed acyclic
//! quiver, a prime field order `q`, and an enumeration budget. On top of it
//! sit the classical (twisted, extended) Ringel-Hall algebras, derived Hall
//! numbers for stalk-sum objects of the bounded derived category, the
//! m-periodic extended and odd-periodic derived Hall algebras, and the
//! Bridgeland presentation layer. Every closed formula is paired with an
//! independent brute-force oracle that counts morphisms in concrete
//! complexes of projectives.
//!
//! All arithmetic is exact: counts are integers, coefficients live in the
//! quadratic field Q(sqrt q). There is no floating point anywhere.

pub mod config;
pub mod derived;
pub mod error;
pub mod ffla;
pub mod hall;
pub mod oracle;
pub mod parse;
pub mod periodic;
pub mod repcat;
pub mod scalar;
pub mod suites;
pub mod xcb;

pub use error::HallError;
pub use ffla::{FieldOrder, Matrix};
pub use repcat::{Category, DimVector, IsoClassId, KClass, Quiver, Rep};
pub use scalar::Scalar;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, HallError>;
