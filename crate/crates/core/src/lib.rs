//! Weyl-group invariant theory along a symmetric-pair subspace.
//!
//! The crate is organized bottom-up:
//!
//! * [`polyring`]: exact rational polynomials, Jacobians, complex evaluation.
//! * [`rootsys`]: root systems, Weyl groups by reflection closure, and
//!   generated invariant families.
//! * [`restrict`]: pair configurations, restriction of invariants, the
//!   free-module rank and bounded-degree surjectivity.
//! * [`fiber`]: the deformed system `U(ζ;x) = a`, ramification predicates,
//!   homotopy fiber solving and the local inverse.
//! * [`pairdb`]: the exceptional / b-exceptional symmetric-pair tables.

pub mod fiber;
pub mod linalg;
pub mod pairdb;
pub mod polyring;
pub mod restrict;
pub mod rootsys;
