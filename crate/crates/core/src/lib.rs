//! Exact symbolic toolkit for finite-dimensional Lie algebras of vector
//! fields on C^n whose coefficients are exponential polynomials.
//!
//! The layers, bottom up:
//!
//! * [`expr`]: exact scalars `sum c(params) x^m exp(q.x)`, parsing and printing.
//! * [`vectorfield`]: Lie brackets, generic rank, affine coordinate changes.
//! * [`linalg`] and [`liealg`]: exact spans, closures, structure constants, Killing form.
//! * [`rootsystem`]: rank-2 root data and the inductive Chevalley construction.
//! * [`solver`]: linear bracket constraints on a bounded ansatz.
//! * [`catalog`] and [`verifier`]: the library of canonical realizations and its checks.
//! * [`obstruction`]: the search for a G2 extension of the A2 forms.

pub mod catalog;
pub mod expr;
pub mod liealg;
pub mod linalg;
pub mod obstruction;
pub mod rootsystem;
pub mod solver;
pub mod vectorfield;
pub mod verifier;

pub use expr::{parse_expr, parse_field, Alphabet, ExpPoly, ParamPoly, Symbol, Q};
pub use vectorfield::{generic_rank, AffineMap, VectorField};
