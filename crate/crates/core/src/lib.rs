//! Two-loop Loewner potential of disjoint smooth Jordan loops.
//!
//! The crate computes the potential of a loop pair through the
//! pre-Schwarzian formula and the Loewner–Kufarev (winding function)
//! formula, checks the multiple Grunsky equality and the Schwarzian
//! variational formula numerically, and evaluates the CFT modulus criterion
//! deciding whether circle-pair minimizers exist.

pub mod cft;
pub mod error;
pub mod loops;
pub mod minimize;
pub mod potentials;
pub mod quadrature;
pub mod series;
pub mod specfun;
pub mod uniformize;
pub mod variation;
pub mod zetadet;

pub use error::{Error, Result};
