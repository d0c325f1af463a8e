//! Exact computer algebra for globally conformal invariant quantum field theory.
//!
//! The crate is organized bottom-up:
//!
//! - [`exactring`]: rationals and Laurent polynomials in squared distances
//! - [`linalg`]: exact sparse linear solves
//! - [`pointcalc`]: wave operators and gradient contractions as rho-derivations
//! - [`freefield`]: Wick-contraction oracle for free-field correlators
//! - [`biharmonic`]: the twist-two PDE, double-pole structures, completion series
//! - [`waves`]: 4D and 2D conformal partial waves and their branching
//! - [`characters`]: conformal characters restricted to two dimensions
//! - [`twist2`]: twist-two conditions for unequal scalar dimensions
//! - [`acceptance`]: the end-to-end verification suite

pub mod acceptance;
pub mod biharmonic;
pub mod characters;
pub mod exactring;
pub mod freefield;
pub mod linalg;
pub mod pointcalc;
pub mod twist2;
pub mod waves;
