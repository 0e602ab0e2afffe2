//! Exact birational geometry of the four-dimensional Garnier system.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! - [`exact`]: rationals, multivariate polynomials and rational functions,
//!   truncated Laurent series and first-order jets, all exact;
//! - [`lattice`]: the Néron–Severi bilattice of the 10- and 21-point blow-up
//!   models of P²×P², the tabulated Picard actions, roots and Kac translations;
//! - [`bmap`]: the Bäcklund generators as rational maps with their parameter
//!   actions;
//! - [`geom`]: the blow-up chart atlas and the geometric recomputation of the
//!   Picard actions;
//! - [`ham`]: the Hamiltonians, their vector fields and the symmetry checks.
//!
//! Every verdict is reached by exact arithmetic; randomness only picks
//! evaluation points and is always supplied by the caller.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bmap;
pub mod generator;
pub mod exact;
pub mod geom;
pub mod ham;
pub mod lattice;

pub use exact::{Field, Rational};
