//! Proves global asymptotic stability of equilibria of rational difference
//! equations by showing that some iterate `Q^K` of the lifted map is a
//! contraction towards the equilibrium.
//!
//! The contraction condition reduces to non-negativity of a multivariate
//! polynomial on the positive orthant, which [`positivity`] decides by
//! splitting the orthant at the equilibrium, finitizing unbounded regions and
//! subdividing boxes until simple coefficient tests succeed.

pub mod conjecture;
pub mod driver;
pub mod error;
pub mod poly;
pub mod positivity;
pub mod recurrence;

pub use num_rational::BigRational;
pub use poly::MultiPoly;
