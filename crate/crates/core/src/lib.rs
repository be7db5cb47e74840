//! Numerical tools for the asymptotic convergence factor of plane compact sets
//! with finitely many components.

pub mod approx;
pub mod experiments;
pub mod fekete;
pub mod geometry;
pub mod io;
pub mod potential;
pub mod optimize;

/// A point of the complex plane.
pub type Point = num_complex::Complex64;
