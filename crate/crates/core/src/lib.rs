//! Chirality, ring matrices and tangency geometry of infinite cylinders.
//!
//! An *n-cross* is a set of `n` oriented lines (cylinder axes); an *n-knot*
//! is an n-cross of cylinders that all touch pairwise. The crate extracts
//! the topological matrices of a configuration, evaluates the invariants
//! built from them, searches for forbidden substructures, and solves the
//! tangency equations numerically.

pub mod catalog;
mod catalog_data;
pub mod census;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod mesh;
pub mod solver;
pub mod topomatrix;

pub use error::{Error, Result};
pub use geometry::{Configuration, EllipticCylinder, OrientedLine};
pub use matrix::IntegerMatrix;
pub use topomatrix::{RingMatrix, SeidelMatrix, SpiralityMatrix};
