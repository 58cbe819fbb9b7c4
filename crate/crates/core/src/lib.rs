//! Random Girko matrices, their reciprocal characteristic polynomials and the
//! Gaussian analytic limit of those polynomials inside the unit disc.

pub mod cli;
pub mod densela;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod limitlaw;
pub mod matrix;
pub mod momentcomb;
pub mod recpoly;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
