//! Three-state quantum walks on the integer line.
//!
//! Coins, windowed evolution, generalized eigenvectors and closed-form
//! stationary measures for the Grover walk and its one-defect variants.

pub mod cli;
pub mod coins;
pub mod linalg3;
pub mod stationary;
pub mod tolerance;
pub mod walk;

pub use linalg3::{c64, cis, Complex64, ComplexScalar, Mat3, Vec3};
