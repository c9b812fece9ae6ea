//! Numerical laboratory for the instability of the Euclidean Schwarzschild
//! metric under Ricci flow: curvature of the background, the variational
//! negative mode of the Lichnerowicz Laplacian among radial diagonal
//! tensors, and the Ricci–de Turck flow started from that mode.

pub mod banded;
pub mod cli;
pub mod error;
pub mod flow;
pub mod functional;
pub mod geometry;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
