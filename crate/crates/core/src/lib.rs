//! Pseudo-spectral solvers and analysis tools for incompressible MHD under fast rotation.
//!
//! The crate is organised by layer: `spectral` holds grids, transforms and linear
//! operators; `besov` the Littlewood-Paley machinery; `limit` the planar limit
//! solvers; `rotating` the full 3D system; `dispersion` a whole-space quadrature
//! oracle; `harness` the experiment registry and report writers.

pub mod besov;
pub mod dispersion;
pub mod error;
pub mod harness;
pub mod limit;
pub mod rotating;
pub mod spectral;
pub mod stepper;
pub mod verdict;

pub use error::{Error, Result};
