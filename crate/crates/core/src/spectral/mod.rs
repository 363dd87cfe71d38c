//! Periodic grids, transforms and the linear operators of the rotating system.

mod checkpoint;
mod fft;
mod field;
mod grid;
mod ops;
pub mod random;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_VERSION, HEADER_LEN};
pub use fft::{with_transform, Transform};
pub use field::{Complex64, SpectralField, DIV_TOL};
pub use grid::Grid;
pub use ops::{
    advect, coriolis_heat_propagate, curl, dealias, divergence, extend_planar, flux_mhd, gradient,
    flux_mhd_with_speed, induction, partial,
    heat_propagate, leray_project, physical_product, pressure_split, restrict_planar, PressurePair,
};
