//! Solvers for the planar three-component limit system and the transported
//! magnetic field, with the energy-estimate monitors.

mod integrability;
mod monitors;
mod planar;
mod transported;

pub use integrability::{admissibility, sample_ce_integrability, IntegrabilityReport};
pub use monitors::{
    estimcs_constant, energy_inequality, EnergyCheck, ESTIMC_CONSTANT,
};
pub use planar::{
    cfl_bound, solve_2dmhd3, step_count, solve_2dmhd3_with, PlanarDiagnostics, PlanarRun, PlanarState,
    CFL_SAFETY,
};
pub use transported::{solve_transported_magnetic, solve_transported_magnetic_with, TransportedField};
