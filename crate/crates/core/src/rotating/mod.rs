//! The rotating 3D MHD solver, the filtered wave system and the perturbation budget.

mod budget;
mod data;
mod state;
mod wave;

pub use budget::{perturbation_budget, BudgetInputs, TermBudget, BUDGET_REGULARITIES};
pub use data::{assemble_ill_prepared, strong_gamma_range, IllPreparedData, StrongScaling};
pub use state::{
    energy_balance_residual, run_mhd, step_mhd_eps, step_rotating_ns, MhdDiagnostics, MhdRun,
    MhdState, RunFailure,
};
pub use wave::{solve_wave_system, wave_forcing, WaveRun};
