use super::planar::PlanarRun;
use crate::besov::StateTrajectory;
use crate::error::Result;

/// Frozen constant of the `H^s` growth bound for the transported field.
///
/// Fitted on seed 1 of the limit-system calibration runs (worst 3.3e-8 over
/// `s` in {0, 0.5, 0.9}); the heat part dominates, so the fitted value sits at quadrature level.
pub const ESTIMC_CONSTANT: f64 = 1e-6;

/// Discrete check of `||u||^2 + ||b||^2 + 2 nu int ||grad u||^2 + 2 nu' int ||grad b||^2 <= E(0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyCheck {
    /// `max_t max(0, lhs - rhs) / rhs`
    pub inequality_residual: f64,
    /// `max_t |lhs - rhs| / rhs`
    pub balance_residual: f64,
}

pub fn energy_inequality(run: &PlanarRun) -> EnergyCheck {
    let d = &run.diagnostics;
    let e0 = d[0].energy;
    let mut integral = 0.0;
    let mut ineq: f64 = 0.0;
    let mut bal: f64 = 0.0;
    for n in 0..d.len() {
        if n > 0 {
            integral += 0.5 * (d[n].t - d[n - 1].t) * (d[n].dissipation + d[n - 1].dissipation);
        }
        let lhs = d[n].energy + integral;
        if e0 > 0.0 {
            ineq = ineq.max((lhs - e0).max(0.0) / e0);
            bal = bal.max((lhs - e0).abs() / e0);
        }
    }
    EnergyCheck { inequality_residual: ineq, balance_residual: bal }
}

/// Smallest constant `C'` for which
/// `||c(t)||^2_s + nu' int ||grad c||^2_s <= ||c0||^2_s exp((C'/nu') int (1 + ||u~||^2/nu'^2) ||grad u~||^2)`
/// holds at every sample.
pub fn estimcs_constant(c: &StateTrajectory, u_tilde: &StateTrajectory, nu_prime: f64, s: f64) -> Result<f64> {
    crate::besov::same_time_grid(c, u_tilde)?;
    let times = c.times();
    let c0 = c.states()[0].sobolev_sqr(s);
    let mut diss = 0.0;
    let mut growth = 0.0;
    let mut worst: f64 = 0.0;
    let g_of = |n: usize| {
        let u = &u_tilde.states()[n];
        (1.0 + u.norm_sqr() / (nu_prime * nu_prime)) * u.sobolev_sqr(1.0)
    };
    let d_of = |n: usize| nu_prime * c.states()[n].sobolev_sqr(s + 1.0);
    for n in 0..times.len() {
        if n > 0 {
            let h = times[n] - times[n - 1];
            diss += 0.5 * h * (d_of(n) + d_of(n - 1));
            growth += 0.5 * h * (g_of(n) + g_of(n - 1));
        }
        let lhs = c.states()[n].sobolev_sqr(s) + diss;
        if lhs > c0 && c0 > 0.0 {
            worst = worst.max(if growth > 0.0 { nu_prime * (lhs / c0).ln() / growth } else { f64::INFINITY });
        }
    }
    Ok(worst)
}
