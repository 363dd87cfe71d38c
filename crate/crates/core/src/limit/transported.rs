use super::planar::{cfl_bound, step_count};
use crate::besov::StateTrajectory;
use crate::error::{Error, Result};
use crate::spectral::{extend_planar, heat_propagate, induction, SpectralField, DIV_TOL};
use crate::stepper::if_heun_step;

/// A 3D magnetic field transported and stretched by a planar velocity.
#[derive(Clone, Debug)]
pub struct TransportedField {
    pub trajectory: StateTrajectory,
    pub nu_prime: f64,
}

/// Integrates `dc/dt - nu' Lap c + u~.grad c - c.grad u~ = 0`.
///
/// `u_tilde` is a planar velocity trajectory covering `[0, t_end]`; values between
/// samples are interpolated linearly in time.
pub fn solve_transported_magnetic(
    c0: &SpectralField,
    u_tilde: &StateTrajectory,
    nu_prime: f64,
    t_end: f64,
    dt: f64,
) -> Result<TransportedField> {
    solve_transported_magnetic_with(c0, u_tilde, nu_prime, t_end, dt, 1)
}

/// As [`solve_transported_magnetic`], keeping every `save_every`-th step and the last.
pub fn solve_transported_magnetic_with(
    c0: &SpectralField,
    u_tilde: &StateTrajectory,
    nu_prime: f64,
    t_end: f64,
    dt: f64,
    save_every: usize,
) -> Result<TransportedField> {
    if c0.ncomp() != 3 || c0.grid().is_planar() {
        return Err(Error::Invalid("c0 must be a 3D 3-component field".into()));
    }
    let r = c0.divergence_residual();
    if r > DIV_TOL {
        return Err(Error::NotDivergenceFree { residual: r, tolerance: DIV_TOL });
    }
    let last = *u_tilde.times().last().ok_or(Error::EmptyTrajectory)?;
    if t_end > last * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::TrajectoryGap { t: t_end, last });
    }
    let grid = c0.grid().clone();
    let (steps, dt) = step_count(t_end, dt)?;
    let velocity = |t: f64| -> Result<SpectralField> {
        let u = u_tilde.at(t)?;
        extend_planar(&u, &grid)
    };
    let mut c = c0.clone().assume_divergence_free();
    let mut traj = StateTrajectory::new();
    traj.push(0.0, c.clone())?;
    for n in 0..steps {
        let t = n as f64 * dt;
        let speed = std::cell::Cell::new(0.0);
        let next = if_heun_step(
            &c,
            dt,
            |s| Ok(heat_propagate(s, dt, nu_prime)),
            |s, off| {
                let (r, v) = induction(&velocity(t + off)?, s)?;
                if off == 0.0 {
                    speed.set(v);
                }
                Ok(r)
            },
        )?;
        let bound = cfl_bound(&grid, speed.get());
        if dt > bound {
            return Err(Error::Cfl { dt, bound });
        }
        if !next.is_finite() {
            return Err(Error::NonFinite { t: t + dt });
        }
        c = next;
        if (n + 1) % save_every.max(1) == 0 || n + 1 == steps {
            traj.push((n + 1) as f64 * dt, c.clone())?;
        }
    }
    Ok(TransportedField { trajectory: traj, nu_prime })
}
