use crate::besov::StateTrajectory;
use crate::error::{Error, Result};
use crate::limit::step_count;
use crate::spectral::{advect, coriolis_heat_propagate, extend_planar, leray_project, SpectralField, DIV_TOL};

#[derive(Clone, Debug)]
pub struct WaveRun {
    pub trajectory: StateTrajectory,
    /// `||v0|| + int_0^t ||forcing||` by the trapezoid rule, per sample.
    pub l2_budget: Vec<f64>,
}

/// `b~.grad c + c.grad b~ + c.grad c` on the common time grid.
pub fn wave_forcing(b_tilde: &StateTrajectory, c: &StateTrajectory) -> Result<StateTrajectory> {
    b_tilde.zip_with(c, |bt, c| {
        let b3 = extend_planar(bt, c.grid())?;
        advect(&b3, c)?.add(&advect(c, &b3)?)?.add(&advect(c, c)?)
    })
}

/// Duhamel solution of `dW/dt - nu Lap W + (1/eps) P(W x e3) = P forcing`, `W(0) = v0`:
/// `W_{n+1} = E(dt) (W_n + dt/2 P F_n) + dt/2 P F_{n+1}` with the exact propagator `E`.
pub fn solve_wave_system(
    v0: &SpectralField,
    forcing: &StateTrajectory,
    eps: f64,
    nu: f64,
    t_end: f64,
    dt: f64,
) -> Result<WaveRun> {
    let r = v0.divergence_residual();
    if r > DIV_TOL {
        return Err(Error::NotDivergenceFree { residual: r, tolerance: DIV_TOL });
    }
    let (steps, dt) = step_count(t_end, dt)?;
    let times = forcing.times();
    if times.len() < steps + 1 {
        return Err(Error::TimeGrid(format!("forcing has {} samples, need {}", times.len(), steps + 1)));
    }
    for (n, t) in times.iter().take(steps + 1).enumerate() {
        if (t - n as f64 * dt).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(Error::TimeGrid(format!("forcing sample {n} at {t}, expected {}", n as f64 * dt)));
        }
    }
    let f = |n: usize| -> Result<SpectralField> {
        let g = &forcing.states()[n];
        if g.grid() != v0.grid() {
            return Err(Error::GridMismatch("forcing and v0".into()));
        }
        Ok(leray_project(g))
    };
    let mut w = v0.clone().assume_divergence_free();
    let mut traj = StateTrajectory::new();
    traj.push(0.0, w.clone())?;
    let mut fn_ = f(0)?;
    let mut budget = v0.l2_norm();
    let mut budgets = vec![budget];
    for n in 0..steps {
        let fnext = f(n + 1)?;
        let half = w.axpy(0.5 * dt, &fn_)?;
        w = coriolis_heat_propagate(&half, dt, eps, nu)?.axpy(0.5 * dt, &fnext)?;
        budget += 0.5 * dt * (forcing.states()[n].l2_norm() + forcing.states()[n + 1].l2_norm());
        budgets.push(budget);
        traj.push((n + 1) as f64 * dt, w.clone())?;
        fn_ = fnext;
    }
    Ok(WaveRun { trajectory: traj, l2_budget: budgets })
}
