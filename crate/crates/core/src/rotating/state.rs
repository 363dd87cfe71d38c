use crate::besov::StateTrajectory;
use crate::error::{Error, Result};
use crate::limit::cfl_bound;
use crate::spectral::{
    advect, coriolis_heat_propagate, flux_mhd_with_speed, heat_propagate, leray_project, SpectralField,
};
use crate::stepper::if_heun_step;

/// State of the rotating system.
#[derive(Clone, Debug)]
pub struct MhdState {
    pub u: SpectralField,
    pub b: SpectralField,
    pub eps: f64,
    pub nu: f64,
    pub nu_prime: f64,
    pub t: f64,
}

impl MhdState {
    pub fn new(u: SpectralField, b: SpectralField, eps: f64, nu: f64, nu_prime: f64) -> Result<Self> {
        if u.grid() != b.grid() || u.grid().is_planar() || u.ncomp() != 3 || b.ncomp() != 3 {
            return Err(Error::Invalid("u and b must be 3-component fields on one 3D grid".into()));
        }
        if !(eps > 0.0 && nu >= 0.0 && nu_prime >= 0.0) {
            return Err(Error::Invalid(format!("need eps > 0, nu, nu' >= 0 (eps={eps})")));
        }
        Ok(MhdState {
            u: u.mark_divergence_free()?,
            b: b.mark_divergence_free()?,
            eps,
            nu,
            nu_prime,
            t: 0.0,
        })
    }

    pub fn packed(&self) -> SpectralField {
        self.u.concat(&self.b).unwrap()
    }

    pub fn energy(&self) -> f64 {
        self.u.norm_sqr() + self.b.norm_sqr()
    }

    /// `2 nu ||grad u||^2 + 2 nu' ||grad b||^2`
    pub fn dissipation(&self) -> f64 {
        2.0 * self.nu * self.u.sobolev_sqr(1.0) + 2.0 * self.nu_prime * self.b.sobolev_sqr(1.0)
    }

    pub fn div_residual(&self) -> f64 {
        self.u.divergence_residual().max(self.b.divergence_residual())
    }
}

fn split(s: &SpectralField) -> (SpectralField, SpectralField) {
    (s.subfield(0..3), s.subfield(3..6))
}

/// One integrating-factor Heun step. The Coriolis and diffusion terms are
/// integrated exactly, so the step is limited by advection only.
pub fn step_mhd_eps(state: &MhdState, dt: f64) -> Result<MhdState> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("dt must be positive, got {dt}")));
    }
    let (eps, nu, nu_prime) = (state.eps, state.nu, state.nu_prime);
    let speed = std::cell::Cell::new(0.0);
    let propagate = |s: &SpectralField| -> Result<SpectralField> {
        let (u, b) = split(s);
        coriolis_heat_propagate(&u.assume_divergence_free(), dt, eps, nu)?
            .concat(&heat_propagate(&b, dt, nu_prime))
    };
    let rhs = |s: &SpectralField, off: f64| -> Result<SpectralField> {
        let (u, b) = split(s);
        let (nu_, nb, v) = flux_mhd_with_speed(&u, &b)?;
        if off == 0.0 {
            speed.set(v);
        }
        nu_.concat(&nb)
    };
    let next = if_heun_step(&state.packed(), dt, propagate, rhs)?;
    let bound = cfl_bound(state.u.grid(), speed.get());
    if dt > bound {
        return Err(Error::Cfl { dt, bound });
    }
    if !next.is_finite() {
        return Err(Error::NonFinite { t: state.t + dt });
    }
    let (u, b) = split(&next);
    Ok(MhdState {
        u: u.assume_divergence_free(),
        b: b.assume_divergence_free(),
        eps,
        nu,
        nu_prime,
        t: state.t + dt,
    })
}

/// The same scheme for the rotating Navier-Stokes system, written without the magnetic field.
pub fn step_rotating_ns(u: &SpectralField, eps: f64, nu: f64, dt: f64) -> Result<SpectralField> {
    let next = if_heun_step(
        u,
        dt,
        |s| coriolis_heat_propagate(&s.clone().assume_divergence_free(), dt, eps, nu),
        |s, _| Ok(leray_project(&advect(s, s)?).scale(-1.0)),
    )?;
    Ok(next.assume_divergence_free())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MhdDiagnostics {
    pub t: f64,
    pub energy: f64,
    pub dissipation: f64,
    pub div_residual: f64,
}

#[derive(Clone, Debug)]
pub struct MhdRun {
    /// Packed `(u, b)` samples.
    pub trajectory: StateTrajectory,
    pub diagnostics: Vec<MhdDiagnostics>,
    pub last: MhdState,
}

impl MhdRun {
    pub fn velocity(&self) -> StateTrajectory {
        self.trajectory.map(|s| s.subfield(0..3))
    }

    pub fn magnetic(&self) -> StateTrajectory {
        self.trajectory.map(|s| s.subfield(3..6))
    }
}

/// A failed run keeps the last valid state.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub last_valid: MhdState,
}

fn record(s: &MhdState) -> MhdDiagnostics {
    MhdDiagnostics { t: s.t, energy: s.energy(), dissipation: s.dissipation(), div_residual: s.div_residual() }
}

/// Advances to `t_end`, saving every `save_every` steps (and the final state).
pub fn run_mhd(state: MhdState, t_end: f64, dt: f64, save_every: usize) -> std::result::Result<MhdRun, RunFailure> {
    let fail = |error: Error, last_valid: &MhdState| RunFailure { error, last_valid: last_valid.clone() };
    let (steps, dt) = crate::limit::step_count(t_end, dt).map_err(|e| fail(e, &state))?;
    let save_every = save_every.max(1);
    let mut traj = StateTrajectory::new();
    let mut diags = vec![record(&state)];
    traj.push(state.t, state.packed()).map_err(|e| fail(e, &state))?;
    let mut cur = state;
    for n in 0..steps {
        cur = match step_mhd_eps(&cur, dt) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, &cur)),
        };
        cur.t = (n + 1) as f64 * dt;
        if (n + 1) % save_every == 0 || n + 1 == steps {
            diags.push(record(&cur));
            traj.push(cur.t, cur.packed()).map_err(|e| fail(e, &cur))?;
        }
    }
    Ok(MhdRun { trajectory: traj, diagnostics: diags, last: cur })
}

/// `max_t |E(t) + int_0^t D - E(0)| / E(0)` with trapezoid time quadrature.
pub fn energy_balance_residual(diags: &[MhdDiagnostics]) -> f64 {
    let e0 = diags[0].energy;
    if e0 == 0.0 {
        return 0.0;
    }
    let mut integral = 0.0;
    let mut worst: f64 = 0.0;
    for n in 1..diags.len() {
        integral += 0.5 * (diags[n].t - diags[n - 1].t) * (diags[n].dissipation + diags[n - 1].dissipation);
        worst = worst.max((diags[n].energy + integral - e0).abs() / e0);
    }
    worst
}
