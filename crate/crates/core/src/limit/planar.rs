use crate::besov::StateTrajectory;
use crate::error::{Error, Result};
use crate::spectral::{advect, heat_propagate, leray_project, pressure_split, SpectralField};
use crate::stepper::if_heun_step;

/// Safety factor of the advective CFL bound.
pub const CFL_SAFETY: f64 = 0.5;

/// `CFL_SAFETY * min_i dx_i / max_x(|u| + |b|)`.
pub fn cfl_bound(grid: &crate::spectral::Grid, speed: f64) -> f64 {
    let axes = if grid.is_planar() { 2 } else { 3 };
    let dx = (0..axes).map(|a| grid.spacing(a)).fold(f64::INFINITY, f64::min);
    if speed > 0.0 {
        CFL_SAFETY * dx / speed
    } else {
        f64::INFINITY
    }
}

/// One sample of the limit system.
#[derive(Clone, Debug)]
pub struct PlanarState {
    pub u_tilde: SpectralField,
    pub b_tilde: SpectralField,
    pub q0: SpectralField,
}

impl PlanarState {
    pub fn from_packed(state: &SpectralField) -> Result<Self> {
        let u = state.subfield(0..3);
        let b = state.subfield(3..6);
        let q0 = pressure_split(&u, &b, 1.0)?.p0;
        Ok(PlanarState { u_tilde: u, b_tilde: b, q0 })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarDiagnostics {
    pub t: f64,
    /// `||u||^2 + ||b||^2`
    pub energy: f64,
    /// `2 nu ||grad u||^2 + 2 nu' ||grad b||^2`
    pub dissipation: f64,
    pub div_residual: f64,
}

/// Output of the planar solver: packed `(u~, b~)` samples and per-sample diagnostics.
#[derive(Clone, Debug)]
pub struct PlanarRun {
    pub trajectory: StateTrajectory,
    pub diagnostics: Vec<PlanarDiagnostics>,
    pub nu: f64,
    pub nu_prime: f64,
}

impl PlanarRun {
    pub fn velocity(&self) -> StateTrajectory {
        self.trajectory.map(|s| s.subfield(0..3))
    }

    pub fn magnetic(&self) -> StateTrajectory {
        self.trajectory.map(|s| s.subfield(3..6))
    }

    pub fn state(&self, n: usize) -> Result<PlanarState> {
        PlanarState::from_packed(&self.trajectory.states()[n])
    }
}

pub(crate) fn diagnostics(t: f64, u: &SpectralField, b: &SpectralField, nu: f64, nu_prime: f64) -> PlanarDiagnostics {
    let horizontal = |f: &SpectralField| {
        let mut h = f.clone();
        h.comp_mut(2).iter_mut().for_each(|z| *z = Default::default());
        h.divergence_residual()
    };
    PlanarDiagnostics {
        t,
        energy: u.norm_sqr() + b.norm_sqr(),
        dissipation: 2.0 * nu * u.sobolev_sqr(1.0) + 2.0 * nu_prime * b.sobolev_sqr(1.0),
        div_residual: horizontal(u).max(horizontal(b)),
    }
}

fn horizontal_part(f: &SpectralField) -> SpectralField {
    let mut h = f.clone();
    h.comp_mut(2).iter_mut().for_each(|z| *z = Default::default());
    h
}

fn single(f: &SpectralField, c: usize) -> SpectralField {
    f.subfield(c..c + 1)
}

/// Right-hand side split into the horizontal MHD block and the linear third-component block.
fn planar_rhs(state: &SpectralField) -> Result<(SpectralField, f64)> {
    let u = state.subfield(0..3);
    let b = state.subfield(3..6);
    let uh = horizontal_part(&u);
    let bh = horizontal_part(&b);
    // horizontal block: 2D MHD
    let nuh = leray_project(&advect(&uh, &uh)?.sub(&advect(&bh, &bh)?)?).scale(-1.0);
    let nbh = advect(&uh, &bh)?.sub(&advect(&bh, &uh)?)?.scale(-1.0);
    // third components: transported and stretched by the horizontal fields
    let (u3, b3) = (single(&u, 2), single(&b, 2));
    let nu3 = advect(&uh, &u3)?.sub(&advect(&bh, &b3)?)?.scale(-1.0);
    let nb3 = advect(&uh, &b3)?.sub(&advect(&bh, &u3)?)?.scale(-1.0);
    let comps = vec![
        nuh.comp(0).to_vec(),
        nuh.comp(1).to_vec(),
        nu3.comp(0).to_vec(),
        nbh.comp(0).to_vec(),
        nbh.comp(1).to_vec(),
        nb3.comp(0).to_vec(),
    ];
    let up = uh.physical();
    let bp = bh.physical();
    let g = state.grid();
    let speed = (0..g.len())
        .map(|x| {
            (up[0][x].powi(2) + up[1][x].powi(2)).sqrt() + (bp[0][x].powi(2) + bp[1][x].powi(2)).sqrt()
        })
        .fold(0.0, f64::max);
    Ok((SpectralField::from_components(g, comps)?, speed))
}

fn propagate(state: &SpectralField, dt: f64, nu: f64, nu_prime: f64) -> SpectralField {
    heat_propagate(&state.subfield(0..3), dt, nu)
        .concat(&heat_propagate(&state.subfield(3..6), dt, nu_prime))
        .unwrap()
}

fn check_planar_input(u0: &SpectralField, b0: &SpectralField) -> Result<()> {
    for (name, f) in [("u0", u0), ("b0", b0)] {
        if f.ncomp() != 3 || !f.grid().is_planar() {
            return Err(Error::Invalid(format!("{name} must be a planar 3-component field")));
        }
        let r = horizontal_part(f).divergence_residual();
        if r > crate::spectral::DIV_TOL {
            return Err(Error::NotDivergenceFree { residual: r, tolerance: crate::spectral::DIV_TOL });
        }
    }
    if u0.grid() != b0.grid() {
        return Err(Error::GridMismatch("u0 and b0".into()));
    }
    Ok(())
}

/// Number of steps and the effective step for horizon `t_end`.
pub fn step_count(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end >= 0.0 && dt > 0.0) {
        return Err(Error::Invalid(format!("need T >= 0 and dt > 0 (T={t_end}, dt={dt})")));
    }
    let n = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    Ok((n, if n == 0 { dt } else { t_end / n as f64 }))
}

/// Solves the planar limit system, saving every step.
pub fn solve_2dmhd3(
    u0: &SpectralField,
    b0: &SpectralField,
    nu: f64,
    nu_prime: f64,
    t_end: f64,
    dt: f64,
) -> Result<PlanarRun> {
    solve_2dmhd3_with(u0, b0, nu, nu_prime, t_end, dt, 1)
}

pub fn solve_2dmhd3_with(
    u0: &SpectralField,
    b0: &SpectralField,
    nu: f64,
    nu_prime: f64,
    t_end: f64,
    dt: f64,
    save_every: usize,
) -> Result<PlanarRun> {
    check_planar_input(u0, b0)?;
    let (steps, dt) = step_count(t_end, dt)?;
    let save_every = save_every.max(1);
    let mut state = u0.concat(b0)?;
    let mut traj = StateTrajectory::new();
    let mut diags = Vec::new();
    let record = |t: f64, s: &SpectralField, traj: &mut StateTrajectory, diags: &mut Vec<PlanarDiagnostics>| {
        diags.push(diagnostics(t, &s.subfield(0..3), &s.subfield(3..6), nu, nu_prime));
        traj.push(t, s.clone())
    };
    record(0.0, &state, &mut traj, &mut diags)?;
    for n in 0..steps {
        let t = n as f64 * dt;
        let speed = std::cell::Cell::new(0.0);
        let next = if_heun_step(
            &state,
            dt,
            |s| Ok(propagate(s, dt, nu, nu_prime)),
            |s, off| {
                let (r, v) = planar_rhs(s)?;
                if off == 0.0 {
                    speed.set(v);
                }
                Ok(r)
            },
        )?;
        let bound = cfl_bound(state.grid(), speed.get());
        if dt > bound {
            return Err(Error::Cfl { dt, bound });
        }
        if !next.is_finite() {
            return Err(Error::NonFinite { t: t + dt });
        }
        state = next;
        if (n + 1) % save_every == 0 || n + 1 == steps {
            record((n + 1) as f64 * dt, &state, &mut traj, &mut diags)?;
        }
    }
    Ok(PlanarRun { trajectory: traj, diagnostics: diags, nu, nu_prime })
}
