use super::ladder::DyadicLadder;
use super::trajectory::StateTrajectory;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Besov norms are refused above this share of unresolved block energy.
pub const MAX_TRUNCATION_SHARE: f64 = 0.10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub truncation_share: f64,
}

fn check_index(name: &str, p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::Invalid(format!("{name} must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// Pointwise Euclidean magnitude of a field in physical space.
pub(crate) fn magnitude(grid: &Grid, phys: &[Vec<f64>]) -> Vec<f64> {
    (0..grid.len()).map(|x| phys.iter().map(|c| c[x] * c[x]).sum::<f64>().sqrt()).collect()
}

fn lp(values: &[f64], weight: f64, p: f64) -> f64 {
    if p.is_infinite() {
        values.iter().cloned().fold(0.0, f64::max)
    } else if p == 2.0 {
        (weight * values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    } else {
        (weight * values.iter().map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p)
    }
}

/// `l^r` norm of a finite sequence.
pub(crate) fn seq_norm(values: impl Iterator<Item = f64>, r: f64) -> f64 {
    lp(&values.collect::<Vec<_>>(), 1.0, r)
}

/// `L^p` norm by grid quadrature.
pub fn lebesgue_norm(f: &SpectralField, p: f64) -> f64 {
    let g = f.grid();
    lp(&magnitude(g, &f.physical()), g.cell(), p)
}

/// `L^p` norm over the central half of the box, `[L_i/4, 3L_i/4)` on each resolved axis.
pub fn half_box_norm(f: &SpectralField, p: f64) -> f64 {
    let g = f.grid();
    let d = g.dims();
    let axes = if g.is_planar() { 2 } else { 3 };
    let mag = magnitude(g, &f.physical());
    let inside = |i: usize, a: usize| a >= axes || (i >= d[a] / 4 && i < 3 * d[a] / 4);
    let values: Vec<f64> = (0..g.len())
        .filter(|&idx| {
            let [i, j, k] = g.unindex(idx);
            inside(i, 0) && inside(j, 1) && inside(k, 2)
        })
        .map(|idx| mag[idx])
        .collect();
    lp(&values, g.cell(), p)
}

/// `(sum_{k != 0} |k|^{2s} |f_k|^2)^{1/2}` with the L2 normalisation.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    f.sobolev_sqr(s).sqrt()
}

fn block_norms(ladder: &DyadicLadder, f: &SpectralField, p: f64) -> Vec<(i32, f64)> {
    ladder.j_range().map(|j| (j, lebesgue_norm(&ladder.block(f, j), p))).collect()
}

/// `|| 2^{js} ||Delta_j f||_{L^p} ||_{l^r}` together with the truncation share.
pub fn besov_norm(f: &SpectralField, s: f64, p: f64, r: f64) -> Result<NormValue> {
    check_index("p", p)?;
    check_index("r", r)?;
    let ladder = DyadicLadder::for_grid(f.grid());
    let share = ladder.truncation_share(f);
    if share > MAX_TRUNCATION_SHARE {
        return Err(Error::Unresolved { share });
    }
    let value = seq_norm(
        block_norms(&ladder, f, p).into_iter().map(|(j, n)| 2f64.powf(j as f64 * s) * n),
        r,
    );
    Ok(NormValue { value, truncation_share: share })
}

/// `L^a` norm in time of samples `g(t_n)` by the trapezoid rule (maximum for `a = inf`).
pub fn time_norm(times: &[f64], values: &[f64], a: f64) -> f64 {
    if a.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    let mut acc = 0.0;
    for n in 1..times.len() {
        acc += 0.5 * (times[n] - times[n - 1]) * (values[n].powf(a) + values[n - 1].powf(a));
    }
    acc.powf(1.0 / a)
}

fn check_trajectory(traj: &StateTrajectory, a: f64, b: f64, c: f64) -> Result<DyadicLadder> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    check_index("a", a)?;
    check_index("b", b)?;
    check_index("c", c)?;
    let ladder = DyadicLadder::for_grid(traj.states()[0].grid());
    for s in traj.states() {
        let share = ladder.truncation_share(s);
        if share > MAX_TRUNCATION_SHARE {
            return Err(Error::Unresolved { share });
        }
    }
    Ok(ladder)
}

/// Chemin-Lerner norm: `l^c_j` of `2^{js} || ||Delta_j u||_{L^b_x} ||_{L^a_t}`.
pub fn chemin_lerner_norm(traj: &StateTrajectory, a: f64, s: f64, b: f64, c: f64) -> Result<f64> {
    let ladder = check_trajectory(traj, a, b, c)?;
    let per_state: Vec<Vec<(i32, f64)>> =
        traj.states().iter().map(|st| block_norms(&ladder, st, b)).collect();
    let nj = per_state[0].len();
    let terms = (0..nj).map(|m| {
        let j = per_state[0][m].0;
        let series: Vec<f64> = per_state.iter().map(|v| v[m].1).collect();
        2f64.powf(j as f64 * s) * time_norm(traj.times(), &series, a)
    });
    Ok(seq_norm(terms, c))
}

/// Plain `L^a_t Bdot^s_{b,c}` norm.
pub fn lebesgue_besov_norm(traj: &StateTrajectory, a: f64, s: f64, b: f64, c: f64) -> Result<f64> {
    let ladder = check_trajectory(traj, a, b, c)?;
    let series: Vec<f64> = traj
        .states()
        .iter()
        .map(|st| {
            seq_norm(
                block_norms(&ladder, st, b).into_iter().map(|(j, n)| 2f64.powf(j as f64 * s) * n),
                c,
            )
        })
        .collect();
    Ok(time_norm(traj.times(), &series, a))
}

/// Anisotropic norm: `L^b` in `x3` inside, `L^a` in `x_h` outside.
pub fn anisotropic_norm(f: &SpectralField, a: f64, b: f64) -> Result<f64> {
    check_index("a", a)?;
    check_index("b", b)?;
    let g = f.grid();
    if g.is_planar() {
        return Err(Error::Invalid("anisotropic_norm needs a 3D field".into()));
    }
    let mag = magnitude(g, &f.physical());
    let [n1, n2, n3] = g.dims();
    let inner: Vec<f64> =
        (0..n1 * n2).map(|h| lp(&mag[h * n3..(h + 1) * n3], g.spacing(2), b)).collect();
    Ok(lp(&inner, g.spacing(0) * g.spacing(1), a))
}
