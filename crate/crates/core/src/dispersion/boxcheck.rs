use num_complex::Complex64;

use super::axisym::{OracleSettings, Snapshot};
use super::profile::FrequencyProfile;
use crate::error::Result;
use crate::spectral::{coriolis_heat_propagate, Grid, SpectralField};

/// Samples the datum on a periodic box: `f_k = v0_hat(k) / |box|`.
pub fn sample_on_box(profile: &FrequencyProfile, grid: &Grid) -> Result<SpectralField> {
    let mut f = SpectralField::zeros(grid, 3);
    let vol = grid.volume();
    for idx in 0..grid.len() {
        let v = profile.value(grid.kvec(idx));
        for c in 0..3 {
            f.comp_mut(c)[idx] = v[c] / vol;
        }
    }
    f.mark_divergence_free()
}

/// Value of a spectral field at an arbitrary point by direct summation.
pub fn field_at(f: &SpectralField, x: [f64; 3]) -> [Complex64; 3] {
    let g = f.grid();
    let mut out = [Complex64::default(); 3];
    for idx in 0..g.len() {
        if (0..3).all(|c| f.comp(c)[idx] == Complex64::default()) {
            continue;
        }
        let k = g.kvec(idx);
        let e = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
        for c in 0..3 {
            out[c] += f.comp(c)[idx] * e;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxComparison {
    pub box_sup: f64,
    pub oracle_sup: f64,
    pub relative_gap: f64,
}

/// Sup norms of the box semigroup and of the quadrature oracle at the same `(t, eps, nu)`.
/// The box is centred on the origin; its grid maximum is polished by direct summation.
pub fn box_crosscheck(
    profile: &FrequencyProfile,
    grid: &Grid,
    t: f64,
    eps: f64,
    nu: f64,
    settings: &OracleSettings,
) -> Result<BoxComparison> {
    let f = coriolis_heat_propagate(&sample_on_box(profile, grid)?, t, eps, nu)?;
    let phys = f.physical();
    let (mut best, mut arg) = (0.0, 0);
    for idx in 0..grid.len() {
        let m = (0..3).map(|c| phys[c][idx] * phys[c][idx]).sum::<f64>();
        if m > best {
            (best, arg) = (m, idx);
        }
    }
    let at = grid.unindex(arg);
    let mut x = [0, 1, 2].map(|a| grid.coordinate(a, at[a]));
    let mag = |x: [f64; 3]| field_at(&f, x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut val = mag(x);
    let mut step = grid.spacing(0);
    while step > 1e-5 {
        let mut moved = false;
        'dirs: for a in 0..3 {
            for s in [1.0, -1.0] {
                let mut y = x;
                y[a] += s * step;
                let v = mag(y);
                if v > val {
                    (x, val) = (y, v);
                    moved = true;
                    break 'dirs;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    let snap = Snapshot::new(profile, t, eps, nu, settings)?;
    let (oracle_sup, _) = snap.lebesgue(f64::INFINITY, None);
    Ok(BoxComparison { box_sup: val, oracle_sup, relative_gap: (val - oracle_sup).abs() / oracle_sup })
}
