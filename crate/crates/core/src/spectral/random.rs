//! Seeded random fields for corpora and test data.

use num_complex::Complex64;
use rand::Rng;

use super::field::SpectralField;
use super::grid::Grid;
use super::ops::{dealias, leray_project};

/// Random real field with modes in `kmin <= |k| <= kmax`, amplitude `|k|^slope`.
pub fn random_field<R: Rng>(
    grid: &Grid,
    ncomp: usize,
    kmin: f64,
    kmax: f64,
    slope: f64,
    rng: &mut R,
) -> SpectralField {
    let mut f = SpectralField::zeros(grid, ncomp);
    for c in 0..ncomp {
        let comp = f.comp_mut(c);
        for (idx, z) in comp.iter_mut().enumerate() {
            let k = grid.kvec(idx);
            let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if kk >= kmin && kk <= kmax && kk > 0.0 {
                *z = Complex64::new(a, b) * kk.powf(slope);
            }
        }
    }
    f.symmetrize();
    dealias(&f)
}

/// Random divergence-free 3-component field.
pub fn random_solenoidal<R: Rng>(
    grid: &Grid,
    kmin: f64,
    kmax: f64,
    slope: f64,
    rng: &mut R,
) -> SpectralField {
    leray_project(&random_field(grid, 3, kmin, kmax, slope, rng))
}
