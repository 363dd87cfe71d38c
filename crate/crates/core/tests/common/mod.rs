#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotmhd::spectral::random::random_solenoidal;
use rotmhd::spectral::{Grid, SpectralField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn planar_grid(n: usize) -> Grid {
    Grid::square(n, 2.0 * PI).unwrap()
}

/// Planar 3-component field (third component passive) with unit-ish energy.
pub fn planar_data(grid: &Grid, seed: u64, amp: f64) -> SpectralField {
    let f = random_solenoidal(grid, 1.0, 4.0, -1.0, &mut rng(seed));
    f.scale(amp / f.l2_norm() * (grid.volume()).sqrt())
}

pub fn bulk_data(grid: &Grid, seed: u64, amp: f64) -> SpectralField {
    let f = random_solenoidal(grid, 1.0, 4.0, -1.0, &mut rng(seed));
    f.scale(amp / f.l2_norm() * (grid.volume()).sqrt())
}
