use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::registry::Registry;
use crate::error::Result;
use crate::rotating::{IllPreparedData, StrongScaling};
use crate::spectral::random::random_solenoidal;
use crate::spectral::{Grid, SpectralField};

/// Builds the ill-prepared initial data of a run.
pub trait DataRecipe: Send + Sync {
    fn build(&self, cfg: &RunConfig, grid: &Grid) -> Result<IllPreparedData>;
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Rescales to root-mean-square amplitude `amp`.
fn with_rms(f: SpectralField, amp: f64) -> SpectralField {
    let rms = f.l2_norm() / f.grid().volume().sqrt();
    if rms == 0.0 {
        f
    } else {
        f.scale(amp / rms).assume_divergence_free()
    }
}

pub fn planar_field(grid: &Grid, amp: f64, seed: u64, stream: u64) -> SpectralField {
    with_rms(random_solenoidal(&grid.horizontal(), 1.0, 4.0, -1.0, &mut rng(seed, stream)), amp)
}

/// Random divergence-free field without `k3 = 0` content.
pub fn bulk_field(grid: &Grid, amp: f64, seed: u64, stream: u64) -> SpectralField {
    let mut f = random_solenoidal(grid, 1.0, 4.0, -1.0, &mut rng(seed, stream));
    let dims = grid.dims();
    for c in 0..3 {
        for (idx, z) in f.comp_mut(c).iter_mut().enumerate() {
            if grid.unindex(idx)[2] == 0 || dims[2] == 1 {
                *z = Complex64::default();
            }
        }
    }
    with_rms(f.mark_divergence_free().expect("masking in k3 keeps k.f = 0"), amp)
}

/// `A(x_h) cos(2 pi x3 / L3)` with `A` horizontal, divergence-free and supported on the
/// single horizontal shell `|n_h|^2 = 5`. The `k3 = 0` part of `c.grad c` is then a gradient.
pub fn shell_field(grid: &Grid, amp: f64, seed: u64, stream: u64) -> SpectralField {
    let mut r = rng(seed, stream);
    let [l1, l2, l3] = grid.lengths();
    let shell = [(1.0, 2.0), (2.0, 1.0), (1.0, -2.0), (2.0, -1.0)];
    let coeffs: Vec<(f64, f64)> = shell.iter().map(|_| (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let d = grid.dims();
    let mut phys = vec![vec![0.0; grid.len()]; 3];
    for idx in 0..grid.len() {
        let [i, j, k] = grid.unindex(idx);
        let (x, y, z) = (grid.coordinate(0, i), grid.coordinate(1, j), grid.coordinate(2, k));
        let (mut a1, mut a2) = (0.0, 0.0);
        for (&(n1, n2), &(a, b)) in shell.iter().zip(&coeffs) {
            let (k1, k2) = (2.0 * std::f64::consts::PI * n1 / l1, 2.0 * std::f64::consts::PI * n2 / l2);
            // psi = a cos(k.x) + b sin(k.x); A = (d2 psi, -d1 psi)
            let (s, c) = (k1 * x + k2 * y).sin_cos();
            let dpsi = -a * s + b * c;
            a1 += k2 * dpsi;
            a2 -= k1 * dpsi;
        }
        let vert = if d[2] > 1 { (2.0 * std::f64::consts::PI * z / l3).cos() } else { 1.0 };
        phys[0][idx] = a1 * vert;
        phys[1][idx] = a2 * vert;
    }
    let f = SpectralField::from_physical(grid, &phys).expect("grid-shaped data");
    with_rms(f.mark_divergence_free().expect("curl of a stream function"), amp)
}

fn finish(cfg: &RunConfig, planar_u0: SpectralField, planar_b0: SpectralField, bulk_v0: SpectralField, bulk_c0: SpectralField) -> Result<IllPreparedData> {
    let data = IllPreparedData {
        planar_u0,
        planar_b0,
        bulk_v0,
        bulk_c0,
        gamma: cfg.gamma,
        delta: cfg.delta,
        strong: cfg.strong.then_some(StrongScaling { c0: cfg.c0, k0: cfg.k0 }),
    };
    data.validate()?;
    Ok(data)
}

/// Planar `(u~0, b~0)`, bulk `v0` and a single-shell bulk `c0`.
pub struct IllPrepared;

impl DataRecipe for IllPrepared {
    fn build(&self, cfg: &RunConfig, grid: &Grid) -> Result<IllPreparedData> {
        finish(
            cfg,
            planar_field(grid, cfg.u_amp, cfg.seed, 0),
            planar_field(grid, cfg.b_amp, cfg.seed, 1),
            bulk_field(grid, cfg.v_amp, cfg.seed, 2),
            shell_field(grid, cfg.c_amp, cfg.seed, 3),
        )
    }
}

/// Bulk parts zero: the exact limit-system data.
pub struct PlanarOnly;

impl DataRecipe for PlanarOnly {
    fn build(&self, cfg: &RunConfig, grid: &Grid) -> Result<IllPreparedData> {
        let zero = SpectralField::zeros(grid, 3).assume_divergence_free();
        finish(cfg, planar_field(grid, cfg.u_amp, cfg.seed, 0), planar_field(grid, cfg.b_amp, cfg.seed, 1), zero.clone(), zero)
    }
}

/// Planar parts zero.
pub struct BulkOnly;

impl DataRecipe for BulkOnly {
    fn build(&self, cfg: &RunConfig, grid: &Grid) -> Result<IllPreparedData> {
        let zero = SpectralField::zeros(&grid.horizontal(), 3).assume_divergence_free();
        finish(cfg, zero.clone(), zero, bulk_field(grid, cfg.v_amp, cfg.seed, 2), shell_field(grid, cfg.c_amp, cfg.seed, 3))
    }
}

/// Every part random.
pub struct RandomData;

impl DataRecipe for RandomData {
    fn build(&self, cfg: &RunConfig, grid: &Grid) -> Result<IllPreparedData> {
        finish(
            cfg,
            planar_field(grid, cfg.u_amp, cfg.seed, 0),
            planar_field(grid, cfg.b_amp, cfg.seed, 1),
            bulk_field(grid, cfg.v_amp, cfg.seed, 2),
            bulk_field(grid, cfg.c_amp, cfg.seed, 3),
        )
    }
}

pub fn recipes() -> Registry<dyn DataRecipe> {
    let mut r: Registry<dyn DataRecipe> = Registry::new("data recipe");
    r.register("ill-prepared", Box::new(IllPrepared)).unwrap();
    r.register("planar-only", Box::new(PlanarOnly)).unwrap();
    r.register("bulk-only", Box::new(BulkOnly)).unwrap();
    r.register("random", Box::new(RandomData)).unwrap();
    r
}
