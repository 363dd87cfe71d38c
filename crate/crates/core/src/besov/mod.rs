//! Littlewood-Paley blocks, Besov/Sobolev/Chemin-Lerner norms, anisotropic norms,
//! the 2D x 3D paraproduct and empirical product-law ratios.

mod bench;
mod ladder;
mod norms;
mod paraproduct;
mod trajectory;

pub use bench::{
    bshs_aniso_ratio, bshs_ratio, injection_ratio, product_law_ratio, write_norm_report, NormRow, NORM_REPORT_COLUMNS,
    ProductMode,
};
pub use ladder::{chi, phi, DyadicLadder, CHI_INNER, CHI_OUTER};
pub use norms::{
    anisotropic_norm, besov_norm, chemin_lerner_norm, half_box_norm, lebesgue_besov_norm, lebesgue_norm,
    sobolev_norm, time_norm, NormValue, MAX_TRUNCATION_SHARE,
};
pub use paraproduct::{
    annulus_leakage, ball_leakage, paraproduct_2d3d, paraproduct_block, resample, ParaproductParts,
    PARAPRODUCT_MIN_J0,
};
pub use trajectory::StateTrajectory;

pub(crate) use trajectory::same_times;

/// Errors unless both trajectories are sampled at the same instants.
pub fn same_time_grid(a: &StateTrajectory, b: &StateTrajectory) -> crate::Result<()> {
    same_times(a.times(), b.times())
}

/// Index value used for `infinity` in Lebesgue/summation exponents.
pub const INF: f64 = f64::INFINITY;
