//! Whole-space free waves of the rotating operator by oscillatory quadrature.

mod axisym;
mod boxcheck;
mod fit;
mod profile;
mod rates;
mod spherical;

pub use axisym::{axisymmetric_point_eval, OracleSettings, Snapshot};
pub use boxcheck::{box_crosscheck, field_at, sample_on_box, BoxComparison};
pub use fit::{
    measure_decay_exponent, measure_decay_exponents, time_rule, validate_measurement, write_fit_json,
    write_oracle_csv, DecayFit, FIT_FIELDS, ORACLE_COLUMNS, NormRequest, OracleRow, SpaceNorm, TimeMode,
};
pub use profile::{FrequencyProfile, Modulation, SphericalNodes};
pub use rates::{rate_exponents, strong_rate_exponent, RateExponents};
pub use spherical::{
    eigenprojectors, propagated_value, required_nodes, semigroup_point_eval, Matrix3, NODES_PER_OSCILLATION,
};

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_rule(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (m + h * x, h * w)).unzip()
}
