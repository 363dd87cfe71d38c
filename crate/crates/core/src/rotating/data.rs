use crate::besov::sobolev_norm;
use crate::error::{Error, Result};
use crate::spectral::{extend_planar, SpectralField, DIV_TOL};

use super::state::MhdState;

/// Constants of the strong-solution amplitude law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrongScaling {
    /// `||v0_eps||_{Hdot^{1/2+delta}} = c0 * eps^-gamma`
    pub c0: f64,
    /// `||c0_eps||_{H^{1/2+delta}} = (k0 |ln eps|)^{1/4}`
    pub k0: f64,
}

/// Planar part `(u~0, b~0)` plus bulk part `(v0, c0)`.
#[derive(Clone, Debug)]
pub struct IllPreparedData {
    pub planar_u0: SpectralField,
    pub planar_b0: SpectralField,
    pub bulk_v0: SpectralField,
    pub bulk_c0: SpectralField,
    pub gamma: f64,
    pub delta: f64,
    pub strong: Option<StrongScaling>,
}

/// Admissible amplitude exponents `[0, 5 delta / 12]`.
pub fn strong_gamma_range(delta: f64) -> (f64, f64) {
    (0.0, 5.0 * delta / 12.0)
}

fn check_div(name: &str, f: &SpectralField) -> Result<()> {
    let r = f.divergence_residual();
    if r > DIV_TOL {
        return Err(Error::Invalid(format!("{name} is not divergence-free (residual {r:.3e})")));
    }
    Ok(())
}

impl IllPreparedData {
    pub fn validate(&self) -> Result<()> {
        if !self.planar_u0.grid().is_planar() || !self.planar_b0.grid().is_planar() {
            return Err(Error::Invalid("planar parts must live on a planar grid".into()));
        }
        if self.bulk_v0.grid() != self.bulk_c0.grid() || self.bulk_v0.grid().is_planar() {
            return Err(Error::Invalid("bulk parts must share one 3D grid".into()));
        }
        check_div("planar_u0", &self.planar_u0)?;
        check_div("planar_b0", &self.planar_b0)?;
        check_div("bulk_v0", &self.bulk_v0)?;
        check_div("bulk_c0", &self.bulk_c0)?;
        if self.strong.is_some() {
            if !(self.delta > 0.0 && self.delta <= 1.0 / 6.0) {
                return Err(Error::Invalid(format!("delta must lie in (0, 1/6], got {}", self.delta)));
            }
            let (lo, hi) = strong_gamma_range(self.delta);
            if !(self.gamma >= lo && self.gamma <= hi * (1.0 + 1e-12)) {
                return Err(Error::Invalid(format!("gamma = {} outside [0, {hi}]", self.gamma)));
            }
        } else if !(self.gamma >= 0.0) {
            return Err(Error::Invalid(format!("gamma must be nonnegative, got {}", self.gamma)));
        }
        Ok(())
    }

    /// The bulk pieces `(v0_eps, c0_eps)` after the amplitude law.
    pub fn bulk_at(&self, eps: f64) -> Result<(SpectralField, SpectralField)> {
        self.validate()?;
        let Some(law) = self.strong else {
            return Ok((self.bulk_v0.clone(), self.bulk_c0.clone()));
        };
        let s = 0.5 + self.delta;
        let rescale = |f: &SpectralField, norm: f64, target: f64| {
            if norm > 0.0 {
                f.scale(target / norm)
            } else {
                f.clone()
            }
        };
        let v = rescale(&self.bulk_v0, sobolev_norm(&self.bulk_v0, s), law.c0 * eps.powf(-self.gamma));
        let c_norm = (self.bulk_c0.norm_sqr() + self.bulk_c0.sobolev_sqr(s)).sqrt();
        let c = rescale(&self.bulk_c0, c_norm, (law.k0 * eps.ln().abs()).powf(0.25));
        Ok((v, c))
    }
}

/// Composed initial state `u0 = u~0 + v0_eps`, `b0 = b~0 + c0_eps`.
pub fn assemble_ill_prepared(data: &IllPreparedData, eps: f64, nu: f64, nu_prime: f64) -> Result<MhdState> {
    let (v, c) = data.bulk_at(eps)?;
    let grid = v.grid().clone();
    let u = extend_planar(&data.planar_u0, &grid)?.add(&v)?;
    let b = extend_planar(&data.planar_b0, &grid)?.add(&c)?;
    MhdState::new(u, b, eps, nu, nu_prime)
}
