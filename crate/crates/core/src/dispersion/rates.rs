use serde::Serialize;

use crate::error::{Error, Result};

/// Exponents attached to a Lebesgue index `r` in `(2, 6]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateExponents {
    pub r: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub m: f64,
}

pub fn rate_exponents(r: f64) -> Result<RateExponents> {
    if !(r > 2.0 && r <= 6.0) {
        return Err(Error::Exponents(format!("r = {r} outside (2, 6]")));
    }
    Ok(RateExponents {
        r,
        theta: f64::min(1.0, (6.0 - r) / (2.0 * (r - 2.0))),
        theta_prime: f64::min(1.0, 3.0 / (r - 2.0)),
        alpha: f64::max(2.0, 4.0 / (5.0 * (1.0 - 2.0 / r))),
        beta: f64::max(1.0, 2.0 / (3.0 - 5.0 / r)),
        delta: f64::max(10.0 - 3.0 * r, 5.0 / 7.0 * (6.0 - r)) / (4.0 * r),
        m: f64::min(r - 2.0, (6.0 - r) / 7.0) / (2.0 * r),
    })
}

/// Exponent of `eps` in the strong-solution rate, `(delta/2 - gamma)/18`.
pub fn strong_rate_exponent(delta: f64, gamma: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0 / 6.0) {
        return Err(Error::Exponents(format!("delta = {delta} outside (0, 1/6]")));
    }
    if !(0.0..=5.0 * delta / 12.0 * (1.0 + 1e-12)).contains(&gamma) {
        return Err(Error::Exponents(format!("gamma = {gamma} outside [0, 5 delta/12]")));
    }
    Ok((delta / 2.0 - gamma) / 18.0)
}
