use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angular shape of the initial datum. Both are divergence-free and real in physical space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    /// `i R(rho)/rho (-xi2, xi1, 0)`
    Toroidal,
    /// `R(rho)/rho^2 (-xi1 xi3, -xi2 xi3, |xi_h|^2)`
    Poloidal,
}

impl Modulation {
    /// Weights `(a, b)` of the toroidal and poloidal parts.
    pub(crate) fn weights(self) -> (f64, f64) {
        match self {
            Modulation::Toroidal => (1.0, 0.0),
            Modulation::Poloidal => (0.0, 1.0),
        }
    }
}

/// Node counts of the spherical tensor rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalNodes {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

/// Smooth datum supported in the annulus `r1 < |xi| < r2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyProfile {
    pub r1: f64,
    pub r2: f64,
    pub modulation: Modulation,
    pub amplitude: f64,
    pub nodes: SphericalNodes,
}

impl Default for FrequencyProfile {
    fn default() -> Self {
        FrequencyProfile {
            r1: 0.75,
            r2: 8.0 / 3.0,
            modulation: Modulation::Toroidal,
            amplitude: 1.0,
            nodes: SphericalNodes { radial: 32, polar: 64, azimuthal: 64 },
        }
    }
}

impl FrequencyProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.r1 > 0.0 && self.r2 > self.r1 && self.amplitude.is_finite()) {
            return Err(Error::Invalid(format!("bad annulus ({}, {})", self.r1, self.r2)));
        }
        Ok(())
    }

    /// Radial bump, `exp(-1/((rho-r1)(r2-rho)))` normalised to peak `amplitude`.
    pub fn radial(&self, rho: f64) -> f64 {
        if rho <= self.r1 || rho >= self.r2 {
            return 0.0;
        }
        let w = self.r2 - self.r1;
        self.amplitude * (4.0 / (w * w) - 1.0 / ((rho - self.r1) * (self.r2 - rho))).exp()
    }

    /// Fourier transform of the datum at `xi`.
    pub fn value(&self, xi: [f64; 3]) -> [Complex64; 3] {
        let rho = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let rr = self.radial(rho);
        if rr == 0.0 {
            return [Complex64::default(); 3];
        }
        let (a, b) = self.modulation.weights();
        let kh2 = xi[0] * xi[0] + xi[1] * xi[1];
        let t = Complex64::new(0.0, a * rr / rho);
        let p = b * rr / (rho * rho);
        [
            t * (-xi[1]) + p * (-xi[0] * xi[2]),
            t * xi[0] + p * (-xi[1] * xi[2]),
            Complex64::new(p * kh2, 0.0),
        ]
    }

    /// `int |v0_hat(xi)|^2 exp(-2 nu t |xi|^2) dxi / (2 pi)^3`, the squared L2 norm at time `t`.
    pub fn l2_sqr(&self, nu: f64, t: f64) -> f64 {
        let (a, b) = self.modulation.weights();
        let (x, w) = super::gauss_rule(200, self.r1, self.r2);
        let radial: f64 = x
            .iter()
            .zip(&w)
            .map(|(&r, &w)| w * r * r * self.radial(r).powi(2) * (-2.0 * nu * t * r * r).exp())
            .sum();
        (a * a + b * b) * 8.0 * std::f64::consts::PI / 3.0 * radial / (2.0 * std::f64::consts::PI).powi(3)
    }
}
