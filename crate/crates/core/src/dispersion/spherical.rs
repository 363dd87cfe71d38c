use std::f64::consts::PI;

use num_complex::Complex64;

use super::profile::FrequencyProfile;
use super::gauss_rule;
use crate::error::{Error, Result};

pub type Matrix3 = [[Complex64; 3]; 3];

/// Nodes per phase oscillation demanded of every quadrature axis.
pub const NODES_PER_OSCILLATION: f64 = 10.0;

/// Projectors onto the `+i` and `-i` eigenspaces of `xi/|xi| x .` on divergence-free vectors.
pub fn eigenprojectors(xi: [f64; 3]) -> (Matrix3, Matrix3) {
    let rho2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    let rho = rho2.sqrt();
    let n = [xi[0] / rho, xi[1] / rho, xi[2] / rho];
    let cross = [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]];
    let mut plus = [[Complex64::default(); 3]; 3];
    let mut minus = plus;
    for i in 0..3 {
        for j in 0..3 {
            let leray = if i == j { 1.0 } else { 0.0 } - n[i] * n[j];
            plus[i][j] = Complex64::new(0.5 * leray, -0.5 * cross[i][j]);
            minus[i][j] = Complex64::new(0.5 * leray, 0.5 * cross[i][j]);
        }
    }
    (plus, minus)
}

/// Fourier transform of the free wave at time `t`.
pub fn propagated_value(profile: &FrequencyProfile, xi: [f64; 3], t: f64, eps: f64, nu: f64) -> [Complex64; 3] {
    let v = profile.value(xi);
    let rho2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if rho2 == 0.0 {
        return v;
    }
    let heat = (-nu * t * rho2).exp();
    let omega = t * xi[2] / (eps * rho2.sqrt());
    let (pp, pm) = eigenprojectors(xi);
    let (ep, em) = (Complex64::from_polar(heat, omega), Complex64::from_polar(heat, -omega));
    let mut out = [Complex64::default(); 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += (ep * pp[i][j] + em * pm[i][j]) * v[j];
        }
    }
    out
}

/// Node counts needed at point `x` and fast time `t/eps`.
pub fn required_nodes(profile: &FrequencyProfile, t: f64, eps: f64, x: [f64; 3]) -> [usize; 3] {
    let tau = t / eps;
    let xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let xh = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let count = |range: f64, floor: usize| ((NODES_PER_OSCILLATION * range / (2.0 * PI)).ceil() as usize).max(floor);
    [
        count((profile.r2 - profile.r1) * xn, 16),
        count(2.0 * tau + 2.0 * profile.r2 * xn, 16),
        count(2.0 * profile.r2 * xh, 16),
    ]
}

/// `(2 pi)^-3 int e^{i x.xi} e^{-nu t |xi|^2} sum_{+-} e^{+- i t xi3/(eps |xi|)} P_+-(xi) v0_hat(xi) dxi`
/// on a Gauss (radius) x Gauss (cos polar angle) x trapezoid (azimuth) rule.
pub fn semigroup_point_eval(
    profile: &FrequencyProfile,
    t: f64,
    eps: f64,
    nu: f64,
    x: [f64; 3],
) -> Result<[Complex64; 3]> {
    profile.validate()?;
    if !(t >= 0.0 && eps > 0.0 && nu >= 0.0) {
        return Err(Error::Invalid(format!("need t >= 0, eps > 0, nu >= 0 (t={t}, eps={eps}, nu={nu})")));
    }
    let need = required_nodes(profile, t, eps, x);
    let have = [profile.nodes.radial, profile.nodes.polar, profile.nodes.azimuthal];
    for (axis, (n, h)) in ["radial", "polar", "azimuthal"].into_iter().zip(need.iter().zip(have)) {
        if h < *n {
            return Err(Error::UnderResolved { axis, required: *n, have: h });
        }
    }
    let (rn, rw) = gauss_rule(have[0], profile.r1, profile.r2);
    let (mn, mw) = gauss_rule(have[1], -1.0, 1.0);
    let dth = 2.0 * PI / have[2] as f64;
    let mut acc = [Complex64::default(); 3];
    for (&rho, &wr) in rn.iter().zip(&rw) {
        for (&mu, &wm) in mn.iter().zip(&mw) {
            let s = (1.0 - mu * mu).max(0.0).sqrt();
            for l in 0..have[2] {
                let th = l as f64 * dth;
                let xi = [rho * s * th.cos(), rho * s * th.sin(), rho * mu];
                let w = wr * wm * dth * rho * rho;
                let phase = Complex64::from_polar(w, x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]);
                let v = propagated_value(profile, xi, t, eps, nu);
                for c in 0..3 {
                    acc[c] += phase * v[c];
                }
            }
        }
    }
    let norm = (2.0 * PI).powi(-3);
    Ok(acc.map(|z| z * norm))
}
