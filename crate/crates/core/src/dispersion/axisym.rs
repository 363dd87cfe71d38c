use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::profile::FrequencyProfile;
use super::spherical::NODES_PER_OSCILLATION;
use super::gauss_rule;
use crate::error::{Error, Result};

/// Largest horizontal and vertical group speeds of the wave phase `xi3/|xi|` on `|xi| >= r1`.
fn group_speeds(profile: &FrequencyProfile) -> (f64, f64) {
    (0.5 / profile.r1, 1.0 / profile.r1)
}

/// Resolution knobs of the axisymmetric evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    /// Multiplies every node count; 2 is the convergence check.
    pub refinement: f64,
    /// Radial sampling step.
    pub dr: f64,
    /// Vertical sampling step after zero padding.
    pub dx3: f64,
    /// Extent added to the wave envelope.
    pub margin: f64,
    /// Gauss nodes per time panel.
    pub time_nodes: usize,
    /// Period of the vertical transform in units of the sampled vertical extent.
    pub period_factor: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings { refinement: 1.0, dr: 0.1, dx3: 0.25, margin: 12.0, time_nodes: 6, period_factor: 1.2 }
    }
}

impl OracleSettings {
    pub fn doubled(&self) -> Self {
        OracleSettings {
            refinement: 2.0 * self.refinement,
            time_nodes: 2 * self.time_nodes,
            ..*self
        }
    }
}

/// The free wave at one time, sampled on `(r, x3)`.
///
/// With the datum axisymmetric, `|W|` depends on `(r, x3)` only. `a[c][(j, l)]` holds
/// `sum_i w_i k_i coef_c(xi3_j, k_i) J(r_l k_i)` for the cylindrical components `c = (r, theta, 3)`.
pub struct Snapshot {
    pub t: f64,
    pub eps: f64,
    pub r: Vec<f64>,
    pub x3_extent: f64,
    h3: f64,
    xi3: Vec<f64>,
    k: Vec<f64>,
    coef: [Array2<Complex64>; 3],
    a: [Array2<Complex64>; 3],
    padded: usize,
}

fn bessel_table(k: &[f64], r: &[f64], order: u32) -> Array2<f64> {
    let mut j = Array2::zeros((k.len(), r.len()));
    for (i, &ki) in k.iter().enumerate() {
        for (l, &rl) in r.iter().enumerate() {
            j[(i, l)] = puruspe::Jn(order, ki * rl);
        }
    }
    j
}

fn complex_gemm(c: &Array2<Complex64>, j: &Array2<f64>) -> Array2<Complex64> {
    let re = c.mapv(|z| z.re).dot(j);
    let im = c.mapv(|z| z.im).dot(j);
    let mut out = Array2::zeros(re.dim());
    ndarray::Zip::from(&mut out).and(&re).and(&im).for_each(|o, &a, &b| *o = Complex64::new(a, b));
    out
}

impl Snapshot {
    pub fn new(profile: &FrequencyProfile, t: f64, eps: f64, nu: f64, settings: &OracleSettings) -> Result<Self> {
        profile.validate()?;
        if !(t >= 0.0 && eps > 0.0 && nu >= 0.0) {
            return Err(Error::Invalid(format!("need t >= 0, eps > 0, nu >= 0 (t={t}, eps={eps}, nu={nu})")));
        }
        let s = settings.refinement;
        let tau = t / eps;
        let (vh, vv) = group_speeds(profile);
        let r_max = 2.0 * vh * tau + settings.margin;
        let x3_max = 2.0 * vv * tau + settings.margin;

        // horizontal wavenumber: Gauss-Legendre with NODES_PER_OSCILLATION per phase turn
        let phase_k = profile.r2 * (vh * tau + r_max);
        let nk = ((s * NODES_PER_OSCILLATION * phase_k / (2.0 * PI)).ceil() as usize).max((32.0 * s) as usize);
        let (k, kw) = gauss_rule(nk, 0.0, profile.r2);

        // vertical wavenumber: uniform, period beyond the envelope
        let period = settings.period_factor * 2.0 * x3_max * s;
        let h3 = 2.0 * PI / period;
        let jmax = (profile.r2 / h3).floor() as i64;
        let xi3: Vec<f64> = (-jmax..=jmax).map(|j| j as f64 * h3).collect();

        let nr = (r_max / settings.dr).ceil() as usize + 1;
        let r: Vec<f64> = (0..nr).map(|l| l as f64 * settings.dr).collect();

        let (ta, pb) = profile.modulation.weights();
        let i = Complex64::new(0.0, 1.0);
        let mut coef = [(); 3].map(|_| Array2::<Complex64>::zeros((xi3.len(), nk)));
        for (j, &x3) in xi3.iter().enumerate() {
            for (n, (&kk, &w)) in k.iter().zip(&kw).enumerate() {
                let rho2 = kk * kk + x3 * x3;
                let rho = rho2.sqrt();
                let rr = profile.radial(rho);
                if rr == 0.0 {
                    continue;
                }
                let weight = w * kk * rr * (-nu * t * rho2).exp();
                let (sn, cs) = (tau * x3 / rho).sin_cos();
                let tor = [kk * x3 / rho2 * sn + 0.0 * i, -kk / rho * cs + 0.0 * i, i * kk * kk / rho2 * sn];
                let pol = [-i * kk * x3 / rho2 * cs, -i * kk / rho * sn, kk * kk / rho2 * cs + 0.0 * i];
                for c in 0..3 {
                    coef[c][(j, n)] = weight * (ta * tor[c] + pb * pol[c]);
                }
            }
        }
        let j0 = bessel_table(&k, &r, 0);
        let j1 = bessel_table(&k, &r, 1);
        let a = [complex_gemm(&coef[0], &j1), complex_gemm(&coef[1], &j1), complex_gemm(&coef[2], &j0)];
        let padded = ((period / settings.dx3).ceil() as usize).max(2 * xi3.len()).next_power_of_two();
        Ok(Snapshot { t, eps, r, x3_extent: x3_max, h3, xi3, k, coef, a, padded })
    }

    /// Quadrature node count in the `(k_h, xi3)` plane.
    pub fn nodes(&self) -> usize {
        self.k.len() * self.xi3.len()
    }

    fn prefactor(&self) -> f64 {
        self.h3 / (4.0 * PI * PI)
    }

    /// Cylindrical components `(W_r, W_theta, W_3)` at `(r, x3)`.
    pub fn point(&self, r: f64, x3: f64) -> [Complex64; 3] {
        let jb: Vec<[f64; 2]> = self.k.iter().map(|&k| [puruspe::Jn(0, k * r), puruspe::Jn(1, k * r)]).collect();
        let mut out = [Complex64::default(); 3];
        for (j, &xi3) in self.xi3.iter().enumerate() {
            let ph = Complex64::from_polar(self.prefactor(), x3 * xi3);
            for c in 0..3 {
                let order = if c == 2 { 0 } else { 1 };
                let row = self.coef[c].row(j);
                let s: Complex64 = row.iter().zip(&jb).map(|(z, b)| z * b[order]).sum();
                out[c] += ph * s;
            }
        }
        out
    }

    fn column_energy(&self, l: usize) -> f64 {
        let s: f64 = (0..3).map(|c| self.a[c].column(l).iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
        s * self.h3 / (2.0 * PI).powi(3)
    }

    fn energy_at(&self, r: f64) -> f64 {
        let jb: Vec<[f64; 2]> = self.k.iter().map(|&k| [puruspe::Jn(0, k * r), puruspe::Jn(1, k * r)]).collect();
        let mut s = 0.0;
        for j in 0..self.xi3.len() {
            for c in 0..3 {
                let order = if c == 2 { 0 } else { 1 };
                let v: Complex64 = self.coef[c].row(j).iter().zip(&jb).map(|(z, b)| z * b[order]).sum();
                s += v.norm_sqr();
            }
        }
        s * self.h3 / (2.0 * PI).powi(3)
    }

    /// `|W|` on the padded `x3` grid for radius index `l`.
    fn column_magnitude(&self, l: usize) -> Vec<f64> {
        let n = self.padded;
        let fft = FftPlanner::new().plan_fft_inverse(n);
        let mut acc = vec![0.0; n];
        for c in 0..3 {
            let mut buf = vec![Complex64::default(); n];
            let half = (self.xi3.len() / 2) as i64;
            for (j, z) in self.a[c].column(l).iter().enumerate() {
                let idx = (j as i64 - half).rem_euclid(n as i64) as usize;
                buf[idx] = *z;
            }
            fft.process(&mut buf);
            for (a, z) in acc.iter_mut().zip(&buf) {
                *a += z.norm_sqr();
            }
        }
        acc.iter().map(|v| v.sqrt() * self.prefactor()).collect()
    }

    fn x3_of(&self, idx: usize) -> f64 {
        let period = 2.0 * PI / self.h3;
        let x = idx as f64 * period / self.padded as f64;
        if x > 0.5 * period {
            x - period
        } else {
            x
        }
    }

    fn radial_trapz(&self, f: impl Fn(usize) -> f64) -> f64 {
        let dr = self.r[1] - self.r[0];
        let n = self.r.len();
        (0..n).map(|l| f(l) * 2.0 * PI * self.r[l] * if l == 0 || l == n - 1 { 0.5 } else { 1.0 }).sum::<f64>() * dr
    }

    /// `||W||_{L^p}` on the sampled region, `p` in `[2, inf]`; returns `(value, tail)`.
    ///
    /// For `p = 2` the tail is the exact missing mass; otherwise it is the largest
    /// magnitude on the outer radius and at the vertical period edge.
    pub fn lebesgue(&self, p: f64, exact_l2: Option<f64>) -> (f64, f64) {
        if p == 2.0 {
            let v = self.radial_trapz(|l| self.column_energy(l)).sqrt();
            let tail = exact_l2.map(|e| (e * e - v * v).max(0.0).sqrt()).unwrap_or(0.0);
            return (v, tail);
        }
        let columns: Vec<Vec<f64>> = (0..self.r.len()).into_par_iter().map(|l| self.column_magnitude(l)).collect();
        let edge = self.edge_magnitude(&columns);
        if p.is_infinite() {
            return (self.sup(&columns), edge);
        }
        let dz = 2.0 * PI / self.h3 / self.padded as f64;
        let v = self.radial_trapz(|l| columns[l].iter().map(|m| m.powf(p)).sum::<f64>() * dz);
        (v.powf(1.0 / p), edge)
    }

    fn edge_magnitude(&self, columns: &[Vec<f64>]) -> f64 {
        let last = columns.last().unwrap().iter().cloned().fold(0.0, f64::max);
        let z = self.x3_extent;
        let rim = columns
            .iter()
            .flat_map(|c| c.iter().enumerate().filter(|(i, _)| self.x3_of(*i).abs() >= z).map(|(_, m)| *m))
            .fold(0.0, f64::max);
        last.max(rim)
    }

    fn magnitude_at(&self, r: f64, x3: f64) -> f64 {
        self.point(r.abs(), x3).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Grid maximum polished by a compass search around the best few samples.
    fn sup(&self, columns: &[Vec<f64>]) -> f64 {
        let mut cands: Vec<(f64, usize, usize)> = Vec::new();
        for (l, col) in columns.iter().enumerate() {
            for (i, &m) in col.iter().enumerate() {
                cands.push((m, l, i));
            }
        }
        cands.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut picked: Vec<(f64, f64)> = Vec::new();
        for &(_, l, i) in &cands {
            let (r, z) = (self.r[l], self.x3_of(i));
            if picked.iter().all(|(pr, pz)| (pr - r).abs() + (pz - z).abs() > 1.0) {
                picked.push((r, z));
            }
            if picked.len() == 3 {
                break;
            }
        }
        let dr = self.r[1] - self.r[0];
        let dz = 2.0 * PI / self.h3 / self.padded as f64;
        let mut best = cands[0].0;
        for (r0, z0) in picked {
            let (mut r, mut z) = (r0, z0);
            let mut f = self.magnitude_at(r, z);
            let (mut sr, mut sz) = (dr, dz);
            while sr > 1e-5 {
                let mut moved = false;
                for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
                    let (nr, nz) = ((r + a * sr).max(0.0), z + b * sz);
                    let g = self.magnitude_at(nr, nz);
                    if g > f {
                        (r, z, f) = (nr, nz, g);
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    sr *= 0.5;
                    sz *= 0.5;
                }
            }
            best = best.max(f);
        }
        best
    }

    /// `||W||_{L^m_h L^2_v}`, `m` in `[2, inf]`; returns `(value, tail)`.
    pub fn anisotropic(&self, m: f64) -> (f64, f64) {
        let g: Vec<f64> = (0..self.r.len()).map(|l| self.column_energy(l)).collect();
        let tail = g.last().unwrap().sqrt();
        if m.is_infinite() {
            let (l, _) = g.iter().enumerate().fold((0, -1.0), |b, (l, &v)| if v > b.1 { (l, v) } else { b });
            let dr = self.r[1] - self.r[0];
            // golden section on [r_l - dr, r_l + dr]
            let (mut a, mut b) = ((self.r[l] - dr).max(0.0), self.r[l] + dr);
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
            let (mut fc, mut fd) = (self.energy_at(c), self.energy_at(d));
            while b - a > 1e-6 {
                if fc > fd {
                    (b, d, fd) = (d, c, fc);
                    c = b - phi * (b - a);
                    fc = self.energy_at(c);
                } else {
                    (a, c, fc) = (c, d, fd);
                    d = a + phi * (b - a);
                    fd = self.energy_at(d);
                }
            }
            return (g[l].max(fc).max(fd).sqrt(), tail);
        }
        let v = self.radial_trapz(|l| g[l].powf(0.5 * m));
        (v.powf(1.0 / m), tail)
    }
}

/// Cartesian value of the free wave at `x`, from the cylindrical quadrature.
pub fn axisymmetric_point_eval(
    profile: &FrequencyProfile,
    t: f64,
    eps: f64,
    nu: f64,
    x: [f64; 3],
    settings: &OracleSettings,
) -> Result<[Complex64; 3]> {
    let snap = Snapshot::new(profile, t, eps, nu, settings)?;
    let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let [wr, wt, w3] = snap.point(r, x[2]);
    let (s, c) = if r > 0.0 { (x[1] / r, x[0] / r) } else { (0.0, 1.0) };
    Ok([wr * c - wt * s, wr * s + wt * c, w3])
}
