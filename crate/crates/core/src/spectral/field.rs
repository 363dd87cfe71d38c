use std::ops::Range;

pub use num_complex::Complex64;

use super::fft::with_transform;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Relative tolerance for the divergence-free assertion.
pub const DIV_TOL: f64 = 1e-10;

/// Fourier coefficients of a real vector field, one array per component.
/// Coefficients are Fourier means: `f(x) = sum_k f_k exp(i k.x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    comps: Vec<Vec<Complex64>>,
    divergence_free: bool,
}

impl SpectralField {
    pub fn zeros(grid: &Grid, ncomp: usize) -> Self {
        SpectralField {
            grid: grid.clone(),
            comps: vec![vec![Complex64::default(); grid.len()]; ncomp],
            divergence_free: false,
        }
    }

    pub fn from_components(grid: &Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.is_empty() || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch(format!(
                "expected components of length {}",
                grid.len()
            )));
        }
        Ok(SpectralField { grid: grid.clone(), comps, divergence_free: false })
    }

    /// Transforms real physical samples (row-major, one array per component).
    pub fn from_physical(grid: &Grid, data: &[Vec<f64>]) -> Result<Self> {
        let mut comps = Vec::with_capacity(data.len());
        with_transform(grid.dims(), |t| -> Result<()> {
            for d in data {
                if d.len() != grid.len() {
                    return Err(Error::GridMismatch("physical sample count".into()));
                }
                let mut c: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                t.forward(&mut c);
                comps.push(c);
            }
            Ok(())
        })?;
        Self::from_components(grid, comps)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &[Complex64] {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut [Complex64] {
        self.divergence_free = false;
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.comps
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// Sets the flag without measuring; callers use this after exact projections.
    pub fn assume_divergence_free(mut self) -> Self {
        self.divergence_free = true;
        self
    }

    /// Sets the flag after checking the measured residual.
    pub fn mark_divergence_free(mut self) -> Result<Self> {
        let r = self.divergence_residual();
        if r > DIV_TOL {
            return Err(Error::NotDivergenceFree { residual: r, tolerance: DIV_TOL });
        }
        self.divergence_free = true;
        Ok(self)
    }

    /// `max_k |k.f(k)| / max_k |k||f(k)|` over the first three components (0 for a zero field).
    pub fn divergence_residual(&self) -> f64 {
        assert!(self.ncomp() >= 2, "divergence needs a vector field");
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        let axes = self.ncomp().min(3);
        for idx in 0..self.grid.len() {
            let k = self.grid.kvec(idx);
            let mut dot = Complex64::default();
            let mut norm2 = 0.0;
            for a in 0..axes {
                dot += self.comps[a][idx] * k[a];
                norm2 += self.comps[a][idx].norm_sqr();
            }
            let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            num = num.max(dot.norm());
            den = den.max(kk * norm2.sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn is_divergence_free_measured(&self) -> bool {
        self.divergence_residual() <= DIV_TOL
    }

    pub fn physical(&self) -> Vec<Vec<f64>> {
        with_transform(self.grid.dims(), |t| {
            self.comps
                .iter()
                .map(|c| {
                    let mut w = c.clone();
                    t.inverse(&mut w);
                    w.into_iter().map(|z| z.re).collect()
                })
                .collect()
        })
    }

    /// Squared L2 norm, `V * sum |f_k|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.grid.volume() * self.comps.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Real L2 inner product.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.ncomp(), other.ncomp());
        let s: f64 = self
            .comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x * y.conj()).re))
            .sum();
        s * self.grid.volume()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.comps.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_same(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid || self.ncomp() != other.ncomp() {
            return Err(Error::GridMismatch(format!(
                "{:?}x{} vs {:?}x{}",
                self.grid.dims(),
                self.ncomp(),
                other.grid.dims(),
                other.ncomp()
            )));
        }
        Ok(())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<SpectralField> {
        self.check_same(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q * a).collect())
            .collect();
        Ok(SpectralField {
            grid: self.grid.clone(),
            comps,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.comps.iter_mut().flatten().for_each(|z| *z *= a);
        out
    }

    /// Applies a real per-mode multiplier to every component.
    pub fn map_modes(&self, m: impl Fn(usize) -> f64) -> SpectralField {
        let mut out = self.clone();
        let w: Vec<f64> = (0..self.grid.len()).map(m).collect();
        for c in out.comps.iter_mut() {
            c.iter_mut().zip(&w).for_each(|(z, w)| *z *= *w);
        }
        out
    }

    pub fn subfield(&self, range: Range<usize>) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            comps: self.comps[range].to_vec(),
            divergence_free: false,
        }
    }

    pub fn concat(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("concat".into()));
        }
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        Ok(SpectralField { grid: self.grid.clone(), comps, divergence_free: false })
    }

    /// Enforces `f(-k) = conj f(k)`, averaging the two halves.
    pub fn symmetrize(&mut self) {
        let g = self.grid.clone();
        for c in self.comps.iter_mut() {
            let old = c.clone();
            for (idx, z) in c.iter_mut().enumerate() {
                *z = 0.5 * (old[idx] + old[g.conjugate_index(idx)].conj());
            }
        }
    }

    /// Largest deviation from conjugate symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        self.comps
            .iter()
            .flat_map(|c| (0..g.len()).map(move |i| (c[i] - c[g.conjugate_index(i)].conj()).norm()))
            .fold(0.0, f64::max)
    }

    /// The mean-mode (k = 0) coefficients.
    pub fn mean(&self) -> Vec<Complex64> {
        self.comps.iter().map(|c| c[0]).collect()
    }

    /// Squared homogeneous Sobolev norm `V sum_{k != 0} |k|^{2s} |f_k|^2`.
    pub fn sobolev_sqr(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for idx in 1..self.grid.len() {
            let k = self.grid.kvec(idx);
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            let w = if s == 0.0 { 1.0 } else { k2.powf(s) };
            acc += w * self.comps.iter().map(|c| c[idx].norm_sqr()).sum::<f64>();
        }
        acc * self.grid.volume()
    }
}
