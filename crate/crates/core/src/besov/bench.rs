use std::path::Path;

use serde::Serialize;

use super::norms::{anisotropic_norm, besov_norm, lebesgue_norm, sobolev_norm};
use super::paraproduct::resample;
use crate::error::{Error, Result};
use crate::spectral::{dealias, extend_planar, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    /// `Hdot^s(R^3) x Hdot^t(R^3) -> Hdot^{s+t-3/2}`, needs `s, t < 3/2`, `s + t > 0`.
    Isotropic,
    /// `Hdot^s(R^2) x Hdot^t(R^3) -> Hdot^{s+t-1}`, needs `s, t < 1`, `s + t > 0`.
    Planar3d,
}

/// Pointwise product of two scalar fields computed without aliasing on a refined grid.
fn exact_product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    let fine = v.grid().refined(2)?;
    let uf = if u.grid().is_planar() {
        extend_planar(&resample(&dealias(u), &u.grid().refined(2)?)?, &fine)?
    } else {
        resample(&dealias(u), &fine)?
    };
    let vf = resample(&dealias(v), &fine)?;
    let (a, b) = (uf.physical(), vf.physical());
    let prod: Vec<f64> = a[0].iter().zip(&b[0]).map(|(x, y)| x * y).collect();
    SpectralField::from_physical(&fine, &[prod])
}

/// `||uv||_{Hdot^{target}} / (||u||_{Hdot^s} ||v||_{Hdot^t})`; `None` when a factor vanishes.
pub fn product_law_ratio(
    u: &SpectralField,
    v: &SpectralField,
    s: f64,
    t: f64,
    mode: ProductMode,
) -> Result<Option<f64>> {
    if u.ncomp() != 1 || v.ncomp() != 1 {
        return Err(Error::Invalid("product_law_ratio takes scalar fields".into()));
    }
    let (cap, shift) = match mode {
        ProductMode::Isotropic => (1.5, 1.5),
        ProductMode::Planar3d => (1.0, 1.0),
    };
    if !(s < cap && t < cap && s + t > 0.0) {
        return Err(Error::Exponents(format!("need s, t < {cap} and s + t > 0 (s={s}, t={t})")));
    }
    match mode {
        ProductMode::Isotropic if u.grid() != v.grid() || u.grid().is_planar() => {
            return Err(Error::GridMismatch("isotropic mode needs two fields on one 3D grid".into()))
        }
        ProductMode::Planar3d if !u.grid().is_planar() || !u.grid().same_horizontal(v.grid()) => {
            return Err(Error::GridMismatch("2d3d mode needs a planar u on v's horizontal box".into()))
        }
        _ => {}
    }
    let den = sobolev_norm(u, s) * sobolev_norm(v, t);
    if den == 0.0 {
        return Ok(None);
    }
    Ok(Some(sobolev_norm(&exact_product(u, v)?, s + t - shift) / den))
}

fn interpolation_denominator(f: &SpectralField, s: f64, alpha: f64, beta: f64) -> f64 {
    let w = alpha + beta;
    sobolev_norm(f, s - alpha).powf(beta / w) * sobolev_norm(f, s + beta).powf(alpha / w)
}

/// `||u||_{Bdot^s_{2,1}} / (||u||_{Hdot^{s-a}}^{b/(a+b)} ||u||_{Hdot^{s+b}}^{a/(a+b)})`.
pub fn bshs_ratio(f: &SpectralField, s: f64, alpha: f64, beta: f64) -> Result<Option<f64>> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Exponents("alpha and beta must be positive".into()));
    }
    let den = interpolation_denominator(f, s, alpha, beta);
    if den == 0.0 {
        return Ok(None);
    }
    Ok(Some(besov_norm(f, s, 2.0, 1.0)?.value / den))
}

/// `||c||_{L^{inf,2}_{h,v}} / (||c||_{Hdot^{1-a}}^{b/(a+b)} ||c||_{Hdot^{1+b}}^{a/(a+b)})`.
pub fn bshs_aniso_ratio(f: &SpectralField, alpha: f64, beta: f64) -> Result<Option<f64>> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Exponents("alpha and beta must be positive".into()));
    }
    let den = interpolation_denominator(f, 1.0, alpha, beta);
    if den == 0.0 {
        return Ok(None);
    }
    Ok(Some(anisotropic_norm(f, f64::INFINITY, 2.0)? / den))
}

/// `||f||_{L^p} / ||f||_{Bdot^0_{p,2}}` (with `Bdot^0_{inf,1}` for `p = inf`).
pub fn injection_ratio(f: &SpectralField, p: f64) -> Result<Option<f64>> {
    let r = if p.is_infinite() { 1.0 } else { 2.0 };
    let b = besov_norm(f, 0.0, p, r)?.value;
    if b == 0.0 {
        return Ok(None);
    }
    Ok(Some(lebesgue_norm(f, p) / b))
}

/// One line of the norm report.
#[derive(Clone, Debug, Serialize)]
pub struct NormRow {
    pub quantity: String,
    pub s: f64,
    pub p: f64,
    pub r: f64,
    pub a: f64,
    pub value: f64,
    pub truncation_share: f64,
}

pub const NORM_REPORT_COLUMNS: [&str; 8] = ["quantity", "s", "p", "r", "a", "value", "truncation_share", "manifest_hash"];

pub fn write_norm_report(path: &Path, rows: &[NormRow], manifest_hash: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(NORM_REPORT_COLUMNS)?;
    for row in rows {
        w.write_record([
            row.quantity.clone(),
            fmt_index(row.s),
            fmt_index(row.p),
            fmt_index(row.r),
            fmt_index(row.a),
            format!("{:.12e}", row.value),
            format!("{:.6e}", row.truncation_share),
            manifest_hash.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn fmt_index(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}
