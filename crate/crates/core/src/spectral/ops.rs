use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn require_vector(f: &SpectralField, what: &str) -> Result<()> {
    if f.ncomp() != 3 {
        return Err(Error::Invalid(format!("{what} needs a 3-component field, got {}", f.ncomp())));
    }
    Ok(())
}

fn require_same_grid(a: &SpectralField, b: &SpectralField) -> Result<()> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", a.grid().dims(), b.grid().dims())));
    }
    Ok(())
}

/// Zeroes every mode outside the 2/3-rule box.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mask = f.grid().dealias_mask();
    let flag = f.is_divergence_free();
    let out = f.map_modes(|i| if mask[i] { 1.0 } else { 0.0 });
    if flag {
        out.assume_divergence_free()
    } else {
        out
    }
}

/// Leray projection `f - k (k.f) / |k|^2`; the mean mode is left untouched.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    assert_eq!(f.ncomp(), 3, "leray_project acts on 3-component fields");
    let g = f.grid();
    let mut comps = f.components().to_vec();
    for idx in 1..g.len() {
        let k = g.kvec(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let dot = (comps[0][idx] * k[0] + comps[1][idx] * k[1] + comps[2][idx] * k[2]) / k2;
        for a in 0..3 {
            comps[a][idx] -= dot * k[a];
        }
    }
    SpectralField::from_components(g, comps).unwrap().assume_divergence_free()
}

/// Exact heat semigroup `exp(t nu Delta)`.
pub fn heat_propagate(f: &SpectralField, t: f64, nu: f64) -> SpectralField {
    let g = f.grid().clone();
    let flag = f.is_divergence_free();
    let out = f.map_modes(|idx| {
        let k = g.kvec(idx);
        (-nu * t * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2])).exp()
    });
    if flag {
        out.assume_divergence_free()
    } else {
        out
    }
}

/// Exact solution operator of `dW/dt - nu Lap W + (1/eps) P(W x e3) = 0`.
///
/// On each mode `W(t) = exp(-nu t |k|^2) [cos(w t) W0 + sin(w t) khat x W0]` with
/// `w = k3 / (eps |k|)`. `eps = inf` switches the rotation off.
pub fn coriolis_heat_propagate(f: &SpectralField, t: f64, eps: f64, nu: f64) -> Result<SpectralField> {
    require_vector(f, "coriolis_heat_propagate")?;
    if !(t >= 0.0 && eps > 0.0 && nu >= 0.0) {
        return Err(Error::Invalid(format!("need t >= 0, eps > 0, nu >= 0 (t={t}, eps={eps}, nu={nu})")));
    }
    if !f.is_divergence_free() {
        let r = f.divergence_residual();
        if r > super::field::DIV_TOL {
            return Err(Error::NotDivergenceFree { residual: r, tolerance: super::field::DIV_TOL });
        }
    }
    let g = f.grid();
    let mut comps = f.components().to_vec();
    for idx in 1..g.len() {
        let k = g.kvec(idx);
        let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let decay = (-nu * t * kk * kk).exp();
        let w = k[2] / (eps * kk);
        let (s, c) = (w * t).sin_cos();
        let v = [comps[0][idx], comps[1][idx], comps[2][idx]];
        let h = [k[0] / kk, k[1] / kk, k[2] / kk];
        let cross = [
            v[2] * h[1] - v[1] * h[2],
            v[0] * h[2] - v[2] * h[0],
            v[1] * h[0] - v[0] * h[1],
        ];
        for a in 0..3 {
            comps[a][idx] = (v[a] * c + cross[a] * s) * decay;
        }
    }
    Ok(SpectralField::from_components(g, comps)?.assume_divergence_free())
}

/// Gradient of a scalar field (Nyquist derivative zeroed).
pub fn gradient(f: &SpectralField) -> SpectralField {
    assert_eq!(f.ncomp(), 1);
    let g = f.grid();
    let dk = g.derivative_wavenumbers();
    let mut comps = vec![vec![Complex64::default(); g.len()]; 3];
    for idx in 0..g.len() {
        let [i1, i2, i3] = g.unindex(idx);
        let z = f.comp(0)[idx] * I;
        comps[0][idx] = z * dk[0][i1];
        comps[1][idx] = z * dk[1][i2];
        comps[2][idx] = z * dk[2][i3];
    }
    SpectralField::from_components(g, comps).unwrap()
}

/// Derivative of every component along `axis`.
pub fn partial(f: &SpectralField, axis: usize) -> SpectralField {
    let g = f.grid();
    let dk = g.derivative_wavenumbers();
    let mut out = f.clone();
    for c in 0..f.ncomp() {
        for (idx, z) in out.comp_mut(c).iter_mut().enumerate() {
            let i = g.unindex(idx)[axis];
            *z *= I * dk[axis][i];
        }
    }
    out
}

pub fn divergence(f: &SpectralField) -> SpectralField {
    assert_eq!(f.ncomp(), 3);
    let g = f.grid();
    let dk = g.derivative_wavenumbers();
    let mut d = vec![Complex64::default(); g.len()];
    for (idx, z) in d.iter_mut().enumerate() {
        let [i1, i2, i3] = g.unindex(idx);
        *z = I * (f.comp(0)[idx] * dk[0][i1] + f.comp(1)[idx] * dk[1][i2] + f.comp(2)[idx] * dk[2][i3]);
    }
    SpectralField::from_components(g, vec![d]).unwrap()
}

pub fn curl(f: &SpectralField) -> SpectralField {
    assert_eq!(f.ncomp(), 3);
    let g = f.grid();
    let dk = g.derivative_wavenumbers();
    let mut comps = vec![vec![Complex64::default(); g.len()]; 3];
    for idx in 0..g.len() {
        let [i1, i2, i3] = g.unindex(idx);
        let k = [dk[0][i1], dk[1][i2], dk[2][i3]];
        let v = [f.comp(0)[idx], f.comp(1)[idx], f.comp(2)[idx]];
        comps[0][idx] = I * (v[2] * k[1] - v[1] * k[2]);
        comps[1][idx] = I * (v[0] * k[2] - v[2] * k[0]);
        comps[2][idx] = I * (v[1] * k[0] - v[0] * k[1]);
    }
    SpectralField::from_components(g, comps).unwrap()
}

/// Zero-mean solution of `Lap p = s`.
fn inverse_laplacian(g: &Grid, s: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::default(); g.len()];
    for idx in 1..g.len() {
        let k = g.kvec(idx);
        p[idx] = -s[idx] / (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }
    p
}

/// Pointwise products of physical fields transformed back to a spectral field.
pub fn physical_product(grid: &Grid, terms: Vec<Vec<f64>>) -> SpectralField {
    SpectralField::from_physical(grid, &terms).unwrap()
}

/// Dealiased `(f.grad) g` for a 3-component transport field `f` and any `g`.
pub fn advect(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    require_same_grid(f, g)?;
    require_vector(f, "advect")?;
    let grid = f.grid();
    let fp = dealias(f).physical();
    let gd = dealias(g);
    let axes = if grid.is_planar() { 2 } else { 3 };
    let grads: Vec<Vec<Vec<f64>>> = (0..axes).map(|a| partial(&gd, a).physical()).collect();
    let n = grid.len();
    let terms: Vec<Vec<f64>> = (0..g.ncomp())
        .map(|c| {
            (0..n)
                .map(|x| (0..axes).map(|a| fp[a][x] * grads[a][c][x]).sum())
                .collect()
        })
        .collect();
    Ok(dealias(&physical_product(grid, terms)))
}

/// Nonlinear terms of the MHD system in flux form:
/// `nu = -P d_j(u_j u - b_j b)` and `nb = -d_j(u_j b - b_j u)`. Both are dealiased.
pub fn flux_mhd(u: &SpectralField, b: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    flux_mhd_with_speed(u, b).map(|(nu, nb, _)| (nu, nb))
}

/// As [`flux_mhd`], also returning `max_x (|u| + |b|)` of the dealiased fields.
pub fn flux_mhd_with_speed(
    u: &SpectralField,
    b: &SpectralField,
) -> Result<(SpectralField, SpectralField, f64)> {
    require_same_grid(u, b)?;
    require_vector(u, "flux_mhd")?;
    require_vector(b, "flux_mhd")?;
    let grid = u.grid();
    let up = dealias(u).physical();
    let bp = dealias(b).physical();
    let n = grid.len();
    const SYM: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    const ANTI: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    let mut terms = Vec::with_capacity(9);
    for (i, j) in SYM {
        terms.push((0..n).map(|x| up[i][x] * up[j][x] - bp[i][x] * bp[j][x]).collect());
    }
    for (i, j) in ANTI {
        terms.push((0..n).map(|x| up[j][x] * bp[i][x] - bp[j][x] * up[i][x]).collect());
    }
    let t = dealias(&physical_product(grid, terms));
    let dk = grid.derivative_wavenumbers();
    let sym = |i: usize, j: usize| SYM.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
    let mut nu = vec![vec![Complex64::default(); n]; 3];
    let mut nb = vec![vec![Complex64::default(); n]; 3];
    for idx in 0..n {
        let [i1, i2, i3] = grid.unindex(idx);
        let k = [dk[0][i1], dk[1][i2], dk[2][i3]];
        for i in 0..3 {
            let mut su = Complex64::default();
            let mut sb = Complex64::default();
            for j in 0..3 {
                su += t.comp(sym(i, j))[idx] * k[j];
                if i != j {
                    // A_ij = u_j b_i - b_j u_i, antisymmetric
                    let (p, q, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
                    let a = ANTI.iter().position(|&x| x == (p, q)).unwrap();
                    sb += t.comp(6 + a)[idx] * (k[j] * sign);
                }
            }
            nu[i][idx] = -I * su;
            nb[i][idx] = -I * sb;
        }
    }
    let nu = leray_project(&SpectralField::from_components(grid, nu)?);
    let nb = SpectralField::from_components(grid, nb)?.assume_divergence_free();
    Ok((nu, nb, max_speed(grid, &up, &bp)))
}

fn max_speed(grid: &Grid, up: &[Vec<f64>], bp: &[Vec<f64>]) -> f64 {
    let mag = |p: &[Vec<f64>], x: usize| p.iter().map(|c| c[x] * c[x]).sum::<f64>().sqrt();
    (0..grid.len()).map(|x| mag(up, x) + mag(bp, x)).fold(0.0, f64::max)
}

/// Dealiased induction term `-d_j(u_j b - b_j u)` and `max_x (|u| + |b|)`.
pub fn induction(u: &SpectralField, b: &SpectralField) -> Result<(SpectralField, f64)> {
    require_same_grid(u, b)?;
    require_vector(u, "induction")?;
    require_vector(b, "induction")?;
    let grid = u.grid();
    let up = dealias(u).physical();
    let bp = dealias(b).physical();
    let n = grid.len();
    const ANTI: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    let terms = ANTI
        .iter()
        .map(|&(i, j)| (0..n).map(|x| up[j][x] * bp[i][x] - bp[j][x] * up[i][x]).collect())
        .collect();
    let t = dealias(&physical_product(grid, terms));
    let dk = grid.derivative_wavenumbers();
    let mut out = vec![vec![Complex64::default(); n]; 3];
    for idx in 0..n {
        let [i1, i2, i3] = grid.unindex(idx);
        let k = [dk[0][i1], dk[1][i2], dk[2][i3]];
        // rows of the antisymmetric A: A_01, A_02, A_12
        let a01 = t.comp(0)[idx];
        let a02 = t.comp(1)[idx];
        let a12 = t.comp(2)[idx];
        out[0][idx] = -I * (a01 * k[1] + a02 * k[2]);
        out[1][idx] = -I * (-a01 * k[0] + a12 * k[2]);
        out[2][idx] = -I * (-a02 * k[0] - a12 * k[1]);
    }
    Ok((SpectralField::from_components(grid, out)?.assume_divergence_free(), max_speed(grid, &up, &bp)))
}

/// The two pressures of the rotating system, `p = p0 + p1 / eps`.
#[derive(Clone, Debug)]
pub struct PressurePair {
    pub p0: SpectralField,
    pub p1: SpectralField,
    pub epsilon: f64,
}

impl PressurePair {
    pub fn total(&self) -> SpectralField {
        self.p0.axpy(1.0 / self.epsilon, &self.p1).unwrap()
    }
}

/// `Lap p0 = -d_i d_j (u_i u_j - b_i b_j)`, `Lap p1 = d_2 u_1 - d_1 u_2`, both zero mean.
pub fn pressure_split(u: &SpectralField, b: &SpectralField, eps: f64) -> Result<PressurePair> {
    require_same_grid(u, b)?;
    require_vector(u, "pressure_split")?;
    require_vector(b, "pressure_split")?;
    if !(eps > 0.0) {
        return Err(Error::Invalid(format!("eps must be positive, got {eps}")));
    }
    let grid = u.grid();
    let n = grid.len();
    let up = dealias(u).physical();
    let bp = dealias(b).physical();
    let mut terms = Vec::with_capacity(6);
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    for (i, j) in pairs {
        terms.push((0..n).map(|x| up[i][x] * up[j][x] - bp[i][x] * bp[j][x]).collect());
    }
    let t = dealias(&physical_product(grid, terms));
    let dk = grid.derivative_wavenumbers();
    let mut s0 = vec![Complex64::default(); n];
    let mut s1 = vec![Complex64::default(); n];
    for idx in 0..n {
        let [i1, i2, i3] = grid.unindex(idx);
        let k = [dk[0][i1], dk[1][i2], dk[2][i3]];
        let mut acc = Complex64::default();
        for (m, &(i, j)) in pairs.iter().enumerate() {
            let w = if i == j { 1.0 } else { 2.0 };
            acc += t.comp(m)[idx] * (w * k[i] * k[j]);
        }
        // -d_i d_j T_ij  ->  + k_i k_j T_ij
        s0[idx] = acc;
        s1[idx] = I * (u.comp(0)[idx] * k[1] - u.comp(1)[idx] * k[0]);
    }
    Ok(PressurePair {
        p0: SpectralField::from_components(grid, vec![inverse_laplacian(grid, &s0)])?,
        p1: SpectralField::from_components(grid, vec![inverse_laplacian(grid, &s1)])?,
        epsilon: eps,
    })
}

/// Trivial extension of a planar field to a 3D grid with the same horizontal box.
pub fn extend_planar(f: &SpectralField, grid3: &Grid) -> Result<SpectralField> {
    if !f.grid().is_planar() || grid3.is_planar() || !f.grid().same_horizontal(grid3) {
        return Err(Error::GridMismatch("extend_planar needs matching planar and 3D grids".into()));
    }
    let g2 = f.grid();
    let mut out = SpectralField::zeros(grid3, f.ncomp());
    for c in 0..f.ncomp() {
        let dst = out.comp_mut(c);
        for i1 in 0..g2.dims()[0] {
            for i2 in 0..g2.dims()[1] {
                dst[grid3.index(i1, i2, 0)] = f.comp(c)[g2.index(i1, i2, 0)];
            }
        }
    }
    Ok(if f.is_divergence_free() { out.assume_divergence_free() } else { out })
}

/// Vertical average of a 3D field, as a planar field.
pub fn restrict_planar(f: &SpectralField) -> Result<SpectralField> {
    let g3 = f.grid();
    if g3.is_planar() {
        return Err(Error::GridMismatch("restrict_planar needs a 3D field".into()));
    }
    let g2 = g3.horizontal();
    let mut out = SpectralField::zeros(&g2, f.ncomp());
    for c in 0..f.ncomp() {
        let dst = out.comp_mut(c);
        for i1 in 0..g2.dims()[0] {
            for i2 in 0..g2.dims()[1] {
                dst[g2.index(i1, i2, 0)] = f.comp(c)[g3.index(i1, i2, 0)];
            }
        }
    }
    Ok(out)
}
