use super::ladder::{chi, phi, DyadicLadder};
use crate::error::{Error, Result};
use crate::spectral::{dealias, extend_planar, partial, Grid, SpectralField};

pub const PARAPRODUCT_MIN_J0: i32 = 4;

/// Copies coefficients onto a grid with the same box, padding or truncating.
/// Source Nyquist modes are dropped.
pub fn resample(f: &SpectralField, target: &Grid) -> Result<SpectralField> {
    let src = f.grid();
    if src.lengths() != target.lengths() || src.is_planar() != target.is_planar() {
        return Err(Error::GridMismatch("resample needs the same box".into()));
    }
    let mut out = SpectralField::zeros(target, f.ncomp());
    let td = target.dims();
    for idx in 0..src.len() {
        let ii = src.unindex(idx);
        if (0..3).any(|a| src.is_nyquist(a, ii[a])) {
            continue;
        }
        let fr: [i64; 3] = std::array::from_fn(|a| src.freq(a, ii[a]));
        if (0..3).any(|a| 2 * fr[a].abs() >= td[a] as i64 && td[a] > 1) {
            continue;
        }
        let t: [usize; 3] = std::array::from_fn(|a| fr[a].rem_euclid(td[a] as i64) as usize);
        let tidx = target.index(t[0], t[1], t[2]);
        for c in 0..f.ncomp() {
            out.comp_mut(c)[tidx] = f.comp(c)[idx];
        }
    }
    Ok(out)
}

/// The three parts of `c . grad b~` on the product grid (the input grid refined twice).
#[derive(Clone, Debug)]
pub struct ParaproductParts {
    pub low_high: SpectralField,
    pub high_low: SpectralField,
    pub remainder: SpectralField,
    /// `c . grad b~` computed directly on the same grid.
    pub direct: SpectralField,
}

impl ParaproductParts {
    pub fn sum(&self) -> SpectralField {
        self.low_high.add(&self.high_low).unwrap().add(&self.remainder).unwrap()
    }

    /// `||sum - direct|| / ||direct||`.
    pub fn closure_error(&self) -> f64 {
        let d = self.direct.l2_norm();
        if d == 0.0 {
            return self.sum().l2_norm();
        }
        self.sum().sub(&self.direct).unwrap().l2_norm() / d
    }
}

struct Setup {
    grid: Grid,
    c: SpectralField,
    b: SpectralField,
    radius3: Vec<f64>,
    radius_h: Vec<f64>,
    q_range: std::ops::RangeInclusive<i32>,
}

fn setup(c: &SpectralField, btilde: &SpectralField, j0: i32) -> Result<Setup> {
    if c.ncomp() != 3 || btilde.ncomp() != 3 {
        return Err(Error::Invalid("paraproduct needs 3-component fields".into()));
    }
    let g3 = c.grid();
    if g3.is_planar() || !btilde.grid().is_planar() || !btilde.grid().same_horizontal(g3) {
        return Err(Error::GridMismatch("c must be 3D and b~ planar on the same horizontal box".into()));
    }
    let grid = g3.refined(2)?;
    let mut c = resample(&dealias(c), &grid)?;
    let b2 = resample(&dealias(btilde), &btilde.grid().refined(2)?)?;
    let mut b = extend_planar(&b2, &grid)?;
    for comp in 0..3 {
        c.comp_mut(comp)[0] = Default::default();
        b.comp_mut(comp)[0] = Default::default();
    }
    let radius3: Vec<f64> = (0..grid.len())
        .map(|i| {
            let k = grid.kvec(i);
            (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
        })
        .collect();
    let radius_h: Vec<f64> = (0..grid.len())
        .map(|i| {
            let k = grid.kvec(i);
            (k[0] * k[0] + k[1] * k[1]).sqrt()
        })
        .collect();
    let lad = DyadicLadder::for_grid(&grid);
    let (lo, hi) = (*lad.j_range().start(), *lad.j_range().end());
    Ok(Setup { grid, c, b, radius3, radius_h, q_range: (lo - j0 - 1)..=(hi + j0 + 1) })
}

fn mult(f: &SpectralField, radius: &[f64], w: impl Fn(f64) -> f64) -> SpectralField {
    f.map_modes(|i| if radius[i] == 0.0 { 0.0 } else { w(radius[i]) })
}

/// `sum_{l=1,2} a_l d_l b_i` by pointwise products on the (alias-free) product grid.
fn horizontal_transport(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let g = a.grid();
    let ap = a.physical();
    let d1 = partial(b, 0).physical();
    let d2 = partial(b, 1).physical();
    let terms: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..g.len()).map(|x| ap[0][x] * d1[i][x] + ap[1][x] * d2[i][x]).collect())
        .collect();
    SpectralField::from_physical(g, &terms).unwrap()
}

fn terms_at(s: &Setup, j0: i32, q: i32) -> [SpectralField; 3] {
    let sc = 2f64.powi(-q);
    let sl = 2f64.powi(-(q - j0));
    let c_low = mult(&s.c, &s.radius3, |r| chi(r * sl));
    let b_blk = mult(&s.b, &s.radius_h, |r| phi(r * sc));
    let c_blk = mult(&s.c, &s.radius3, |r| phi(r * sc));
    let b_low = mult(&s.b, &s.radius_h, |r| chi(r * sl));
    let b_near = mult(&s.b, &s.radius_h, |r| (-j0..=j0).map(|a| phi(r * 2f64.powi(-(q + a)))).sum());
    [
        horizontal_transport(&c_low, &b_blk),
        horizontal_transport(&c_blk, &b_low),
        horizontal_transport(&c_blk, &b_near),
    ]
}

/// The three sums `T_c grad b~`, `T_{grad b~} c` and `R` for offset `j0 >= 4`.
pub fn paraproduct_2d3d(c: &SpectralField, btilde: &SpectralField, j0: i32) -> Result<ParaproductParts> {
    if j0 < PARAPRODUCT_MIN_J0 {
        return Err(Error::SupportLemmaVoid(j0));
    }
    let s = setup(c, btilde, j0)?;
    let mut parts = [
        SpectralField::zeros(&s.grid, 3),
        SpectralField::zeros(&s.grid, 3),
        SpectralField::zeros(&s.grid, 3),
    ];
    for q in s.q_range.clone() {
        for (acc, t) in parts.iter_mut().zip(terms_at(&s, j0, q)) {
            *acc = acc.add(&t)?;
        }
    }
    let direct = horizontal_transport(&s.c, &s.b);
    let [low_high, high_low, remainder] = parts;
    Ok(ParaproductParts { low_high, high_low, remainder, direct })
}

/// The `q`-th summands of the three parts for any offset, without the lemma check.
/// Used to probe the support statements, including offsets where they fail.
pub fn paraproduct_block(
    c: &SpectralField,
    btilde: &SpectralField,
    j0: i32,
    q: i32,
) -> Result<[SpectralField; 3]> {
    let s = setup(c, btilde, j0.max(0))?;
    Ok(terms_at(&s, j0, q))
}

/// Share of the energy of `f` outside the annulus `2^q [r_in, r_out]`.
pub fn annulus_leakage(f: &SpectralField, q: i32, r_in: f64, r_out: f64) -> f64 {
    let g = f.grid();
    let scale = 2f64.powi(q);
    let mut inside = 0.0;
    let mut outside = 0.0;
    for idx in 0..g.len() {
        let k = g.kvec(idx);
        let r = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let e: f64 = f.components().iter().map(|c| c[idx].norm_sqr()).sum();
        if r >= r_in * scale && r <= r_out * scale {
            inside += e;
        } else {
            outside += e;
        }
    }
    if inside + outside == 0.0 {
        0.0
    } else {
        outside / (inside + outside)
    }
}

/// Share of the energy of `f` outside the ball `2^q B(0, radius)`.
pub fn ball_leakage(f: &SpectralField, q: i32, radius: f64) -> f64 {
    annulus_leakage(f, q, 0.0, radius)
}
