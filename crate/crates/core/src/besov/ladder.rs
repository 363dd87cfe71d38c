use crate::spectral::{Grid, SpectralField};

/// `chi == 1` on `[0, CHI_INNER]`, `chi == 0` on `[CHI_OUTER, inf)`.
pub const CHI_INNER: f64 = 0.75;
pub const CHI_OUTER: f64 = 4.0 / 3.0;

fn glue(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth nonincreasing radial cutoff built from the `exp(-1/x)` glue.
pub fn chi(r: f64) -> f64 {
    if r <= CHI_INNER {
        1.0
    } else if r >= CHI_OUTER {
        0.0
    } else {
        let a = glue(CHI_OUTER - r);
        a / (a + glue(r - CHI_INNER))
    }
}

/// `phi(r) = chi(r/2) - chi(r)`, supported in `[3/4, 8/3]`.
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Homogeneous dyadic blocks realized on a grid.
#[derive(Clone, Debug)]
pub struct DyadicLadder {
    grid: Grid,
    j_min: i32,
    j_max: i32,
    resolved_radius: f64,
    radii: Vec<f64>,
}

impl DyadicLadder {
    pub fn for_grid(grid: &Grid) -> Self {
        let radii: Vec<f64> = (0..grid.len())
            .map(|i| {
                let k = grid.kvec(i);
                (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
            })
            .collect();
        let kmin = grid.min_wavenumber();
        let kmax = radii.iter().cloned().fold(0.0, f64::max);
        // lowest block reaching kmin, highest block starting below kmax
        let mut j_min = (kmin * 3.0 / 8.0).log2().floor() as i32 - 1;
        while 2f64.powi(j_min) * 8.0 / 3.0 <= kmin {
            j_min += 1;
        }
        let mut j_max = (kmax * 4.0 / 3.0).log2().ceil() as i32 + 1;
        while 2f64.powi(j_max) * 0.75 >= kmax {
            j_max -= 1;
        }
        DyadicLadder { grid: grid.clone(), j_min, j_max, resolved_radius: grid.resolved_radius(), radii }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_range(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    /// A block is resolved when its whole annulus lies inside the resolved ball.
    pub fn is_resolved(&self, j: i32) -> bool {
        2f64.powi(j) * 8.0 / 3.0 <= self.resolved_radius
    }

    pub fn radius(&self, idx: usize) -> f64 {
        self.radii[idx]
    }

    pub fn weight(&self, j: i32, idx: usize) -> f64 {
        if idx == 0 {
            0.0
        } else {
            phi(self.radii[idx] * 2f64.powi(-j))
        }
    }

    pub fn mask(&self, j: i32) -> Vec<f64> {
        (0..self.grid.len()).map(|i| self.weight(j, i)).collect()
    }

    /// `Delta_j f`.
    pub fn block(&self, f: &SpectralField, j: i32) -> SpectralField {
        f.map_modes(|i| self.weight(j, i))
    }

    /// `S_q f = chi(2^-q |D|) f` without the mean mode.
    pub fn low(&self, f: &SpectralField, q: i32) -> SpectralField {
        let s = 2f64.powi(-q);
        f.map_modes(|i| if i == 0 { 0.0 } else { chi(self.radii[i] * s) })
    }

    /// Fraction of block energy carried by unresolved blocks.
    pub fn truncation_share(&self, f: &SpectralField) -> f64 {
        let mut total = 0.0;
        let mut lost = 0.0;
        let energy: Vec<f64> = (0..self.grid.len())
            .map(|i| f.components().iter().map(|c| c[i].norm_sqr()).sum())
            .collect();
        for j in self.j_range() {
            let e: f64 = (1..self.grid.len()).map(|i| self.weight(j, i).powi(2) * energy[i]).sum();
            total += e;
            if !self.is_resolved(j) {
                lost += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            lost / total
        }
    }
}
