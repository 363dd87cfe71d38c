use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box. Planar grids have `dims[2] == 1` and measure `L1 * L2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dims: [usize; 3],
    lengths: [f64; 3],
    planar: bool,
}

impl Grid {
    pub fn new(dims: [usize; 3], lengths: [f64; 3]) -> Result<Self> {
        for (a, &n) in dims.iter().enumerate() {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::Grid(format!("axis {a}: {n} is not a power of two >= 2")));
            }
        }
        check_lengths(&lengths)?;
        Ok(Grid { dims, lengths, planar: false })
    }

    pub fn cube(n: usize, length: f64) -> Result<Self> {
        Self::new([n; 3], [length; 3])
    }

    pub fn planar(n1: usize, n2: usize, l1: f64, l2: f64) -> Result<Self> {
        for n in [n1, n2] {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::Grid(format!("{n} is not a power of two >= 2")));
            }
        }
        check_lengths(&[l1, l2, 1.0])?;
        Ok(Grid { dims: [n1, n2, 1], lengths: [l1, l2, 1.0], planar: true })
    }

    pub fn square(n: usize, length: f64) -> Result<Self> {
        Self::planar(n, n, length, length)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    pub fn is_planar(&self) -> bool {
        self.planar
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lebesgue measure of the box (area for planar grids).
    pub fn volume(&self) -> f64 {
        if self.planar {
            self.lengths[0] * self.lengths[1]
        } else {
            self.lengths.iter().product()
        }
    }

    /// Quadrature weight of one physical grid point.
    pub fn cell(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.dims[axis] as f64
    }

    /// Signed integer frequency stored at position `i`; the Nyquist index maps to `+n/2`.
    pub fn freq(&self, axis: usize, i: usize) -> i64 {
        let n = self.dims[axis];
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn is_nyquist(&self, axis: usize, i: usize) -> bool {
        let n = self.dims[axis];
        n > 1 && i == n / 2
    }

    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        self.freq(axis, i) as f64 * 2.0 * PI / self.lengths[axis]
    }

    /// Per-axis wavenumber tables (full and derivative versions; the latter zero at Nyquist).
    pub fn wavenumbers(&self) -> [Vec<f64>; 3] {
        std::array::from_fn(|a| (0..self.dims[a]).map(|i| self.wavenumber(a, i)).collect())
    }

    pub fn derivative_wavenumbers(&self) -> [Vec<f64>; 3] {
        std::array::from_fn(|a| {
            (0..self.dims[a])
                .map(|i| if self.is_nyquist(a, i) { 0.0 } else { self.wavenumber(a, i) })
                .collect()
        })
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.dims[1] + i2) * self.dims[2] + i3
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> [usize; 3] {
        let i3 = idx % self.dims[2];
        let r = idx / self.dims[2];
        [r / self.dims[1], r % self.dims[1], i3]
    }

    /// Storage index of the mode `-k`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let [i1, i2, i3] = self.unindex(idx);
        let n = self.dims;
        self.index((n[0] - i1) % n[0], (n[1] - i2) % n[1], (n[2] - i3) % n[2])
    }

    pub fn kvec(&self, idx: usize) -> [f64; 3] {
        let [i1, i2, i3] = self.unindex(idx);
        [self.wavenumber(0, i1), self.wavenumber(1, i2), self.wavenumber(2, i3)]
    }

    /// 2/3-rule mask: keeps modes with `|k_i| < N_i / 3` on every axis.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let keep: [Vec<bool>; 3] = std::array::from_fn(|a| {
            let n = self.dims[a] as i64;
            (0..self.dims[a]).map(|i| 3 * self.freq(a, i).abs() < n || n == 1).collect()
        });
        let mut out = Vec::with_capacity(self.len());
        for i1 in 0..self.dims[0] {
            for i2 in 0..self.dims[1] {
                for i3 in 0..self.dims[2] {
                    out.push(keep[0][i1] && keep[1][i2] && keep[2][i3]);
                }
            }
        }
        out
    }

    /// Radius of the largest ball of wavenumbers that is resolved on every axis.
    pub fn resolved_radius(&self) -> f64 {
        let axes = if self.planar { 2 } else { 3 };
        (0..axes)
            .map(|a| (self.dims[a] / 2 - 1) as f64 * 2.0 * PI / self.lengths[a])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_wavenumber(&self) -> f64 {
        let axes = if self.planar { 2 } else { 3 };
        (0..axes).map(|a| 2.0 * PI / self.lengths[a]).fold(f64::INFINITY, f64::min)
    }

    pub fn max_wavenumber(&self) -> f64 {
        let axes = if self.planar { 2 } else { 3 };
        (0..axes)
            .map(|a| (self.dims[a] / 2) as f64 * 2.0 * PI / self.lengths[a])
            .map(|k| k * k)
            .sum::<f64>()
            .sqrt()
    }

    /// The horizontal planar grid underlying a 3D grid.
    pub fn horizontal(&self) -> Grid {
        Grid {
            dims: [self.dims[0], self.dims[1], 1],
            lengths: [self.lengths[0], self.lengths[1], 1.0],
            planar: true,
        }
    }

    /// 3D grid obtained by adding a vertical axis to a planar grid.
    pub fn extend(&self, n3: usize, l3: f64) -> Result<Grid> {
        if !self.planar {
            return Err(Error::Grid("extend needs a planar grid".into()));
        }
        Grid::new([self.dims[0], self.dims[1], n3], [self.lengths[0], self.lengths[1], l3])
    }

    /// Grid with every resolved axis refined by `factor` (a power of two).
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        if self.planar {
            Grid::planar(
                self.dims[0] * factor,
                self.dims[1] * factor,
                self.lengths[0],
                self.lengths[1],
            )
        } else {
            Grid::new(self.dims.map(|n| n * factor), self.lengths)
        }
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        i as f64 * self.spacing(axis)
    }

    pub fn same_horizontal(&self, other: &Grid) -> bool {
        self.dims[0] == other.dims[0]
            && self.dims[1] == other.dims[1]
            && self.lengths[0] == other.lengths[0]
            && self.lengths[1] == other.lengths[1]
    }
}

fn check_lengths(lengths: &[f64; 3]) -> Result<()> {
    if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Grid(format!("box lengths must be positive, got {lengths:?}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Grid::cube(12, 1.0).is_err());
        assert!(Grid::cube(16, -1.0).is_err());
        assert!(Grid::planar(8, 6, 1.0, 1.0).is_err());
    }

    #[test]
    fn frequencies_and_conjugates() {
        let g = Grid::cube(8, 2.0 * PI).unwrap();
        assert_eq!(g.freq(0, 4), 4);
        assert_eq!(g.freq(0, 5), -3);
        let idx = g.index(1, 7, 3);
        let c = g.conjugate_index(idx);
        assert_eq!(g.unindex(c), [7, 1, 5]);
        assert_eq!(g.kvec(idx), [1.0, -1.0, 3.0]);
    }

    #[test]
    fn dealias_mask_drops_nyquist() {
        let g = Grid::cube(8, 1.0).unwrap();
        let m = g.dealias_mask();
        assert!(m[g.index(2, 0, 0)]);
        assert!(!m[g.index(3, 0, 0)]);
        assert!(!m[g.index(4, 0, 0)]);
        let p = Grid::square(8, 1.0).unwrap();
        assert!(p.dealias_mask()[p.index(2, 6, 0)]);
    }
}
