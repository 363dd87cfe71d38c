use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const HEADER_LEN: usize = 64;
pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"RMHD";

// Header layout (little endian):
//   0  magic "RMHD"        4  version u32
//   8  dims 3 x u32       20  box lengths 3 x f64
//  44  component count    48  flags u32 (bit 0 planar, bit 1 divergence-free)
//  52  reserved (zero)
fn header(f: &SpectralField) -> [u8; HEADER_LEN] {
    let mut h = [0u8; HEADER_LEN];
    let g = f.grid();
    h[0..4].copy_from_slice(MAGIC);
    h[4..8].copy_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    for (a, n) in g.dims().iter().enumerate() {
        h[8 + 4 * a..12 + 4 * a].copy_from_slice(&(*n as u32).to_le_bytes());
    }
    for (a, l) in g.lengths().iter().enumerate() {
        h[20 + 8 * a..28 + 8 * a].copy_from_slice(&l.to_le_bytes());
    }
    h[44..48].copy_from_slice(&(f.ncomp() as u32).to_le_bytes());
    let flags = g.is_planar() as u32 | (f.is_divergence_free() as u32) << 1;
    h[48..52].copy_from_slice(&flags.to_le_bytes());
    h
}

pub fn write_checkpoint(path: &Path, f: &SpectralField) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(|e| Error::io(path, e));
    put(&header(f))?;
    for c in f.components() {
        for z in c {
            put(&z.re.to_le_bytes())?;
            put(&z.im.to_le_bytes())?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<SpectralField> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut h = [0u8; HEADER_LEN];
    r.read_exact(&mut h).map_err(|e| Error::io(path, e))?;
    if &h[0..4] != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(h[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(h[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let dims = [u32_at(8) as usize, u32_at(12) as usize, u32_at(16) as usize];
    let lengths = [f64_at(20), f64_at(28), f64_at(36)];
    let ncomp = u32_at(44) as usize;
    let flags = u32_at(48);
    let grid = if flags & 1 == 1 {
        Grid::planar(dims[0], dims[1], lengths[0], lengths[1])?
    } else {
        Grid::new(dims, lengths)?
    };
    let mut buf = [0u8; 16];
    let mut comps = Vec::with_capacity(ncomp);
    for _ in 0..ncomp {
        let mut c = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            r.read_exact(&mut buf).map_err(|e| Error::io(path, e))?;
            c.push(Complex64::new(
                f64::from_le_bytes(buf[0..8].try_into().unwrap()),
                f64::from_le_bytes(buf[8..16].try_into().unwrap()),
            ));
        }
        comps.push(c);
    }
    let f = SpectralField::from_components(&grid, comps)?;
    Ok(if flags & 2 == 2 { f.assume_divergence_free() } else { f })
}
