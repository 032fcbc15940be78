//! Flat little-endian binary container for fields and time slabs.
//!
//! A field is `n: u64, m: u64, L: f64` followed by `mⁿ` interleaved
//! `(re, im)` pairs of `f64` in row-major order. A slab is
//! `count: u64, dt: f64, t₀: f64` followed by `count` fields.

use std::io::{self, Read, Write};

use num_complex::Complex64;

use super::{Field, Grid, TimeSlab};

fn invalid(e: impl std::fmt::Display) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, e.to_string())
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn write_field<W: Write>(w: &mut W, u: &Field) -> io::Result<()> {
    let g = u.grid();
    w.write_all(&(g.dim() as u64).to_le_bytes())?;
    w.write_all(&(g.m() as u64).to_le_bytes())?;
    w.write_all(&g.box_len().to_le_bytes())?;
    for z in u.samples() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> io::Result<Field> {
    let n = read_u64(r)? as usize;
    let m = read_u64(r)? as usize;
    let l = read_f64(r)?;
    let grid = Grid::new(n, m, l).map_err(invalid)?;
    let mut data = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(r)?;
        let im = read_f64(r)?;
        data.push(Complex64::new(re, im));
    }
    Field::new(grid, data).map_err(invalid)
}

pub fn write_slab<W: Write>(w: &mut W, s: &TimeSlab) -> io::Result<()> {
    w.write_all(&(s.len() as u64).to_le_bytes())?;
    w.write_all(&s.dt().to_le_bytes())?;
    w.write_all(&s.t0().to_le_bytes())?;
    for f in s.fields() {
        write_field(w, f)?;
    }
    Ok(())
}

pub fn read_slab<R: Read>(r: &mut R) -> io::Result<TimeSlab> {
    let count = read_u64(r)? as usize;
    let dt = read_f64(r)?;
    let t0 = read_f64(r)?;
    let fields = (0..count).map(|_| read_field(r)).collect::<io::Result<Vec<_>>>()?;
    TimeSlab::new(t0, dt, fields).map_err(invalid)
}
