use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Uniform periodic grid on `[-L/2, L/2)ⁿ` with `m` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    m: usize,
    l: f64,
}

pub fn make_grid(n: usize, m: usize, l: f64) -> Result<Grid, SpectralError> {
    Grid::new(n, m, l)
}

impl Grid {
    pub fn new(n: usize, m: usize, l: f64) -> Result<Self, SpectralError> {
        if !(1..=3).contains(&n) {
            return Err(SpectralError::Dimension(n));
        }
        if m < 8 || !m.is_power_of_two() {
            return Err(SpectralError::Resolution(m));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(SpectralError::BoxSize(l));
        }
        Ok(Self { n, m, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn box_len(&self) -> f64 {
        self.l
    }

    pub fn spacing(&self) -> f64 {
        self.l / self.m as f64
    }

    /// `hⁿ`, the quadrature weight of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing `2π/L` in frequency.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.l
    }

    /// Largest frequency resolved along an axis, `π/h`.
    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    /// Same sample count on a box of side `l`.
    pub fn with_box(&self, l: f64) -> Result<Self, SpectralError> {
        Self::new(self.n, self.m, l)
    }

    pub(crate) fn axis_index(&self, idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut rest = idx;
        for d in (0..self.n).rev() {
            out[d] = rest % self.m;
            rest /= self.m;
        }
        out
    }

    /// Coordinates of sample `idx` (row-major, last axis fastest); unused
    /// trailing axes are 0.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let k = self.axis_index(idx);
        let mut x = [0.0; 3];
        for d in 0..self.n {
            x[d] = -0.5 * self.l + k[d] as f64 * h;
        }
        x
    }

    pub(crate) fn axis_frequencies(&self) -> Vec<f64> {
        let m = self.m as i64;
        let f = self.fundamental();
        (0..m).map(|k| f * if k < m / 2 { k } else { k - m } as f64).collect()
    }

    /// Frequency vector of FFT mode `idx`.
    pub fn frequency(&self, idx: usize) -> [f64; 3] {
        let m = self.m as i64;
        let f = self.fundamental();
        let k = self.axis_index(idx);
        let mut xi = [0.0; 3];
        for d in 0..self.n {
            let kd = k[d] as i64;
            xi[d] = f * if kd < m / 2 { kd } else { kd - m } as f64;
        }
        xi
    }

    /// `|ξ|` for every mode, in FFT order.
    pub fn frequency_moduli(&self) -> Vec<f64> {
        let fr = self.axis_frequencies();
        let mut out = Vec::with_capacity(self.len());
        match self.n {
            1 => out.extend(fr.iter().map(|x| x.abs())),
            2 => {
                for a in &fr {
                    out.extend(fr.iter().map(|b| (a * a + b * b).sqrt()));
                }
            }
            _ => {
                for a in &fr {
                    for b in &fr {
                        let ab = a * a + b * b;
                        out.extend(fr.iter().map(|c| (ab + c * c).sqrt()));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_examples() {
        let g = make_grid(1, 8, 2.0 * PI).unwrap();
        assert!((g.spacing() - PI / 4.0).abs() < 1e-15);
        assert_eq!(make_grid(2, 256, 64.0).unwrap().len(), 65536);
        assert_eq!(make_grid(3, 4, 1.0), Err(SpectralError::Resolution(4)));
        assert_eq!(make_grid(4, 8, 1.0), Err(SpectralError::Dimension(4)));
        assert!(make_grid(2, 12, 1.0).is_err());
        assert!(make_grid(2, 16, -1.0).is_err());
    }

    #[test]
    fn frequencies_are_symmetric() {
        let g = make_grid(2, 8, 2.0 * PI).unwrap();
        let fr = g.axis_frequencies();
        assert_eq!(fr, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        let moduli = g.frequency_moduli();
        for idx in 0..g.len() {
            let xi = g.frequency(idx);
            assert!((moduli[idx] - (xi[0] * xi[0] + xi[1] * xi[1]).sqrt()).abs() < 1e-15);
        }
        assert_eq!(g.point(0), [-PI, -PI, 0.0]);
    }
}
