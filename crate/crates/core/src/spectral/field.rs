use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::{Grid, SpectralError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex samples on a [`Grid`], row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    grid: Grid,
    data: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, data: Vec<Complex64>) -> Result<Self, SpectralError> {
        if data.len() != grid.len() {
            return Err(SpectralError::SampleCount {
                expected: grid.len(),
                got: data.len(),
            });
        }
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Self { grid, data })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![ZERO; grid.len()],
        }
    }

    /// Samples `f` at every grid point. Panics if `f` returns a non-finite
    /// value.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let data: Vec<Complex64> = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self::new(grid, data).expect("sampled function must be finite")
    }

    /// Field whose continuous Fourier transform is `f(ξ)` sampled on the
    /// lattice, placed at the centre of the box rather than its corner.
    pub fn from_centred_spectrum(grid: Grid, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let n = grid.dim();
        let data = (0..grid.len())
            .map(|idx| {
                // (−1)^{Σk} moves the spatial centre from the box corner to 0.
                let parity: usize = grid.axis_index(idx)[..n].iter().sum();
                let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
                f(grid.frequency(idx)) * sign
            })
            .collect();
        Spectrum::from_samples(grid, data).into_field()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.data
    }

    /// `(Σ|u|^p hⁿ)^{1/p}`, or the grid maximum for `inv_p = 0`.
    pub fn lp_norm(&self, inv_p: f64) -> f64 {
        if inv_p == 0.0 {
            return self.sup_norm();
        }
        let p = inv_p.recip();
        let sum: f64 = self.data.iter().map(|z| z.norm().powf(p)).sum();
        (sum * self.grid.cell_volume()).powf(inv_p)
    }

    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.data.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.grid.cell_volume()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `∫ u v̄ dx`, linear in `self`.
    pub fn inner(&self, other: &Field) -> Result<Complex64, SpectralError> {
        self.check_grid(other)?;
        let s: Complex64 = self.data.iter().zip(&other.data).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_volume())
    }

    /// Share of the squared L² mass sitting in the outer `L/16` band of the
    /// box; a proxy for periodic wrap-around.
    pub fn boundary_mass(&self) -> f64 {
        let half = 0.5 * self.grid.box_len();
        let edge = half - self.grid.box_len() / 16.0;
        let n = self.grid.dim();
        let (mut outer, mut total) = (0.0, 0.0);
        for (i, z) in self.data.iter().enumerate() {
            let w = z.norm_sqr();
            total += w;
            let x = self.grid.point(i);
            if x[..n].iter().any(|c| c.abs() >= edge) {
                outer += w;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            outer / total
        }
    }

    pub(crate) fn check_grid(&self, other: &Field) -> Result<(), SpectralError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(SpectralError::GridMismatch)
        }
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        for z in &mut self.data {
            *z *= c;
        }
        self
    }

    /// `self + c·other`.
    pub fn axpy(mut self, c: Complex64, other: &Field) -> Result<Self, SpectralError> {
        self.check_grid(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(self)
    }

    /// Pointwise product.
    pub fn mul(mut self, other: &Field) -> Result<Self, SpectralError> {
        self.check_grid(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a *= b;
        }
        Ok(self)
    }

    /// `‖self − other‖_{L²}`.
    pub fn l2_distance(&self, other: &Field) -> Result<f64, SpectralError> {
        self.check_grid(other)?;
        let s: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.cell_volume()).sqrt())
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut data = self.data.clone();
        fft::forward(&mut data, self.grid.dim(), self.grid.m());
        Spectrum { grid: self.grid, data }
    }

    /// Applies the Fourier multiplier `f(|ξ|)`.
    pub fn radial_multiplier(&self, f: impl Fn(f64) -> Complex64) -> Field {
        let mut s = self.spectrum();
        s.multiply_radial(f);
        s.into_field()
    }
}

/// Unnormalized DFT coefficients of a field; Fourier multipliers act here.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    data: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![ZERO; grid.len()],
        }
    }

    pub(crate) fn from_samples(grid: Grid, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), grid.len());
        Self { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.data
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn multiply_radial(&mut self, f: impl Fn(f64) -> Complex64) {
        let moduli = self.grid.frequency_moduli();
        for (z, r) in self.data.iter_mut().zip(moduli) {
            *z *= f(r);
        }
    }

    pub fn into_field(self) -> Field {
        let mut data = self.data;
        fft::inverse(&mut data, self.grid.dim(), self.grid.m());
        Field { grid: self.grid, data }
    }
}

/// Fields at uniformly spaced times `t₀ + j·dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSlab {
    t0: f64,
    dt: f64,
    fields: Vec<Field>,
}

impl TimeSlab {
    pub fn new(t0: f64, dt: f64, fields: Vec<Field>) -> Result<Self, SpectralError> {
        if fields.is_empty() || !(dt.is_finite() && dt > 0.0) || !t0.is_finite() {
            return Err(SpectralError::EmptySlab);
        }
        let g = fields[0].grid;
        if fields.iter().any(|f| f.grid != g) {
            return Err(SpectralError::GridMismatch);
        }
        Ok(Self { t0, dt, fields })
    }

    /// Samples `f(t, x)` at `count` times.
    pub fn from_fn(
        grid: Grid,
        t0: f64,
        dt: f64,
        count: usize,
        f: impl Fn(f64, [f64; 3]) -> Complex64,
    ) -> Result<Self, SpectralError> {
        let fields = (0..count)
            .map(|j| {
                let t = t0 + j as f64 * dt;
                Field::from_fn(grid, |x| f(t, x))
            })
            .collect();
        Self::new(t0, dt, fields)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn end_time(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.time(j)).collect()
    }

    pub fn grid(&self) -> &Grid {
        self.fields[0].grid()
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn into_fields(self) -> Vec<Field> {
        self.fields
    }

    /// `sup_j ‖u(t_j)‖_{L²}`.
    pub fn linf_l2(&self) -> f64 {
        self.fields.iter().map(Field::l2_norm).fold(0.0, f64::max)
    }

    /// `sup_j ‖u(t_j) − v(t_j)‖_{L²}`.
    pub fn linf_l2_distance(&self, other: &TimeSlab) -> Result<f64, SpectralError> {
        if self.len() != other.len() {
            return Err(SpectralError::GridMismatch);
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.fields.iter().zip(&other.fields) {
            worst = worst.max(a.l2_distance(b)?);
        }
        Ok(worst)
    }

    /// Pointwise product at every time; the slabs must share times.
    pub fn mul(&self, other: &TimeSlab) -> Result<TimeSlab, SpectralError> {
        if self.len() != other.len() || self.dt != other.dt || self.t0 != other.t0 {
            return Err(SpectralError::GridMismatch);
        }
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.clone().mul(b))
            .collect::<Result<_, _>>()?;
        TimeSlab::new(self.t0, self.dt, fields)
    }

    pub fn boundary_mass(&self) -> f64 {
        self.fields.iter().map(Field::boundary_mass).fold(0.0, f64::max)
    }
}
