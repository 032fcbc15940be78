use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_dyadic, Field, Grid, SpectralError};

/// Frequency tube centred at `(N, 0, …, 0)`.
///
/// The tube has length `N/κ` along the first axis and width `N^{1/2}/κ` in
/// each transverse direction. This is a heuristic geometry: it reduces to
/// the usual Schrödinger scaling at `κ = 1` and `κ` is the knob that makes
/// the packet more coherent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnappSpec {
    pub n_scale: f64,
    pub ecc: f64,
}

impl KnappSpec {
    pub fn half_widths(&self) -> (f64, f64) {
        (
            0.5 * self.n_scale / self.ecc,
            0.5 * self.n_scale.sqrt() / self.ecc,
        )
    }
}

fn ramp(inside: f64, cell: f64) -> f64 {
    (inside / cell + 0.5).clamp(0.0, 1.0)
}

/// Unit-L² field whose Fourier transform is the tube indicator, smoothed by
/// a linear ramp one lattice cell wide, and centred at `x = 0`.
pub fn knapp_data(grid: &Grid, spec: &KnappSpec) -> Result<Field, SpectralError> {
    if !is_dyadic(spec.n_scale) {
        return Err(SpectralError::NotDyadic(spec.n_scale));
    }
    if !(spec.ecc.is_finite() && spec.ecc >= 1.0) {
        return Err(SpectralError::TubeExceedsLattice(format!("eccentricity {} < 1", spec.ecc)));
    }
    let (long, trans) = spec.half_widths();
    let cell = grid.fundamental();
    if spec.n_scale + long + cell > grid.nyquist() {
        return Err(SpectralError::TubeExceedsLattice(format!(
            "tube reaches {} beyond Nyquist {}",
            spec.n_scale + long,
            grid.nyquist()
        )));
    }
    if trans < cell {
        return Err(SpectralError::TubeExceedsLattice(format!(
            "transverse half-width {trans} below lattice spacing {cell}"
        )));
    }
    let n = grid.dim();
    let u = Field::from_centred_spectrum(*grid, |xi| {
        let mut w = ramp(long - (xi[0] - spec.n_scale).abs(), cell);
        for c in &xi[1..n] {
            w *= ramp(trans - c.abs(), cell);
        }
        Complex64::new(w, 0.0)
    });
    let norm = u.l2_norm();
    if norm == 0.0 {
        return Err(SpectralError::TubeExceedsLattice("tube contains no lattice point".into()));
    }
    Ok(u.scale(Complex64::new(norm.recip(), 0.0)))
}
