use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Spectrum;
use super::{Field, SpectralError};
use crate::exponents::DispersionSetup;

/// Least-squares fit of `log ‖u(t)‖_{L^∞}` against `log t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersiveFit {
    pub slope: f64,
    pub intercept: f64,
    pub times: Vec<f64>,
    pub sup_norms: Vec<f64>,
    /// Largest [`Field::boundary_mass`] over the sampled times.
    pub boundary_mass: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Evolves `u0` to `samples` log-spaced times in `[t_min, t_max]` and fits
/// the decay exponent of the sup norm.
pub fn dispersive_fit(
    setup: &DispersionSetup,
    u0: &Field,
    t_min: f64,
    t_max: f64,
    samples: usize,
) -> Result<DispersiveFit, SpectralError> {
    if samples < 3 || !(t_min >= 1.0 && t_max > t_min && t_max.is_finite()) {
        return Err(SpectralError::DegenerateFit(samples));
    }
    let grid = *u0.grid();
    let base = u0.spectrum();
    let symbol: Vec<f64> = grid
        .frequency_moduli()
        .into_iter()
        .map(|r| r.powf(setup.a()))
        .collect();
    let ratio = (t_max / t_min).ln() / (samples - 1) as f64;
    let times: Vec<f64> = (0..samples).map(|j| t_min * (ratio * j as f64).exp()).collect();
    let mut sup_norms = Vec::with_capacity(samples);
    let mut boundary_mass: f64 = 0.0;
    let mut work = Spectrum::zeros(grid);
    for &t in &times {
        for ((w, b), s) in work.coefficients_mut().iter_mut().zip(base.coefficients()).zip(&symbol) {
            *w = b * Complex64::from_polar(1.0, t * s);
        }
        let u = std::mem::replace(&mut work, Spectrum::zeros(grid)).into_field();
        sup_norms.push(u.sup_norm());
        boundary_mass = boundary_mass.max(u.boundary_mass());
        work = Spectrum::from_samples(grid, u.into_samples());
    }
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = sup_norms.iter().map(|s| s.ln()).collect();
    let (slope, intercept) = least_squares(&lx, &ly);
    Ok(DispersiveFit {
        slope,
        intercept,
        times,
        sup_norms,
        boundary_mass,
    })
}

/// Free Schrödinger (`a = 2`) evolution of `e^{−|x|²/(2w²)}` in `n`
/// dimensions: `(1 − 2it/w²)^{−n/2} exp(−|x|²/(2w²(1 − 2it/w²)))`.
pub fn gaussian_oracle(n: usize, w2: f64, t: f64, x: [f64; 3]) -> Complex64 {
    let z = Complex64::new(1.0, -2.0 * t / w2);
    let r2: f64 = x[..n].iter().map(|c| c * c).sum();
    z.powf(-(n as f64) / 2.0) * (-r2 / (2.0 * w2 * z)).exp()
}

/// `‖u(t)‖_{L^∞} = (1 + 4t²/w⁴)^{−n/4}` for the oracle above.
pub fn gaussian_sup_norm(n: usize, w2: f64, t: f64) -> f64 {
    (1.0 + 4.0 * t * t / (w2 * w2)).powf(-(n as f64) / 4.0)
}
