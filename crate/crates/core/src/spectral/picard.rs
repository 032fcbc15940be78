use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Spectrum;
use super::{duhamel_nodes, Field, SpectralError, TimeSlab};
use crate::exponents::DispersionSetup;

/// Result of the fixed-point iteration `u ← e^{i(t−t₀)D^a}u₀ − i∫e^{i(t−τ)D^a}V u dτ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardOutcome {
    pub solution: TimeSlab,
    /// `‖u^{k+1} − u^k‖_{L_t^∞ L_x²}` per iteration.
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Set when the residual grew three iterations in a row.
    pub diverged: bool,
}

impl PicardOutcome {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    /// Ratio of the last two residuals. With a single residual, the ratio of
    /// that update to the size of the free solution (0 when `V = 0`).
    pub fn contraction_factor(&self, free_size: f64) -> f64 {
        match self.residuals.as_slice() {
            [] => 0.0,
            [r] => {
                if free_size > 0.0 {
                    r / free_size
                } else {
                    0.0
                }
            }
            [.., a, b] => {
                if *a > 0.0 {
                    b / a
                } else {
                    0.0
                }
            }
        }
    }
}

/// `e^{i(t_j−t₀)D^a}u₀` at `t_j = t₀ + j·dt`, `j < count`.
pub fn free_evolution(
    setup: &DispersionSetup,
    u0: &Field,
    t0: f64,
    dt: f64,
    count: usize,
) -> Result<TimeSlab, SpectralError> {
    let base = u0.spectrum();
    let symbol: Vec<f64> = u0
        .grid()
        .frequency_moduli()
        .into_iter()
        .map(|r| r.powf(setup.a()))
        .collect();
    let fields = (0..count)
        .map(|j| {
            let t = j as f64 * dt;
            let data = base
                .coefficients()
                .iter()
                .zip(&symbol)
                .map(|(c, s)| c * Complex64::from_polar(1.0, t * s))
                .collect();
            Spectrum::from_samples(*u0.grid(), data).into_field()
        })
        .collect();
    TimeSlab::new(t0, dt, fields)
}

fn apply_map(
    setup: &DispersionSetup,
    v: &TimeSlab,
    free: &TimeSlab,
    u: &TimeSlab,
) -> Result<TimeSlab, SpectralError> {
    let forcing = v.mul(u)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let fields = duhamel_nodes(setup, &forcing)
        .into_iter()
        .zip(free.fields())
        .map(|(d, f)| f.clone().axpy(minus_i, &d.into_field()))
        .collect::<Result<_, _>>()?;
    TimeSlab::new(free.t0(), free.dt(), fields)
}

/// Picard iteration on the time nodes of `v`.
pub fn picard_solve(
    setup: &DispersionSetup,
    v: &TimeSlab,
    u0: &Field,
    max_iter: usize,
    tol: f64,
) -> Result<PicardOutcome, SpectralError> {
    if v.grid() != u0.grid() {
        return Err(SpectralError::GridMismatch);
    }
    let free = free_evolution(setup, u0, v.t0(), v.dt(), v.len())?;
    let mut current = free.clone();
    let mut residuals: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut diverged = false;
    for _ in 0..max_iter {
        let next = apply_map(setup, v, &free, &current)?;
        let r = next.linf_l2_distance(&current)?;
        residuals.push(r);
        current = next;
        if r < tol {
            converged = true;
            break;
        }
        if residuals.len() >= 4 && residuals.windows(2).rev().take(3).all(|w| w[1] > w[0]) {
            diverged = true;
            break;
        }
    }
    Ok(PicardOutcome {
        solution: current,
        residuals,
        converged,
        diverged,
    })
}

/// `‖u − Φ_{u₀}(u)‖_{L_t^∞ L_x²}` for a candidate solution on `v`'s nodes.
pub fn duhamel_residual(
    setup: &DispersionSetup,
    v: &TimeSlab,
    u0: &Field,
    u: &TimeSlab,
) -> Result<f64, SpectralError> {
    let free = free_evolution(setup, u0, v.t0(), v.dt(), v.len())?;
    apply_map(setup, v, &free, u)?.linf_l2_distance(u)
}
