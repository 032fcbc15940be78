use serde::{Deserialize, Serialize};

use super::data::initial_data;
use super::{DataFamily, ExperimentConfig, RunnerError};
use crate::spectral::{dispersive_fit, gaussian_sup_norm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub t: f64,
    pub sup_norm: f64,
    /// Closed-form sup norm for Gaussian data.
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub id: String,
    pub slope: f64,
    /// `−σ`.
    pub expected_slope: f64,
    pub relative_error: f64,
    pub intercept: f64,
    pub diag_boundary_mass: f64,
    pub rows: Vec<DecayRow>,
}

/// Fits `log‖u(t)‖_∞` against `log t` for the configured data.
pub fn run_decay(cfg: &ExperimentConfig) -> Result<DecayReport, RunnerError> {
    cfg.validate()?;
    let params = cfg
        .decay
        .as_ref()
        .ok_or_else(|| RunnerError::Config("decay run needs a `decay` section".into()))?;
    let grid = cfg.base_grid()?;
    let u0 = initial_data(&cfg.data, grid, cfg.sweep.n_scale, cfg.seed)?;
    let fit = dispersive_fit(&cfg.setup, &u0, params.t_min, params.t_max, params.samples)?;
    let oracle_w2 = match (&cfg.data, cfg.sweep.n_scale) {
        (DataFamily::Gaussian { width }, n) if n == 1.0 => Some(width * width),
        _ => None,
    };
    let rows = fit
        .times
        .iter()
        .zip(&fit.sup_norms)
        .map(|(&t, &s)| DecayRow {
            t,
            sup_norm: s,
            oracle: oracle_w2.map(|w2| gaussian_sup_norm(cfg.setup.n(), w2, t)),
        })
        .collect();
    let expected = -cfg.setup.sigma();
    Ok(DecayReport {
        id: cfg.id.clone(),
        slope: fit.slope,
        expected_slope: expected,
        relative_error: (fit.slope / expected - 1.0).abs(),
        intercept: fit.intercept,
        diag_boundary_mass: fit.boundary_mass,
        rows,
    })
}
