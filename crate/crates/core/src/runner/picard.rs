use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::data::initial_data;
use super::{ExperimentConfig, PotentialShape, RunnerError};
use crate::mixednorm::{besov_z_norm, y_norm, PolarResampling, Realization};
use crate::spectral::{duhamel_residual, free_evolution, picard_solve, CutoffProfile, Field, TimeSlab};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardWindow {
    pub t0: f64,
    pub t1: f64,
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub contraction_factor: f64,
    pub converged: bool,
    pub diverged: bool,
    /// `‖u − Φ(u)‖_{L_t^∞ L_x²}` of the returned iterate.
    pub final_residual: f64,
    /// `Y` norm of the free evolution and of the solution (`n ∈ {2, 3}`).
    pub y_norm_free: Option<f64>,
    pub y_norm_solution: Option<f64>,
    /// `sup_t ‖u(t)‖` in the `s = 0`, `p = 2` Besov-type norm.
    pub besov_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    pub id: String,
    pub windows: Vec<PicardWindow>,
}

impl PicardReport {
    pub fn converged(&self) -> bool {
        self.windows.iter().all(|w| w.converged)
    }

    pub fn diverged(&self) -> bool {
        self.windows.iter().any(|w| w.diverged)
    }

    pub fn max_contraction_factor(&self) -> f64 {
        self.windows.iter().map(|w| w.contraction_factor).fold(0.0, f64::max)
    }
}

fn potential(cfg: &ExperimentConfig, shape: PotentialShape, amplitude: f64, width: f64) -> impl Fn([f64; 3]) -> Complex64 {
    let n = cfg.setup.n();
    move |x| {
        let r2: f64 = x[..n].iter().map(|v| v * v).sum();
        let base = amplitude * (-r2 / (width * width)).exp();
        let w = match shape {
            PotentialShape::Radial => 1.0,
            PotentialShape::Angular => 1.0 + 0.5 * (2.0 * x[1].atan2(x[0])).cos(),
        };
        Complex64::new(base * w, 0.0)
    }
}

/// Picard iteration for `i∂ₜu + D^a u = V u` with time-independent `V`,
/// over `windows` consecutive sub-windows of the configured time window.
pub fn run_picard(cfg: &ExperimentConfig) -> Result<PicardReport, RunnerError> {
    cfg.validate()?;
    let p = cfg
        .picard
        .as_ref()
        .ok_or_else(|| RunnerError::Config("picard run needs a `picard` section".into()))?;
    let n = cfg.setup.n();
    if p.shape == PotentialShape::Angular && n != 2 {
        return Err(RunnerError::Config(format!("angular potentials need n = 2, got n = {n}")));
    }
    let steps = cfg.time.count - 1;
    if p.windows == 0 || steps % p.windows != 0 {
        return Err(RunnerError::Config(format!("{steps} time steps do not split into {} windows", p.windows)));
    }
    let grid = cfg.base_grid()?;
    let res = if (2..=3).contains(&n) { Some(PolarResampling::new(&grid)?) } else { None };
    let vfun = potential(cfg, p.shape, p.amplitude, p.width);
    let v_field = Field::from_fn(grid, vfun);
    let per = steps / p.windows;
    let dt = cfg.time.dt;
    let mut u0 = initial_data(&cfg.data, grid, cfg.sweep.n_scale, cfg.seed)?;
    let mut windows = Vec::new();
    let (yq, yp) = p.y_exponents;
    for k in 0..p.windows {
        let t0 = cfg.time.t0 + (k * per) as f64 * dt;
        let v = TimeSlab::new(t0, dt, vec![v_field.clone(); per + 1])?;
        let out = picard_solve(&cfg.setup, &v, &u0, p.max_iter, p.tol)?;
        let free = free_evolution(&cfg.setup, &u0, t0, dt, per + 1)?;
        let final_residual = duhamel_residual(&cfg.setup, &v, &u0, &out.solution)?;
        let (y_free, y_sol) = match &res {
            Some(r) => (
                Some(y_norm(&free, yq, yp, &CutoffProfile, r)?),
                Some(y_norm(&out.solution, yq, yp, &CutoffProfile, r)?),
            ),
            None => (None, None),
        };
        let besov_max = out
            .solution
            .fields()
            .iter()
            .map(|u| besov_z_norm(u, 0.0, 0.5, &CutoffProfile, Realization::Lebesgue))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        windows.push(PicardWindow {
            t0,
            t1: t0 + per as f64 * dt,
            iterations: out.iterations(),
            contraction_factor: out.contraction_factor(free.linf_l2()),
            converged: out.converged,
            diverged: out.diverged,
            residuals: out.residuals.clone(),
            final_residual,
            y_norm_free: y_free,
            y_norm_solution: y_sol,
            besov_max,
        });
        let diverged = out.diverged;
        u0 = out.solution.into_fields().pop().expect("window has nodes");
        if diverged {
            break;
        }
    }
    Ok(PicardReport { id: cfg.id.clone(), windows })
}
