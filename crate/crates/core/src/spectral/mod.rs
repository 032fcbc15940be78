//! Periodic-grid realization of the propagator `e^{itD^a}`, Littlewood–Paley
//! projectors, the Duhamel integral and the potential-perturbed fixed point.
//!
//! The box `[-L/2, L/2)ⁿ` stands in for `ℝⁿ`. Frequencies live on the
//! lattice `(2π/L)ℤⁿ`, truncated symmetrically at the Nyquist index.

mod fft;
mod field;
mod fit;
mod grid;
pub mod io;
mod knapp;
mod picard;
mod profile;
mod propagate;

pub use field::{Field, Spectrum, TimeSlab};
pub use fit::{dispersive_fit, gaussian_oracle, gaussian_sup_norm, DispersiveFit};
pub use grid::{make_grid, Grid};
pub use knapp::{knapp_data, KnappSpec};
pub use picard::{duhamel_residual, free_evolution, picard_solve, PicardOutcome};
pub use profile::{dyadic_range, project, project_fattened, CutoffProfile};
pub use propagate::{duhamel, duhamel_nodes, propagate, rescale_field};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("grid dimension {0} outside 1..=3")]
    Dimension(usize),
    #[error("samples per axis m = {0} must be a power of two >= 8")]
    Resolution(usize),
    #[error("box side length {0} must be positive and finite")]
    BoxSize(f64),
    #[error("sample count {got} does not match grid size {expected}")]
    SampleCount { expected: usize, got: usize },
    #[error("field contains non-finite samples")]
    NonFinite,
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("{0} is not a power of two")]
    NotDyadic(f64),
    #[error("time {t} outside [{t0}, {t1}]")]
    TimeOutOfRange { t: f64, t0: f64, t1: f64 },
    #[error("time slab needs at least one field and a positive step")]
    EmptySlab,
    #[error("fit needs at least 3 sample times in [t_min, t_max] with 1 <= t_min < t_max, got {0}")]
    DegenerateFit(usize),
    #[error("Knapp tube does not fit the frequency lattice: {0}")]
    TubeExceedsLattice(String),
}

pub(crate) fn is_dyadic(x: f64) -> bool {
    x.is_finite() && x > 0.0 && x.log2().fract() == 0.0
}
