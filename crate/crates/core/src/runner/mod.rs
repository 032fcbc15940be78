//! Experiment orchestration: configuration documents, estimate-ratio sweeps,
//! region exports, decay fits and Picard runs, with CSV/JSON reporting.

mod data;
mod decay;
mod decomp;
mod picard;
mod region;
mod sweep;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::DecompError;
use crate::exponents::{decay_parameters, DispersionSetup, ExponentError, ExponentTuple, Mode, SChoice};
use crate::mixednorm::MixedNormError;
use crate::spectral::{make_grid, Grid, SpectralError};

pub use data::{forcing_profile, initial_data, nyquist_mass};
pub use decay::{run_decay, DecayReport, DecayRow};
pub use decomp::{run_atoms, run_corollary, run_lemmas, run_whitney, AtomReport};
pub use picard::{run_picard, PicardReport, PicardWindow};
pub use region::{run_region, CorollaryProbe, NamedPoint, RegionReport};
pub use sweep::{run_estimate_sweep, write_ratio_csv, RatioReport, RatioRow};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("tuple rejected by the exponent checker: {0}")]
    Rejected(String),
    #[error("grid diagnostics over threshold in {} of {} rows", .0.invalid_rows(), .0.rows.len())]
    Diagnostics(Box<RatioReport>),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    MixedNorm(#[from] MixedNormError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RunnerError {
    /// Exit status: 1 for a failed check or estimate, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Rejected(_) | RunnerError::Diagnostics(_) => 1,
            RunnerError::Io(_) | RunnerError::Csv(_) => 1,
            _ => 2,
        }
    }
}

/// Samples per axis and box side of the spatial grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub m: usize,
    pub box_len: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self { m: 64, box_len: 64.0 }
    }
}

/// `count` nodes `t0 + j·dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    #[serde(default)]
    pub t0: f64,
    pub dt: f64,
    pub count: usize,
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self { t0: 0.0, dt: 0.05, count: 21 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// Values are dyadic frequencies `N` on a fixed grid.
    Frequency,
    /// Values are dyadic factors `λ`: grid, data and time step rescaled.
    Rescale,
    /// Values are Knapp eccentricities `κ` at frequency `n_scale`.
    Eccentricity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub kind: SweepKind,
    pub values: Vec<f64>,
    /// Base frequency for rescale and eccentricity sweeps.
    #[serde(default = "one")]
    pub n_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            kind: SweepKind::Frequency,
            values: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            n_scale: 1.0,
        }
    }
}

/// Initial data or forcing profile at frequency scale `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataFamily {
    /// `exp(−N²|x|²/(2w²))`.
    Gaussian { width: f64 },
    /// Fourier transform `χ(|ξ|/N)`.
    Annulus,
    /// Knapp tube at `N` with eccentricity `ecc`.
    Knapp { ecc: f64 },
    /// `P_N` of a Gaussian-enveloped sum of random plane waves; the seed
    /// defaults to the experiment seed.
    RandomBandlimited {
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl Default for DataFamily {
    fn default() -> Self {
        DataFamily::Annulus
    }
}

/// Which `Z_p` realization the norms use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizationKind {
    #[default]
    Lebesgue,
    Spherical,
}

/// Left-hand norm of the inhomogeneous estimates: `Z^s_{p,q}` or
/// `L_t^q Z^s_p` with Besov-type `Z^s_p` in space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhsNorm {
    #[default]
    ZSpq,
    Besov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimate {
    Homogeneous,
    Inhomogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Largest share of L² mass in the outer `L/16` band.
    pub boundary_mass: f64,
    /// Largest share of spectral energy beyond two thirds of Nyquist.
    pub nyquist_mass: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            boundary_mass: 1e-4,
            nyquist_mass: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionParams {
    pub inv_q: f64,
    pub inv_qt: f64,
    #[serde(default = "scaling_choice")]
    pub s: SChoice,
    pub resolution: usize,
}

fn scaling_choice() -> SChoice {
    SChoice::Scaling
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialShape {
    /// `A·exp(−|x|²/w²)`.
    #[default]
    Radial,
    /// `A·exp(−|x|²/w²)·(1 + ½cos 2θ)`, plane only.
    Angular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardParams {
    pub amplitude: f64,
    pub width: f64,
    #[serde(default)]
    pub shape: PotentialShape,
    #[serde(default = "default_iterations")]
    pub max_iter: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Number of consecutive sub-windows; each restarts from the endpoint
    /// data of the previous one.
    #[serde(default = "default_windows")]
    pub windows: usize,
    /// `(1/q, 1/p)` of the `Y` diagnostic.
    #[serde(default = "default_y")]
    pub y_exponents: (f64, f64),
}

fn default_iterations() -> usize {
    20
}
fn default_tol() -> f64 {
    1e-10
}
fn default_windows() -> usize {
    1
}
fn default_y() -> (f64, f64) {
    (0.5, 0.25)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayParams {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorollaryParams {
    pub epsilon_grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhitneyParams {
    pub t: f64,
    pub dt: f64,
    pub levels: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomParams {
    pub p: f64,
    /// Explicit cell values; random step functions are drawn when absent.
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub measures: Option<Vec<f64>>,
    #[serde(default = "default_cells")]
    pub cells: usize,
}

fn default_cells() -> usize {
    64
}

/// One experiment. Every section is optional except the setup; each
/// subcommand reads the sections it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub setup: DispersionSetup,
    #[serde(default)]
    pub tuple: Option<ExponentTuple>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub estimate: Option<Estimate>,
    #[serde(default)]
    pub grid: GridParams,
    #[serde(default)]
    pub time: TimeWindow,
    #[serde(default)]
    pub sweep: SweepParams,
    #[serde(default)]
    pub data: DataFamily,
    #[serde(default)]
    pub realization: RealizationKind,
    #[serde(default)]
    pub lhs_norm: LhsNorm,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub region: Option<RegionParams>,
    #[serde(default)]
    pub picard: Option<PicardParams>,
    #[serde(default)]
    pub decay: Option<DecayParams>,
    #[serde(default)]
    pub corollary: Option<CorollaryParams>,
    #[serde(default)]
    pub whitney: Option<WhitneyParams>,
    #[serde(default)]
    pub atoms: Option<AtomParams>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// A config with every optional section empty or defaulted.
    pub fn new(id: &str, setup: DispersionSetup) -> Self {
        Self {
            id: id.to_string(),
            setup,
            tuple: None,
            mode: None,
            estimate: None,
            grid: GridParams::default(),
            time: TimeWindow::default(),
            sweep: SweepParams::default(),
            data: DataFamily::default(),
            realization: RealizationKind::default(),
            lhs_norm: LhsNorm::default(),
            thresholds: Thresholds::default(),
            region: None,
            picard: None,
            decay: None,
            corollary: None,
            whitney: None,
            atoms: None,
            trials: None,
            seed: 0,
            output: None,
        }
    }

    /// Parses and validates a JSON document; setups with an empty decay
    /// window are rejected here.
    pub fn from_json(text: &str) -> Result<Self, RunnerError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String, RunnerError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<(), RunnerError> {
        decay_parameters(&self.setup)?;
        if !(self.time.dt > 0.0 && self.time.dt.is_finite()) || self.time.count < 2 {
            return Err(RunnerError::Config(format!(
                "time window needs dt > 0 and at least 2 nodes, got dt = {}, count = {}",
                self.time.dt, self.time.count
            )));
        }
        if self.sweep.values.is_empty() {
            return Err(RunnerError::Config("sweep has no values".into()));
        }
        Ok(())
    }

    pub fn base_grid(&self) -> Result<Grid, RunnerError> {
        Ok(make_grid(self.setup.n(), self.grid.m, self.grid.box_len)?)
    }

    pub fn require_tuple(&self) -> Result<ExponentTuple, RunnerError> {
        self.tuple.ok_or_else(|| RunnerError::Config("experiment needs an exponent tuple".into()))
    }
}
