use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, RunnerError};
use crate::decomp::{
    atomic_decompose, lp_norm, verify_sequence_lemmas, whitney_decompose, AtomicDecomposition, SequenceLemmaReport,
    WhitneySquare,
};
use crate::exponents::{corollary_delta_search, CorollaryReport};

pub fn run_whitney(cfg: &ExperimentConfig) -> Result<Vec<WhitneySquare>, RunnerError> {
    let w = cfg
        .whitney
        .as_ref()
        .ok_or_else(|| RunnerError::Config("whitney run needs a `whitney` section".into()))?;
    Ok(whitney_decompose(w.t, w.dt, w.levels)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub id: String,
    pub values: Vec<f64>,
    pub measures: Vec<f64>,
    pub decomposition: AtomicDecomposition,
    pub lp_norm: f64,
    /// `‖a_λ‖_{ℓ^p} / ‖f‖_{L^p}`; `None` for `f = 0`.
    pub ratio: Option<f64>,
    pub violations: Vec<String>,
}

/// Decomposes the configured step function, or a random one with
/// `atoms.cells` cells drawn from the experiment seed.
pub fn run_atoms(cfg: &ExperimentConfig) -> Result<AtomReport, RunnerError> {
    let params = cfg
        .atoms
        .as_ref()
        .ok_or_else(|| RunnerError::Config("atom run needs an `atoms` section".into()))?;
    let (values, measures) = match (&params.values, &params.measures) {
        (Some(v), Some(m)) => (v.clone(), m.clone()),
        (Some(v), None) => (v.clone(), vec![1.0; v.len()]),
        (None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let values = (0..params.cells)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        0.0
                    } else {
                        rng.gen_range(-1.0..1.0f64) * rng.gen_range(0.0..4.0f64).exp()
                    }
                })
                .collect();
            let measures = (0..params.cells).map(|_| rng.gen_range(0.001..0.5)).collect();
            (values, measures)
        }
        (None, Some(_)) => return Err(RunnerError::Config("`atoms.measures` given without `atoms.values`".into())),
    };
    let decomposition = atomic_decompose(&values, &measures, params.p)?;
    let norm = lp_norm(&values, &measures, params.p);
    let violations = decomposition.invariant_violations(&values);
    Ok(AtomReport {
        id: cfg.id.clone(),
        ratio: (norm > 0.0).then(|| decomposition.coefficient_norm() / norm),
        lp_norm: norm,
        values,
        measures,
        decomposition,
        violations,
    })
}

/// `trials` defaults to 1000.
pub fn run_lemmas(cfg: &ExperimentConfig) -> SequenceLemmaReport {
    verify_sequence_lemmas(cfg.trials.unwrap_or(1000), cfg.seed)
}

/// `δ`-search in the config dimension; radii default to `[0.01, 0.005, 0.001]`.
pub fn run_corollary(cfg: &ExperimentConfig) -> Result<CorollaryReport, RunnerError> {
    let grid = cfg
        .corollary
        .as_ref()
        .map(|c| c.epsilon_grid.clone())
        .unwrap_or_else(|| vec![0.01, 0.005, 0.001]);
    if grid.is_empty() || grid.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(RunnerError::Config(format!("epsilon grid must hold radii in (0, 1), got {grid:?}")));
    }
    Ok(corollary_delta_search(cfg.setup.n(), &grid)?)
}
