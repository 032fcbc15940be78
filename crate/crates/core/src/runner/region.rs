use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, RunnerError};
use crate::exponents::{
    check_global_nonsharp, figure_two_vertices, region_sample, ExponentTuple, Mode, RegionMask, SigmaWitness,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPoint {
    pub name: String,
    pub inv_p: f64,
    pub inv_pt: f64,
}

/// The diagonal point `p = q`, `p̃ = q̃` of the slice, checked directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryProbe {
    pub inv_p: f64,
    pub inv_pt: f64,
    pub feasible: bool,
    pub witness: Option<SigmaWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub id: String,
    pub a: f64,
    pub n: usize,
    pub inv_q: f64,
    pub inv_qt: f64,
    pub resolution: usize,
    pub local: usize,
    pub nonsharp: usize,
    pub sharp: usize,
    /// Vertices `A, B, C, D` for `1 < a < 2`.
    pub vertices: Option<Vec<NamedPoint>>,
    /// Present when `n ≥ 3` and the slice lies on the diagonal family
    /// `1/q = 1/q̃ = n/(2(n+a))`.
    pub corollary_point: Option<CorollaryProbe>,
}

/// Samples the region slice of the config and collects the metadata that
/// goes next to the CSV.
pub fn run_region(cfg: &ExperimentConfig) -> Result<(RegionMask, RegionReport), RunnerError> {
    cfg.validate()?;
    let params = cfg
        .region
        .as_ref()
        .ok_or_else(|| RunnerError::Config("region run needs a `region` section".into()))?;
    let setup = cfg.setup;
    let mask = region_sample(&setup, params.inv_q, params.inv_qt, params.s, params.resolution)?;
    let (a, n) = (setup.a(), setup.n());
    let vertices = (a > 1.0 && a < 2.0).then(|| {
        figure_two_vertices(&setup)
            .iter()
            .map(|&(name, inv_p, inv_pt)| NamedPoint { name: name.to_string(), inv_p, inv_pt })
            .collect()
    });
    let diag = n as f64 / (2.0 * (n as f64 + a));
    let on_diagonal = (params.inv_q - diag).abs() < 1e-12 && (params.inv_qt - diag).abs() < 1e-12;
    let corollary_point = if n >= 3 && on_diagonal {
        let t = ExponentTuple::new(diag, diag, diag, diag, 0.0)?;
        let v = check_global_nonsharp(&setup, &t);
        Some(CorollaryProbe { inv_p: diag, inv_pt: diag, feasible: v.feasible, witness: v.witness })
    } else {
        None
    };
    let report = RegionReport {
        id: cfg.id.clone(),
        a,
        n,
        inv_q: params.inv_q,
        inv_qt: params.inv_qt,
        resolution: params.resolution,
        local: mask.count(Mode::Local),
        nonsharp: mask.count(Mode::Nonsharp),
        sharp: mask.count(Mode::Sharp),
        vertices,
        corollary_point,
    };
    Ok((mask, report))
}
