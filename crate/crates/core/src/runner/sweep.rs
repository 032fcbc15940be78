use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::data::{forcing_profile, initial_data, nyquist_mass};
use super::{Estimate, ExperimentConfig, LhsNorm, RealizationKind, RunnerError, SweepKind};
use crate::exponents::{check_mode, homogeneous_admissible, ExponentTuple, Mode};
use crate::mixednorm::{besov_z_norm, time_norm, z_spq_norm, PolarResampling, Realization};
use crate::spectral::{duhamel_nodes, rescale_field, make_grid, CutoffProfile, Field, Grid, TimeSlab};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub diag_boundary_mass: f64,
    pub diag_nyquist_mass: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub id: String,
    pub estimate: Estimate,
    pub sweep: SweepKind,
    pub tuple: ExponentTuple,
    /// Set when the exponent checker was bypassed.
    pub forced: bool,
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn invalid_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.valid).count()
    }

    /// `max/min` of the ratio over valid rows (`NaN` when none are valid).
    pub fn spread(&self) -> f64 {
        let valid: Vec<f64> = self.rows.iter().filter(|r| r.valid).map(|r| r.ratio).collect();
        if valid.is_empty() {
            return f64::NAN;
        }
        let max = valid.iter().copied().fold(f64::MIN, f64::max);
        let min = valid.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }

    pub fn ratio_at(&self, param: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.param == param).map(|r| r.ratio)
    }
}

/// CSV with header
/// `param,lhs,rhs,ratio,diag_boundary_mass,diag_nyquist_mass,valid`.
pub fn write_ratio_csv<W: Write>(out: W, report: &RatioReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &report.rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn precheck(cfg: &ExperimentConfig, estimate: Estimate, tuple: &ExponentTuple) -> Result<(), RunnerError> {
    match estimate {
        Estimate::Homogeneous => {
            let adm = homogeneous_admissible(&cfg.setup, tuple.inv_q, tuple.inv_p)?;
            match adm {
                None => Err(RunnerError::Rejected(format!(
                    "(1/q, 1/p) = ({}, {}) is outside the generalized window",
                    tuple.inv_q, tuple.inv_p
                ))),
                Some((_, s)) if (s - tuple.s).abs() > 1e-9 => {
                    Err(RunnerError::Rejected(format!("s = {} but scaling requires s = {s}", tuple.s)))
                }
                Some(_) => Ok(()),
            }
        }
        Estimate::Inhomogeneous => {
            let mode = cfg.mode.unwrap_or(if (tuple.time_sum() - 1.0).abs() < 1e-12 { Mode::Sharp } else { Mode::Nonsharp });
            let verdict = check_mode(&cfg.setup, tuple, mode);
            if verdict.feasible {
                Ok(())
            } else {
                let ids: Vec<&str> = verdict.violations.iter().map(|v| v.id.as_str()).collect();
                Err(RunnerError::Rejected(format!("{mode:?} system violated: {}", ids.join(", "))))
            }
        }
    }
}

struct Point {
    param: f64,
    /// Frequency scale of the data after any rescaling.
    freq: f64,
    data: Field,
    dt: f64,
}

fn points(cfg: &ExperimentConfig, base: Grid) -> Result<Vec<Point>, RunnerError> {
    let a = cfg.setup.a();
    let sw = &cfg.sweep;
    sw.values
        .iter()
        .map(|&v| {
            Ok(match sw.kind {
                SweepKind::Frequency => Point {
                    param: v,
                    freq: v,
                    data: initial_data(&cfg.data, base, v, cfg.seed)?,
                    dt: cfg.time.dt / v.powf(a),
                },
                SweepKind::Rescale => {
                    let u = initial_data(&cfg.data, base, sw.n_scale, cfg.seed)?;
                    Point {
                        param: v,
                        freq: sw.n_scale * v,
                        data: rescale_field(&u, v)?,
                        dt: cfg.time.dt / v.powf(a),
                    }
                }
                SweepKind::Eccentricity => {
                    // The tube shrinks by 1/κ on every axis, so the box grows by κ and
                    // the step by κ² to keep each tube equally resolved over its
                    // coherence time.
                    let grid = make_grid(base.dim(), base.m(), base.box_len() * v)?;
                    Point {
                        param: v,
                        freq: sw.n_scale,
                        data: initial_data(&super::DataFamily::Knapp { ecc: v }, grid, sw.n_scale, cfg.seed)?,
                        dt: cfg.time.dt * v * v,
                    }
                }
            })
        })
        .collect()
}

fn spatial(res: Option<&PolarResampling>) -> Realization<'_> {
    match res {
        Some(r) => Realization::SphericalAverage(r),
        None => Realization::Lebesgue,
    }
}

fn besov_in_time(
    slab: &TimeSlab,
    s: f64,
    inv_p: f64,
    inv_q: f64,
    res: Option<&PolarResampling>,
) -> Result<f64, RunnerError> {
    let values = slab
        .fields()
        .iter()
        .map(|u| besov_z_norm(u, s, inv_p, &CutoffProfile, spatial(res)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(time_norm(&values, slab.dt(), inv_q))
}

/// Ratios `LHS/RHS` of the selected estimate across the sweep.
///
/// Homogeneous: `N^s‖e^{itD^a}u₀‖_{L_t^q Z_p} / ‖u₀‖_{L²}` on `[t₀, t₀ + (count−1)·dt]`.
/// Inhomogeneous: the retarded Duhamel integral of `F(t) = b(t)·φ_N` with
/// `b = sin²` over the first half of the window, measured in `Z^s_{p,q}`
/// against `‖F‖_{Z^{−s}_{p̃′,q̃′}}` (or the `L_t^q Z^s_p` pair).
///
/// Frequency sweeps shrink the time step like `N^{−a}` so the scaled window
/// is the same for every `N`. Eccentricity sweeps run each `κ` on a box of
/// side `κL` with step `κ²·dt`.
pub fn run_estimate_sweep(cfg: &ExperimentConfig, force: bool) -> Result<RatioReport, RunnerError> {
    cfg.validate()?;
    let estimate = match (cfg.sweep.kind, cfg.estimate) {
        (SweepKind::Eccentricity, _) => Estimate::Homogeneous,
        (_, Some(e)) => e,
        (_, None) => return Err(RunnerError::Config("sweep needs `estimate`".into())),
    };
    let tuple = cfg.require_tuple()?;
    if !force {
        precheck(cfg, estimate, &tuple)?;
    }
    let base = cfg.base_grid()?;
    let mut rows = Vec::new();
    for pt in points(cfg, base)? {
        let grid = *pt.data.grid();
        let res = match cfg.realization {
            RealizationKind::Lebesgue => None,
            RealizationKind::Spherical => Some(PolarResampling::new(&grid)?),
        };
        let res = res.as_ref();
        let count = cfg.time.count;
        let (lhs, rhs, boundary, nyquist) = match estimate {
            Estimate::Homogeneous => {
                // Node by node, so large 3-D windows never hold the whole slab.
                let base = pt.data.spectrum();
                let symbol: Vec<f64> = grid.frequency_moduli().into_iter().map(|r| r.powf(cfg.setup.a())).collect();
                let (mut values, mut boundary) = (Vec::with_capacity(count), 0.0f64);
                for j in 0..count {
                    let t = j as f64 * pt.dt;
                    let mut spec = base.clone();
                    spec.coefficients_mut()
                        .iter_mut()
                        .zip(&symbol)
                        .for_each(|(c, w)| *c *= Complex64::from_polar(1.0, t * w));
                    let u = spec.into_field();
                    boundary = boundary.max(u.boundary_mass());
                    values.push(match res {
                        Some(r) => r.norm(&u, tuple.inv_p)?,
                        None => u.lp_norm(tuple.inv_p),
                    });
                }
                let lhs = pt.freq.powf(tuple.s) * time_norm(&values, pt.dt, tuple.inv_q);
                (lhs, pt.data.l2_norm(), boundary, nyquist_mass(&pt.data))
            }
            Estimate::Inhomogeneous => {
                let active = 0.5 * (count - 1) as f64 * pt.dt;
                let fields = (0..count)
                    .map(|j| pt.data.clone().scale(Complex64::new(forcing_profile(j as f64 * pt.dt, active), 0.0)))
                    .collect();
                let f = TimeSlab::new(cfg.time.t0, pt.dt, fields)?;
                let u = TimeSlab::new(
                    cfg.time.t0,
                    pt.dt,
                    duhamel_nodes(&cfg.setup, &f).into_iter().map(|s| s.into_field()).collect(),
                )?;
                let (ip, iq) = (1.0 - tuple.inv_pt, 1.0 - tuple.inv_qt);
                let (lhs, rhs) = match cfg.lhs_norm {
                    LhsNorm::ZSpq => (
                        z_spq_norm(&u, tuple.s, tuple.inv_p, tuple.inv_q, &CutoffProfile, spatial(res))?,
                        z_spq_norm(&f, -tuple.s, ip, iq, &CutoffProfile, spatial(res))?,
                    ),
                    LhsNorm::Besov => (
                        besov_in_time(&u, tuple.s, tuple.inv_p, tuple.inv_q, res)?,
                        besov_in_time(&f, -tuple.s, ip, iq, res)?,
                    ),
                };
                (lhs, rhs, u.boundary_mass().max(f.boundary_mass()), nyquist_mass(&pt.data))
            }
        };
        let ratio = lhs / rhs;
        let valid = ratio.is_finite()
            && boundary <= cfg.thresholds.boundary_mass
            && nyquist <= cfg.thresholds.nyquist_mass;
        rows.push(RatioRow {
            param: pt.param,
            lhs,
            rhs,
            ratio,
            diag_boundary_mass: boundary,
            diag_nyquist_mass: nyquist,
            valid,
        });
    }
    let report = RatioReport {
        id: cfg.id.clone(),
        estimate,
        sweep: cfg.sweep.kind,
        tuple,
        forced: force,
        rows,
    };
    if report.invalid_rows() > 0 && !force {
        return Err(RunnerError::Diagnostics(Box::new(report)));
    }
    Ok(report)
}
