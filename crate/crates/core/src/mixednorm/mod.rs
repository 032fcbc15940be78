//! Space-time norms: `L_t^q L_x^p`, the spherically averaged
//! `L_t^q 𝓛_r^p L_ω²`, the Besov-type `Z` norms, Sobolev norms, the angular
//! weight `Λ_ω^α` in the plane, and the `ℓ¹`-summed `Y` norm.

mod polar;

pub use polar::{Interpolator, PolarResampling};

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::{dyadic_range, project, CutoffProfile, Field, SpectralError, TimeSlab};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MixedNormError {
    #[error("operation not available in dimension {0}")]
    Dimension(usize),
    #[error("resampling was built for a different grid")]
    GridMismatch,
    #[error("homogeneous negative-order norm needs a vanishing zero mode, got |û(0)| = {0}")]
    ZeroMode(f64),
    #[error("reciprocal exponent {0} outside [0, 1]")]
    Reciprocal(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Exponent labels of a mixed norm `L_t^q X_p` with optional derivative `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub inv_q: f64,
    pub inv_p: f64,
    #[serde(default)]
    pub s: Option<f64>,
}

impl NormSpec {
    pub fn new(inv_q: f64, inv_p: f64) -> Result<Self, MixedNormError> {
        for v in [inv_q, inv_p] {
            if !(0.0..=1.0).contains(&v) {
                return Err(MixedNormError::Reciprocal(v));
            }
        }
        Ok(Self { inv_q, inv_p, s: None })
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }
}

/// How the `Z_p` slot is realized.
#[derive(Debug, Clone, Copy)]
pub enum Realization<'a> {
    /// Plain `L^p(ℝⁿ)`.
    Lebesgue,
    /// `𝓛_r^p L_ω²` on the given polar quadrature.
    SphericalAverage(&'a PolarResampling),
}

impl Realization<'_> {
    fn norm(&self, u: &Field, inv_p: f64) -> Result<f64, MixedNormError> {
        match self {
            Realization::Lebesgue => Ok(u.lp_norm(inv_p)),
            Realization::SphericalAverage(r) => r.norm(u, inv_p),
        }
    }
}

/// `L^q` in time of per-node values: trapezoid rule, or the maximum for
/// `inv_q = 0`.
pub fn time_norm(values: &[f64], dt: f64, inv_q: f64) -> f64 {
    if inv_q == 0.0 {
        return values.iter().copied().fold(0.0, f64::max);
    }
    let q = inv_q.recip();
    let k = values.len();
    let sum: f64 = values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let w = if j == 0 || j + 1 == k { 0.5 } else { 1.0 };
            w * v.powf(q)
        })
        .sum();
    (sum * dt).powf(inv_q)
}

/// `‖F‖_{L_t^q L_x^p}`.
pub fn mixed_norm(slab: &TimeSlab, spec: &NormSpec) -> f64 {
    let inner: Vec<f64> = slab.fields().iter().map(|f| f.lp_norm(spec.inv_p)).collect();
    time_norm(&inner, slab.dt(), spec.inv_q)
}

/// `‖F‖_{L_t^q 𝓛_r^p L_ω²}`.
pub fn spherical_mixed_norm(
    slab: &TimeSlab,
    spec: &NormSpec,
    resampling: &PolarResampling,
) -> Result<f64, MixedNormError> {
    let inner = slab
        .fields()
        .iter()
        .map(|f| resampling.norm(f, spec.inv_p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(time_norm(&inner, slab.dt(), spec.inv_q))
}

/// `(Σ_N N^{2s} ‖P_N u‖²_{Z_p})^{1/2}` over the grid's dyadic range.
pub fn besov_z_norm(
    u: &Field,
    s: f64,
    inv_p: f64,
    profile: &CutoffProfile,
    realization: Realization<'_>,
) -> Result<f64, MixedNormError> {
    let mut total = 0.0;
    for n in dyadic_range(u.grid()) {
        let piece = project(n, u, profile)?;
        total += n.powf(2.0 * s) * realization.norm(&piece, inv_p)?.powi(2);
    }
    Ok(total.sqrt())
}

fn project_slab(n: f64, slab: &TimeSlab, profile: &CutoffProfile) -> Result<TimeSlab, MixedNormError> {
    let fields = slab
        .fields()
        .iter()
        .map(|f| project(n, f, profile))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TimeSlab::new(slab.t0(), slab.dt(), fields)?)
}

fn realized_mixed(slab: &TimeSlab, spec: &NormSpec, realization: Realization<'_>) -> Result<f64, MixedNormError> {
    match realization {
        Realization::Lebesgue => Ok(mixed_norm(slab, spec)),
        Realization::SphericalAverage(r) => spherical_mixed_norm(slab, spec, r),
    }
}

/// `(Σ_N N^{2s} ‖P_N F‖²_{L_t^q Z_p})^{1/2}`.
pub fn z_spq_norm(
    slab: &TimeSlab,
    s: f64,
    inv_p: f64,
    inv_q: f64,
    profile: &CutoffProfile,
    realization: Realization<'_>,
) -> Result<f64, MixedNormError> {
    let spec = NormSpec::new(inv_q, inv_p)?;
    let mut total = 0.0;
    for n in dyadic_range(slab.grid()) {
        let piece = project_slab(n, slab, profile)?;
        total += n.powf(2.0 * s) * realized_mixed(&piece, &spec, realization)?.powi(2);
    }
    Ok(total.sqrt())
}

/// `Σ_N ‖P_N F‖_{L_t^q 𝓛_r^p L_ω²}`.
pub fn y_norm(
    slab: &TimeSlab,
    inv_q: f64,
    inv_p: f64,
    profile: &CutoffProfile,
    resampling: &PolarResampling,
) -> Result<f64, MixedNormError> {
    let spec = NormSpec::new(inv_q, inv_p)?;
    let mut total = 0.0;
    for n in dyadic_range(slab.grid()) {
        let piece = project_slab(n, slab, profile)?;
        total += spherical_mixed_norm(&piece, &spec, resampling)?;
    }
    Ok(total)
}

/// `‖D^s u‖_{L²}` (homogeneous) or `‖Λ^s u‖_{L²}` with `Λ = (1 − Δ)^{1/2}`.
pub fn sobolev_norm(u: &Field, s: f64, homogeneous: bool) -> Result<f64, MixedNormError> {
    let spec = u.spectrum();
    let coeffs = spec.coefficients();
    if homogeneous && s < 0.0 {
        let total: f64 = u.samples().iter().map(|z| z.norm()).sum();
        if coeffs[0].norm() > 1e-12 * total.max(f64::MIN_POSITIVE) {
            return Err(MixedNormError::ZeroMode(coeffs[0].norm() * u.grid().cell_volume()));
        }
    }
    let moduli = u.grid().frequency_moduli();
    let sum: f64 = coeffs
        .iter()
        .zip(moduli)
        .map(|(c, r)| {
            let w = if homogeneous {
                if r == 0.0 {
                    if s == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    r.powf(s)
                }
            } else {
                (1.0 + r * r).powf(0.5 * s)
            };
            w * w * c.norm_sqr()
        })
        .sum();
    let g = u.grid();
    Ok((sum * g.cell_volume() / g.len() as f64).sqrt())
}

/// `Λ_ω^α u` in the plane: on the circle through each grid point the angular
/// Fourier mode `k` is multiplied by `(1 + k²)^{α/2}`, and the result is
/// read back at that point. Only the change `((1 + k²)^{α/2} − 1)·c_k` is
/// taken from the interpolated circle, so the grid value itself is kept.
/// Points beyond `0.45·L` are left unchanged.
pub fn angular_weight(u: &Field, alpha: f64) -> Result<Field, MixedNormError> {
    let g = *u.grid();
    if g.dim() != 2 {
        return Err(MixedNormError::Dimension(g.dim()));
    }
    let interp = Interpolator::new(u, polar::upsample_factor(&g));
    let r_max = 0.45 * g.box_len();
    let h = g.spacing();
    let mut planner = FftPlanner::<f64>::new();
    let mut out = u.samples().to_vec();
    let mut buf = Vec::new();
    for (idx, value) in out.iter_mut().enumerate() {
        let x = g.point(idx);
        let r = x[0].hypot(x[1]);
        if r == 0.0 || r > r_max {
            continue;
        }
        let theta0 = x[1].atan2(x[0]);
        let k = ((8.0 * PI * r / h).ceil() as usize).next_power_of_two().clamp(16, 4 * g.m());
        buf.clear();
        buf.extend((0..k).map(|j| {
            let t = theta0 + 2.0 * PI * j as f64 / k as f64;
            interp.eval([r * t.cos(), r * t.sin(), 0.0])
        }));
        planner.plan_fft_forward(k).process(&mut buf);
        // Angular modes beyond `r·√2·π/h` are not carried by the lattice.
        let k_max = r * std::f64::consts::SQRT_2 * PI / h;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in buf.iter().enumerate() {
            let mode = if j <= k / 2 { j as f64 } else { j as f64 - k as f64 };
            if mode != 0.0 && mode.abs() <= k_max {
                acc += c * ((1.0 + mode * mode).powf(0.5 * alpha) - 1.0);
            }
        }
        *value += acc / k as f64;
    }
    Ok(Field::new(g, out)?)
}

/// Smallest and largest `Σ_N χ(ξ/N)²` over lattice modes inside the dyadic
/// range; bounds how far `s = 0`, `p = 2` Besov norms can sit from `L²`.
pub fn partition_constant(grid: &crate::spectral::Grid, profile: &CutoffProfile) -> (f64, f64) {
    let range = dyadic_range(grid);
    let (Some(&lo), Some(&hi)) = (range.first(), range.last()) else {
        return (1.0, 1.0);
    };
    grid.frequency_moduli()
        .into_iter()
        .filter(|r| (lo..=hi).contains(r))
        .map(|r| range.iter().map(|&n| profile.piece(n, r).powi(2)).sum::<f64>())
        .fold((f64::INFINITY, 0.0), |(a, b), v| (a.min(v), b.max(v)))
}

/// One exported norm evaluation. `q`, `p` are exponents (`inf` allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub norm_id: String,
    pub q: f64,
    pub p: f64,
    pub s: f64,
    pub value: f64,
    pub diag_boundary_mass: f64,
}

/// CSV with header `norm_id,q,p,s,value,diag_boundary_mass`.
pub fn write_norm_rows<W: Write>(out: W, rows: &[NormRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
