//! Exponent admissibility for generalized Strichartz estimates.
//!
//! Exponents are stored as reciprocals (`inv_q = 1/q`), so the exponent `∞`
//! is the exact value `0.0` and every inequality below is evaluated on the
//! reciprocal side.
//!
//! The dispersion relation is `|ξ|^a` in `n` space dimensions. The engine
//! answers three questions for an [`ExponentTuple`]:
//!
//! * does it satisfy the local system on unit-separated time intervals,
//! * does it satisfy the non-sharp global system (`1/q + 1/q̃ < 1`),
//! * does it satisfy the sharp global system (`1/q + 1/q̃ = 1`),
//!
//! each of which quantifies over a pair of decay rates `(σ₁, σ₂)` in the
//! open window `(σ, σ′)`.

mod corollary;
mod region;
mod search;
mod system;

pub use corollary::{corollary_delta_search, corollary_exponent, diagonal_tuple, CorollaryReport, CorollarySample};
pub use region::{figure_two_vertices, region_sample, RegionCell, RegionMask, SChoice};
pub use search::sigma_feasibility_search;
pub use system::{
    check_global_nonsharp, check_global_sharp, check_local, check_mode, check_with_witness,
    evaluate_system, mu_value, Constraint, Mode, SystemEvaluation,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance under which `|β_a|` counts as on-shell.
pub const SCALING_TOL: f64 = 1e-9;
/// Required margin for strict inequalities.
pub const STRICT_MARGIN: f64 = 1e-9;
/// Slack allowed for non-strict inequalities (rounding only).
pub const CLOSED_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExponentError {
    #[error("dispersion order a = {0} must satisfy a >= 1")]
    DispersionOrder(f64),
    #[error("spatial dimension n = {0} must be at least 1")]
    Dimension(usize),
    #[error("unsupported setup (a = {a}, n = {n}): decay window ({sigma}, {sigma_ext}) is empty")]
    UnsupportedSetup {
        a: f64,
        n: usize,
        sigma: f64,
        sigma_ext: f64,
    },
    #[error("reciprocal exponent {name} = {value} outside [{lo}, {hi}]")]
    Reciprocal {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("derivative parameter must be finite, got {0}")]
    Derivative(f64),
    #[error("region resolution {0} is below the minimum of 8")]
    Resolution(usize),
}

/// The dispersion order `a` and the spatial dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSetup")]
pub struct DispersionSetup {
    a: f64,
    n: usize,
}

#[derive(Deserialize)]
struct RawSetup {
    a: f64,
    n: usize,
}

impl TryFrom<RawSetup> for DispersionSetup {
    type Error = ExponentError;

    fn try_from(raw: RawSetup) -> Result<Self, Self::Error> {
        Self::new(raw.a, raw.n)
    }
}

/// Which family of generalized estimates a setup is used with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Instance {
    /// Spherically symmetric data.
    Radial,
    /// General data measured in `𝓛_r^p L_ω²`.
    SphericalAverage,
}

impl DispersionSetup {
    pub fn new(a: f64, n: usize) -> Result<Self, ExponentError> {
        if !(a.is_finite() && a >= 1.0) {
            return Err(ExponentError::DispersionOrder(a));
        }
        if n == 0 {
            return Err(ExponentError::Dimension(n));
        }
        Ok(Self { a, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    fn is_wave(&self) -> bool {
        self.a == 1.0
    }

    /// Decay parameter `σ` of the untruncated dispersive estimate.
    pub fn sigma(&self) -> f64 {
        if self.is_wave() {
            (self.dim() - 1.0) / 2.0
        } else {
            self.dim() / 2.0
        }
    }

    /// Extended decay parameter `σ′`.
    pub fn sigma_ext(&self) -> f64 {
        if self.is_wave() {
            self.dim() - 1.0
        } else {
            (2.0 * self.dim() - 1.0) / 2.0
        }
    }

    /// `r = (aσ − n)/2`, the derivative parameter at the dispersive vertex.
    pub fn offset_r(&self) -> f64 {
        (self.a * self.sigma() - self.dim()) / 2.0
    }

    /// Whether `σ ≥ 1`, the floor assumed by the generalized estimates.
    pub fn meets_technical_floor(&self) -> bool {
        self.sigma() >= 1.0
    }

    /// Dimension requirements of the two known instances of generalized
    /// estimates.
    pub fn supports(&self, instance: Instance) -> bool {
        match instance {
            Instance::Radial if self.is_wave() => self.n >= 3,
            Instance::Radial => self.n >= 2,
            Instance::SphericalAverage => self.n >= 3,
        }
    }

    /// Sampling window `[σ + h, σ′ − h]`, `h = (σ′ − σ)/1024`.
    pub fn sampling_window(&self) -> (f64, f64) {
        let (lo, hi) = (self.sigma(), self.sigma_ext());
        let h = (hi - lo) / 1024.0;
        (lo + h, hi - h)
    }
}

/// Returns `(σ, σ′)` for a setup.
pub fn decay_parameters(setup: &DispersionSetup) -> Result<(f64, f64), ExponentError> {
    let (sigma, sigma_ext) = (setup.sigma(), setup.sigma_ext());
    if sigma_ext <= sigma {
        return Err(ExponentError::UnsupportedSetup {
            a: setup.a,
            n: setup.n,
            sigma,
            sigma_ext,
        });
    }
    Ok((sigma, sigma_ext))
}

/// `(aσ − n)/2`.
pub fn derivative_offset_r(setup: &DispersionSetup) -> f64 {
    setup.offset_r()
}

/// Reciprocal exponents `(1/q, 1/p, 1/q̃, 1/p̃)` and derivative parameter `s`.
///
/// The derivative split between the two sides is fixed to `s = s̃`, so the
/// total derivative carried by an inhomogeneous estimate is `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub inv_q: f64,
    pub inv_p: f64,
    pub inv_qt: f64,
    pub inv_pt: f64,
    pub s: f64,
}

fn reciprocal(name: &'static str, value: f64) -> Result<f64, ExponentError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ExponentError::Reciprocal {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

impl ExponentTuple {
    pub fn new(inv_q: f64, inv_p: f64, inv_qt: f64, inv_pt: f64, s: f64) -> Result<Self, ExponentError> {
        if !s.is_finite() {
            return Err(ExponentError::Derivative(s));
        }
        Ok(Self {
            inv_q: reciprocal("1/q", inv_q)?,
            inv_p: reciprocal("1/p", inv_p)?,
            inv_qt: reciprocal("1/q~", inv_qt)?,
            inv_pt: reciprocal("1/p~", inv_pt)?,
            s,
        })
    }

    /// Builds a tuple from exponents; `f64::INFINITY` maps to reciprocal 0.
    pub fn from_exponents(q: f64, p: f64, qt: f64, pt: f64, s: f64) -> Result<Self, ExponentError> {
        Self::new(q.recip(), p.recip(), qt.recip(), pt.recip(), s)
    }

    /// `β_a`, the scaling defect. Zero for scale-invariant global estimates.
    pub fn beta(&self, setup: &DispersionSetup) -> f64 {
        scaling_beta(setup, self)
    }

    /// The derivative parameter that makes `β_a` vanish.
    pub fn scaling_s(&self, setup: &DispersionSetup) -> f64 {
        0.5 * setup.a * (self.inv_q + self.inv_qt)
            - 0.5 * setup.dim() * (1.0 - self.inv_p - self.inv_pt)
    }

    /// Copy with `s` replaced by [`ExponentTuple::scaling_s`].
    pub fn on_scaling_line(mut self, setup: &DispersionSetup) -> Self {
        self.s = self.scaling_s(setup);
        self
    }

    pub fn time_sum(&self) -> f64 {
        self.inv_q + self.inv_qt
    }
}

/// `β_a = 1/q + 1/q̃ − (n/a)(1 − 1/p − 1/p̃) − 2s/a`.
pub fn scaling_beta(setup: &DispersionSetup, tuple: &ExponentTuple) -> f64 {
    let (a, n) = (setup.a, setup.dim());
    tuple.inv_q + tuple.inv_qt - (n / a) * (1.0 - tuple.inv_p - tuple.inv_pt) - 2.0 * tuple.s / a
}

/// Homogeneous generalized admissibility of `(q, p)`.
///
/// Returns `(τ, s)` with `1/q = τ(1/2 − 1/p)` when `τ ∈ (σ, σ′)`, and `None`
/// otherwise (including the degenerate `p = 2`).
pub fn homogeneous_admissible(
    setup: &DispersionSetup,
    inv_q: f64,
    inv_p: f64,
) -> Result<Option<(f64, f64)>, ExponentError> {
    for (name, v) in [("1/q", inv_q), ("1/p", inv_p)] {
        if !(0.0..=0.5).contains(&v) {
            return Err(ExponentError::Reciprocal {
                name,
                value: v,
                lo: 0.0,
                hi: 0.5,
            });
        }
    }
    let gap = 0.5 - inv_p;
    if gap <= 0.0 {
        return Ok(None);
    }
    let tau = inv_q / gap;
    if tau > setup.sigma() && tau < setup.sigma_ext() {
        let n = setup.dim();
        Ok(Some((tau, -n / 2.0 + n * inv_p + setup.a * inv_q)))
    } else {
        Ok(None)
    }
}

/// A pair of decay rates inside `(σ, σ′)` together with the derived `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaWitness {
    pub sigma1: f64,
    pub sigma2: f64,
    /// `None` encodes `μ = ∞` (θ = 0).
    pub mu: Option<f64>,
    pub theta: f64,
}

impl SigmaWitness {
    pub fn new(sigma1: f64, sigma2: f64) -> Self {
        Self {
            sigma1,
            sigma2,
            mu: None,
            theta: 0.0,
        }
    }
}

/// A violated constraint with its evaluated sides (`lhs` should not exceed
/// `rhs`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl Violation {
    pub(crate) fn new(id: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            id: id.to_string(),
            lhs,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub feasible: bool,
    pub witness: Option<SigmaWitness>,
    pub violations: Vec<Violation>,
}

impl AdmissibilityVerdict {
    pub(crate) fn accept(witness: SigmaWitness) -> Self {
        Self {
            feasible: true,
            witness: Some(witness),
            violations: Vec::new(),
        }
    }

    pub(crate) fn reject(violations: Vec<Violation>) -> Self {
        debug_assert!(!violations.is_empty());
        Self {
            feasible: false,
            witness: None,
            violations,
        }
    }

    /// `feasible ⟺ violations empty ⟺ witness present`.
    pub fn is_consistent(&self) -> bool {
        self.feasible == self.violations.is_empty() && self.feasible == self.witness.is_some()
    }

    pub fn violates(&self, id: &str) -> bool {
        self.violations.iter().any(|v| v.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(a: f64, n: usize) -> DispersionSetup {
        DispersionSetup::new(a, n).unwrap()
    }

    #[test]
    fn decay_tables() {
        assert_eq!(decay_parameters(&setup(2.0, 3)).unwrap(), (1.5, 2.5));
        assert_eq!(decay_parameters(&setup(1.0, 3)).unwrap(), (1.0, 2.0));
        assert_eq!(decay_parameters(&setup(1.0, 4)).unwrap(), (1.5, 3.0));
    }

    #[test]
    fn one_dimensional_wave_is_unsupported() {
        let err = decay_parameters(&setup(1.0, 1)).unwrap_err();
        assert!(matches!(err, ExponentError::UnsupportedSetup { .. }));
        assert!(!setup(1.0, 1).meets_technical_floor());
    }

    #[test]
    fn rejects_subcritical_order() {
        assert!(DispersionSetup::new(0.9, 3).is_err());
        assert!(DispersionSetup::new(2.0, 0).is_err());
    }

    #[test]
    fn instance_windows() {
        assert!(setup(2.0, 2).supports(Instance::Radial));
        assert!(!setup(1.0, 2).supports(Instance::Radial));
        assert!(setup(1.0, 3).supports(Instance::Radial));
        assert!(!setup(2.0, 2).supports(Instance::SphericalAverage));
        assert!(setup(1.5, 3).supports(Instance::SphericalAverage));
    }

    #[test]
    fn beta_examples() {
        let s = setup(2.0, 3);
        let t = ExponentTuple::from_exponents(10.0 / 3.0, 10.0 / 3.0, 10.0 / 3.0, 10.0 / 3.0, 0.0).unwrap();
        assert!(scaling_beta(&s, &t).abs() < 1e-15);
        let inf = f64::INFINITY;
        let t = ExponentTuple::from_exponents(inf, inf, inf, inf, -1.5).unwrap();
        assert_eq!(scaling_beta(&s, &t), 0.0);
        let t = ExponentTuple::from_exponents(2.0, 6.0, 2.0, 6.0, 0.0).unwrap();
        assert!(scaling_beta(&s, &t).abs() < 1e-15);
    }

    #[test]
    fn offset_examples() {
        for n in 1..6 {
            assert_eq!(derivative_offset_r(&setup(2.0, n)), 0.0);
        }
        assert_eq!(derivative_offset_r(&setup(1.0, 3)), -1.0);
        assert_eq!(derivative_offset_r(&setup(3.0, 2)), 0.5);
    }

    #[test]
    fn homogeneous_examples() {
        let s = setup(2.0, 3);
        let (tau, d) = homogeneous_admissible(&s, 0.5, 0.25).unwrap().unwrap();
        assert_eq!(tau, 2.0);
        assert!((d - 0.25).abs() < 1e-15);
        assert_eq!(homogeneous_admissible(&s, 0.5, 1.0 / 6.0).unwrap(), None);
        assert_eq!(homogeneous_admissible(&s, 0.5, 0.5).unwrap(), None);
        assert!(homogeneous_admissible(&s, 0.5, 0.75).is_err());
    }

    #[test]
    fn reciprocal_range_is_enforced() {
        assert!(ExponentTuple::new(1.2, 0.1, 0.1, 0.1, 0.0).is_err());
        assert!(ExponentTuple::new(0.1, -0.1, 0.1, 0.1, 0.0).is_err());
        assert!(ExponentTuple::new(0.1, 0.1, 0.1, 0.1, f64::NAN).is_err());
    }

    #[test]
    fn scaling_line_solves_beta() {
        let s = setup(1.7, 3);
        let t = ExponentTuple::new(0.31, 0.22, 0.4, 0.13, 5.0).unwrap().on_scaling_line(&s);
        assert!(scaling_beta(&s, &t).abs() <= 1e-14);
    }
}
