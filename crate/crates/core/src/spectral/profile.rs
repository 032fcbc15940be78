use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_dyadic, Field, Grid, SpectralError};

/// Smooth radial cutoff `ψ` with `ψ = 1` on `[0, 1]`, `ψ = 0` on `[2, ∞)`
/// and the bump `χ(x) = ψ(x) − ψ(2x)` built from it.
///
/// The transition is the standard smooth step `g(2−r)/(g(2−r) + g(r−1))`
/// with `g(x) = e^{−1/x}` for `x > 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutoffProfile;

fn g(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

impl CutoffProfile {
    pub fn psi(&self, r: f64) -> f64 {
        if r <= 1.0 {
            1.0
        } else if r >= 2.0 {
            0.0
        } else {
            let (a, b) = (g(2.0 - r), g(r - 1.0));
            a / (a + b)
        }
    }

    pub fn chi(&self, r: f64) -> f64 {
        self.psi(r) - self.psi(2.0 * r)
    }

    /// Multiplier of `P_N` at `|ξ| = r`.
    pub fn piece(&self, n: f64, r: f64) -> f64 {
        self.chi(r / n)
    }

    /// Multiplier of `P̃_N = P_{N/2} + P_N + P_{2N}`, which telescopes to
    /// `ψ(r/2N) − ψ(4r/N)`.
    pub fn fattened(&self, n: f64, r: f64) -> f64 {
        self.psi(r / (2.0 * n)) - self.psi(4.0 * r / n)
    }
}

/// Dyadic `N` the grid resolves: `N/2 ≥ 2·(2π/L)` and `2N ≤ π/h`.
pub fn dyadic_range(grid: &Grid) -> Vec<f64> {
    let lo = (4.0 * grid.fundamental()).log2().ceil() as i32;
    let hi = (0.5 * grid.nyquist()).log2().floor() as i32;
    (lo..=hi).map(|j| 2f64.powi(j)).collect()
}

/// `P_N u`, the multiplier `χ(ξ/N)`.
pub fn project(n: f64, u: &Field, profile: &CutoffProfile) -> Result<Field, SpectralError> {
    if !is_dyadic(n) {
        return Err(SpectralError::NotDyadic(n));
    }
    Ok(u.radial_multiplier(|r| Complex64::new(profile.piece(n, r), 0.0)))
}

/// `P̃_N u`.
pub fn project_fattened(n: f64, u: &Field, profile: &CutoffProfile) -> Result<Field, SpectralError> {
    if !is_dyadic(n) {
        return Err(SpectralError::NotDyadic(n));
    }
    Ok(u.radial_multiplier(|r| Complex64::new(profile.fattened(n, r), 0.0)))
}
