use serde::{Deserialize, Serialize};

use super::search::sigma_feasibility_search;
use super::system::{mu_value, Mode};
use super::{DispersionSetup, ExponentError, ExponentTuple, SigmaWitness};

/// Spacing of the sampled orders `a = 2 − k·A_STEP`.
pub const A_STEP: f64 = 0.0025;
/// Sampled points per side of each relative `q`-neighbourhood.
const HALF_POINTS: i32 = 2;

/// One accepted tuple of the diagonal family together with its witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollarySample {
    pub a: f64,
    /// Relative radius that passed for this `a`.
    pub epsilon: f64,
    pub tuple: ExponentTuple,
    pub witness: SigmaWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub n: usize,
    pub delta: f64,
    pub samples: Vec<CorollarySample>,
    /// `μ` at `a = 2`, `q = 2(n+2)/n`, at the centre of the σ-window.
    pub mu_at_two: f64,
    /// `q/2` at `a = 2`; the closed form of `μ`.
    pub mu_closed_form: f64,
    /// Central difference of `q(a) = 2(n+a)/n` at `a = 2`.
    pub dq_da: f64,
}

/// Diagonal family: `p = q`, `p̃ = q̃`, `s = 0`, `1/q + 1/q̃ = n/(n+a)`.
pub fn diagonal_tuple(n: usize, a: f64, q: f64) -> Result<ExponentTuple, ExponentError> {
    let nf = n as f64;
    let inv_qt = nf / (nf + a) - q.recip();
    ExponentTuple::new(q.recip(), q.recip(), inv_qt, inv_qt, 0.0)
}

pub fn corollary_exponent(n: usize, a: f64) -> f64 {
    2.0 * (n as f64 + a) / n as f64
}

fn neighbourhood(n: usize, a: f64, eps: f64) -> Option<Vec<CorollarySample>> {
    let setup = DispersionSetup::new(a, n).ok()?;
    let q0 = corollary_exponent(n, a);
    let mut out = Vec::new();
    for k in -HALF_POINTS..=HALF_POINTS {
        let q = q0 * (1.0 + eps * k as f64 / HALF_POINTS as f64);
        let tuple = diagonal_tuple(n, a, q).ok()?;
        let witness = sigma_feasibility_search(&setup, &tuple, Mode::Nonsharp)?;
        out.push(CorollarySample {
            a,
            epsilon: eps,
            tuple,
            witness,
        });
    }
    Some(out)
}

/// Walks `a = 2 − A_STEP, 2 − 2·A_STEP, …` down towards 1 and stops at the
/// first order for which no radius in `epsilon_grid` gives a neighbourhood
/// of `2(n+a)/n` that passes the non-sharp global check. `δ` is the distance
/// from 2 of the last passing order.
pub fn corollary_delta_search(n: usize, epsilon_grid: &[f64]) -> Result<CorollaryReport, ExponentError> {
    if n < 3 {
        return Err(ExponentError::Dimension(n));
    }
    let mut delta = 0.0;
    let mut samples = Vec::new();
    let mut k = 1;
    loop {
        let a = 2.0 - k as f64 * A_STEP;
        if a <= 1.0 {
            break;
        }
        match epsilon_grid.iter().find_map(|&eps| neighbourhood(n, a, eps)) {
            Some(found) => {
                samples.extend(found);
                delta = k as f64 * A_STEP;
            }
            None => break,
        }
        k += 1;
    }

    let setup = DispersionSetup::new(2.0, n)?;
    let q = corollary_exponent(n, 2.0);
    let centre = 0.5 * (setup.sigma() + setup.sigma_ext());
    let mu_at_two = mu_value(&setup, &diagonal_tuple(n, 2.0, q)?, centre, centre).unwrap_or(f64::NAN);
    let h = 1e-4;
    let dq_da = (corollary_exponent(n, 2.0 + h) - corollary_exponent(n, 2.0 - h)) / (2.0 * h);
    Ok(CorollaryReport {
        n,
        delta,
        samples,
        mu_at_two,
        mu_closed_form: q / 2.0,
        dq_da,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_family_is_on_shell() {
        for a in [1.2, 1.7, 2.0] {
            let setup = DispersionSetup::new(a, 3).unwrap();
            let t = diagonal_tuple(3, a, corollary_exponent(3, a) * 1.01).unwrap();
            assert!(t.beta(&setup).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_forms() {
        let r = corollary_delta_search(3, &[]).unwrap();
        assert_eq!(r.delta, 0.0);
        assert!(r.samples.is_empty());
        assert!((r.mu_at_two - 5.0 / 3.0).abs() < 1e-12);
        assert!((r.dq_da - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn requires_three_dimensions() {
        assert!(corollary_delta_search(2, &[0.01]).is_err());
    }
}
