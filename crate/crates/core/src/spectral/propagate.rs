use num_complex::Complex64;

use super::{is_dyadic, Field, Spectrum, SpectralError, TimeSlab};
use crate::exponents::DispersionSetup;

/// `e^{itD^a}u`, the multiplier `e^{it|ξ|^a}` applied mode by mode.
pub fn propagate(setup: &DispersionSetup, t: f64, u: &Field) -> Field {
    if t == 0.0 {
        return u.clone();
    }
    let a = setup.a();
    u.radial_multiplier(|r| Complex64::from_polar(1.0, t * r.powf(a)))
}

/// `∫_{t₀}^{t_j} e^{i(t_j−τ)D^a} F(τ) dτ` at every node `t_j`, returned as
/// spectra.
///
/// Trapezoid rule on the exactly propagated integrand, accumulated as
/// `D_{j+1} = e^{i dt ω}(D_j + dt/2·F̂_j) + dt/2·F̂_{j+1}`.
pub fn duhamel_nodes(setup: &DispersionSetup, f: &TimeSlab) -> Vec<Spectrum> {
    let grid = *f.grid();
    let a = setup.a();
    let half = 0.5 * f.dt();
    let phase: Vec<Complex64> = grid
        .frequency_moduli()
        .into_iter()
        .map(|r| Complex64::from_polar(1.0, f.dt() * r.powf(a)))
        .collect();
    let mut out = Vec::with_capacity(f.len());
    let mut acc = Spectrum::zeros(grid);
    let mut prev = f.fields()[0].spectrum();
    out.push(acc.clone());
    for field in &f.fields()[1..] {
        let next = field.spectrum();
        for (((d, p), q), e) in acc
            .coefficients_mut()
            .iter_mut()
            .zip(prev.coefficients())
            .zip(next.coefficients())
            .zip(&phase)
        {
            *d = e * (*d + half * p) + half * q;
        }
        out.push(acc.clone());
        prev = next;
    }
    out
}

/// Duhamel integral `∫_{t₀}^{t} e^{i(t−τ)D^a} F(τ) dτ`.
///
/// Between nodes `F` is taken linear in `τ`; the last partial step uses the
/// trapezoid rule on the same propagated integrand.
pub fn duhamel(setup: &DispersionSetup, f: &TimeSlab, t: f64) -> Result<Field, SpectralError> {
    let (t0, t1) = (f.t0(), f.end_time());
    let eps = 1e-12 * f.dt();
    if !(t >= t0 - eps && t <= t1 + eps) {
        return Err(SpectralError::TimeOutOfRange { t, t0, t1 });
    }
    let pos = ((t - t0) / f.dt()).clamp(0.0, (f.len() - 1) as f64);
    let k = pos.floor() as usize;
    let frac = pos - k as f64;
    let nodes = f.len().min(k + 1);
    let head = TimeSlab::new(t0, f.dt(), f.fields()[..nodes].to_vec())?;
    let mut acc = duhamel_nodes(setup, &head).pop().expect("slab is non-empty");
    if frac > 1e-12 {
        let tau = frac * f.dt();
        let fk = &f.fields()[k];
        let fe = fk
            .clone()
            .scale(Complex64::new(1.0 - frac, 0.0))
            .axpy(Complex64::new(frac, 0.0), &f.fields()[k + 1])?;
        let (sk, se) = (fk.spectrum(), fe.spectrum());
        let a = setup.a();
        let moduli = f.grid().frequency_moduli();
        for (((d, p), q), r) in acc
            .coefficients_mut()
            .iter_mut()
            .zip(sk.coefficients())
            .zip(se.coefficients())
            .zip(moduli)
        {
            let e = Complex64::from_polar(1.0, tau * r.powf(a));
            *d = e * (*d + 0.5 * tau * p) + 0.5 * tau * q;
        }
    }
    Ok(acc.into_field())
}

/// `x ↦ u(λx)`: the same samples on a box of side `L/λ`.
pub fn rescale_field(u: &Field, lambda: f64) -> Result<Field, SpectralError> {
    if !is_dyadic(lambda) {
        return Err(SpectralError::NotDyadic(lambda));
    }
    let grid = u.grid().with_box(u.grid().box_len() / lambda)?;
    Field::new(grid, u.samples().to_vec())
}
