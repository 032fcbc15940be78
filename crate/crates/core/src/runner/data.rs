use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DataFamily, RunnerError};
use crate::spectral::{knapp_data, project, CutoffProfile, Field, Grid, KnappSpec};

const WAVES: usize = 12;
/// Envelope width of the random family, in units of `1/N`.
const ENVELOPE: f64 = 4.0;

/// Share of spectral energy with some `|ξ_d|` beyond two thirds of Nyquist.
pub fn nyquist_mass(u: &Field) -> f64 {
    let g = *u.grid();
    let cut = 2.0 / 3.0 * g.nyquist();
    let spec = u.spectrum();
    let (mut outer, mut total) = (0.0, 0.0);
    for (idx, c) in spec.coefficients().iter().enumerate() {
        let w = c.norm_sqr();
        total += w;
        if g.frequency(idx)[..g.dim()].iter().any(|x| x.abs() > cut) {
            outer += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

fn random_waves(grid: Grid, n_scale: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.dim();
    let waves: Vec<([f64; 3], Complex64)> = (0..WAVES)
        .map(|_| {
            let mut dir = [0.0; 3];
            let mut norm = 0.0f64;
            for d in dir.iter_mut().take(n) {
                *d = rng.sample(StandardNormal);
                norm += *d * *d;
            }
            let modulus = rng.gen_range(0.75..1.5) / norm.sqrt().max(f64::MIN_POSITIVE);
            dir.iter_mut().for_each(|d| *d *= modulus * n_scale);
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            (dir, c)
        })
        .collect();
    let env = n_scale * n_scale / (2.0 * ENVELOPE * ENVELOPE);
    Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let phase = |k: &[f64; 3]| k.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        waves.iter().map(|(k, c)| c * Complex64::from_polar(1.0, phase(k))).sum::<Complex64>() * (-env * r2).exp()
    })
}

/// Data of the given family at frequency scale `n_scale`.
pub fn initial_data(family: &DataFamily, grid: Grid, n_scale: f64, seed: u64) -> Result<Field, RunnerError> {
    let profile = CutoffProfile;
    Ok(match family {
        DataFamily::Gaussian { width } => {
            let k = n_scale * n_scale / (2.0 * width * width);
            Field::from_fn(grid, |x| Complex64::new((-k * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0))
        }
        DataFamily::Annulus => Field::from_centred_spectrum(grid, |xi| {
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            Complex64::new(profile.piece(n_scale, r), 0.0)
        }),
        DataFamily::Knapp { ecc } => knapp_data(&grid, &KnappSpec { n_scale, ecc: *ecc })?,
        DataFamily::RandomBandlimited { seed: own } => {
            project(n_scale, &random_waves(grid, n_scale, own.unwrap_or(seed)), &profile)?
        }
    })
}

/// Time profile `sin²(πt/T)` on `[0, T]`, zero afterwards.
pub fn forcing_profile(t: f64, active: f64) -> f64 {
    if (0.0..=active).contains(&t) {
        (std::f64::consts::PI * t / active).sin().powi(2)
    } else {
        0.0
    }
}
