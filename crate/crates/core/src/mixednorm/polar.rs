use std::f64::consts::PI;

use num_complex::Complex64;

use super::MixedNormError;
use crate::spectral::{Field, Grid};

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on `P_k`).
pub(crate) fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; k];
    let mut w = vec![0.0; k];
    for i in 0..k {
        let mut z = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_k(z), p0 = P_{k−1}(z).
            dp = k as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

const STENCIL: usize = 6;
const PANEL_NODES: usize = 6;

/// Band-limited upsampling followed by tensor 6-point Lagrange
/// interpolation, giving off-grid values of a field.
#[derive(Debug, Clone)]
pub struct Interpolator {
    grid: Grid,
    data: Vec<Complex64>,
}

impl Interpolator {
    pub fn new(u: &Field, factor: usize) -> Self {
        let g = *u.grid();
        let (n, m) = (g.dim(), g.m());
        let mf = m * factor;
        let fine = Grid::new(n, mf, g.box_len()).expect("upsampled grid is valid");
        if factor == 1 {
            return Self {
                grid: fine,
                data: u.samples().to_vec(),
            };
        }
        let spec = u.spectrum();
        let mut padded = crate::spectral::Spectrum::zeros(fine);
        let map = |k: usize| if k < m / 2 { k } else { k + mf - m };
        let scale = (factor as f64).powi(n as i32);
        let coeffs = padded.coefficients_mut();
        for (idx, c) in spec.coefficients().iter().enumerate() {
            let mut rest = idx;
            let mut target = 0;
            let mut mult = 1;
            for _ in 0..n {
                target += map(rest % m) * mult;
                rest /= m;
                mult *= mf;
            }
            coeffs[target] = c * scale;
        }
        Self {
            grid: fine,
            data: padded.into_field().into_samples(),
        }
    }

    fn weights(s: f64) -> (i64, [f64; STENCIL]) {
        let base = s.floor() as i64 - 2;
        let mut w = [1.0; STENCIL];
        for (j, wj) in w.iter_mut().enumerate() {
            for k in 0..STENCIL {
                if k != j {
                    *wj *= (s - (base + k as i64) as f64) / (j as f64 - k as f64);
                }
            }
        }
        (base, w)
    }

    pub fn eval(&self, x: [f64; 3]) -> Complex64 {
        let g = &self.grid;
        let (n, m) = (g.dim(), g.m() as i64);
        let h = g.spacing();
        let half = 0.5 * g.box_len();
        let mut bases = [0i64; 3];
        let mut ws = [[1.0; STENCIL]; 3];
        for d in 0..n {
            let (b, w) = Self::weights((x[d] + half) / h);
            bases[d] = b;
            ws[d] = w;
        }
        let wrap = |i: i64| i.rem_euclid(m) as usize;
        let mu = m as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        match n {
            1 => {
                for a in 0..STENCIL {
                    acc += self.data[wrap(bases[0] + a as i64)] * ws[0][a];
                }
            }
            2 => {
                for a in 0..STENCIL {
                    let row = wrap(bases[0] + a as i64) * mu;
                    let mut inner = Complex64::new(0.0, 0.0);
                    for b in 0..STENCIL {
                        inner += self.data[row + wrap(bases[1] + b as i64)] * ws[1][b];
                    }
                    acc += inner * ws[0][a];
                }
            }
            _ => {
                for a in 0..STENCIL {
                    let pa = wrap(bases[0] + a as i64) * mu * mu;
                    let mut mid = Complex64::new(0.0, 0.0);
                    for b in 0..STENCIL {
                        let pb = pa + wrap(bases[1] + b as i64) * mu;
                        let mut inner = Complex64::new(0.0, 0.0);
                        for c in 0..STENCIL {
                            inner += self.data[pb + wrap(bases[2] + c as i64)] * ws[2][c];
                        }
                        mid += inner * ws[1][b];
                    }
                    acc += mid * ws[0][a];
                }
            }
        }
        acc
    }
}

/// Upsampling factor used before interpolation: up to 8 in the plane and 4
/// in space, capped so the fine grid has at most `2048²` or `128³` samples.
pub(crate) fn upsample_factor(grid: &Grid) -> usize {
    let (cap, most) = if grid.dim() == 3 { (128, 4) } else { (2048, 8) };
    (cap / grid.m()).clamp(1, most)
}

/// Polar quadrature on a Cartesian grid.
///
/// Radial nodes: composite 6-point Gauss–Legendre on panels one cell wide
/// over `[0, 0.45·L]`. Angular nodes: `4m` uniform angles for `n = 2`;
/// `m/2` Gauss–Legendre colatitudes times `m` uniform longitudes for `n = 3`.
#[derive(Debug, Clone)]
pub struct PolarResampling {
    grid: Grid,
    pub radii: Vec<f64>,
    /// Weights for `∫₀^R · r^{n−1} dr`.
    pub radial_weights: Vec<f64>,
    pub directions: Vec<[f64; 3]>,
    /// Sum to `|S^{n−1}|`.
    pub angular_weights: Vec<f64>,
    upsample: usize,
}

impl PolarResampling {
    pub fn new(grid: &Grid) -> Result<Self, MixedNormError> {
        let n = grid.dim();
        if !(2..=3).contains(&n) {
            return Err(MixedNormError::Dimension(n));
        }
        let m = grid.m();
        let h = grid.spacing();
        let r_max = 0.45 * grid.box_len();
        let panels = (r_max / h).ceil() as usize;
        let width = r_max / panels as f64;
        let (gx, gw) = gauss_legendre(PANEL_NODES);
        let mut radii = Vec::with_capacity(panels * PANEL_NODES);
        let mut radial_weights = Vec::with_capacity(panels * PANEL_NODES);
        for p in 0..panels {
            let a = p as f64 * width;
            for (x, w) in gx.iter().zip(&gw) {
                let r = a + 0.5 * width * (x + 1.0);
                radii.push(r);
                radial_weights.push(0.5 * width * w * r.powi(n as i32 - 1));
            }
        }
        let (directions, angular_weights) = if n == 2 {
            let k = 4 * m;
            let dirs = (0..k)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / k as f64;
                    [t.cos(), t.sin(), 0.0]
                })
                .collect();
            (dirs, vec![2.0 * PI / k as f64; k])
        } else {
            let (zs, zw) = gauss_legendre(m / 2);
            let nphi = m;
            let mut dirs = Vec::with_capacity(zs.len() * nphi);
            let mut ws = Vec::with_capacity(zs.len() * nphi);
            for (z, w) in zs.iter().zip(&zw) {
                let s = (1.0 - z * z).sqrt();
                for j in 0..nphi {
                    let phi = 2.0 * PI * j as f64 / nphi as f64;
                    dirs.push([s * phi.cos(), s * phi.sin(), *z]);
                    ws.push(w * 2.0 * PI / nphi as f64);
                }
            }
            (dirs, ws)
        };
        Ok(Self {
            grid: *grid,
            radii,
            radial_weights,
            directions,
            angular_weights,
            upsample: upsample_factor(grid),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `‖u(r·)‖_{L_ω²}` at every radial node.
    pub fn angular_profile(&self, u: &Field) -> Result<Vec<f64>, MixedNormError> {
        if u.grid() != &self.grid {
            return Err(MixedNormError::GridMismatch);
        }
        let interp = Interpolator::new(u, self.upsample);
        Ok(self
            .radii
            .iter()
            .map(|&r| {
                let s: f64 = self
                    .directions
                    .iter()
                    .zip(&self.angular_weights)
                    .map(|(d, w)| w * interp.eval([r * d[0], r * d[1], r * d[2]]).norm_sqr())
                    .sum();
                s.sqrt()
            })
            .collect())
    }

    /// `‖u‖_{𝓛_r^p L_ω²}`.
    pub fn norm(&self, u: &Field, inv_p: f64) -> Result<f64, MixedNormError> {
        let profile = self.angular_profile(u)?;
        Ok(self.radial_norm(&profile, inv_p))
    }

    pub(crate) fn radial_norm(&self, profile: &[f64], inv_p: f64) -> f64 {
        if inv_p == 0.0 {
            return profile.iter().copied().fold(0.0, f64::max);
        }
        let p = inv_p.recip();
        let s: f64 = profile.iter().zip(&self.radial_weights).map(|(a, w)| w * a.powf(p)).sum();
        s.powf(inv_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn legendre_rules() {
        let (x, w) = gauss_legendre(6);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // Exact through degree 11.
        let m10: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((m10 - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        let g2 = make_grid(2, 32, 10.0).unwrap();
        let p2 = PolarResampling::new(&g2).unwrap();
        assert!((p2.angular_weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        let g3 = make_grid(3, 16, 10.0).unwrap();
        let p3 = PolarResampling::new(&g3).unwrap();
        assert!((p3.angular_weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        // ∫₀^R r^k r^{n−1} dr exactly for polynomial degree ≤ 11 − (n − 1).
        let r: f64 = 4.5;
        let q: f64 = p3.radii.iter().zip(&p3.radial_weights).map(|(x, w)| w * x.powi(7)).sum();
        assert!((q / (r.powi(10) / 10.0) - 1.0).abs() < 1e-12);
        assert!(PolarResampling::new(&make_grid(1, 16, 1.0).unwrap()).is_err());
    }

    #[test]
    fn interpolation_hits_nodes_and_smooth_values() {
        let g = make_grid(2, 32, 12.0).unwrap();
        let f = |x: [f64; 3]| Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp(), x[0] * (-x[0] * x[0]).exp());
        let u = Field::from_fn(g, f);
        let it = Interpolator::new(&u, 8);
        for idx in [0, 17, 500, 1000] {
            assert!((it.eval(g.point(idx)) - u.samples()[idx]).norm() < 1e-12);
        }
        for x in [[0.13, -0.71, 0.0], [1.234, 2.2, 0.0], [-3.3, 0.05, 0.0]] {
            assert!((it.eval(x) - f(x)).norm() < 1e-7, "{x:?} {} {}", it.eval(x), f(x));
        }
    }
}
