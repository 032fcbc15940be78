use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// In-place unnormalized n-dimensional FFT over a row-major `m^n` array.
pub(crate) fn fft_nd(data: &mut [Complex64], n: usize, m: usize, direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = planner.plan_fft(m, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    let mut block = Vec::new();
    for axis in 0..n {
        let stride = m.pow((n - 1 - axis) as u32);
        if stride == 1 {
            plan.process_with_scratch(data, &mut scratch);
            continue;
        }
        // Transpose each `m × stride` block so the axis becomes contiguous.
        block.resize(m * stride, Complex64::new(0.0, 0.0));
        for chunk in data.chunks_mut(m * stride) {
            for k in 0..m {
                for j in 0..stride {
                    block[j * m + k] = chunk[k * stride + j];
                }
            }
            plan.process_with_scratch(&mut block, &mut scratch);
            for k in 0..m {
                for j in 0..stride {
                    chunk[k * stride + j] = block[j * m + k];
                }
            }
        }
    }
}

pub(crate) fn forward(data: &mut [Complex64], n: usize, m: usize) {
    fft_nd(data, n, m, FftDirection::Forward);
}

/// Inverse transform including the `1/mⁿ` normalization.
pub(crate) fn inverse(data: &mut [Complex64], n: usize, m: usize) {
    fft_nd(data, n, m, FftDirection::Inverse);
    let scale = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_3d() {
        let (n, m) = (3, 8);
        let orig: Vec<Complex64> = (0..m * m * m)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut d = orig.clone();
        forward(&mut d, n, m);
        inverse(&mut d, n, m);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn plane_wave_hits_one_mode() {
        let (n, m) = (2, 8);
        let mut d: Vec<Complex64> = (0..m * m)
            .map(|i| {
                let (a, b) = ((i / m) as f64, (i % m) as f64);
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (a + 3.0 * b) / m as f64)
            })
            .collect();
        forward(&mut d, n, m);
        for (i, z) in d.iter().enumerate() {
            let expect = if i == m + 3 { 64.0 } else { 0.0 };
            assert!((z.norm() - expect).abs() < 1e-10, "{i} {z}");
        }
    }
}
