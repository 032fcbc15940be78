use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::whitney_level;

/// Each interval of a Whitney level meets at most two squares on either
/// side, which bounds the Hölder-type sum by twice the product of norms.
pub const HOLDER_MULTIPLICITY: f64 = 2.0;

const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaTally {
    pub trials: usize,
    pub violations: usize,
    /// Largest `lhs / (C·rhs)` seen.
    pub max_ratio: f64,
}

impl LemmaTally {
    fn new() -> Self {
        Self { trials: 0, violations: 0, max_ratio: 0.0 }
    }

    fn record(&mut self, lhs: f64, bound: f64) {
        self.trials += 1;
        if bound > 0.0 {
            self.max_ratio = self.max_ratio.max(lhs / bound);
        }
        if lhs > bound * (1.0 + SLACK) {
            self.violations += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceLemmaReport {
    pub seed: u64,
    pub holder: LemmaTally,
    /// Trials in which the Hölder sum beat the bare product `‖f‖‖g‖`; the
    /// bound then needs the multiplicity constant.
    pub holder_unit_constant_exceeded: usize,
    pub young: LemmaTally,
}

impl SequenceLemmaReport {
    pub fn passed(&self) -> bool {
        self.holder.violations == 0 && self.young.violations == 0
    }
}

/// `‖v‖_{ℓ^{1/inv}}` weighted by `w` (`inv = 0` is the maximum).
fn weighted_norm(v: &[f64], w: f64, inv: f64) -> f64 {
    if inv == 0.0 {
        return v.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    let p = inv.recip();
    (v.iter().map(|x| x.abs().powf(p)).sum::<f64>() * w).powf(inv)
}

/// `(Σ_{Q ∈ 𝒬_λ} ‖f‖_{L^{r̃}(I)}‖g‖_{L^r(J)}, ‖f‖_{L^{r̃}}‖g‖_{L^r})` for step
/// functions on `[0, 1)` with `f.len() = 2^L` cells and `λ = 2^{−level}`.
pub fn holder_sequence_sum(f: &[f64], g: &[f64], level: u32, inv_r: f64, inv_rt: f64) -> (f64, f64) {
    let cells = f.len();
    let dt = 1.0 / cells as f64;
    let width = cells >> level;
    let lhs = whitney_level(1.0, level, width)
        .iter()
        .map(|q| {
            let fi = weighted_norm(&f[q.i_start()..q.i_start() + width], dt, inv_rt);
            let gj = weighted_norm(&g[q.j_start()..q.j_start() + width], dt, inv_r);
            fi * gj
        })
        .sum();
    (lhs, weighted_norm(f, dt, inv_rt) * weighted_norm(g, dt, inv_r))
}

/// `Σ_{n,k} A_n B_k C_{n−k}` with `C_m` stored at `c[m + c_offset]`.
pub fn young_sequence_sum(a: &[f64], b: &[f64], c: &[f64], c_offset: i64) -> f64 {
    let mut s = 0.0;
    for (n, an) in a.iter().enumerate() {
        for (k, bk) in b.iter().enumerate() {
            let idx = n as i64 - k as i64 + c_offset;
            if (0..c.len() as i64).contains(&idx) {
                s += an * bk * c[idx as usize];
            }
        }
    }
    s
}

fn random_profile(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let sparsity: f64 = rng.gen_range(0.0..0.6);
    let spread: f64 = rng.gen_range(0.0..6.0);
    (0..len)
        .map(|_| {
            if rng.gen_bool(sparsity) {
                0.0
            } else {
                (spread * rng.gen_range(-1.0..1.0f64)).exp()
            }
        })
        .collect()
}

/// Exponent pair with `a + b ≥ lower`, both in `[0, 1]`; endpoints are hit
/// with positive probability.
fn exponent_pair(rng: &mut ChaCha8Rng, lower: f64) -> (f64, f64) {
    let pick = |rng: &mut ChaCha8Rng, lo: f64| match rng.gen_range(0..8) {
        0 => lo,
        1 => 1.0,
        _ => rng.gen_range(lo..=1.0),
    };
    let a = pick(rng, (lower - 1.0).max(0.0));
    let b = pick(rng, (lower - a).max(0.0));
    (a, b)
}

/// Randomized checks of the Hölder-type Whitney sum (constant
/// [`HOLDER_MULTIPLICITY`]) and the discrete Young inequality (constant 1).
pub fn verify_sequence_lemmas(trials: usize, seed: u64) -> SequenceLemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holder = LemmaTally::new();
    let mut young = LemmaTally::new();
    let mut unit_exceeded = 0;
    for _ in 0..trials {
        let big_l = rng.gen_range(1..=8u32);
        let level = rng.gen_range(1..=big_l);
        let f = random_profile(&mut rng, 1 << big_l);
        let g = random_profile(&mut rng, 1 << big_l);
        let (inv_r, inv_rt) = exponent_pair(&mut rng, 1.0);
        let (lhs, rhs) = holder_sequence_sum(&f, &g, level, inv_r, inv_rt);
        holder.record(lhs, HOLDER_MULTIPLICITY * rhs);
        if lhs > rhs * (1.0 + SLACK) {
            unit_exceeded += 1;
        }

        let (na, nb) = (rng.gen_range(1..=16), rng.gen_range(1..=16));
        let a = random_profile(&mut rng, na);
        let b = random_profile(&mut rng, nb);
        let c_len = rng.gen_range(1..=32);
        let c = random_profile(&mut rng, c_len);
        let c_offset = rng.gen_range(0..c_len as i64);
        let (ip, iq) = exponent_pair(&mut rng, 1.0);
        let ir = if rng.gen_range(0..4) == 0 { (2.0 - ip - iq).max(0.0) } else { rng.gen_range((2.0 - ip - iq).max(0.0)..=1.0) };
        let lhs = young_sequence_sum(&a, &b, &c, c_offset);
        let bound = weighted_norm(&a, 1.0, ip) * weighted_norm(&b, 1.0, iq) * weighted_norm(&c, 1.0, ir);
        young.record(lhs, bound);
    }
    SequenceLemmaReport {
        seed,
        holder,
        holder_unit_constant_exceeded: unit_exceeded,
        young,
    }
}
