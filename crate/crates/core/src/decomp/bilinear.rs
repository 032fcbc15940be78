use num_complex::Complex64;

use super::{DecompError, WhitneySquare};
use crate::exponents::DispersionSetup;
use crate::spectral::{project, propagate, CutoffProfile, Field, TimeSlab};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// The pulled-back profiles `U(−t_i)F(t_i)` and `U(−t_j)G(t_j)` on a shared
/// time lattice, computed once so many squares can be summed cheaply.
#[derive(Debug, Clone)]
pub struct PulledBack {
    f: Vec<Field>,
    g: Vec<Field>,
    dt: f64,
}

fn pull_back(setup: &DispersionSetup, slab: &TimeSlab) -> Vec<Field> {
    slab.fields()
        .iter()
        .enumerate()
        .map(|(i, u)| propagate(setup, -slab.time(i), u))
        .collect()
}

fn sum_range(fields: &[Field]) -> Field {
    let mut acc = Field::zeros(*fields[0].grid());
    for u in fields {
        acc = acc.axpy(ONE, u).expect("fields share a grid");
    }
    acc
}

impl PulledBack {
    pub fn new(setup: &DispersionSetup, f: &TimeSlab, g: &TimeSlab) -> Result<Self, DecompError> {
        if f.grid() != g.grid() || f.len() != g.len() || f.dt() != g.dt() || f.t0() != g.t0() {
            return Err(DecompError::SlabMismatch);
        }
        Ok(Self {
            f: pull_back(setup, f),
            g: pull_back(setup, g),
            dt: f.dt(),
        })
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `dt²·Σ_{i<j} ⟨U(−t_i)F_i, U(−t_j)G_j⟩`.
    pub fn b(&self) -> Complex64 {
        let mut prefix = Field::zeros(*self.f[0].grid());
        let mut acc = Complex64::new(0.0, 0.0);
        for (fi, gj) in self.f.iter().zip(&self.g) {
            acc += prefix.inner(gj).expect("fields share a grid");
            prefix = prefix.axpy(ONE, fi).expect("fields share a grid");
        }
        acc * self.dt * self.dt
    }

    /// The same sum restricted to `i ∈ I`, `j ∈ J`.
    pub fn bq(&self, q: &WhitneySquare) -> Result<Complex64, DecompError> {
        let end = q.j_start() + q.cells;
        if end > self.len() {
            return Err(DecompError::SquareOutOfRange { cell: end - 1, len: self.len() });
        }
        let fi = sum_range(&self.f[q.i_start()..q.i_start() + q.cells]);
        let gj = sum_range(&self.g[q.j_start()..end]);
        Ok(fi.inner(&gj)? * self.dt * self.dt)
    }

    /// The pairing over the diagonal cells `i = j`, missing from `B`.
    pub fn diagonal(&self) -> Complex64 {
        let s: Complex64 = self.f.iter().zip(&self.g).map(|(a, b)| a.inner(b).expect("fields share a grid")).sum();
        s * self.dt * self.dt
    }

    /// `⟨∫U(−s)F ds, ∫U(−t)G dt⟩` with left-endpoint sums.
    pub fn full(&self) -> Complex64 {
        sum_range(&self.f).inner(&sum_range(&self.g)).expect("fields share a grid") * self.dt * self.dt
    }
}

/// Discrete `B(F, G)` over cell pairs `i < j` (left-endpoint rule).
pub fn bilinear_b(setup: &DispersionSetup, f: &TimeSlab, g: &TimeSlab) -> Result<Complex64, DecompError> {
    Ok(PulledBack::new(setup, f, g)?.b())
}

/// `B_Q(F, G)`: `B` restricted to the square `Q = I × J`.
pub fn bilinear_bq(
    setup: &DispersionSetup,
    f: &TimeSlab,
    g: &TimeSlab,
    q: &WhitneySquare,
) -> Result<Complex64, DecompError> {
    PulledBack::new(setup, f, g)?.bq(q)
}

/// `Σ_Q B_Q(F, G)` over a family of squares.
pub fn whitney_sum(
    setup: &DispersionSetup,
    f: &TimeSlab,
    g: &TimeSlab,
    squares: &[WhitneySquare],
) -> Result<Complex64, DecompError> {
    let pb = PulledBack::new(setup, f, g)?;
    squares.iter().map(|q| pb.bq(q)).sum()
}

/// `B^N(F, G)`: the frequency-localized form, `P_N` applied to `F`.
pub fn bilinear_bn(
    setup: &DispersionSetup,
    n_scale: f64,
    f: &TimeSlab,
    g: &TimeSlab,
    profile: &CutoffProfile,
) -> Result<Complex64, DecompError> {
    let fields = f
        .fields()
        .iter()
        .map(|u| project(n_scale, u, profile))
        .collect::<Result<Vec<_>, _>>()?;
    let pf = TimeSlab::new(f.t0(), f.dt(), fields)?;
    bilinear_b(setup, &pf, g)
}
