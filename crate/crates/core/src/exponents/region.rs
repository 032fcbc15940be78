use std::io::Write;

use serde::{Deserialize, Serialize};

use super::system::{check_mode, Mode};
use super::{DispersionSetup, ExponentError, ExponentTuple, SigmaWitness};

/// How the derivative parameter is chosen at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SChoice {
    Fixed(f64),
    /// Recompute `s` from `β_a = 0` at every point.
    Scaling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub inv_p: f64,
    pub inv_pt: f64,
    pub s: f64,
    pub local: bool,
    pub nonsharp: bool,
    pub sharp: bool,
    /// The dispersive vertex (`θ = 0`), reported separately from the
    /// feasible set.
    pub boundary: bool,
    pub witness: Option<SigmaWitness>,
}

impl RegionCell {
    /// Bit 0 local, bit 1 non-sharp, bit 2 sharp.
    pub fn code(&self) -> u8 {
        self.local as u8 | (self.nonsharp as u8) << 1 | (self.sharp as u8) << 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMask {
    pub setup: DispersionSetup,
    pub inv_q: f64,
    pub inv_qt: f64,
    pub resolution: usize,
    /// Row-major, `inv_p` outer.
    pub cells: Vec<RegionCell>,
}

impl RegionMask {
    pub fn cell(&self, i: usize, j: usize) -> &RegionCell {
        &self.cells[i * self.resolution + j]
    }

    pub fn codes(&self) -> Vec<Vec<u8>> {
        self.cells
            .chunks(self.resolution)
            .map(|row| row.iter().map(RegionCell::code).collect())
            .collect()
    }

    pub fn count(&self, mode: Mode) -> usize {
        self.cells
            .iter()
            .filter(|c| match mode {
                Mode::Local => c.local,
                Mode::Nonsharp => c.nonsharp,
                Mode::Sharp => c.sharp,
            })
            .count()
    }

    /// Columns `inv_p,inv_pt,local,nonsharp,sharp,mu,sigma1,sigma2`; the last
    /// three are empty where no system holds.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["inv_p", "inv_pt", "local", "nonsharp", "sharp", "mu", "sigma1", "sigma2"])?;
        for c in &self.cells {
            let (mu, s1, s2) = match c.witness {
                Some(wit) => (
                    wit.mu.map(|m| m.to_string()).unwrap_or_default(),
                    wit.sigma1.to_string(),
                    wit.sigma2.to_string(),
                ),
                None => Default::default(),
            };
            w.write_record([
                c.inv_p.to_string(),
                c.inv_pt.to_string(),
                (c.local as u8).to_string(),
                (c.nonsharp as u8).to_string(),
                (c.sharp as u8).to_string(),
                mu,
                s1,
                s2,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Samples the three systems over `(1/p, 1/p̃) ∈ [0, ½]²` on a
/// `resolution × resolution` grid including both ends.
pub fn region_sample(
    setup: &DispersionSetup,
    inv_q: f64,
    inv_qt: f64,
    s: SChoice,
    resolution: usize,
) -> Result<RegionMask, ExponentError> {
    if resolution < 8 {
        return Err(ExponentError::Resolution(resolution));
    }
    let step = 0.5 / (resolution - 1) as f64;
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let (inv_p, inv_pt) = (i as f64 * step, j as f64 * step);
            let mut t = ExponentTuple::new(inv_q, inv_p, inv_qt, inv_pt, 0.0)?;
            t.s = match s {
                SChoice::Fixed(v) => v,
                SChoice::Scaling => t.scaling_s(setup),
            };
            let sharp = check_mode(setup, &t, Mode::Sharp);
            let nonsharp = check_mode(setup, &t, Mode::Nonsharp);
            let local = check_mode(setup, &t, Mode::Local);
            let boundary = inv_p == 0.0
                && inv_pt == 0.0
                && inv_q == 0.0
                && inv_qt == 0.0
                && (t.s - setup.offset_r()).abs() <= 1e-12;
            let witness = sharp.witness.or(nonsharp.witness).or(local.witness);
            cells.push(RegionCell {
                inv_p,
                inv_pt,
                s: t.s,
                local: local.feasible,
                nonsharp: nonsharp.feasible,
                sharp: sharp.feasible,
                boundary,
                witness,
            });
        }
    }
    Ok(RegionMask {
        setup: *setup,
        inv_q,
        inv_qt,
        resolution,
        cells,
    })
}

/// Vertices `A, B, C, D` of the `(1/p, 1/p̃)` picture used for `1 < a < 2`:
/// `A = ((n−a)/(2n), ½)`, `B = (n/(n+a) − n/(2(n+1)), ½)`,
/// `C = (n/(2(n+1)), ½)`, `D = (½, 0)`.
pub fn figure_two_vertices(setup: &DispersionSetup) -> [(&'static str, f64, f64); 4] {
    let (a, n) = (setup.a(), setup.dim());
    [
        ("A", (n - a) / (2.0 * n), 0.5),
        ("B", n / (n + a) - n / (2.0 * (n + 1.0)), 0.5),
        ("C", n / (2.0 * (n + 1.0)), 0.5),
        ("D", 0.5, 0.0),
    ]
}
