use std::io::Write;

use serde::{Deserialize, Serialize};

use super::DecompError;

/// `[kλ, (k+1)λ)` with `λ = T·2^{−level}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub level: u32,
    pub index: usize,
    pub scale: f64,
}

impl DyadicInterval {
    pub fn start(&self) -> f64 {
        self.index as f64 * self.scale
    }

    pub fn end(&self) -> f64 {
        (self.index + 1) as f64 * self.scale
    }

    pub fn parent_index(&self) -> usize {
        self.index / 2
    }
}

/// `I × J` with `|I| = |J|` and `I` entirely before `J`. Cell indices refer
/// to the `dt` lattice the square was built for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhitneySquare {
    pub i: DyadicInterval,
    pub j: DyadicInterval,
    /// Width of `I` and `J` in cells of length `dt`.
    pub cells: usize,
}

impl WhitneySquare {
    pub fn scale(&self) -> f64 {
        self.i.scale
    }

    pub fn i_start(&self) -> usize {
        self.i.index * self.cells
    }

    pub fn j_start(&self) -> usize {
        self.j.index * self.cells
    }

    /// Gap between `I` and `J`; zero for the finest adjacent pairs.
    pub fn distance(&self) -> f64 {
        self.j.start() - self.i.end()
    }

    pub fn is_adjacent(&self) -> bool {
        self.j.index == self.i.index + 1
    }
}

fn power_of_two_ratio(t: f64, dt: f64) -> Result<u32, DecompError> {
    let ratio = t / dt;
    let k = ratio.round();
    if !(dt > 0.0 && t > 0.0) || (ratio - k).abs() > 1e-9 * ratio.max(1.0) || k < 1.0 || (k as u64).count_ones() != 1 {
        return Err(DecompError::Misaligned(ratio));
    }
    Ok((k as u64).trailing_zeros())
}

/// The non-adjacent squares of one level: `k_J − k_I ≥ 2` with parents equal
/// or adjacent, so `dist(I, J) ∈ {λ, 2λ}`.
pub fn whitney_level(t: f64, level: u32, cells: usize) -> Vec<WhitneySquare> {
    let count = 1usize << level;
    let scale = t / count as f64;
    let iv = |index| DyadicInterval { level, index, scale };
    let mut out = Vec::new();
    for ki in 0..count {
        for kj in ki + 2..count.min(ki + 4) {
            if kj / 2 - ki / 2 <= 1 {
                out.push(WhitneySquare { i: iv(ki), j: iv(kj), cells });
            }
        }
    }
    out
}

/// Whitney cover of the cell triangle `{(i, j) : i < j}` at resolution
/// `T·2^{−levels}`: the non-adjacent squares of levels `1..=levels`, coarse
/// to fine, followed by the adjacent pairs of the finest level.
pub fn whitney_decompose(t: f64, dt: f64, levels: u32) -> Result<Vec<WhitneySquare>, DecompError> {
    let max = power_of_two_ratio(t, dt)?;
    if levels > max {
        return Err(DecompError::TooManyLevels { levels, max });
    }
    let mut out = Vec::new();
    for level in 1..=levels {
        out.extend(whitney_level(t, level, 1 << (max - level)));
    }
    if levels > 0 {
        let count = 1usize << levels;
        let scale = t / count as f64;
        let cells = 1 << (max - levels);
        for k in 0..count - 1 {
            out.push(WhitneySquare {
                i: DyadicInterval { level: levels, index: k, scale },
                j: DyadicInterval { level: levels, index: k + 1, scale },
                cells,
            });
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct WhitneyRow {
    lambda: f64,
    i_start: usize,
    j_start: usize,
}

/// CSV with header `lambda,i_start,j_start` (starts in `dt` cells).
pub fn write_whitney_csv<W: Write>(out: W, squares: &[WhitneySquare]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for q in squares {
        w.serialize(WhitneyRow { lambda: q.scale(), i_start: q.i_start(), j_start: q.j_start() })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_misaligned_lattices() {
        assert!(matches!(whitney_decompose(1.0, 0.3, 1), Err(DecompError::Misaligned(_))));
        assert!(matches!(whitney_decompose(1.0, 1.0 / 6.0, 1), Err(DecompError::Misaligned(_))));
        assert_eq!(whitney_decompose(1.0, 0.25, 3), Err(DecompError::TooManyLevels { levels: 3, max: 2 }));
        assert!(whitney_decompose(1.0, 1.0, 0).unwrap().is_empty());
    }
}
