use serde::{Deserialize, Serialize};

use super::DecompError;

/// One `p`-atom of size `λ` with its coefficient `a_λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub size: f64,
    pub coefficient: f64,
    /// Cell indices of the support, in decreasing order of `|f|`.
    pub support: Vec<usize>,
    /// Atom values on `support`.
    pub samples: Vec<f64>,
    pub support_measure: f64,
}

impl Atom {
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicDecomposition {
    pub p: f64,
    pub cells: usize,
    pub atoms: Vec<Atom>,
}

/// `(Σ |f_i|^p μ_i)^{1/p}`.
pub fn lp_norm(values: &[f64], measures: &[f64], p: f64) -> f64 {
    values
        .iter()
        .zip(measures)
        .map(|(v, m)| v.abs().powf(p) * m)
        .sum::<f64>()
        .powf(p.recip())
}

impl AtomicDecomposition {
    /// `‖(a_λ)‖_{ℓ^p}`.
    pub fn coefficient_norm(&self) -> f64 {
        self.atoms.iter().map(|a| a.coefficient.powf(self.p)).sum::<f64>().powf(self.p.recip())
    }

    /// `Σ a_λ·atom_λ` on the cell list.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cells];
        for a in &self.atoms {
            for (&i, v) in a.support.iter().zip(&a.samples) {
                out[i] += a.coefficient * v;
            }
        }
        out
    }

    /// Every broken invariant, as readable text: disjoint supports,
    /// `|supp| ≤ λ`, `‖atom‖_∞ ≤ 2λ^{−1/p}`, dyadic sizes, `a_λ ≥ 0`, and
    /// reconstruction of `values` up to rounding in the last place.
    pub fn invariant_violations(&self, values: &[f64]) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = vec![false; self.cells];
        for a in &self.atoms {
            let l = a.size;
            if l.log2().fract() != 0.0 {
                out.push(format!("size {l} is not dyadic"));
            }
            if !(a.coefficient >= 0.0) {
                out.push(format!("negative coefficient {} at size {l}", a.coefficient));
            }
            if a.support_measure > l * (1.0 + 1e-12) {
                out.push(format!("support measure {} exceeds size {l}", a.support_measure));
            }
            if a.sup_norm() > 2.0 * l.powf(-1.0 / self.p) * (1.0 + 1e-12) {
                out.push(format!("sup norm {} exceeds 2·λ^(-1/p) at size {l}", a.sup_norm()));
            }
            for &i in &a.support {
                if std::mem::replace(&mut seen[i], true) {
                    out.push(format!("cell {i} lies in two supports"));
                }
            }
        }
        if values.len() != self.cells {
            out.push(format!("{} values for {} cells", values.len(), self.cells));
            return out;
        }
        for (i, (r, v)) in self.reconstruct().iter().zip(values).enumerate() {
            if (r - v).abs() > 2.0 * f64::EPSILON * v.abs() {
                out.push(format!("cell {i}: reconstructed {r}, expected {v}"));
            }
        }
        out
    }
}

/// Atomic decomposition by slicing the decreasing rearrangement.
///
/// Cells are ordered by `|f|` (ties by index). A cell whose cumulative
/// measure `m` falls in `(λ/2, λ]` joins the size-`λ` slice, `λ` a power of
/// two. Each nonzero slice gives `a_λ = λ^{1/p}·max|f|` and atom `f/a_λ`.
pub fn atomic_decompose(values: &[f64], measures: &[f64], p: f64) -> Result<AtomicDecomposition, DecompError> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(DecompError::Exponent(p));
    }
    if values.len() != measures.len() {
        return Err(DecompError::Cells(format!("{} values but {} measures", values.len(), measures.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DecompError::Cells("non-finite value".into()));
    }
    if measures.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
        return Err(DecompError::Cells("measures must be positive and finite".into()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].abs().total_cmp(&values[i].abs()).then(i.cmp(&j)));

    let mut atoms: Vec<Atom> = Vec::new();
    let mut slice: Vec<usize> = Vec::new();
    let mut slice_exp = i32::MIN;
    let mut slice_measure = 0.0;
    let mut cumulative = 0.0;
    let flush = |exp: i32, slice: &mut Vec<usize>, measure: f64, atoms: &mut Vec<Atom>| {
        if slice.is_empty() {
            return;
        }
        let size = 2f64.powi(exp);
        // The slice is ordered by decreasing |f|.
        let top = values[slice[0]].abs();
        if top > 0.0 {
            let coefficient = size.powf(p.recip()) * top;
            atoms.push(Atom {
                size,
                coefficient,
                samples: slice.iter().map(|&i| values[i] / coefficient).collect(),
                support: std::mem::take(slice),
                support_measure: measure,
            });
        }
        slice.clear();
    };
    for &i in &order {
        cumulative += measures[i];
        let exp = cumulative.log2().ceil() as i32;
        if exp != slice_exp {
            flush(slice_exp, &mut slice, slice_measure, &mut atoms);
            slice_exp = exp;
            slice_measure = 0.0;
        }
        slice.push(i);
        slice_measure += measures[i];
    }
    flush(slice_exp, &mut slice, slice_measure, &mut atoms);
    Ok(AtomicDecomposition { p, cells: values.len(), atoms })
}
