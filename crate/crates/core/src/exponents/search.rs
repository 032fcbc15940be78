use super::system::{evaluate_system, prechecks, Mode, SystemEvaluation};
use super::{DispersionSetup, ExponentTuple, SigmaWitness};

const LEVELS: usize = 3;
const POINTS: usize = 33;

fn linspace(lo: f64, hi: f64, i: usize) -> f64 {
    if i == POINTS - 1 {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (POINTS - 1) as f64
    }
}

/// Coarse-to-fine grid search over `(σ₁, σ₂)`; returns the best-scoring
/// evaluation found. Each level scans a `POINTS × POINTS` grid in row-major
/// order and stops as soon as a level contains an admissible point; the
/// next level zooms to two cells around the best point.
pub(crate) fn search_best(setup: &DispersionSetup, tuple: &ExponentTuple, mode: Mode) -> SystemEvaluation {
    let (wlo, whi) = setup.sampling_window();
    let mut b1 = (wlo, whi);
    let mut b2 = (wlo, whi);
    let mut best: Option<(f64, SystemEvaluation)> = None;
    for _ in 0..LEVELS {
        for i in 0..POINTS {
            let s1 = linspace(b1.0, b1.1, i);
            for j in 0..POINTS {
                let s2 = linspace(b2.0, b2.1, j);
                let eval = evaluate_system(setup, tuple, s1, s2, mode);
                let score = eval.score();
                if best.as_ref().map_or(true, |(b, _)| score > *b) {
                    best = Some((score, eval));
                }
            }
        }
        let (score, eval) = best.as_ref().expect("grid is never empty");
        if *score >= 0.0 {
            break;
        }
        let w1 = 2.0 * (b1.1 - b1.0) / (POINTS - 1) as f64;
        let w2 = 2.0 * (b2.1 - b2.0) / (POINTS - 1) as f64;
        b1 = ((eval.sigma1 - w1).max(wlo), (eval.sigma1 + w1).min(whi));
        b2 = ((eval.sigma2 - w2).max(wlo), (eval.sigma2 + w2).min(whi));
    }
    best.expect("grid is never empty").1
}

/// Deterministic search for `(σ₁, σ₂)` satisfying the system of `mode`.
///
/// The σ-independent requirements of the mode (scaling, time sums, exponent
/// ranges) are checked first; if any fails the search is skipped.
pub fn sigma_feasibility_search(
    setup: &DispersionSetup,
    tuple: &ExponentTuple,
    mode: Mode,
) -> Option<SigmaWitness> {
    if !prechecks(setup, tuple, mode).is_empty() {
        return None;
    }
    let best = search_best(setup, tuple, mode);
    best.holds().then(|| best.witness())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::system::check_with_witness;

    #[test]
    fn corollary_tuple_near_two() {
        let setup = DispersionSetup::new(1.98, 3).unwrap();
        let q = 2.0 * (3.0 + 1.98) / 3.0;
        let t = ExponentTuple::from_exponents(q, q, q, q, 0.0).unwrap();
        let w = sigma_feasibility_search(&setup, &t, Mode::Nonsharp).expect("witness");
        let again = check_with_witness(&setup, &t, Mode::Nonsharp, w.sigma1, w.sigma2);
        assert!(again.feasible);
        assert_eq!(sigma_feasibility_search(&setup, &t, Mode::Nonsharp), Some(w));
    }

    #[test]
    fn off_shell_short_circuits() {
        let setup = DispersionSetup::new(2.0, 3).unwrap();
        let t = ExponentTuple::from_exponents(4.0, 4.0, 4.0, 4.0, 1.0).unwrap();
        assert_eq!(sigma_feasibility_search(&setup, &t, Mode::Nonsharp), None);
    }

    #[test]
    fn sharp_double_endpoint_has_no_witness() {
        let setup = DispersionSetup::new(2.0, 3).unwrap();
        let t = ExponentTuple::from_exponents(2.0, 6.0, 2.0, 6.0, 0.0).unwrap();
        assert_eq!(sigma_feasibility_search(&setup, &t, Mode::Sharp), None);
    }
}
