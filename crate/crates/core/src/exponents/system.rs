use serde::{Deserialize, Serialize};

use super::search::search_best;
use super::{
    AdmissibilityVerdict, DispersionSetup, ExponentTuple, SigmaWitness, Violation, CLOSED_SLACK,
    SCALING_TOL, STRICT_MARGIN,
};

/// Which inequality system is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Local,
    Nonsharp,
    Sharp,
}

/// One inequality `lhs ≤ rhs` (or `lhs < rhs` when strict).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
}

impl Constraint {
    fn new(id: &'static str, lhs: f64, rhs: f64, strict: bool) -> Self {
        Self { id, lhs, rhs, strict }
    }

    /// Non-negative exactly when the constraint holds.
    pub fn score(&self) -> f64 {
        let margin = self.rhs - self.lhs;
        if self.strict {
            margin - STRICT_MARGIN
        } else {
            margin + CLOSED_SLACK
        }
    }

    pub fn holds(&self) -> bool {
        self.score() >= 0.0
    }

    fn violation(&self) -> Violation {
        Violation::new(self.id, self.lhs, self.rhs)
    }
}

/// The σ-dependent part of a system evaluated at one `(σ₁, σ₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemEvaluation {
    pub sigma1: f64,
    pub sigma2: f64,
    pub mu: Option<f64>,
    pub theta: Option<f64>,
    pub constraints: Vec<Constraint>,
}

impl SystemEvaluation {
    /// Smallest constraint score; the system holds iff this is `>= 0`.
    pub fn score(&self) -> f64 {
        self.constraints
            .iter()
            .map(Constraint::score)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.score() >= 0.0
    }

    pub fn violations(&self) -> Vec<Violation> {
        self.constraints
            .iter()
            .filter(|c| !c.holds())
            .map(Constraint::violation)
            .collect()
    }

    pub fn witness(&self) -> SigmaWitness {
        SigmaWitness {
            sigma1: self.sigma1,
            sigma2: self.sigma2,
            mu: self.mu,
            theta: self.theta.unwrap_or(0.0),
        }
    }
}

fn mu_parts(setup: &DispersionSetup, t: &ExponentTuple, sigma1: f64, sigma2: f64) -> (f64, f64) {
    let (a, n) = (setup.a(), setup.dim());
    let num = 0.5 * a * (0.5 * sigma1 + 0.5 * sigma2 - setup.sigma());
    let den = t.s - setup.offset_r()
        + 0.5 * ((a * sigma1 - n) * t.inv_p + (a * sigma2 - n) * t.inv_pt);
    (num, den)
}

/// `μ = (a/2)(σ₁/2 + σ₂/2 − σ) / (s − r + ((aσ₁ − n)/p + (aσ₂ − n)/p̃)/2)`.
///
/// `None` when the denominator is not positive, i.e. when `θ = 1/μ` would
/// leave `(0, 1]` from below.
pub fn mu_value(setup: &DispersionSetup, tuple: &ExponentTuple, sigma1: f64, sigma2: f64) -> Option<f64> {
    let (num, den) = mu_parts(setup, tuple, sigma1, sigma2);
    (den > 0.0).then(|| num / den)
}

/// Evaluates every σ-dependent constraint of `mode` at `(σ₁, σ₂)`.
///
/// All conditions are written in `θ = 1/μ`, which keeps `p = ∞` finite:
/// `μ ≤ p/2` becomes `1/p ≤ θ/2`, and so on.
pub fn evaluate_system(
    setup: &DispersionSetup,
    t: &ExponentTuple,
    sigma1: f64,
    sigma2: f64,
    mode: Mode,
) -> SystemEvaluation {
    let (lo, hi) = (setup.sigma(), setup.sigma_ext());
    let mut constraints = vec![
        Constraint::new("sigma-window", lo, sigma1.min(sigma2), true),
        Constraint::new("sigma-window", sigma1.max(sigma2), hi, true),
    ];
    let (num, den) = mu_parts(setup, t, sigma1, sigma2);
    if den <= 0.0 || num <= 0.0 {
        // θ undefined or non-positive. Offset keeps the score below any
        // admissible point so the search moves away from here.
        constraints.push(Constraint {
            id: "theta-range",
            lhs: 0.0,
            rhs: den.min(num) - 1.0,
            strict: true,
        });
        return SystemEvaluation {
            sigma1,
            sigma2,
            mu: None,
            theta: None,
            constraints,
        };
    }
    let theta = den / num;
    let strict = mode == Mode::Sharp;
    let strict_q = mode != Mode::Local;
    constraints.extend([
        Constraint::new("theta-range", theta, 1.0, strict),
        Constraint::new("p-lower", (sigma1 - 1.0) / sigma1 * theta / 2.0, t.inv_p, strict),
        Constraint::new("p-upper", t.inv_p, theta / 2.0, strict),
        Constraint::new("pt-lower", (sigma2 - 1.0) / sigma2 * theta / 2.0, t.inv_pt, strict),
        Constraint::new("pt-upper", t.inv_pt, theta / 2.0, strict),
        Constraint::new("q-lower", sigma1 * theta / 2.0, t.inv_q + sigma1 * t.inv_p, strict_q),
        Constraint::new("qt-lower", sigma2 * theta / 2.0, t.inv_qt + sigma2 * t.inv_pt, strict_q),
    ]);
    SystemEvaluation {
        sigma1,
        sigma2,
        mu: Some(num / den),
        theta: Some(theta),
        constraints,
    }
}

/// σ-independent requirements of a mode.
pub(crate) fn prechecks(setup: &DispersionSetup, t: &ExponentTuple, mode: Mode) -> Vec<Violation> {
    let mut out = Vec::new();
    if mode == Mode::Local {
        return out;
    }
    let beta = t.beta(setup);
    if beta.abs() > SCALING_TOL {
        out.push(Violation::new("scaling", beta.abs(), SCALING_TOL));
    }
    match mode {
        Mode::Nonsharp => {
            if t.time_sum() >= 1.0 - STRICT_MARGIN {
                out.push(Violation::new("nonsharp-time-sum", t.time_sum(), 1.0));
            }
            if t.inv_q <= 0.0 || t.inv_qt <= 0.0 {
                out.push(Violation::new("time-finite", 0.0, t.inv_q.min(t.inv_qt)));
            }
        }
        Mode::Sharp => {
            if (t.time_sum() - 1.0).abs() > SCALING_TOL {
                out.push(Violation::new("sharp-time-sum", t.time_sum(), 1.0));
            }
            if !(t.inv_p > 0.0 && t.inv_p < 0.5) {
                out.push(Violation::new("p-range", t.inv_p, 0.5));
            }
            if !(t.inv_pt > 0.0 && t.inv_pt < 0.5) {
                out.push(Violation::new("pt-range", t.inv_pt, 0.5));
            }
            if t.inv_p > t.inv_q {
                out.push(Violation::new("p-q-order", t.inv_p, t.inv_q));
            }
            if t.inv_pt > t.inv_qt {
                out.push(Violation::new("pt-qt-order", t.inv_pt, t.inv_qt));
            }
        }
        Mode::Local => unreachable!(),
    }
    out
}

/// Checks a tuple against `mode` at a given witness pair.
pub fn check_with_witness(
    setup: &DispersionSetup,
    tuple: &ExponentTuple,
    mode: Mode,
    sigma1: f64,
    sigma2: f64,
) -> AdmissibilityVerdict {
    let mut violations = prechecks(setup, tuple, mode);
    let eval = evaluate_system(setup, tuple, sigma1, sigma2, mode);
    violations.extend(eval.violations());
    if violations.is_empty() {
        AdmissibilityVerdict::accept(eval.witness())
    } else {
        AdmissibilityVerdict::reject(violations)
    }
}

/// Checks a tuple against `mode`, searching for a witness pair.
pub fn check_mode(setup: &DispersionSetup, tuple: &ExponentTuple, mode: Mode) -> AdmissibilityVerdict {
    let pre = prechecks(setup, tuple, mode);
    if !pre.is_empty() {
        return AdmissibilityVerdict::reject(pre);
    }
    let best = search_best(setup, tuple, mode);
    if best.holds() {
        AdmissibilityVerdict::accept(best.witness())
    } else {
        AdmissibilityVerdict::reject(best.violations())
    }
}

/// Local inhomogeneous estimates on unit-separated intervals. With a witness
/// the system is evaluated there; without one a witness is searched for.
pub fn check_local(
    setup: &DispersionSetup,
    tuple: &ExponentTuple,
    witness: Option<(f64, f64)>,
) -> AdmissibilityVerdict {
    match witness {
        Some((s1, s2)) => check_with_witness(setup, tuple, Mode::Local, s1, s2),
        None => check_mode(setup, tuple, Mode::Local),
    }
}

/// Global estimates, non-sharp case `1/q + 1/q̃ < 1`.
pub fn check_global_nonsharp(setup: &DispersionSetup, tuple: &ExponentTuple) -> AdmissibilityVerdict {
    check_mode(setup, tuple, Mode::Nonsharp)
}

/// Global estimates, sharp case `1/q + 1/q̃ = 1`.
pub fn check_global_sharp(setup: &DispersionSetup, tuple: &ExponentTuple) -> AdmissibilityVerdict {
    check_mode(setup, tuple, Mode::Sharp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s23() -> DispersionSetup {
        DispersionSetup::new(2.0, 3).unwrap()
    }

    fn tuple(q: f64, p: f64, qt: f64, pt: f64, s: f64) -> ExponentTuple {
        ExponentTuple::from_exponents(q, p, qt, pt, s).unwrap()
    }

    #[test]
    fn mu_on_corollary_diagonal() {
        let q = 10.0 / 3.0;
        let t = tuple(q, q, q, q, 0.0);
        for (s1, s2) in [(1.6, 1.7), (2.4, 1.51), (2.0, 2.0)] {
            let mu = mu_value(&s23(), &t, s1, s2).unwrap();
            assert!((mu - 5.0 / 3.0).abs() < 1e-12, "{mu}");
        }
    }

    #[test]
    fn mu_at_p_four() {
        let t = tuple(7.0, 4.0, 7.0, 4.0, 0.0);
        let mu = mu_value(&s23(), &t, 2.0, 2.0).unwrap();
        assert!((mu - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mu_undefined_at_zero_denominator() {
        let inf = f64::INFINITY;
        let t = tuple(inf, inf, inf, inf, 0.0);
        assert_eq!(mu_value(&s23(), &t, 2.0, 2.0), None);
    }

    #[test]
    fn local_double_endpoint_holds_with_equality() {
        let t = tuple(2.0, 6.0, 2.0, 6.0, 0.0);
        let v = check_local(&s23(), &t, Some((2.0, 2.0)));
        assert!(v.feasible, "{v:?}");
        assert!((v.witness.unwrap().mu.unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn local_witness_on_window_edge() {
        let t = tuple(2.0, 6.0, 2.0, 6.0, 0.0);
        let v = check_local(&s23(), &t, Some((1.5, 2.0)));
        assert!(!v.feasible);
        assert!(v.violates("sigma-window"));
        assert!(v.is_consistent());
    }

    #[test]
    fn sharp_examples() {
        let t = tuple(2.0, 4.0, 2.0, 4.0, 0.25);
        let v = check_with_witness(&s23(), &t, Mode::Sharp, 2.25, 2.25);
        assert!(v.feasible, "{v:?}");
        assert!((v.witness.unwrap().mu.unwrap() - 1.2).abs() < 1e-12);

        let v = check_global_sharp(&s23(), &tuple(2.0, 6.0, 2.0, 6.0, 0.0));
        assert!(!v.feasible);
        assert!(v.violates("p-upper") || v.violates("pt-upper"), "{v:?}");

        let v = check_global_sharp(&s23(), &tuple(2.0, 2.0, 2.0, 2.0, 0.0));
        assert!(v.violates("p-range"));
    }

    #[test]
    fn nonsharp_rejections() {
        let v = check_global_nonsharp(&s23(), &tuple(2.0, 4.0, 2.0, 4.0, 0.25));
        assert!(v.violates("nonsharp-time-sum"));
        let v = check_global_nonsharp(&s23(), &tuple(4.0, f64::INFINITY, 4.0, 4.0, 0.0).on_scaling_line(&s23()));
        assert!(!v.feasible);
        let v = check_global_nonsharp(&s23(), &tuple(4.0, 4.0, 4.0, 4.0, 3.0));
        assert!(v.violates("scaling"));
        assert!(v.is_consistent());
    }

    #[test]
    fn infinite_p_blocks_lower_bound() {
        let t = tuple(4.0, f64::INFINITY, 4.0, 4.0, 0.2);
        for s1 in [1.6, 2.0, 2.4] {
            let e = evaluate_system(&s23(), &t, s1, 2.0, Mode::Nonsharp);
            assert!(!e.holds());
        }
    }
}
