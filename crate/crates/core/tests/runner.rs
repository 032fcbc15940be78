use strichartz_lab::exponents::*;
use strichartz_lab::runner::*;

fn homogeneous_tuple(st: &DispersionSetup, inv_q: f64, inv_p: f64) -> ExponentTuple {
    let (_, s) = homogeneous_admissible(st, inv_q, inv_p).unwrap().unwrap();
    ExponentTuple::new(inv_q, inv_p, 0.0, 0.0, s).unwrap()
}

fn homogeneous_config() -> ExperimentConfig {
    let st = DispersionSetup::new(2.0, 2).unwrap();
    let mut cfg = ExperimentConfig::new("homogeneous", st);
    cfg.tuple = Some(homogeneous_tuple(&st, 0.25, 0.3));
    cfg.estimate = Some(Estimate::Homogeneous);
    cfg.grid = GridParams { m: 1024, box_len: 256.0 };
    cfg.sweep.values = vec![0.25, 0.5, 1.0, 2.0, 4.0];
    cfg
}

#[test]
fn config_round_trip_and_rejection() {
    let mut cfg = homogeneous_config();
    cfg.data = DataFamily::RandomBandlimited { seed: Some(7) };
    cfg.picard = Some(PicardParams {
        amplitude: 0.3,
        width: 1.5,
        shape: PotentialShape::Angular,
        max_iter: 20,
        tol: 1e-10,
        windows: 2,
        y_exponents: (0.5, 0.25),
    });
    cfg.region = Some(RegionParams { inv_q: 0.3, inv_qt: 0.3, s: SChoice::Fixed(0.125), resolution: 16 });
    let json = cfg.to_json().unwrap();
    assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);

    let bad_a = r#"{"id": "x", "setup": {"a": 0.5, "n": 2}}"#;
    assert_eq!(ExperimentConfig::from_json(bad_a).unwrap_err().exit_code(), 2);
    let unknown = r#"{"id": "x", "setup": {"a": 2.0, "n": 2}, "colour": 1}"#;
    assert!(ExperimentConfig::from_json(unknown).is_err());
    let minimal = ExperimentConfig::from_json(r#"{"id": "x", "setup": {"a": 2.0, "n": 3}}"#).unwrap();
    assert_eq!(minimal.data, DataFamily::Annulus);
    assert!(minimal.require_tuple().is_err());
}

#[test]
fn homogeneous_sweep_is_scale_invariant() {
    let cfg = homogeneous_config();
    let report = run_estimate_sweep(&cfg, false).unwrap();
    assert_eq!(report.invalid_rows(), 0);
    assert!(report.spread() <= 1.1, "{:?}", report.rows);
    let mut csv = Vec::new();
    write_ratio_csv(&mut csv, &report).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("param,lhs,rhs,ratio,diag_boundary_mass,diag_nyquist_mass,valid"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn rescaled_sweep_reproduces_the_same_ratio() {
    let mut cfg = homogeneous_config();
    cfg.grid = GridParams { m: 128, box_len: 64.0 };
    cfg.sweep = SweepParams { kind: SweepKind::Rescale, values: vec![0.5, 1.0, 2.0], n_scale: 1.0 };
    let report = run_estimate_sweep(&cfg, true).unwrap();
    let base = report.ratio_at(1.0).unwrap();
    for row in &report.rows {
        assert!((row.ratio / base - 1.0).abs() < 1e-10, "{row:?}");
    }
}

#[test]
fn homogeneous_precheck_rejects_off_scaling_tuples() {
    let mut cfg = homogeneous_config();
    let mut t = cfg.tuple.unwrap();
    t.s += 0.1;
    cfg.tuple = Some(t);
    let err = run_estimate_sweep(&cfg, false).unwrap_err();
    assert!(matches!(err, RunnerError::Rejected(_)), "{err}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn inhomogeneous_sweep_is_bounded() {
    let st = DispersionSetup::new(2.0, 2).unwrap();
    let t = ExponentTuple::new(0.05, 0.25, 0.45, 0.25, 0.0).unwrap().on_scaling_line(&st);
    assert!(check_global_nonsharp(&st, &t).feasible);
    let mut cfg = ExperimentConfig::new("inhomogeneous", st);
    cfg.tuple = Some(t);
    cfg.estimate = Some(Estimate::Inhomogeneous);
    cfg.data = DataFamily::RandomBandlimited { seed: None };
    cfg.sweep.values = vec![0.5, 1.0, 2.0];
    cfg.grid = GridParams { m: 256, box_len: 32.0 * std::f64::consts::PI };
    let report = run_estimate_sweep(&cfg, false).unwrap();
    assert!(report.spread() <= 1.5, "{:?}", report.rows);
    assert!(report.rows.iter().all(|r| r.lhs > 0.0 && r.rhs > 0.0));
}

#[test]
fn diagnostics_abort_unless_forced() {
    let mut cfg = homogeneous_config();
    // At N = 4 on this grid the annulus reaches past two thirds of Nyquist.
    cfg.grid = GridParams { m: 32, box_len: 32.0 };
    cfg.sweep.values = vec![1.0, 4.0];
    match run_estimate_sweep(&cfg, false).unwrap_err() {
        RunnerError::Diagnostics(report) => assert!(report.invalid_rows() >= 1),
        e => panic!("{e}"),
    }
    let forced = run_estimate_sweep(&cfg, true).unwrap();
    assert!(forced.forced && forced.invalid_rows() >= 1);
}

/// A forbidden tuple `τ ∈ (σ, σ′)` at the edge `q = 2`.
fn knapp_config(n: usize, tau: f64) -> ExperimentConfig {
    let st = DispersionSetup::new(2.0, n).unwrap();
    let gamma = 0.5 / tau;
    let (inv_q, inv_p) = (tau * gamma, 0.5 - gamma);
    let s = -(n as f64) / 2.0 + n as f64 * inv_p + 2.0 * inv_q;
    let t = ExponentTuple::new(inv_q, inv_p, 0.0, 0.0, s).unwrap();
    let mut cfg = ExperimentConfig::new("knapp", st);
    cfg.tuple = Some(t);
    cfg.sweep = SweepParams { kind: SweepKind::Eccentricity, values: vec![1.0, 2.0, 4.0, 8.0], n_scale: 1.0 };
    cfg.grid = GridParams { m: 64, box_len: 14.0 };
    cfg.time = TimeWindow { t0: 0.0, dt: 0.05, count: 121 };
    cfg
}

#[test]
fn knapp_ratio_grows_in_the_plane() {
    // The packet drifts across the box, so boundary diagnostics are overridden.
    let report = run_estimate_sweep(&knapp_config(2, 1.45), true).unwrap();
    let r: Vec<f64> = report.rows.iter().map(|r| r.ratio).collect();
    assert!(r.windows(2).all(|w| w[1] > w[0] * 1.05), "{r:?}");
    // A classical pair stays flat.
    let flat = run_estimate_sweep(&knapp_config(2, 1.0), true).unwrap();
    let r: Vec<f64> = flat.rows.iter().map(|r| r.ratio).collect();
    let spread = r.iter().copied().fold(0.0, f64::max) / r.iter().copied().fold(f64::MAX, f64::min);
    assert!(spread < 1.15, "{r:?}");
}

#[test]
fn knapp_ratio_doubles_in_space() {
    let report = run_estimate_sweep(&knapp_config(3, 2.45), true).unwrap();
    let growth = report.ratio_at(8.0).unwrap() / report.ratio_at(1.0).unwrap();
    assert!(growth >= 2.0, "growth {growth}: {:?}", report.rows);
}

fn region_config(resolution: usize) -> ExperimentConfig {
    let st = DispersionSetup::new(2.0, 3).unwrap();
    let diag = 3.0 / 10.0;
    let mut cfg = ExperimentConfig::new("region", st);
    cfg.region = Some(RegionParams { inv_q: diag, inv_qt: diag, s: SChoice::Scaling, resolution });
    cfg
}

#[test]
fn region_contains_the_diagonal_point() {
    let (mask, report) = run_region(&region_config(64)).unwrap();
    assert!(report.nonsharp > 0);
    assert_eq!(report.nonsharp, mask.count(Mode::Nonsharp));
    let probe = report.corollary_point.unwrap();
    assert!(probe.feasible && probe.witness.is_some());
    assert!(report.vertices.is_none());

    let start = std::time::Instant::now();
    run_region(&region_config(8)).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);

    let mut fig2 = ExperimentConfig::new("fig2", DispersionSetup::new(1.5, 3).unwrap());
    fig2.region = Some(RegionParams { inv_q: 0.25, inv_qt: 0.25, s: SChoice::Scaling, resolution: 8 });
    let (_, r) = run_region(&fig2).unwrap();
    let names: Vec<String> = r.vertices.unwrap().into_iter().map(|v| v.name).collect();
    assert_eq!(names, ["A", "B", "C", "D"]);
    assert!(r.corollary_point.is_none());
}

fn picard_config(amplitude: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new("picard", DispersionSetup::new(2.0, 2).unwrap());
    cfg.grid = GridParams { m: 32, box_len: 16.0 };
    cfg.data = DataFamily::Gaussian { width: 1.0 };
    cfg.picard = Some(PicardParams {
        amplitude,
        width: 1.0,
        shape: PotentialShape::Radial,
        max_iter: 20,
        tol: 1e-10,
        windows: 1,
        y_exponents: (0.5, 0.25),
    });
    cfg
}

#[test]
fn picard_free_and_contracting() {
    let free = run_picard(&picard_config(0.0)).unwrap();
    let w = &free.windows[0];
    assert_eq!(w.iterations, 1);
    assert_eq!(w.contraction_factor, 0.0);
    assert_eq!(w.final_residual, 0.0);
    assert_eq!(w.y_norm_free, w.y_norm_solution);

    let small = run_picard(&picard_config(0.5)).unwrap();
    assert!(small.converged() && !small.diverged());
    assert!(small.max_contraction_factor() < 0.5);
    let w = &small.windows[0];
    assert!(w.iterations <= 20 && w.final_residual < 1e-8, "{w:?}");

    // Twice the window, split in two: each half contracts like the original.
    let mut long = picard_config(0.5);
    long.time.count = 41;
    long.picard.as_mut().unwrap().windows = 2;
    long.picard.as_mut().unwrap().shape = PotentialShape::Angular;
    let report = run_picard(&long).unwrap();
    assert_eq!(report.windows.len(), 2);
    assert!(report.converged() && report.max_contraction_factor() < 0.5);
    assert!((report.windows[1].t0 - 1.0).abs() < 1e-12);

    let mut bad = picard_config(0.5);
    bad.picard.as_mut().unwrap().windows = 3;
    assert!(matches!(run_picard(&bad), Err(RunnerError::Config(_))));
}

#[test]
fn decay_report_tracks_the_oracle() {
    let mut cfg = ExperimentConfig::new("decay", DispersionSetup::new(2.0, 2).unwrap());
    cfg.grid = GridParams { m: 512, box_len: 512.0 };
    cfg.data = DataFamily::Gaussian { width: 3f64.sqrt() };
    cfg.decay = Some(DecayParams { t_min: 10.0, t_max: 100.0, samples: 12 });
    let report = run_decay(&cfg).unwrap();
    assert!(report.relative_error <= 0.02, "{report:?}");
    for row in &report.rows {
        let o = row.oracle.unwrap();
        assert!((row.sup_norm / o - 1.0).abs() < 1e-4, "{row:?}");
    }
}

#[test]
fn sweeps_are_reproducible() {
    let mut cfg = homogeneous_config();
    cfg.grid = GridParams { m: 128, box_len: 64.0 };
    cfg.data = DataFamily::RandomBandlimited { seed: None };
    cfg.sweep.values = vec![1.0, 2.0];
    cfg.seed = 11;
    let csv = |cfg: &ExperimentConfig| {
        let mut out = Vec::new();
        write_ratio_csv(&mut out, &run_estimate_sweep(cfg, true).unwrap()).unwrap();
        out
    };
    let first = csv(&cfg);
    assert_eq!(first, csv(&cfg));
    cfg.seed = 12;
    assert_ne!(first, csv(&cfg));
}
