//! Command-line front end for the admissibility engine and the spectral bench.
//!
//! Exit status: 0 when every check passes, 1 when a tuple is infeasible or an
//! estimate/diagnostic check fails, 2 for invalid input.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use strichartz_lab::decomp::write_whitney_csv;
use strichartz_lab::exponents::{
    check_mode, sigma_feasibility_search, DispersionSetup, ExponentTuple, Mode, SigmaWitness,
};
use strichartz_lab::runner::*;

#[derive(Parser)]
#[command(name = "strichartz", version, about = "Exponent admissibility engine and spectral bench for generalized Strichartz estimates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Experiment configuration (JSON). Without it a bare `a = 2`, `n = 2`
    /// setup with default sections is used.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for `<id>-<command>.csv` and `.json`. Without it the CSV goes
    /// to stdout and the JSON summary to stderr.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Overrides the seed of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run sweeps even when the checker rejects the tuple, and keep rows
    /// whose grid diagnostics are over threshold.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exponent checks on the configured setup and tuple.
    #[command(subcommand)]
    Admissible(Admissible),
    /// Numerical experiments on periodic grids.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Whitney squares, atomic decompositions and sequence lemmas.
    #[command(subcommand)]
    Decomp(Decomp),
}

#[derive(Subcommand)]
enum Admissible {
    /// Runs the local, non-sharp and sharp systems (or only `mode`).
    ///
    /// CSV columns: mode,feasible,sigma1,sigma2,mu,violations
    /// (`violations` is a `;`-separated list of constraint ids).
    Check,
    /// Searches a σ-witness for `mode` (default non-sharp).
    ///
    /// CSV columns: mode,sigma1,sigma2,mu,theta
    Search,
    /// Samples the `(1/p, 1/p̃)` slice of the `region` section.
    ///
    /// CSV columns: inv_p,inv_pt,local,nonsharp,sharp,mu,sigma1,sigma2
    Region,
    /// δ-search around `q = 2(n+a)/n` in the config dimension.
    ///
    /// CSV columns: a,epsilon,inv_q,inv_qt,sigma1,sigma2,mu
    Corollary,
}

#[derive(Subcommand)]
enum Simulate {
    /// Fits the sup-norm decay rate of the configured data.
    ///
    /// CSV columns: t,sup_norm,oracle (oracle empty unless Gaussian data at N = 1)
    Decay,
    /// Homogeneous estimate ratios across the sweep.
    ///
    /// CSV columns: param,lhs,rhs,ratio,diag_boundary_mass,diag_nyquist_mass,valid
    Homogeneous,
    /// Inhomogeneous estimate ratios across the sweep.
    ///
    /// CSV columns: param,lhs,rhs,ratio,diag_boundary_mass,diag_nyquist_mass,valid
    Inhomogeneous,
    /// Homogeneous ratios of Knapp data; sweep values are eccentricities.
    ///
    /// CSV columns: param,lhs,rhs,ratio,diag_boundary_mass,diag_nyquist_mass,valid
    Knapp,
    /// Picard iteration with the potential of the `picard` section.
    ///
    /// CSV columns: window,t0,t1,iteration,residual
    Picard,
}

#[derive(Subcommand)]
enum Decomp {
    /// Whitney squares of the `whitney` section.
    ///
    /// CSV columns: lambda,i_start,j_start (in cells of dt)
    Whitney,
    /// Atomic decomposition of the `atoms` step function.
    ///
    /// CSV columns: size,coefficient,support_measure,support (`;`-separated cells)
    Atoms,
    /// Randomized Hölder and Young sequence inequalities (`trials`, default 1000).
    ///
    /// CSV columns: lemma,trials,violations,max_ratio
    Lemmas,
}

/// Writes the CSV table and the JSON summary of one command.
struct Sink {
    dir: Option<PathBuf>,
    stem: String,
}

impl Sink {
    fn new(dir: Option<PathBuf>, id: &str, command: &str) -> Result<Self, RunnerError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Self { dir, stem: format!("{id}-{command}") })
    }

    fn path(&self, dir: &Path, ext: &str) -> PathBuf {
        dir.join(format!("{}.{ext}", self.stem))
    }

    fn csv(&self, write: impl FnOnce(Box<dyn Write>) -> csv::Result<()>) -> Result<(), RunnerError> {
        let out: Box<dyn Write> = match &self.dir {
            Some(d) => Box::new(File::create(self.path(d, "csv"))?),
            None => Box::new(io::stdout()),
        };
        write(out)?;
        Ok(())
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<(), RunnerError> {
        let text = serde_json::to_string_pretty(value)?;
        match &self.dir {
            Some(d) => fs::write(self.path(d, "json"), text + "\n")?,
            None => eprintln!("{text}"),
        }
        Ok(())
    }
}

fn load(global: &Global) -> Result<ExperimentConfig, RunnerError> {
    let mut cfg = match &global.config {
        Some(path) => ExperimentConfig::from_json(&fs::read_to_string(path).map_err(|e| {
            RunnerError::Config(format!("cannot read {}: {e}", path.display()))
        })?)?,
        None => ExperimentConfig::new("default", DispersionSetup::new(2.0, 2)?),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Local => "local",
        Mode::Nonsharp => "nonsharp",
        Mode::Sharp => "sharp",
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn witness_fields(w: Option<&SigmaWitness>) -> [String; 3] {
    match w {
        Some(w) => [w.sigma1.to_string(), w.sigma2.to_string(), opt(w.mu)],
        None => Default::default(),
    }
}

/// `Ok(true)` when every check passed.
fn admissible(cmd: Admissible, cfg: &ExperimentConfig, sink: &Sink) -> Result<bool, RunnerError> {
    match cmd {
        Admissible::Check => {
            let tuple = cfg.require_tuple()?;
            let modes = match cfg.mode {
                Some(m) => vec![m],
                None => vec![Mode::Local, Mode::Nonsharp, Mode::Sharp],
            };
            let verdicts: Vec<_> = modes.iter().map(|&m| (mode_name(m), check_mode(&cfg.setup, &tuple, m))).collect();
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["mode", "feasible", "sigma1", "sigma2", "mu", "violations"])?;
                for (name, v) in &verdicts {
                    let [s1, s2, mu] = witness_fields(v.witness.as_ref());
                    let ids: Vec<&str> = v.violations.iter().map(|x| x.id.as_str()).collect();
                    w.write_record([name.to_string(), v.feasible.to_string(), s1, s2, mu, ids.join(";")])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&verdicts)?;
            // With all three systems the check passes when any of them holds.
            Ok(verdicts.iter().any(|(_, v)| v.feasible))
        }
        Admissible::Search => {
            let tuple: ExponentTuple = cfg.require_tuple()?;
            let mode = cfg.mode.unwrap_or(Mode::Nonsharp);
            let witness = sigma_feasibility_search(&cfg.setup, &tuple, mode);
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["mode", "sigma1", "sigma2", "mu", "theta"])?;
                if let Some(wit) = &witness {
                    let [s1, s2, mu] = witness_fields(Some(wit));
                    w.write_record([mode_name(mode).to_string(), s1, s2, mu, wit.theta.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&witness)?;
            Ok(witness.is_some())
        }
        Admissible::Region => {
            let (mask, report) = run_region(cfg)?;
            sink.csv(|out| mask.write_csv(out))?;
            sink.json(&report)?;
            Ok(report.corollary_point.as_ref().map_or(true, |p| p.feasible))
        }
        Admissible::Corollary => {
            let report = run_corollary(cfg)?;
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["a", "epsilon", "inv_q", "inv_qt", "sigma1", "sigma2", "mu"])?;
                for s in &report.samples {
                    let [s1, s2, mu] = witness_fields(Some(&s.witness));
                    w.write_record([
                        s.a.to_string(),
                        s.epsilon.to_string(),
                        s.tuple.inv_q.to_string(),
                        s.tuple.inv_qt.to_string(),
                        s1,
                        s2,
                        mu,
                    ])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&serde_json::json!({
                "n": report.n,
                "delta": report.delta,
                "samples": report.samples.len(),
                "mu_at_two": report.mu_at_two,
                "mu_closed_form": report.mu_closed_form,
                "dq_da": report.dq_da,
            }))?;
            Ok(report.delta > 0.0)
        }
    }
}

fn sweep(cfg: &ExperimentConfig, force: bool, sink: &Sink) -> Result<bool, RunnerError> {
    let report = match run_estimate_sweep(cfg, force) {
        Ok(r) => r,
        Err(RunnerError::Diagnostics(r)) => {
            // Keep the rows for inspection before reporting the failure.
            sink.csv(|out| write_ratio_csv(out, &r))?;
            sink.json(&r)?;
            return Err(RunnerError::Diagnostics(r));
        }
        Err(e) => return Err(e),
    };
    sink.csv(|out| write_ratio_csv(out, &report))?;
    sink.json(&report)?;
    Ok(true)
}

fn simulate(cmd: Simulate, mut cfg: ExperimentConfig, force: bool, sink: &Sink) -> Result<bool, RunnerError> {
    match cmd {
        Simulate::Decay => {
            let report = run_decay(&cfg)?;
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["t", "sup_norm", "oracle"])?;
                for r in &report.rows {
                    w.write_record([r.t.to_string(), r.sup_norm.to_string(), opt(r.oracle)])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&serde_json::json!({
                "id": report.id,
                "slope": report.slope,
                "expected_slope": report.expected_slope,
                "relative_error": report.relative_error,
                "intercept": report.intercept,
                "diag_boundary_mass": report.diag_boundary_mass,
            }))?;
            Ok(report.diag_boundary_mass <= cfg.thresholds.boundary_mass || force)
        }
        Simulate::Homogeneous | Simulate::Inhomogeneous => {
            cfg.estimate = Some(if matches!(cmd, Simulate::Homogeneous) {
                Estimate::Homogeneous
            } else {
                Estimate::Inhomogeneous
            });
            if cfg.sweep.kind == SweepKind::Eccentricity {
                return Err(RunnerError::Config("eccentricity sweeps belong to `simulate knapp`".into()));
            }
            sweep(&cfg, force, sink)
        }
        Simulate::Knapp => {
            cfg.sweep.kind = SweepKind::Eccentricity;
            cfg.estimate = Some(Estimate::Homogeneous);
            sweep(&cfg, force, sink)
        }
        Simulate::Picard => {
            let report = run_picard(&cfg)?;
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["window", "t0", "t1", "iteration", "residual"])?;
                for (k, win) in report.windows.iter().enumerate() {
                    for (i, r) in win.residuals.iter().enumerate() {
                        w.write_record([k.to_string(), win.t0.to_string(), win.t1.to_string(), (i + 1).to_string(), r.to_string()])?;
                    }
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&report)?;
            Ok(report.converged() && !report.diverged())
        }
    }
}

fn decomp(cmd: Decomp, cfg: &ExperimentConfig, sink: &Sink) -> Result<bool, RunnerError> {
    match cmd {
        Decomp::Whitney => {
            let squares = run_whitney(cfg)?;
            sink.csv(|out| write_whitney_csv(out, &squares))?;
            sink.json(&serde_json::json!({ "id": cfg.id, "squares": squares.len() }))?;
            Ok(true)
        }
        Decomp::Atoms => {
            let report = run_atoms(cfg)?;
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["size", "coefficient", "support_measure", "support"])?;
                for a in &report.decomposition.atoms {
                    let cells: Vec<String> = a.support.iter().map(|c| c.to_string()).collect();
                    w.write_record([
                        a.size.to_string(),
                        a.coefficient.to_string(),
                        a.support_measure.to_string(),
                        cells.join(";"),
                    ])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&serde_json::json!({
                "id": report.id,
                "p": report.decomposition.p,
                "atoms": report.decomposition.atoms.len(),
                "lp_norm": report.lp_norm,
                "ratio": report.ratio,
                "violations": report.violations,
            }))?;
            Ok(report.violations.is_empty())
        }
        Decomp::Lemmas => {
            let report = run_lemmas(cfg);
            sink.csv(|out| {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["lemma", "trials", "violations", "max_ratio"])?;
                for (name, t) in [("holder", &report.holder), ("young", &report.young)] {
                    w.write_record([name.to_string(), t.trials.to_string(), t.violations.to_string(), t.max_ratio.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.json(&report)?;
            Ok(report.passed())
        }
    }
}

fn run(cli: Cli) -> Result<bool, RunnerError> {
    let cfg = load(&cli.global)?;
    let force = cli.global.force;
    let out = cli.global.out.clone();
    match cli.command {
        Command::Admissible(cmd) => {
            let name = match cmd {
                Admissible::Check => "check",
                Admissible::Search => "search",
                Admissible::Region => "region",
                Admissible::Corollary => "corollary",
            };
            admissible(cmd, &cfg, &Sink::new(out, &cfg.id, name)?)
        }
        Command::Simulate(cmd) => {
            let name = match cmd {
                Simulate::Decay => "decay",
                Simulate::Homogeneous => "homogeneous",
                Simulate::Inhomogeneous => "inhomogeneous",
                Simulate::Knapp => "knapp",
                Simulate::Picard => "picard",
            };
            let sink = Sink::new(out, &cfg.id, name)?;
            simulate(cmd, cfg, force, &sink)
        }
        Command::Decomp(cmd) => {
            let name = match cmd {
                Decomp::Whitney => "whitney",
                Decomp::Atoms => "atoms",
                Decomp::Lemmas => "lemmas",
            };
            decomp(cmd, &cfg, &Sink::new(out, &cfg.id, name)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
