//! Running experiments and writing their artifacts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use polydress::oracle::{compare, run_oracle, verify_sk};
use polydress::{
    excitation_probability, gamma_weights, run_cascade, two_mode_u0, undress, weak_field_pe,
    weighted_pe, weighted_pe_oracle, FieldWeights64, PeSeries64, PropagatorComponents64,
    SidebandPhase, StageParams64, WeakFieldConfig64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::experiment::{Engine, Experiment, WeightsSpec};
use crate::output::{write_json, write_series, ReportJson};

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub files: Vec<PathBuf>,
    /// Engine label to deviation from the oracle.
    pub comparisons: BTreeMap<String, ReportJson>,
    pub oracle_valid: Option<bool>,
}

fn weights(spec: &WeightsSpec) -> Result<FieldWeights64, CliError> {
    Ok(match spec {
        WeightsSpec::Flat => FieldWeights64::Flat,
        WeightsSpec::Gaussian { alpha, window } => {
            let a: Vec<Complex64> = alpha
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            gamma_weights(&a, *window)?
        }
    })
}

fn analytic_series(
    u0: &PropagatorComponents64,
    w: &FieldWeights64,
    tau: &[f64],
    channels: &[i64],
) -> PeSeries64 {
    match w {
        FieldWeights64::Flat => excitation_probability(u0, tau, channels),
        _ => weighted_pe(u0, w, tau),
    }
}

/// Runs one validated experiment, writing `<name>.config.json`,
/// `<name>_<engine>.csv` per engine, and `<name>_<engine>_vs_oracle.json`
/// when the oracle ran alongside analytic engines.
///
/// Outputs are kept even when the oracle run fails its validity gate; the
/// error is returned after everything is written.
pub fn run_experiment(exp: &Experiment, out: &Path) -> Result<RunSummary, CliError> {
    exp.validate()?;
    let cfg = exp.modes.to_config()?;
    let tau = exp.tau.points();
    let w = weights(&exp.weights)?;
    std::fs::create_dir_all(out)?;

    let mut files = Vec::new();
    let echo = out.join(format!("{}.config.json", exp.name));
    write_json(&echo, exp)?;
    files.push(echo);

    let wants = |e: Engine| exp.engine == e || exp.engine == Engine::All;
    let mut analytic: Vec<(Engine, PeSeries64)> = Vec::new();
    if wants(Engine::Cascade) {
        let u0 = undress(&run_cascade(&cfg)?);
        analytic.push((
            Engine::Cascade,
            analytic_series(&u0, &w, &tau, &exp.channels),
        ));
    }
    if exp.engine == Engine::TwoMode || (exp.engine == Engine::All && cfg.n_modes() == 2) {
        let u0 = two_mode_u0(&cfg)?;
        analytic.push((
            Engine::TwoMode,
            analytic_series(&u0, &w, &tau, &exp.channels),
        ));
    }
    if wants(Engine::WeakField) {
        let weak = WeakFieldConfig64::from_modes(&cfg)
            .and_then(|wc| weak_field_pe(&wc, &tau, SidebandPhase::default()));
        match weak {
            Ok(series) => {
                if !matches!(w, FieldWeights64::Flat) {
                    log::warn!("{}: weak-field series ignores field weights", exp.name);
                }
                analytic.push((Engine::WeakField, series));
            }
            Err(e) if exp.engine == Engine::WeakField => return Err(e.into()),
            Err(e) => log::info!("{}: skipping weak_field: {e}", exp.name),
        }
    }

    for (engine, series) in &analytic {
        let path = out.join(format!("{}_{}.csv", exp.name, engine.label()));
        write_series(&path, series)?;
        files.push(path);
    }

    let mut comparisons = BTreeMap::new();
    let mut oracle_valid = None;
    let mut invalid = None;
    if exp.runs_oracle() {
        let run = run_oracle(&cfg, exp.window, &tau, &exp.channels)?;
        let series = match &w {
            FieldWeights64::Flat => run.pe.clone(),
            _ => weighted_pe_oracle(&run, &w)?,
        };
        let path = out.join(format!("{}_oracle.csv", exp.name));
        write_series(&path, &series)?;
        files.push(path);
        for (engine, a) in &analytic {
            let report = ReportJson::from(&compare(a, &series)?);
            let path = out.join(format!("{}_{}_vs_oracle.json", exp.name, engine.label()));
            write_json(&path, &report)?;
            files.push(path);
            comparisons.insert(engine.label().to_string(), report);
        }
        oracle_valid = Some(run.is_valid());
        if !run.is_valid() {
            invalid = Some(CliError::OracleInvalid {
                name: exp.name.clone(),
                leakage: run.leakage,
                norm_defect: run.norm_defect,
            });
        }
    }
    if let Some(e) = invalid {
        return Err(e);
    }
    Ok(RunSummary {
        name: exp.name.clone(),
        files,
        comparisons,
        oracle_valid,
    })
}

/// Runs independent experiments concurrently, preserving input order.
pub fn run_batch(exps: &[Experiment], out: &Path) -> Vec<Result<RunSummary, CliError>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = exps
            .iter()
            .map(|e| s.spawn(move || run_experiment(e, out)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(CliError::Io("worker panicked".into())))
            })
            .collect()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub seed: u64,
    pub count: usize,
    pub max_two_mode_distance: f64,
    pub max_sk_unitarity: f64,
    pub max_sk_residual: f64,
    pub pass: bool,
}

/// Seeded sweep: two-mode closed form against the generic chain, and the
/// dressing unitary on random stage parameters.
pub fn property_check(seed: u64, count: usize) -> Result<CheckSummary, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dist = 0.0f64;
    let mut unit = 0.0f64;
    let mut resid = 0.0f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    for k in 0..count {
        let m2 = rng.gen_range(1..=3);
        let mut om = || Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..two_pi));
        let omega = vec![om(), om()];
        let d0 = m2 as f64 + rng.gen_range(-1.0..1.0);
        let cfg = polydress::ModeConfig64::new(rng.gen_range(0..6), vec![0, m2], omega, d0)?;
        let a = undress(&run_cascade(&cfg)?);
        let b = two_mode_u0(&cfg)?;
        dist = dist.max(a.u.distance(&b.u));

        let chi = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..two_pi));
        let p = StageParams64::new(
            k + 1,
            rng.gen_range(-2.0..2.0),
            chi,
            rng.gen_range(-5..=5),
            1,
        );
        let r = verify_sk(&p, 30);
        unit = unit.max(r.unitarity);
        resid = resid.max(r.residual);
    }
    Ok(CheckSummary {
        seed,
        count,
        max_two_mode_distance: dist,
        max_sk_unitarity: unit,
        max_sk_residual: resid,
        pass: dist <= 1e-12 && unit <= 1e-10 && resid <= 1e-10,
    })
}
