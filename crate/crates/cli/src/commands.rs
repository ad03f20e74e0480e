//! One function per subcommand. Each returns the text printed on stdout.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use deadwater::analysis::{convergence_order, relative_l2_error, spacetime_spectrum};
use deadwater::solver::{constant_speed_solution, stationary_state};
use deadwater::spectral::{recover_eta, SpectralTransform};
use deadwater::tuning::tune_epsilon;
use deadwater::{Error, Scenario, SpeedProfile, TuneOutcome, WakeRegime};
use serde_json::json;

use crate::config::{EpsilonChoice, ScenarioConfig};
use crate::output::Emitter;

/// Fixed epsilon, or the tuned one for `"auto"`.
fn resolve_epsilon(cfg: &ScenarioConfig) -> Result<(f64, Option<TuneOutcome<f64>>)> {
    match cfg.epsilon {
        EpsilonChoice::Fixed(eps) => Ok((eps, None)),
        EpsilonChoice::Auto => {
            let tuning = cfg.tuning.as_ref().context("epsilon = \"auto\" needs [tuning]")?;
            let outcome = tune_epsilon(tuning, &cfg.scenario, cfg.scenario.t_final)?;
            Ok((outcome.epsilon_star, Some(outcome)))
        }
    }
}

fn scenario_with(cfg: &ScenarioConfig, epsilon: f64) -> Scenario<f64> {
    let mut sc = cfg.scenario.clone();
    sc.epsilon = epsilon;
    sc
}

fn tuned_json(outcome: &Option<TuneOutcome<f64>>) -> serde_json::Value {
    match outcome {
        Some(o) => json!({ "epsilon_star": o.epsilon_star, "iterations": o.iterations }),
        None => serde_json::Value::Null,
    }
}

pub fn params(cfg: &ScenarioConfig) -> Result<String> {
    let p = &cfg.scenario.params;
    let speed = cfg.scenario.profile.max_speed();
    let geometry = p.wake_geometry(speed)?;
    let mut out = String::new();
    writeln!(out, "critical_speed_m_per_s = {:.6}", p.critical_speed())?;
    writeln!(out, "ship_speed_m_per_s = {speed}")?;
    writeln!(out, "froude_number = {:.6}", speed / p.critical_speed())?;
    writeln!(out, "regime = {:?}", geometry.regime)?;
    match geometry.regime {
        WakeRegime::Subcritical => {
            let k = geometry.transverse_wavenumber.expect("subcritical wavenumber");
            writeln!(out, "transverse_wavenumber_cycles_per_m = {k:.6}")?;
            writeln!(out, "transverse_wavelength_m = {:.6}", 1.0 / k)?;
        }
        WakeRegime::Supercritical => {
            let phi = geometry.limit_angle.expect("supercritical angle");
            writeln!(out, "limit_angle_rad = {phi:.6}")?;
            writeln!(out, "limit_angle_deg = {:.4}", phi.to_degrees())?;
        }
        WakeRegime::Critical => {}
    }
    Ok(out)
}

pub fn steady(cfg: &ScenarioConfig, dir: &Path) -> Result<String> {
    let (eps, tuned) = resolve_epsilon(cfg)?;
    let sc = &cfg.scenario;
    let speed = sc.profile.max_speed();
    let mu = stationary_state(&sc.params, &sc.shape, speed, eps, &sc.grid, 0.0)?;
    let (eta, residue) = recover_eta(&mu, &SpectralTransform::new(sc.grid))?;

    let mut em = Emitter::new(dir, &cfg.hash)?;
    em.eta("steady_eta", &eta, 0.0, eps)?;
    em.spectral("steady_mu", &mu, 0.0, eps)?;
    let manifest = em.finish(
        "steady",
        json!({
            "epsilon": eps,
            "speed": speed,
            "imag_residue": residue,
            "tuning": tuned_json(&tuned),
        }),
    )?;
    Ok(format!(
        "steady state at speed {speed} m/s, epsilon {eps:e}\nwrote {}\n",
        manifest.display()
    ))
}

pub fn simulate(cfg: &ScenarioConfig, dir: &Path) -> Result<String> {
    let (eps, tuned) = resolve_epsilon(cfg)?;
    let sc = scenario_with(cfg, eps);
    let output = sc.run()?;

    let mut em = Emitter::new(dir, &cfg.hash)?;
    let mut rows = Vec::new();
    for snap in &output.snapshots {
        em.eta(&format!("eta_{:06}", snap.step), &snap.eta, snap.t, eps)?;
        rows.push(vec![snap.step as f64, snap.t, sc.profile.position(snap.t), snap.imag_residue]);
    }
    em.csv("snapshots.csv", &["step", "t_s", "ship_x_m", "imag_residue"], rows)?;
    let fin = &output.final_state;
    em.spectral("mu_final", &fin.mu, fin.t, eps)?;
    let manifest = em.finish(
        "simulate",
        json!({
            "metadata": output.metadata,
            "snapshots": output.snapshots.len(),
            "max_imag_residue": output.max_imag_residue(),
            "tuning": tuned_json(&tuned),
        }),
    )?;
    Ok(format!(
        "{} steps to t = {} s, {} snapshots, max imaginary residue {:.3e}\nwrote {}\n",
        output.metadata.steps,
        fin.t,
        output.snapshots.len(),
        output.max_imag_residue(),
        manifest.display()
    ))
}

pub fn tune(cfg: &ScenarioConfig, dir: &Path) -> Result<String> {
    let tuning = cfg
        .tuning
        .as_ref()
        .context("config key `tuning`: tune-epsilon needs a [tuning] table")?;
    let mut em = Emitter::new(dir, &cfg.hash)?;
    let header = ["n", "epsilon_per_s", "measure_m"];
    let rows = |trace: &[(f64, f64)]| -> Vec<Vec<f64>> {
        trace
            .iter()
            .enumerate()
            .map(|(n, &(e, m))| vec![n as f64, e, m])
            .collect()
    };
    match tune_epsilon(tuning, &cfg.scenario, cfg.scenario.t_final) {
        Ok(outcome) => {
            em.csv("tuning_trace.csv", &header, rows(&outcome.trace))?;
            let manifest = em.finish(
                "tune-epsilon",
                json!({
                    "epsilon_star": outcome.epsilon_star,
                    "iterations": outcome.iterations,
                    "delta": tuning.delta,
                    "converged": true,
                }),
            )?;
            Ok(format!(
                "epsilon_star = {:e} after {} simulations\nwrote {}\n",
                outcome.epsilon_star,
                outcome.iterations,
                manifest.display()
            ))
        }
        Err(Error::TuningFailed { trace }) => {
            em.csv("tuning_trace.csv", &header, rows(&trace))?;
            em.finish("tune-epsilon", json!({ "converged": false, "iterations": trace.len() }))?;
            bail!("no epsilon met delta = {:e} within {} iterations", tuning.delta, trace.len())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn convergence(cfg: &ScenarioConfig, dir: &Path) -> Result<String> {
    let SpeedProfile::Constant { speed } = cfg.scenario.profile else {
        bail!("config key `profile.kind`: convergence needs a constant speed (the oracle is exact only there)");
    };
    let (eps, tuned) = resolve_epsilon(cfg)?;
    let base = scenario_with(cfg, eps);
    let transform = SpectralTransform::new(base.grid);
    let mu0 = base.initial_state(eps)?.mu;

    let mut points = Vec::with_capacity(cfg.convergence_levels);
    for level in 0..cfg.convergence_levels {
        let mut sc = base.clone();
        sc.integrator.dt = base.integrator.dt / f64::powi(2.0, level as i32);
        sc.integrator.snapshot_every = usize::MAX;
        let out = sc.run()?;
        let t = out.final_state.t;
        let exact = constant_speed_solution(&sc.params, &sc.shape, speed, eps, &sc.grid, &mu0, t)?;
        let (eta_exact, _) = recover_eta(&exact, &transform)?;
        let (eta, _) = recover_eta(&out.final_state.mu, &transform)?;
        points.push((sc.integrator.dt, relative_l2_error(&eta, &eta_exact)?));
    }
    let fit = convergence_order(&points)?;

    let mut em = Emitter::new(dir, &cfg.hash)?;
    em.csv(
        "convergence.csv",
        &["dt_s", "relative_l2_error"],
        points.iter().map(|&(d, e)| vec![d, e]),
    )?;
    let manifest = em.finish(
        "convergence",
        json!({
            "rule": base.integrator.rule,
            "epsilon": eps,
            "order": fit.slope,
            "intercept": fit.intercept,
            "residual": fit.residual,
            "tuning": tuned_json(&tuned),
        }),
    )?;
    let mut out = String::new();
    for (d, e) in &points {
        writeln!(out, "dt = {d:<10} error = {e:.6e}")?;
    }
    writeln!(out, "order = {:.4} ({} rule)", fit.slope, base.integrator.rule.name())?;
    writeln!(out, "wrote {}", manifest.display())?;
    Ok(out)
}

pub fn spectrum(cfg: &ScenarioConfig, dir: &Path) -> Result<String> {
    if cfg.scenario.grid.is_2d() {
        bail!("config key `grid`: spectrum needs a 1D grid");
    }
    let (eps, tuned) = resolve_epsilon(cfg)?;
    let sc = scenario_with(cfg, eps);
    let output = sc.run()?;
    let u = sc.profile.max_speed();
    let spec = spacetime_spectrum(&output.snapshots, &sc.params, u)?;

    let mut em = Emitter::new(dir, &cfg.hash)?;
    em.csv(
        "spectrum_axes_kappa.csv",
        &["kappa_cycles_per_m", "dispersion_hz", "speed_line_hz"],
        (0..spec.kappa.len()).map(|i| vec![spec.kappa[i], spec.dispersion[i], spec.speed_line[i]]),
    )?;
    em.csv("spectrum_axes_freq.csv", &["freq_hz"], spec.freq.iter().map(|&f| vec![f]))?;
    em.csv(
        "spectrum_ridge.csv",
        &["kappa_cycles_per_m", "ridge_freq_hz"],
        spec.ridge().into_iter().map(|(k, f)| vec![k, f]),
    )?;
    let mut meta = serde_json::Map::new();
    meta.insert("row_axis".into(), json!("freq_hz"));
    meta.insert("col_axis".into(), json!("kappa_cycles_per_m"));
    meta.insert("dk".into(), json!(spec.dk));
    meta.insert("df".into(), json!(spec.df));
    em.matrix("spectrum_magnitude", spec.freq.len(), spec.kappa.len(), &spec.magnitude, meta)?;

    let (pk, pf) = spec.peak();
    let crossings = spec.speed_crossings(u);
    let manifest = em.finish(
        "spectrum",
        json!({
            "epsilon": eps,
            "speed": u,
            "snapshots": output.snapshots.len(),
            "peak": { "kappa": pk, "freq": pf },
            "speed_crossings": crossings,
            "tuning": tuned_json(&tuned),
        }),
    )?;
    let mut out = String::new();
    writeln!(out, "{} snapshots, {} x {} spectrum", output.snapshots.len(), spec.freq.len(), spec.kappa.len())?;
    writeln!(out, "peak at kappa = {pk:.5} cycles/m, f = {pf:.5} Hz")?;
    writeln!(out, "ridge leaves f = kappa*U at kappa = {crossings:?}")?;
    writeln!(out, "wrote {}", manifest.display())?;
    Ok(out)
}
