//! Experiment orchestration: manifests, presets, persistence.
//!
//! Every run is described by a JSON manifest (kind + per-kind config + seed +
//! output directory). Outputs are written into the run directory: the echoed
//! manifest (with crate version and a SHA-256 of the canonical config),
//! trajectory CSVs, and report JSONs. Given the same manifest and seed the
//! CSV/JSON artifacts are bit-identical; wall-clock timing goes to a separate
//! `timing.json` so the deterministic artifacts stay byte-stable.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dichotomy::{classify_report, scattering_monitor, ClassificationResult, SetLabel};
use crate::error::{Error, Result};
use crate::evolution::{propagate, SimConfig, Termination, TrajectoryLog};
use crate::functionals::report;
use crate::grid::{RadialField, RadialGrid};
use crate::ground_state::{minimize_d, DescentConfig};
use crate::inequalities::{default_cases, recorded_constant, sweep_report, SweepReport};

/// Gaussian initial datum A·e^{−r²/(2w²)}·e^{iβr²}.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InitialData {
    pub amplitude: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub chirp: f64,
}

fn default_width() -> f64 {
    1.0
}

impl InitialData {
    pub fn build(&self, grid: &Arc<RadialGrid>) -> Result<RadialField> {
        if self.amplitude == 0.0 {
            return Err(Error::config("initial amplitude must be nonzero"));
        }
        if !(self.width > 0.0) {
            return Err(Error::config("initial width must be positive"));
        }
        let (a, w, b) = (self.amplitude, self.width, self.chirp);
        RadialField::from_fn(grid.clone(), move |r| {
            num_complex::Complex64::from_polar(a * (-r * r / (2.0 * w * w)).exp(), b * r * r)
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulateConfig {
    pub sim: SimConfig,
    pub initial: InitialData,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroundstateConfig {
    pub p: f64,
    pub n: usize,
    pub r_max: f64,
    #[serde(default)]
    pub descent: Option<DescentConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassifyConfig {
    pub p: f64,
    pub n: usize,
    pub r_max: f64,
    pub initial: InitialData,
    /// Ground-state reference; when absent it is computed (and cached in the
    /// run directory as d_cache.json).
    #[serde(default)]
    pub d_reference: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DichotomyConfig {
    pub sim: SimConfig,
    pub amplitudes: Vec<f64>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub d_reference: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InequalitiesConfig {
    pub n: usize,
    pub r_max: f64,
    pub n_fields: usize,
}

/// Experiment kind with its per-kind payload.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "experiment", content = "config", rename_all = "snake_case")]
pub enum ExperimentKind {
    Simulate(SimulateConfig),
    Groundstate(GroundstateConfig),
    Classify(ClassifyConfig),
    Dichotomy(DichotomyConfig),
    Inequalities(InequalitiesConfig),
    ScatterCheck(SimulateConfig),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentManifest {
    #[serde(flatten)]
    pub kind: ExperimentKind,
    pub seed: u64,
    pub out: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl ExperimentManifest {
    pub fn new(kind: ExperimentKind, seed: u64, out: impl Into<PathBuf>) -> Self {
        ExperimentManifest { kind, seed, out: out.into(), version: None, config_hash: None }
    }

    /// SHA-256 of the canonical config JSON (kind + seed).
    pub fn compute_hash(&self) -> Result<String> {
        let canon = serde_json::to_string(&(&self.kind, self.seed))?;
        let mut h = Sha256::new();
        h.update(canon.as_bytes());
        Ok(format!("{:x}", h.finalize()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: ExperimentManifest =
            serde_json::from_str(text).map_err(|e| Error::config(format!("manifest: {e}")))?;
        Ok(m)
    }
}

/// Everything `run` leaves behind, summarized for the caller.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub kind: String,
    pub checks_passed: bool,
    pub notes: Vec<String>,
    pub artifacts: Vec<String>,
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<String> {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value)?;
    fs::write(&path, text + "\n")?;
    Ok(name.to_string())
}

/// Trajectory CSV: one row per logged step. The M column is the scheme's
/// exactly conserved discrete mass.
pub fn write_trajectory_csv(dir: &Path, name: &str, log: &TrajectoryLog) -> Result<String> {
    let mut out = String::from(
        "t,M,E,S,K,grad_norm,sup_norm,virial,morawetz_pnorm,morawetz_q,morawetz_a0\n",
    );
    for i in 0..log.times.len() {
        let r = &log.reports[i];
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            log.times[i],
            log.conserved_mass[i],
            r.energy,
            r.action,
            r.nehari,
            log.grad_norm[i],
            log.sup_norm[i],
            log.virial[i],
            log.morawetz_pnorm[i],
            log.morawetz_q[i],
            log.morawetz_a0[i],
        ));
    }
    fs::write(dir.join(name), out)?;
    Ok(name.to_string())
}

fn write_profile_csv(dir: &Path, name: &str, u: &RadialField) -> Result<String> {
    let mut out = String::from("r,value\n");
    for (&r, z) in u.grid().nodes().iter().zip(u.values()) {
        out.push_str(&format!("{},{}\n", r, z.re));
    }
    fs::write(dir.join(name), out)?;
    Ok(name.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateSummary {
    pub termination: Termination,
    pub trigger_time: Option<f64>,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub k_min: f64,
    pub logged_points: usize,
}

fn summarize_log(log: &TrajectoryLog) -> SimulateSummary {
    let m0 = log.conserved_mass[0];
    let mass_drift = log
        .conserved_mass
        .iter()
        .map(|m| (m - m0).abs())
        .fold(0.0, f64::max)
        / m0.abs().max(f64::MIN_POSITIVE);
    let e0 = log.reports[0].energy;
    let energy_drift = log
        .reports
        .iter()
        .map(|r| (r.energy - e0).abs())
        .fold(0.0, f64::max)
        / e0.abs().max(f64::MIN_POSITIVE);
    let k_min = log.reports.iter().map(|r| r.nehari).fold(f64::INFINITY, f64::min);
    SimulateSummary {
        termination: log.termination,
        trigger_time: log.trigger_time,
        mass_drift,
        energy_drift,
        k_min,
        logged_points: log.times.len(),
    }
}

fn run_simulate(cfg: &SimulateConfig, dir: &Path, check_scatter: bool) -> Result<RunSummary> {
    cfg.sim.validate()?;
    let grid = Arc::new(RadialGrid::new(cfg.sim.n, cfg.sim.r_max)?);
    let u0 = cfg.initial.build(&grid)?;
    let log = propagate(&u0, &cfg.sim)?;
    let mut artifacts = vec![write_trajectory_csv(dir, "trajectory.csv", &log)?];
    let summary = summarize_log(&log);
    artifacts.push(write_json(dir, "run.json", &summary)?);
    write_json(dir, "timing.json", &serde_json::json!({ "wall_seconds": log.wall_seconds }))?;

    let mut notes = vec![format!("termination: {:?}", log.termination)];
    let mut ok = log.termination != Termination::BoundaryContaminated;
    if check_scatter {
        if log.termination == Termination::Completed && !cfg.sim.snapshot_times.is_empty() {
            let mora =
                crate::dichotomy::morawetz_check(&log, cfg.sim.p, &cfg.sim.snapshot_times)?;
            let mut ladder = String::from("T,accumulator,ratio\n");
            for ((t, acc), ratio) in
                mora.horizons.iter().zip(&mora.accumulators).zip(&mora.ratios)
            {
                ladder.push_str(&format!("{},{},{}\n", t, acc, ratio));
            }
            fs::write(dir.join("morawetz_ladder.csv"), ladder)?;
            artifacts.push("morawetz_ladder.csv".into());
            artifacts.push(write_json(dir, "morawetz.json", &mora)?);
        }
        let rep = scattering_monitor(&log, cfg.sim.dt)?;
        notes.push(format!(
            "scattering: flag={} final_increment={:e} threshold={:e}",
            rep.scattering_flag, rep.final_increment, rep.threshold
        ));
        ok = ok && rep.scattering_flag;
        artifacts.push(write_json(dir, "scattering.json", &rep)?);
    }
    Ok(RunSummary {
        kind: if check_scatter { "scatter_check" } else { "simulate" }.into(),
        checks_passed: ok,
        notes,
        artifacts,
    })
}

fn run_groundstate(cfg: &GroundstateConfig, dir: &Path, seed: u64) -> Result<RunSummary> {
    let grid = Arc::new(RadialGrid::new(cfg.n, cfg.r_max)?);
    let dc = DescentConfig { seed, ..cfg.descent.clone().unwrap_or_default() };
    let gs = minimize_d(cfg.p, &grid, &dc)?;
    let mut artifacts = vec![write_json(dir, "groundstate.json", &gs.result)?];
    artifacts.push(write_profile_csv(dir, "profile.csv", &gs.profile)?);
    let r = &gs.result;
    let ok = r.converged && r.d_value > 0.0 && r.residual_k < 1e-8;
    Ok(RunSummary {
        kind: "groundstate".into(),
        checks_passed: ok,
        notes: vec![format!("d = {} ({} iterations)", r.d_value, r.iterations)],
        artifacts,
    })
}

fn cached_d(dir: &Path, p: f64, n: usize, r_max: f64, seed: u64) -> Result<f64> {
    #[derive(Serialize, Deserialize)]
    struct CacheEntry {
        p: f64,
        n: usize,
        r_max: f64,
        d: f64,
    }
    let cache_path = dir.join("d_cache.json");
    if let Ok(text) = fs::read_to_string(&cache_path) {
        if let Ok(entries) = serde_json::from_str::<Vec<CacheEntry>>(&text) {
            for e in &entries {
                if e.p == p && e.n == n && e.r_max == r_max {
                    return Ok(e.d);
                }
            }
        }
    }
    let grid = Arc::new(RadialGrid::new(n, r_max)?);
    let dc = DescentConfig { seed, ..Default::default() };
    let gs = minimize_d(p, &grid, &dc)?;
    let entry = CacheEntry { p, n, r_max, d: gs.result.d_value };
    let mut entries: Vec<CacheEntry> = fs::read_to_string(&cache_path)
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .unwrap_or_default();
    entries.push(entry);
    fs::write(&cache_path, serde_json::to_string_pretty(&entries)?)?;
    Ok(gs.result.d_value)
}

fn run_classify(cfg: &ClassifyConfig, dir: &Path, seed: u64) -> Result<RunSummary> {
    let grid = Arc::new(RadialGrid::new(cfg.n, cfg.r_max)?);
    let u0 = cfg.initial.build(&grid)?;
    let d = match cfg.d_reference {
        Some(d) => d,
        None => cached_d(dir, cfg.p, cfg.n, cfg.r_max, seed)?,
    };
    let c: ClassificationResult = crate::dichotomy::classify(&u0, cfg.p, d)?;
    let artifacts = vec![write_json(dir, "classification.json", &c)?];
    Ok(RunSummary {
        kind: "classify".into(),
        checks_passed: true,
        notes: vec![format!("label: {:?} (S = {}, K = {})", c.set_label, c.s_value, c.k_value)],
        artifacts,
    })
}

/// One row of the dichotomy summary table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DichotomyRow {
    pub amplitude: f64,
    pub s_value: f64,
    pub k_value: f64,
    pub label: SetLabel,
    pub outcome: String,
    pub trigger_time: Option<f64>,
    pub scattered: Option<bool>,
    pub consistent: bool,
}

/// Classify and propagate each amplitude of the ladder; outcomes must agree
/// with the labels for every non-boundary row.
pub fn dichotomy_suite(cfg: &DichotomyConfig, seed: u64, dir: &Path) -> Result<Vec<DichotomyRow>> {
    cfg.sim.validate()?;
    let grid = Arc::new(RadialGrid::new(cfg.sim.n, cfg.sim.r_max)?);
    let d = match cfg.d_reference {
        Some(d) => d,
        None => cached_d(dir, cfg.sim.p, cfg.sim.n, cfg.sim.r_max, seed)?,
    };
    use rayon::prelude::*;
    let rows: Vec<DichotomyRow> = cfg
        .amplitudes
        .par_iter()
        .map(|&a| -> Result<DichotomyRow> {
            if a == 0.0 {
                return Err(Error::contract("dichotomy ladder: zero amplitude is not a field"));
            }
            let init = InitialData { amplitude: a, width: cfg.width, chirp: 0.0 };
            let u0 = init.build(&grid)?;
            let rep = report(&u0, cfg.sim.p)?;
            let class = classify_report(&rep, d)?;
            if class.set_label == SetLabel::OnBoundary {
                return Ok(DichotomyRow {
                    amplitude: a,
                    s_value: class.s_value,
                    k_value: class.k_value,
                    label: class.set_label,
                    outcome: "skipped (boundary data)".into(),
                    trigger_time: None,
                    scattered: None,
                    consistent: true,
                });
            }
            let log = propagate(&u0, &cfg.sim)?;
            let scattered = if !cfg.sim.snapshot_times.is_empty()
                && log.termination == Termination::Completed
            {
                Some(scattering_monitor(&log, cfg.sim.dt)?.scattering_flag)
            } else {
                None
            };
            let outcome = match log.termination {
                Termination::BlowupDetected => {
                    format!("blowup_detected(t={})", log.trigger_time.unwrap_or(f64::NAN))
                }
                Termination::BoundaryContaminated => "boundary_contaminated".into(),
                Termination::Completed => {
                    if scattered == Some(true) {
                        "scattered".into()
                    } else {
                        "completed".into()
                    }
                }
            };
            let consistent = match class.set_label {
                SetLabel::KMinus => log.termination == Termination::BlowupDetected,
                SetLabel::KPlus => log.termination == Termination::Completed,
                _ => true,
            };
            Ok(DichotomyRow {
                amplitude: a,
                s_value: class.s_value,
                k_value: class.k_value,
                label: class.set_label,
                outcome,
                trigger_time: log.trigger_time,
                scattered,
                consistent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

fn write_dichotomy_csv(dir: &Path, rows: &[DichotomyRow]) -> Result<String> {
    let mut out = String::from("amplitude,S,K,label,outcome,trigger_time,scattered\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:?},{},{},{}\n",
            r.amplitude,
            r.s_value,
            r.k_value,
            r.label,
            r.outcome,
            r.trigger_time.map(|t| t.to_string()).unwrap_or_default(),
            r.scattered.map(|s| s.to_string()).unwrap_or_default(),
        ));
    }
    fs::write(dir.join("dichotomy.csv"), out)?;
    Ok("dichotomy.csv".into())
}

fn run_inequalities(cfg: &InequalitiesConfig, dir: &Path, seed: u64) -> Result<RunSummary> {
    if cfg.n_fields == 0 {
        return Err(Error::config("inequalities: n_fields must be positive"));
    }
    let grid = Arc::new(RadialGrid::new(cfg.n, cfg.r_max)?);
    let mut reports: Vec<SweepReport> = Vec::new();
    let mut violations = Vec::new();
    for case in default_cases() {
        let rep = sweep_report(&case, &grid, cfg.n_fields, seed)?;
        if let Some(limit) = recorded_constant(&case) {
            if rep.max_ratio > limit * (1.0 + 1e-6) {
                violations.push(format!(
                    "{:?}: max ratio {} exceeds recorded constant {}",
                    case.kind, rep.max_ratio, limit
                ));
            }
        }
        reports.push(rep);
    }
    let artifacts = vec![write_json(dir, "inequalities.json", &reports)?];
    Ok(RunSummary {
        kind: "inequalities".into(),
        checks_passed: violations.is_empty(),
        notes: if violations.is_empty() {
            vec![format!("{} cases, no violations", reports.len())]
        } else {
            violations
        },
        artifacts,
    })
}

/// Execute a manifest; artifacts land in `manifest.out`.
pub fn run(manifest: &ExperimentManifest) -> Result<RunSummary> {
    let dir = manifest.out.clone();
    fs::create_dir_all(&dir)?;
    let mut echoed = manifest.clone();
    echoed.version = Some(env!("CARGO_PKG_VERSION").to_string());
    echoed.config_hash = Some(manifest.compute_hash()?);
    write_json(&dir, "manifest.json", &echoed)?;

    let mut summary = match &manifest.kind {
        ExperimentKind::Simulate(cfg) => run_simulate(cfg, &dir, false)?,
        ExperimentKind::ScatterCheck(cfg) => run_simulate(cfg, &dir, true)?,
        ExperimentKind::Groundstate(cfg) => run_groundstate(cfg, &dir, manifest.seed)?,
        ExperimentKind::Classify(cfg) => run_classify(cfg, &dir, manifest.seed)?,
        ExperimentKind::Dichotomy(cfg) => {
            let rows = dichotomy_suite(cfg, manifest.seed, &dir)?;
            let mut artifacts = vec![write_dichotomy_csv(&dir, &rows)?];
            artifacts.push(write_json(&dir, "dichotomy.json", &rows)?);
            let ok = rows.iter().all(|r| r.consistent);
            RunSummary {
                kind: "dichotomy".into(),
                checks_passed: ok,
                notes: rows
                    .iter()
                    .map(|r| format!("A = {}: {:?} -> {}", r.amplitude, r.label, r.outcome))
                    .collect(),
                artifacts,
            }
        }
        ExperimentKind::Inequalities(cfg) => run_inequalities(cfg, &dir, manifest.seed)?,
    };
    summary.artifacts.push("manifest.json".into());
    write_json(&dir, "summary.json", &summary)?;
    Ok(summary)
}

/// Named presets: one per bundled desk experiment.
pub fn preset(name: &str) -> Option<ExperimentKind> {
    let sim_defaults = |p: f64, n: usize, r_max: f64, dt: f64, t_end: f64| SimConfig {
        p,
        dt,
        t_end,
        n,
        r_max,
        nonlinear_on: true,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 1e-8,
        log_stride: 50,
        virial_big_r: None,
        snapshot_times: vec![],
    };
    match name {
        // linear propagator against the closed-form Gaussian
        "free-gaussian" => {
            let mut sim = sim_defaults(5.0, 2048, 64.0, 1e-3, 1.0);
            sim.nonlinear_on = false;
            Some(ExperimentKind::Simulate(SimulateConfig {
                sim,
                initial: InitialData { amplitude: 1.0, width: 1.0, chirp: 0.0 },
            }))
        }
        // 𝒦⁺ conservation run (criterion: mass/energy drift); the box is
        // twice the desk-scale default so the fast radiation tail stays
        // under the 1e−8 boundary-mass monitor until t = 5
        "kplus-conservation" => Some(ExperimentKind::Simulate(SimulateConfig {
            sim: sim_defaults(5.0, 8192, 128.0, 4e-3, 5.0),
            initial: InitialData { amplitude: 1.15, width: 1.0, chirp: 0.0 },
        })),
        // same run at half the step (energy-drift halving pair)
        "kplus-conservation-halfdt" => Some(ExperimentKind::Simulate(SimulateConfig {
            sim: sim_defaults(5.0, 8192, 128.0, 2e-3, 5.0),
            initial: InitialData { amplitude: 1.15, width: 1.0, chirp: 0.0 },
        })),
        // small 𝒦⁺ datum followed to t = 25 with scattering checkpoints
        "kplus-scatter" => {
            let mut sim = sim_defaults(5.0, 4096, 128.0, 2e-3, 25.0);
            sim.boundary_mass_tol = 1e-5;
            sim.snapshot_times = vec![5.0, 10.0, 15.0, 20.0, 25.0];
            Some(ExperimentKind::ScatterCheck(SimulateConfig {
                sim,
                initial: InitialData { amplitude: 0.5, width: 1.5, chirp: 0.0 },
            }))
        }
        // 𝒦⁻ datum: finite-time blow-up detection
        "kminus-blowup" => Some(ExperimentKind::Simulate(SimulateConfig {
            sim: sim_defaults(5.0, 2048, 32.0, 1e-3, 5.0),
            initial: InitialData { amplitude: 2.0, width: 1.0, chirp: 0.0 },
        })),
        // 𝒦⁻ at p = 4.5 (blow-up covers 3 < p ≤ 5)
        "kminus-blowup-p45" => Some(ExperimentKind::Simulate(SimulateConfig {
            sim: sim_defaults(4.5, 2048, 32.0, 1e-3, 5.0),
            initial: InitialData { amplitude: 2.2, width: 1.0, chirp: 0.0 },
        })),
        "groundstate-p5" => Some(ExperimentKind::Groundstate(GroundstateConfig {
            p: 5.0,
            n: 2048,
            r_max: 32.0,
            descent: None,
        })),
        // tiny datum classified against the cached p = 5 threshold
        "classify-tiny" => Some(ExperimentKind::Classify(ClassifyConfig {
            p: 5.0,
            n: 2048,
            r_max: 32.0,
            initial: InitialData { amplitude: 0.1, width: 1.0, chirp: 0.0 },
            d_reference: Some(4.0900),
        })),
        // amplitude ladder bracketing the threshold; the ladder's width-1
        // data radiate harder than the scatter preset, so the box is doubled
        // again to keep the global rows clean through t = 25
        "dichotomy-p5" => {
            let mut sim = sim_defaults(5.0, 8192, 256.0, 2e-3, 25.0);
            sim.boundary_mass_tol = 1e-5;
            sim.snapshot_times = vec![5.0, 10.0, 15.0, 20.0, 25.0];
            Some(ExperimentKind::Dichotomy(DichotomyConfig {
                sim,
                amplitudes: vec![0.5, 1.1, 1.6, 2.0],
                width: 1.0,
                d_reference: Some(4.0900),
            }))
        }
        "inequalities-default" => Some(ExperimentKind::Inequalities(InequalitiesConfig {
            n: 2048,
            r_max: 32.0,
            n_fields: 100,
        })),
        _ => None,
    }
}

pub fn preset_names() -> Vec<&'static str> {
    vec![
        "free-gaussian",
        "kplus-conservation",
        "kplus-conservation-halfdt",
        "kplus-scatter",
        "kminus-blowup",
        "kminus-blowup-p45",
        "groundstate-p5",
        "classify-tiny",
        "dichotomy-p5",
        "inequalities-default",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_roundtrip_is_bit_identical() {
        let kind = preset("kminus-blowup").unwrap();
        let mut m = ExperimentManifest::new(kind, 42, "runs/x");
        m.version = Some("0.1.0".into());
        m.config_hash = Some(m.compute_hash().unwrap());
        let text = serde_json::to_string_pretty(&m).unwrap();
        let back = ExperimentManifest::from_json(&text).unwrap();
        let text2 = serde_json::to_string_pretty(&back).unwrap();
        assert_eq!(text, text2);
        assert_eq!(m, back);
    }

    #[test]
    fn all_presets_parse() {
        for name in preset_names() {
            assert!(preset(name).is_some(), "{name}");
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn empty_config_is_usage_error() {
        assert!(matches!(ExperimentManifest::from_json(""), Err(Error::Config(_))));
        assert!(matches!(ExperimentManifest::from_json("{}"), Err(Error::Config(_))));
    }

    #[test]
    fn zero_amplitude_rejected() {
        let g = Arc::new(RadialGrid::new(64, 8.0).unwrap());
        let init = InitialData { amplitude: 0.0, width: 1.0, chirp: 0.0 };
        assert!(init.build(&g).is_err());
    }

    #[test]
    fn simulate_on_disk_deterministic() {
        let tmp = std::env::temp_dir().join(format!("cssrad-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&tmp);
        let sim = SimConfig {
            p: 5.0,
            dt: 5e-3,
            t_end: 0.1,
            n: 128,
            r_max: 16.0,
            nonlinear_on: true,
            blowup_gradient_factor: 10.0,
            boundary_mass_tol: 1e-6,
            log_stride: 5,
            virial_big_r: None,
            snapshot_times: vec![],
        };
        sim.validate().unwrap();
        let kind = ExperimentKind::Simulate(SimulateConfig {
            sim,
            initial: InitialData { amplitude: 0.4, width: 1.0, chirp: 0.0 },
        });
        let m1 = ExperimentManifest::new(kind.clone(), 3, tmp.join("a"));
        let m2 = ExperimentManifest::new(kind, 3, tmp.join("b"));
        run(&m1).unwrap();
        run(&m2).unwrap();
        let csv1 = fs::read_to_string(tmp.join("a/trajectory.csv")).unwrap();
        let csv2 = fs::read_to_string(tmp.join("b/trajectory.csv")).unwrap();
        assert_eq!(csv1, csv2);
        let j1 = fs::read_to_string(tmp.join("a/run.json")).unwrap();
        let j2 = fs::read_to_string(tmp.join("b/run.json")).unwrap();
        assert_eq!(j1, j2);
        let _ = fs::remove_dir_all(&tmp);
    }
}
