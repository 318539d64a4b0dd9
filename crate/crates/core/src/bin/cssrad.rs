//! Thin CLI over the experiment runner: subcommand + preset/config file +
//! numeric overrides. Exit codes: 0 success, 2 usage, 3 runtime/IO,
//! 4 acceptance-check failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cssrad::experiment::{self, ExperimentKind, ExperimentManifest};
use cssrad::Error;

#[derive(Parser)]
#[command(name = "cssrad", version, about = "Radial Chern-Simons-Schrödinger laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Start from a named preset (see `--preset help` for the list)
    #[arg(long)]
    preset: Option<String>,
    /// JSON manifest file (overrides the preset)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output directory of the run
    #[arg(long, default_value = "runs/out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate an initial datum and log conservation diagnostics
    Simulate(Common),
    /// Compute the ground-state threshold d
    Groundstate(Common),
    /// Classify an initial datum against the threshold
    Classify(Common),
    /// Run an amplitude ladder across the threshold
    Dichotomy(Common),
    /// Sweep the functional-inequality harness
    Inequalities(Common),
    /// Propagate and run the free-profile scattering monitor
    ScatterCheck(Common),
}

fn default_kind(cmd: &Command) -> &'static str {
    match cmd {
        Command::Simulate(_) => "kplus-conservation",
        Command::Groundstate(_) => "groundstate-p5",
        Command::Classify(_) => "classify-tiny",
        Command::Dichotomy(_) => "dichotomy-p5",
        Command::Inequalities(_) => "inequalities-default",
        Command::ScatterCheck(_) => "kplus-scatter",
    }
}

fn expects(kind: &ExperimentKind, cmd: &Command) -> bool {
    matches!(
        (kind, cmd),
        (ExperimentKind::Simulate(_), Command::Simulate(_))
            | (ExperimentKind::Groundstate(_), Command::Groundstate(_))
            | (ExperimentKind::Classify(_), Command::Classify(_))
            | (ExperimentKind::Dichotomy(_), Command::Dichotomy(_))
            | (ExperimentKind::Inequalities(_), Command::Inequalities(_))
            | (ExperimentKind::ScatterCheck(_), Command::ScatterCheck(_))
    )
}

fn apply_overrides(kind: &mut ExperimentKind, c: &Common) {
    let sim_over = |sim: &mut cssrad::SimConfig, c: &Common| {
        if let Some(p) = c.p {
            sim.p = p;
        }
        if let Some(n) = c.n {
            sim.n = n;
        }
        if let Some(r) = c.rmax {
            sim.r_max = r;
        }
        if let Some(dt) = c.dt {
            sim.dt = dt;
        }
        if let Some(t) = c.t_end {
            sim.t_end = t;
        }
    };
    match kind {
        ExperimentKind::Simulate(cfg) | ExperimentKind::ScatterCheck(cfg) => {
            sim_over(&mut cfg.sim, c)
        }
        ExperimentKind::Dichotomy(cfg) => sim_over(&mut cfg.sim, c),
        ExperimentKind::Groundstate(cfg) => {
            if let Some(p) = c.p {
                cfg.p = p;
            }
            if let Some(n) = c.n {
                cfg.n = n;
            }
            if let Some(r) = c.rmax {
                cfg.r_max = r;
            }
        }
        ExperimentKind::Classify(cfg) => {
            if let Some(p) = c.p {
                cfg.p = p;
            }
            if let Some(n) = c.n {
                cfg.n = n;
            }
            if let Some(r) = c.rmax {
                cfg.r_max = r;
            }
        }
        ExperimentKind::Inequalities(cfg) => {
            if let Some(n) = c.n {
                cfg.n = n;
            }
            if let Some(r) = c.rmax {
                cfg.r_max = r;
            }
        }
    }
}

fn build_manifest(cmd: &Command) -> Result<ExperimentManifest, Error> {
    let common = match cmd {
        Command::Simulate(c)
        | Command::Groundstate(c)
        | Command::Classify(c)
        | Command::Dichotomy(c)
        | Command::Inequalities(c)
        | Command::ScatterCheck(c) => c.clone(),
    };
    let mut manifest = if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)?;
        if text.trim().is_empty() {
            return Err(Error::Config("empty config file".into()));
        }
        ExperimentManifest::from_json(&text)?
    } else {
        let name = common.preset.as_deref().unwrap_or_else(|| default_kind(cmd));
        let kind = experiment::preset(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown preset '{name}'; available: {}",
                experiment::preset_names().join(", ")
            ))
        })?;
        ExperimentManifest::new(kind, common.seed, &common.out)
    };
    if !expects(&manifest.kind, cmd) {
        return Err(Error::Config(
            "manifest experiment kind does not match the subcommand".into(),
        ));
    }
    manifest.seed = common.seed;
    manifest.out = common.out.clone();
    apply_overrides(&mut manifest.kind, &common);
    Ok(manifest)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let manifest = match build_manifest(&cli.command) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match experiment::run(&manifest) {
        Ok(summary) => {
            for note in &summary.notes {
                println!("{note}");
            }
            println!(
                "artifacts in {}: {}",
                manifest.out.display(),
                summary.artifacts.join(", ")
            );
            if summary.checks_passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("run finished but its acceptance checks failed");
                ExitCode::from(4)
            }
        }
        Err(e) => {
            let code = match e {
                Error::Config(_) | Error::Contract(_) => 2,
                _ => 3,
            };
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
