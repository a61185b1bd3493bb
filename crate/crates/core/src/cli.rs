//! Command-line front end behind the `hbac-sim` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{HbacError, Result};
use crate::presets::{self, PRESET_NAMES};
use crate::protocol::{
    linspace, run_protocol, steady_state, sweep_reset_delay, Engine, ProtocolConfig, ProtocolKind,
    ReadoutPoint, SweepLength, STEADY_STATE_TOL,
};
use crate::relaxation::ResetModel;
use crate::spin_model::{
    physical_scale, ppa_limit, shannon_bound, shannon_bound_exact, spin_temperature, SpinSystem, SystemConfig,
};

#[derive(Debug, Parser)]
#[command(name = "hbac-sim", version, about = "Heat-bath algorithmic cooling simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shannon bound, PPA limit and spin-temperature projections.
    Limits(LimitsArgs),
    /// Run cooling cycles and write trace CSVs.
    Run(RunArgs),
    /// Sweep the T1 reset delay and report the optimum.
    Sweep(SweepArgs),
    /// List or dump the built-in spin systems.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    List,
    /// Print a preset as a system config document.
    Dump { name: String },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SystemSource {
    /// Built-in system name.
    #[arg(long)]
    pub preset: Option<String>,
    /// System config document (JSON).
    #[arg(long)]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub source: SystemSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResetMode {
    /// Relax every spin with its T1 for --reset-delay seconds.
    T1,
    /// Replace reset spins by fresh bath spins of bias --bath-eps.
    Ideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Exact,
    HighTemp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadoutArg {
    Compression,
    Reset,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long, default_value = "tsac")]
    pub protocol: ProtocolKind,
    /// Reset repetitions per cycle.
    #[arg(long, default_value_t = 1)]
    pub reset_repeats: usize,
    /// When each cycle's polarizations are read.
    #[arg(long, value_enum, default_value = "compression")]
    pub readout: ReadoutArg,
    /// Override the system's compression duration (seconds).
    #[arg(long)]
    pub compression_time: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    pub engine: EngineArg,
    /// Physical polarization of a normalized unit (default 1 for exact,
    /// the Boltzmann value for high-temp).
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SystemSource,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Number of cycles (default: the preset's, else 10).
    #[arg(long, conflicts_with = "to_steady_state")]
    pub cycles: Option<usize>,
    /// Run until the steady state instead of a fixed cycle count.
    #[arg(long)]
    pub to_steady_state: bool,
    #[arg(long, value_enum, default_value = "t1")]
    pub reset: ResetMode,
    /// T1 reset delay in seconds (default: the preset's optimum).
    #[arg(long, conflicts_with = "bath_eps")]
    pub reset_delay: Option<f64>,
    /// Bath spin polarization for --reset ideal (default 1).
    #[arg(long)]
    pub bath_eps: Option<f64>,
    /// Write per-gate polarizations for every cycle.
    #[arg(long)]
    pub gate_trace: bool,
    #[arg(long, default_value = "hbac-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SystemSource,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// First delay, in reset-spin T1 units unless --seconds.
    #[arg(long, default_value_t = 0.2)]
    pub from: f64,
    /// Last delay, in reset-spin T1 units unless --seconds.
    #[arg(long, default_value_t = 5.0)]
    pub to: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Interpret --from/--to as seconds.
    #[arg(long)]
    pub seconds: bool,
    /// Fixed cycle count per point instead of the steady state.
    #[arg(long)]
    pub cycles: Option<usize>,
    #[arg(long, default_value = "hbac-out")]
    pub out: PathBuf,
}

/// Everything needed to reproduce a run, written as `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub system: SystemConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delays_s: Option<Vec<f64>>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, system: &SpinSystem) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            system: system.to_config(),
            protocol: None,
            delays_s: None,
            outputs: vec![],
        }
    }
}

struct Loaded {
    system: SpinSystem,
    preset: Option<presets::Preset>,
}

fn load(source: &SystemSource) -> Result<Loaded> {
    match (&source.preset, &source.system) {
        (Some(name), _) => {
            let p = presets::preset(name)?;
            Ok(Loaded { system: p.system.clone(), preset: Some(p) })
        }
        (None, Some(path)) => Ok(Loaded {
            system: SpinSystem::from_json(&fs::read_to_string(path)?)?,
            preset: None,
        }),
        (None, None) => Err(HbacError::InvalidArgument("need --preset or --system".into())),
    }
}

fn engine(args: &ProtocolArgs, system: &SpinSystem) -> Result<Engine> {
    Ok(match args.engine {
        EngineArg::Exact => Engine::Exact { scale: args.scale.unwrap_or(1.0) },
        EngineArg::HighTemp => Engine::HighTemperature {
            scale: match args.scale {
                Some(s) => s,
                None => physical_scale(system)?,
            },
        },
    })
}

fn base_config(args: &ProtocolArgs, system: &SpinSystem, cycles: usize, reset: ResetModel) -> Result<ProtocolConfig> {
    let mut cfg = ProtocolConfig::new(args.protocol, cycles, reset)
        .with_reset_repeats(args.reset_repeats)
        .with_engine(engine(args, system)?)
        .with_readout(match args.readout {
            ReadoutArg::Compression => ReadoutPoint::AfterCompression,
            ReadoutArg::Reset => ReadoutPoint::AfterReset,
        });
    if let Some(t) = args.compression_time {
        cfg = cfg.with_compression_time(t);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(dir: &Path, name: &str, contents: &str, manifest: &mut RunManifest) -> Result<()> {
    fs::write(dir.join(name), contents)?;
    manifest.outputs.push(name.to_string());
    Ok(())
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    fs::write(dir.join("manifest.json"), text)?;
    Ok(())
}

/// Report for the `limits` subcommand.
pub fn cmd_limits(system: &SpinSystem) -> Result<String> {
    let mut s = String::new();
    let target = system.target_index();
    let spins = system.spins();
    let t_bath = system.bath_temperature();
    let _ = writeln!(
        s,
        "system {} ({} spins, target {})",
        system.name(),
        system.n(),
        spins[target].label
    );
    let quad = shannon_bound(system, target)?;
    let _ = writeln!(
        s,
        "Shannon bound (quadratic IC): IC sum {:.2}, factor {:.3}, eps_max {:.4}",
        quad.ic_sum, quad.factor, quad.eps_max
    );
    let scale = physical_scale(system)?;
    let exact = shannon_bound_exact(system, target, scale)?;
    let _ = writeln!(
        s,
        "Shannon bound (exact entropy, unit polarization {scale:.4e}): IC sum {:.2}, factor {:.3}",
        exact.ic_sum, exact.factor
    );
    if system.n() >= 2 {
        let resets = system.reset_indices();
        let eps_b = spins[resets[0]].eps_eq;
        let normalized = ppa_limit(system.n(), eps_b.abs())?;
        let physical = ppa_limit(system.n(), (eps_b * scale).abs())? / scale;
        let _ = writeln!(
            s,
            "PPA limit (n = {}): {:.4} at normalized bath bias {eps_b}, {:.4} in the high-temperature regime",
            system.n(),
            normalized,
            physical
        );
    }
    let eq = spins[target].eps_eq;
    let t = spin_temperature(t_bath, eq, quad.eps_max.copysign(eq))?;
    let _ = writeln!(s, "target spin temperature at the Shannon bound: {t} (bath {t_bath} K)");
    Ok(s)
}

pub fn cmd_run(args: &RunArgs) -> Result<String> {
    let Loaded { system, preset } = load(&args.source)?;
    let reset = match args.reset {
        ResetMode::Ideal => ResetModel::IdealReplace { bath_eps: args.bath_eps.unwrap_or(1.0) },
        ResetMode::T1 => {
            if args.bath_eps.is_some() {
                return Err(HbacError::InvalidArgument("--bath-eps needs --reset ideal".into()));
            }
            let delay_s = match (args.reset_delay, &preset) {
                (Some(d), _) => d,
                (None, Some(p)) => p.reset_delay,
                (None, None) => {
                    return Err(HbacError::InvalidArgument("--reset-delay is required with --system".into()))
                }
            };
            ResetModel::T1Exponential { delay_s }
        }
    };
    let mut cycles = args.cycles.unwrap_or(preset.as_ref().map_or(10, |p| p.cycles));
    let mut report = String::new();
    if args.to_steady_state {
        let probe = base_config(&args.protocol, &system, 0, reset)?;
        let ss = steady_state(&system, &probe, STEADY_STATE_TOL)?;
        cycles = ss.cycles;
        let _ = writeln!(report, "steady state reached after {cycles} cycles");
    }
    let cfg = base_config(&args.protocol, &system, cycles, reset)?.with_gate_trace(args.gate_trace);
    let trace = run_protocol(&system, &cfg)?;
    fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new("run", &system);
    write_file(&args.out, "trace.csv", &trace.to_csv(), &mut manifest)?;
    for table in &trace.gate_tables {
        let name = format!("gates_cycle_{:03}.csv", table.cycle);
        write_file(&args.out, &name, &trace.gate_csv(table), &mut manifest)?;
    }
    manifest.protocol = Some(cfg);
    write_manifest(&args.out, &manifest)?;
    report.push_str(&trace.summary(&system));
    let _ = writeln!(report, "wrote {} files to {}", manifest.outputs.len() + 1, args.out.display());
    Ok(report)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let Loaded { system, .. } = load(&args.source)?;
    if !(args.from < args.to) || args.from < 0.0 {
        return Err(HbacError::InvalidArgument(format!(
            "need 0 <= --from < --to, got {} and {}",
            args.from, args.to
        )));
    }
    if args.steps < 2 {
        return Err(HbacError::InvalidArgument("--steps must be at least 2".into()));
    }
    let unit = if args.seconds { 1.0 } else { system.reset_t1()? };
    let delays = linspace(args.from * unit, args.to * unit, args.steps);
    let reset = ResetModel::T1Exponential { delay_s: delays[0] };
    let cfg = base_config(&args.protocol, &system, args.cycles.unwrap_or(0), reset)?;
    let length = match args.cycles {
        Some(c) => SweepLength::Cycles(c),
        None => SweepLength::SteadyState(STEADY_STATE_TOL),
    };
    let sweep = sweep_reset_delay(&system, &cfg, &delays, length)?;
    fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new("sweep", &system);
    write_file(&args.out, "sweep.csv", &sweep.to_csv(), &mut manifest)?;
    manifest.protocol = Some(cfg);
    manifest.delays_s = Some(delays.clone());
    write_manifest(&args.out, &manifest)?;
    let t1r = system.reset_t1()?;
    Ok(format!(
        "{} delays from {:.3} s to {:.3} s\nargmax delay {:.4} s ({:.3} T1R), target eps {:.6}\nwrote sweep.csv to {}\n",
        delays.len(),
        delays[0],
        delays[delays.len() - 1],
        sweep.argmax.delay_s,
        sweep.argmax.delay_s / t1r,
        sweep.argmax.eps_target,
        args.out.display()
    ))
}

pub fn cmd_presets(action: &PresetAction) -> Result<String> {
    match action {
        PresetAction::List => {
            let mut s = String::new();
            for name in PRESET_NAMES {
                let p = presets::preset(name)?;
                let _ = writeln!(
                    s,
                    "{name}: spins {}, reset delay {} s, {} cycles",
                    p.system.labels().join("/"),
                    p.reset_delay,
                    p.cycles
                );
            }
            Ok(s)
        }
        PresetAction::Dump { name } => {
            let mut s = serde_json::to_string_pretty(&presets::preset(name)?.system.to_config())?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Dispatch a parsed command line; returns the text to print.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Limits(a) => cmd_limits(&load(&a.source)?.system),
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Presets { action } => cmd_presets(action),
    }
}

/// Parse `std::env::args`, run, print; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
