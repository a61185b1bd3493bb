//! Cooling cycles: compression followed by reset, repeated.
//!
//! All polarizations crossing this module's API are in the system's
//! normalized units (reset spin at equilibrium = 1). The engine decides how
//! those map onto populations; see [`Engine`].

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compression::{apply_circuit_traced, build_uts, ppa_sort, tsac_circuit3, Circuit, GateKind, PermutationUnitary};
use crate::csv::{fmt_float, row};
use crate::error::{HbacError, Result};
use crate::relaxation::{relax_scaled, reset_replace, ResetModel};
use crate::spin_model::{spin_temperature, SpinSystem, SpinTemperature};
use crate::state::{DiagState, HighTempState, PopulationState};

pub const MAX_CYCLES: usize = 10_000;
pub const STEADY_STATE_TOL: f64 = 1e-6;
/// Environment variable capping sweep worker threads (0 = all cores).
pub const THREADS_ENV: &str = "HBAC_SIM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    /// Fixed two-sort compression every cycle.
    Tsac,
    /// Partner pairing: sort the diagonal every cycle.
    Ppa,
}

impl std::str::FromStr for ProtocolKind {
    type Err = HbacError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsac" => Ok(ProtocolKind::Tsac),
            "ppa" => Ok(ProtocolKind::Ppa),
            _ => Err(HbacError::InvalidArgument(format!("unknown protocol `{s}` (tsac, ppa)"))),
        }
    }
}

/// When a cycle's polarizations are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadoutPoint {
    /// Right after the compression, before the reset delay.
    #[default]
    AfterCompression,
    /// After the reset step, i.e. the state the next cycle starts from.
    AfterReset,
}

/// Population representation used for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Engine {
    /// Exact populations with physical polarization `scale · ε`.
    Exact { scale: f64 },
    /// First-order deviations; exact as the physical scale goes to zero.
    /// `scale` only enters the entropy.
    HighTemperature { scale: f64 },
}

impl Default for Engine {
    fn default() -> Self {
        Engine::Exact { scale: 1.0 }
    }
}

impl Engine {
    pub fn scale(&self) -> f64 {
        match *self {
            Engine::Exact { scale } | Engine::HighTemperature { scale } => scale,
        }
    }

    /// Factor between normalized polarizations and the engine's own units.
    fn native_scale(&self) -> f64 {
        match *self {
            Engine::Exact { scale } => scale,
            Engine::HighTemperature { .. } => 1.0,
        }
    }
}

fn default_repeats() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    pub cycles: usize,
    pub reset: ResetModel,
    #[serde(default = "default_repeats")]
    pub reset_repeats: usize,
    #[serde(default)]
    pub record_gate_trace: bool,
    #[serde(default)]
    pub readout: ReadoutPoint,
    /// Overrides the system's compression duration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compression_time_s: Option<f64>,
    #[serde(default)]
    pub engine: Engine,
}

impl ProtocolConfig {
    pub fn new(kind: ProtocolKind, cycles: usize, reset: ResetModel) -> Self {
        Self {
            kind,
            cycles,
            reset,
            reset_repeats: 1,
            record_gate_trace: false,
            readout: ReadoutPoint::default(),
            compression_time_s: None,
            engine: Engine::default(),
        }
    }

    pub fn tsac(cycles: usize, reset: ResetModel) -> Self {
        Self::new(ProtocolKind::Tsac, cycles, reset)
    }

    pub fn ppa(cycles: usize, reset: ResetModel) -> Self {
        Self::new(ProtocolKind::Ppa, cycles, reset)
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_readout(mut self, readout: ReadoutPoint) -> Self {
        self.readout = readout;
        self
    }

    pub fn with_gate_trace(mut self, on: bool) -> Self {
        self.record_gate_trace = on;
        self
    }

    pub fn with_compression_time(mut self, seconds: f64) -> Self {
        self.compression_time_s = Some(seconds);
        self
    }

    pub fn with_reset_repeats(mut self, repeats: usize) -> Self {
        self.reset_repeats = repeats;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.cycles > MAX_CYCLES {
            return Err(HbacError::validation(
                "cycles",
                format!("{} exceeds the cap of {MAX_CYCLES}", self.cycles),
            ));
        }
        if self.reset_repeats == 0 {
            return Err(HbacError::validation("reset_repeats", "must be at least 1"));
        }
        self.reset.validate()?;
        if let Some(t) = self.compression_time_s {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(HbacError::validation("compression_time_s", format!("{t} must be >= 0")));
            }
        }
        let scale = self.engine.scale();
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(HbacError::validation("engine.scale", format!("{scale} outside (0, 1]")));
        }
        Ok(())
    }

    fn compression_time(&self, system: &SpinSystem) -> f64 {
        self.compression_time_s.unwrap_or(system.compression_time())
    }
}

/// One recorded cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub cycle: usize,
    pub eps: Vec<f64>,
    /// `None` where a polarization is exactly zero (infinite temperature).
    pub temperature: Vec<Option<SpinTemperature>>,
    pub entropy_bits: f64,
}

/// Per-gate polarizations during one compression.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateTable {
    pub cycle: usize,
    pub kinds: Vec<GateKind>,
    /// One row per gate, one column per spin.
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingTrace {
    pub labels: Vec<String>,
    pub target_index: usize,
    pub rows: Vec<TraceRow>,
    pub gate_tables: Vec<GateTable>,
    /// First cycle whose target polarization moved by less than
    /// [`STEADY_STATE_TOL`] from the previous cycle.
    pub steady_state_cycle: Option<usize>,
}

impl CoolingTrace {
    pub fn final_row(&self) -> &TraceRow {
        self.rows.last().expect("trace has the thermal row")
    }

    pub fn target_eps(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.eps[self.target_index]).collect()
    }

    /// `cycle, eps_<label>…, temp_K_<label>…, entropy_bits`.
    pub fn to_csv(&self) -> String {
        let mut out = row(std::iter::once("cycle".to_string())
            .chain(self.labels.iter().map(|l| format!("eps_{l}")))
            .chain(self.labels.iter().map(|l| format!("temp_K_{l}")))
            .chain(std::iter::once("entropy_bits".to_string())));
        for r in &self.rows {
            out.push_str(&row(std::iter::once(r.cycle.to_string())
                .chain(r.eps.iter().map(|&e| fmt_float(e)))
                .chain(r.temperature.iter().map(|t| match t {
                    Some(t) => fmt_float(t.signed()),
                    None => "inf".into(),
                }))
                .chain(std::iter::once(fmt_float(r.entropy_bits)))));
        }
        out
    }

    /// `gate_index, gate_kind, eps_<label>…` for one compression.
    pub fn gate_csv(&self, table: &GateTable) -> String {
        let mut out = row(["gate_index".to_string(), "gate_kind".to_string()]
            .into_iter()
            .chain(self.labels.iter().map(|l| format!("eps_{l}"))));
        for (k, (kind, eps)) in table.kinds.iter().zip(&table.rows).enumerate() {
            out.push_str(&row([(k + 1).to_string(), kind.to_string()]
                .into_iter()
                .chain(eps.iter().map(|&e| fmt_float(e)))));
        }
        out
    }

    /// Human-readable final polarizations, temperatures and enhancements.
    pub fn summary(&self, system: &SpinSystem) -> String {
        let last = self.final_row();
        let mut s = String::new();
        let _ = writeln!(s, "after {} cycles:", last.cycle);
        for (i, label) in self.labels.iter().enumerate() {
            let eq = system.spins()[i].eps_eq;
            let temp = match last.temperature[i] {
                Some(t) => t.to_string(),
                None => "infinite".into(),
            };
            let gain = if eq != 0.0 { format!("{:.3}x", last.eps[i] / eq) } else { "n/a".into() };
            let _ = writeln!(
                s,
                "  {label:>4}: eps {:>9.5} (eq {:.4}, enhancement {gain}), T_spin {temp}",
                last.eps[i], eq
            );
        }
        let _ = writeln!(s, "  register entropy {:.6} bits", last.entropy_bits);
        match self.steady_state_cycle {
            Some(c) => {
                let _ = writeln!(s, "  target steady from cycle {c}");
            }
            None => {
                let _ = writeln!(s, "  target steady state not reached");
            }
        }
        s
    }
}

enum Compressor {
    Circuit(Circuit),
    Unitary(PermutationUnitary),
    Sort,
}

impl Compressor {
    fn for_system(kind: ProtocolKind, n: usize) -> Result<Self> {
        Ok(match kind {
            ProtocolKind::Tsac if n == 3 => Compressor::Circuit(tsac_circuit3()),
            ProtocolKind::Tsac => Compressor::Unitary(build_uts(n)?),
            ProtocolKind::Ppa => Compressor::Sort,
        })
    }
}

/// Result of one cycle in engine units.
#[derive(Debug, Clone)]
pub struct CycleOutcome<S> {
    /// State after the reset; input to the next cycle.
    pub state: S,
    /// Normalized polarizations at the configured readout point.
    pub readout: Vec<f64>,
    /// Entropy at the readout point.
    pub readout_entropy: f64,
    /// Per-gate normalized polarizations, if recorded.
    pub gates: Option<(Vec<GateKind>, Vec<Vec<f64>>)>,
}

struct Runner<'a> {
    system: &'a SpinSystem,
    config: &'a ProtocolConfig,
    compressor: Compressor,
    native: f64,
    half_gate_time: f64,
}

impl<'a> Runner<'a> {
    fn new(system: &'a SpinSystem, config: &'a ProtocolConfig) -> Result<Self> {
        config.validate()?;
        if system.n() < 2 {
            return Err(HbacError::InvalidArgument("cooling needs at least 2 spins".into()));
        }
        if system.reset_indices().is_empty() {
            return Err(HbacError::MissingReset);
        }
        Ok(Self {
            system,
            config,
            compressor: Compressor::for_system(config.kind, system.n())?,
            native: config.engine.native_scale(),
            half_gate_time: 0.5 * config.compression_time(system),
        })
    }

    fn normalized<S: PopulationState>(&self, s: &S) -> Vec<f64> {
        s.polarizations().into_iter().map(|e| e / self.native).collect()
    }

    fn relax<S: PopulationState>(&self, s: S, t: f64) -> Result<S> {
        if t == 0.0 {
            return Ok(s);
        }
        relax_scaled(&s, self.system, self.native, t)
    }

    fn cycle<S: PopulationState>(&self, state: &S) -> Result<CycleOutcome<S>> {
        let s = self.relax(state.clone(), self.half_gate_time)?;
        let mut gates = None;
        let s = match &self.compressor {
            Compressor::Circuit(c) if self.config.record_gate_trace => {
                let (out, table) = apply_circuit_traced(&s, c)?;
                let rows = table
                    .into_iter()
                    .map(|r| r.into_iter().map(|e| e / self.native).collect())
                    .collect();
                gates = Some((c.gates().iter().map(|g| g.kind).collect(), rows));
                out
            }
            Compressor::Circuit(c) => s.permuted(&c.permutation())?,
            Compressor::Unitary(u) => s.permuted(u)?,
            Compressor::Sort => ppa_sort(&s).0,
        };
        let compressed = self.relax(s, self.half_gate_time)?;
        let mut reset = compressed.clone();
        for _ in 0..self.config.reset_repeats {
            reset = match self.config.reset {
                ResetModel::IdealReplace { bath_eps } => {
                    reset_replace(&reset, self.system, bath_eps * self.native)?
                }
                ResetModel::T1Exponential { delay_s } => self.relax(reset, delay_s)?,
            };
        }
        let probe = match self.config.readout {
            ReadoutPoint::AfterCompression => &compressed,
            ReadoutPoint::AfterReset => &reset,
        };
        Ok(CycleOutcome {
            readout: self.normalized(probe),
            readout_entropy: probe.entropy_bits(),
            gates,
            state: reset,
        })
    }

    fn row(&self, cycle: usize, eps: Vec<f64>, entropy_bits: f64) -> TraceRow {
        let t_bath = self.system.bath_temperature();
        let temperature = self
            .system
            .spins()
            .iter()
            .zip(&eps)
            .map(|(s, &e)| spin_temperature(t_bath, s.eps_eq, e).ok())
            .collect();
        TraceRow { cycle, eps, temperature, entropy_bits }
    }
}

/// Thermal product state as exact populations, polarizations times `scale`.
pub fn thermal_diag(system: &SpinSystem, scale: f64) -> Result<DiagState> {
    let eps: Vec<f64> = system.eps_eq().iter().map(|e| e * scale).collect();
    DiagState::product(&eps)
}

/// Thermal product state in the high-temperature engine.
pub fn thermal_high_temp(system: &SpinSystem, scale: f64) -> Result<HighTempState> {
    HighTempState::product(&system.eps_eq(), scale)
}

/// One compression plus reset applied to `state`, which must already be in
/// the units of `config.engine`.
pub fn run_cycle<S: PopulationState>(
    state: &S,
    system: &SpinSystem,
    config: &ProtocolConfig,
) -> Result<CycleOutcome<S>> {
    Runner::new(system, config)?.cycle(state)
}

/// Run `config.cycles` cycles from `initial`, calling `observer` with each
/// post-reset state.
pub fn run_cycles<S: PopulationState>(
    initial: S,
    system: &SpinSystem,
    config: &ProtocolConfig,
    mut observer: impl FnMut(usize, &S) -> Result<()>,
) -> Result<CoolingTrace> {
    let runner = Runner::new(system, config)?;
    let target = system.target_index();
    let mut rows = vec![runner.row(0, runner.normalized(&initial), initial.entropy_bits())];
    let mut gate_tables = Vec::new();
    let mut steady = None;
    let mut state = initial;
    for cycle in 1..=config.cycles {
        let out = runner.cycle(&state)?;
        observer(cycle, &out.state)?;
        if let Some((kinds, rows)) = out.gates {
            gate_tables.push(GateTable { cycle, kinds, rows });
        }
        let prev = rows.last().expect("nonempty").eps[target];
        if steady.is_none() && (out.readout[target] - prev).abs() < STEADY_STATE_TOL {
            steady = Some(cycle);
        }
        rows.push(runner.row(cycle, out.readout, out.readout_entropy));
        state = out.state;
    }
    Ok(CoolingTrace {
        labels: system.labels().iter().map(|s| s.to_string()).collect(),
        target_index: target,
        rows,
        gate_tables,
        steady_state_cycle: steady,
    })
}

/// Full trace from the thermal state.
pub fn run_protocol(system: &SpinSystem, config: &ProtocolConfig) -> Result<CoolingTrace> {
    match config.engine {
        Engine::Exact { scale } => run_cycles(thermal_diag(system, scale)?, system, config, |_, _| Ok(())),
        Engine::HighTemperature { scale } => {
            run_cycles(thermal_high_temp(system, scale)?, system, config, |_, _| Ok(()))
        }
    }
}

/// Fixed point of the cycle map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyState {
    /// Normalized polarizations at the readout point.
    pub eps: Vec<f64>,
    /// Cycles run until the change dropped below tolerance.
    pub cycles: usize,
}

/// Iterate from `initial` until no spin's post-reset polarization moves by
/// `tol` or more in one cycle, or fail after [`MAX_CYCLES`].
pub fn steady_state_from<S: PopulationState>(
    initial: S,
    system: &SpinSystem,
    config: &ProtocolConfig,
    tol: f64,
) -> Result<SteadyState> {
    if !(tol > 0.0) {
        return Err(HbacError::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let runner = Runner::new(system, config)?;
    let mut prev = runner.normalized(&initial);
    let mut state = initial;
    let mut last_delta = f64::INFINITY;
    for cycle in 1..=MAX_CYCLES {
        let out = runner.cycle(&state)?;
        let next = runner.normalized(&out.state);
        last_delta = next
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if last_delta < tol {
            return Ok(SteadyState { eps: out.readout, cycles: cycle });
        }
        prev = next;
        state = out.state;
    }
    Err(HbacError::NonConvergence { cycles: MAX_CYCLES, last_delta })
}

/// [`steady_state_from`] starting at the thermal state.
pub fn steady_state(system: &SpinSystem, config: &ProtocolConfig, tol: f64) -> Result<SteadyState> {
    match config.engine {
        Engine::Exact { scale } => steady_state_from(thermal_diag(system, scale)?, system, config, tol),
        Engine::HighTemperature { scale } => {
            steady_state_from(thermal_high_temp(system, scale)?, system, config, tol)
        }
    }
}

/// How long each sweep point runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SweepLength {
    /// Fixed cycle count; the last readout is reported.
    Cycles(usize),
    /// Until the steady state at this tolerance.
    SteadyState(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub delay_s: f64,
    pub eps_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelaySweep {
    /// In the order the delays were given.
    pub points: Vec<SweepPoint>,
    pub argmax: SweepPoint,
}

impl DelaySweep {
    /// `delay_s,eps_target` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delay_s,eps_target\n");
        for p in &self.points {
            out.push_str(&row([fmt_float(p.delay_s), fmt_float(p.eps_target)]));
        }
        out
    }
}

/// `count` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![from],
        _ => (0..count)
            .map(|k| from + (to - from) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Worker count from [`THREADS_ENV`]; unset, unparsable or 0 means auto.
pub fn sweep_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Target polarization as a function of the T1 reset delay. `template`
/// supplies everything but the reset model.
pub fn sweep_reset_delay(
    system: &SpinSystem,
    template: &ProtocolConfig,
    delays: &[f64],
    length: SweepLength,
) -> Result<DelaySweep> {
    if delays.is_empty() {
        return Err(HbacError::InvalidArgument("delay list is empty".into()));
    }
    if let Some(d) = delays.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(HbacError::InvalidArgument(format!("delay {d} must be >= 0")));
    }
    let target = system.target_index();
    let point = |&delay_s: &f64| -> Result<SweepPoint> {
        let mut cfg = template.clone();
        cfg.reset = ResetModel::T1Exponential { delay_s };
        cfg.record_gate_trace = false;
        let eps_target = match length {
            SweepLength::Cycles(c) => {
                cfg.cycles = c;
                run_protocol(system, &cfg)?.final_row().eps[target]
            }
            SweepLength::SteadyState(tol) => steady_state(system, &cfg, tol)?.eps[target],
        };
        Ok(SweepPoint { delay_s, eps_target })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep_threads())
        .build()
        .map_err(|e| HbacError::InvalidArgument(format!("thread pool: {e}")))?;
    let points: Vec<SweepPoint> = pool.install(|| delays.par_iter().map(point).collect::<Result<_>>())?;
    let argmax = *points
        .iter()
        .reduce(|best, p| if p.eps_target > best.eps_target { p } else { best })
        .expect("nonempty");
    Ok(DelaySweep { points, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::spin_model::{ppa_limit, Role, SpinConfig, SystemConfig};

    fn homogeneous(eps: f64) -> SpinSystem {
        let spin = |label: &str, role| SpinConfig {
            label: label.into(),
            species: None,
            gamma_rel: 1.0,
            eps_eq: Some(eps),
            t1_s: 1.0,
            t2_s: 1.0,
            role,
        };
        SpinSystem::from_config(&SystemConfig {
            name: "homogeneous".into(),
            bath_temperature_k: 303.0,
            compression_time_s: 0.0,
            spins: vec![spin("A", Role::Target), spin("B", Role::Compute), spin("R", Role::Reset)],
            j_couplings_hz: vec![],
        })
        .unwrap()
    }

    #[test]
    fn zero_cycles_is_thermal_row_only() {
        let g = presets::glycine();
        let cfg = ProtocolConfig::tsac(0, ResetModel::T1Exponential { delay_s: presets::GLYCINE_RESET_DELAY_S });
        let t = run_protocol(&g.system, &cfg).unwrap();
        assert_eq!(t.rows.len(), 1);
        for (a, b) in t.rows[0].eps.iter().zip(g.system.eps_eq()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((t.rows[0].temperature[0].unwrap().kelvin - 303.0).abs() < 1e-9);
    }

    #[test]
    fn ideal_single_cycle_matches_oracle() {
        let g = presets::glycine();
        let cfg = ProtocolConfig::tsac(1, ResetModel::IdealReplace { bath_eps: 1.0 })
            .with_compression_time(0.0)
            .with_readout(ReadoutPoint::AfterReset);
        let t = run_protocol(&g.system, &cfg).unwrap();
        let e = g.system.eps_eq();
        let want = 1.0 - 0.5 * (1.0 - e[0]) * (1.0 - e[1]);
        assert!((t.rows[1].eps[0] - want).abs() < 1e-14);
        assert!((t.rows[1].eps[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_configs() {
        let g = presets::glycine();
        let mut cfg = ProtocolConfig::tsac(1, ResetModel::IdealReplace { bath_eps: 1.0 });
        cfg.reset_repeats = 0;
        assert!(matches!(run_protocol(&g.system, &cfg), Err(HbacError::Validation { .. })));
        cfg.reset_repeats = 1;
        cfg.cycles = MAX_CYCLES + 1;
        assert!(run_protocol(&g.system, &cfg).is_err());
        let sweep = sweep_reset_delay(&g.system, &cfg, &[], SweepLength::Cycles(1));
        assert!(sweep.is_err());
    }

    #[test]
    fn tsac_and_ppa_reach_the_ppa_limit() {
        for eps in [0.01, 0.1, 0.25] {
            let sys = homogeneous(eps);
            let reset = ResetModel::IdealReplace { bath_eps: eps };
            let tsac = steady_state(&sys, &ProtocolConfig::tsac(0, reset), 1e-12).unwrap();
            let ppa = steady_state(&sys, &ProtocolConfig::ppa(0, reset), 1e-12).unwrap();
            let limit = ppa_limit(3, eps).unwrap();
            assert!((tsac.eps[0] - ppa.eps[0]).abs() < 1e-9, "{eps}");
            assert!((tsac.eps[0] - limit).abs() < 1e-9, "{} vs {limit}", tsac.eps[0]);
        }
    }

    #[test]
    fn saturated_bath_cools_fully() {
        let sys = homogeneous(0.4);
        let cfg = ProtocolConfig::tsac(0, ResetModel::IdealReplace { bath_eps: 1.0 });
        let s = steady_state(&sys, &cfg, 1e-10).unwrap();
        assert!((s.eps[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fixed_point_input_converges_immediately() {
        let sys = homogeneous(0.1);
        let cfg = ProtocolConfig::tsac(500, ResetModel::IdealReplace { bath_eps: 0.1 });
        let mut last = None;
        run_cycles(thermal_diag(&sys, 1.0).unwrap(), &sys, &cfg, |_, s| {
            last = Some(s.clone());
            Ok(())
        })
        .unwrap();
        let s = steady_state_from(last.unwrap(), &sys, &cfg, 1e-9).unwrap();
        assert_eq!(s.cycles, 1);
    }

    #[test]
    fn gate_tables_are_recorded_per_cycle() {
        let f = presets::formamide();
        let cfg = ProtocolConfig::tsac(2, ResetModel::T1Exponential { delay_s: f.reset_delay })
            .with_gate_trace(true);
        let t = run_protocol(&f.system, &cfg).unwrap();
        assert_eq!(t.gate_tables.len(), 2);
        let csv = t.gate_csv(&t.gate_tables[0]);
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.starts_with("gate_index,gate_kind,eps_N,eps_C,eps_H\n1,NOT,"));
    }

    #[test]
    fn csv_header_and_rows() {
        let g = presets::glycine();
        let cfg = ProtocolConfig::tsac(3, ResetModel::T1Exponential { delay_s: presets::GLYCINE_RESET_DELAY_S });
        let csv = run_protocol(&g.system, &cfg).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "cycle,eps_C1,eps_C2,eps_H,temp_K_C1,temp_K_C2,temp_K_H,entropy_bits"
        );
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn sweep_keeps_delay_order() {
        let g = presets::glycine();
        let cfg = ProtocolConfig::tsac(0, ResetModel::T1Exponential { delay_s: 0.0 });
        let delays = [4.0, 0.5, 3.0];
        let s = sweep_reset_delay(&g.system, &cfg, &delays, SweepLength::Cycles(5)).unwrap();
        let got: Vec<f64> = s.points.iter().map(|p| p.delay_s).collect();
        assert_eq!(got, delays);
        let one = sweep_reset_delay(&g.system, &cfg, &[2.0], SweepLength::Cycles(3)).unwrap();
        assert_eq!(one.argmax.delay_s, 2.0);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.2, 5.0, 50);
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], 0.2);
        assert!((v[49] - 5.0).abs() < 1e-15);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
