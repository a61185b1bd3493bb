//! Built-in molecules: ¹³C₂-glycine and ¹³C-¹⁵N-formamide.
//!
//! Relaxation times are the measured thermal-equilibrium values. The
//! `reported` tables hold the measured (initial, final) polarizations and
//! spin temperatures after cooling, for comparison against simulation.

use crate::error::{HbacError, Result};
use crate::spin_model::{
    Role, SpinConfig, SpinSystem, SystemConfig, AMBIENT_TEMPERATURE_K, GAMMA_REL_13C,
    GAMMA_REL_15N, GAMMA_REL_1H,
};

pub const PRESET_NAMES: &[&str] = &["glycine", "formamide"];

/// One row of a measured polarization table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportedSpin {
    pub label: &'static str,
    pub eps_initial: f64,
    pub eps_final: f64,
    /// Magnitude of the reported spin temperature.
    pub temperature_k: f64,
}

pub const GLYCINE_REPORTED: [ReportedSpin; 3] = [
    ReportedSpin { label: "C1", eps_initial: 0.25, eps_final: 1.075, temperature_k: 70.46 },
    ReportedSpin { label: "C2", eps_initial: 0.25, eps_final: 0.687, temperature_k: 110.26 },
    ReportedSpin { label: "H", eps_initial: 1.0, eps_final: 0.248, temperature_k: 1221.77 },
];

pub const FORMAMIDE_REPORTED: [ReportedSpin; 3] = [
    ReportedSpin { label: "N", eps_initial: 0.101, eps_final: 0.595, temperature_k: 51.43 },
    ReportedSpin { label: "C", eps_initial: 0.251, eps_final: 0.406, temperature_k: 187.32 },
    ReportedSpin { label: "H", eps_initial: 1.0, eps_final: -0.187, temperature_k: 1620.32 },
];

/// Reset delay giving the highest glycine target polarization.
#[allow(clippy::approx_constant)]
pub const GLYCINE_RESET_DELAY_S: f64 = 3.14;

/// Target T1 measured after cooling (the "cold" column).
pub const GLYCINE_TARGET_T1_COLD: f64 = 18.6;
pub const FORMAMIDE_TARGET_T1_COLD: f64 = 50.67;

/// A preset system plus the protocol settings used with it.
#[derive(Debug, Clone)]
pub struct Preset {
    pub system: SpinSystem,
    /// Optimal reset delay in seconds.
    pub reset_delay: f64,
    /// Cycles run in the reference experiment.
    pub cycles: usize,
    pub reported: &'static [ReportedSpin],
}

fn spin(label: &str, species: &str, gamma_rel: f64, t1: f64, t2: f64, role: Role) -> SpinConfig {
    SpinConfig {
        label: label.into(),
        species: Some(species.into()),
        gamma_rel,
        eps_eq: None,
        t1_s: t1,
        t2_s: t2,
        role,
    }
}

pub fn glycine_config() -> SystemConfig {
    SystemConfig {
        name: "glycine".into(),
        bath_temperature_k: AMBIENT_TEMPERATURE_K,
        compression_time_s: 0.302,
        spins: vec![
            spin("C1", "13C", GAMMA_REL_13C, 20.4, 1.53, Role::Target),
            spin("C2", "13C", GAMMA_REL_13C, 3.23, 1.16, Role::Compute),
            spin("H", "1H", GAMMA_REL_1H, 1.57, 1.0, Role::Reset),
        ],
        j_couplings_hz: vec![],
    }
}

pub fn formamide_config() -> SystemConfig {
    SystemConfig {
        name: "formamide".into(),
        bath_temperature_k: AMBIENT_TEMPERATURE_K,
        compression_time_s: 0.23,
        spins: vec![
            spin("N", "15N", GAMMA_REL_15N, 45.35, 0.095, Role::Target),
            spin("C", "13C", GAMMA_REL_13C, 30.40, 1.33, Role::Compute),
            spin("H", "1H", GAMMA_REL_1H, 22.5, 1.15, Role::Reset),
        ],
        j_couplings_hz: vec![],
    }
}

pub fn glycine() -> Preset {
    Preset {
        system: SpinSystem::from_config(&glycine_config()).expect("glycine preset is valid"),
        reset_delay: GLYCINE_RESET_DELAY_S,
        cycles: 10,
        reported: &GLYCINE_REPORTED,
    }
}

pub fn formamide() -> Preset {
    Preset {
        system: SpinSystem::from_config(&formamide_config()).expect("formamide preset is valid"),
        reset_delay: 2.5 * 22.5,
        cycles: 6,
        reported: &FORMAMIDE_REPORTED,
    }
}

pub fn preset(name: &str) -> Result<Preset> {
    match name.to_ascii_lowercase().as_str() {
        "glycine" => Ok(glycine()),
        "formamide" => Ok(formamide()),
        other => Err(HbacError::InvalidArgument(format!(
            "unknown preset `{other}` (available: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}
