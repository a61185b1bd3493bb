//! Spin register data model and the closed-form cooling analytics.
//!
//! Polarizations are expressed relative to the reset spin, whose
//! equilibrium value is 1.0. Only ratios enter the protocols, so the
//! absolute Boltzmann scale is needed only by [`boltzmann_polarization`]
//! and [`shannon_bound_exact`].

use std::collections::HashSet;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{HbacError, Result};

/// Largest register the engines accept.
pub const MAX_SPINS: usize = 16;

/// Ambient temperature of the reference experiments, in kelvin.
pub const AMBIENT_TEMPERATURE_K: f64 = 303.0;

/// ¹H Larmor frequency of the reference spectrometer.
pub const PROTON_LARMOR_HZ: f64 = 600.0e6;

pub const GAMMA_REL_1H: f64 = 1.0;
pub const GAMMA_REL_13C: f64 = 0.2515;
pub const GAMMA_REL_15N: f64 = -0.1014;

const PLANCK: f64 = 6.626_070_15e-34;
const BOLTZMANN: f64 = 1.380_649e-23;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSpecies {
    pub name: String,
    /// Gyromagnetic ratio relative to ¹H. Signed; magnitudes set polarization ratios.
    pub gamma_rel: f64,
}

impl SpinSpecies {
    pub fn new(name: impl Into<String>, gamma_rel: f64) -> Result<Self> {
        if gamma_rel == 0.0 || !gamma_rel.is_finite() {
            return Err(HbacError::InvalidArgument(format!(
                "gamma_rel must be finite and nonzero, got {gamma_rel}"
            )));
        }
        Ok(Self {
            name: name.into(),
            gamma_rel,
        })
    }

    pub fn proton() -> Self {
        Self::new("1H", GAMMA_REL_1H).unwrap()
    }

    pub fn carbon13() -> Self {
        Self::new("13C", GAMMA_REL_13C).unwrap()
    }

    pub fn nitrogen15() -> Self {
        Self::new("15N", GAMMA_REL_15N).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    #[serde(alias = "Target")]
    Target,
    #[serde(alias = "Compute")]
    Compute,
    #[serde(alias = "Reset")]
    Reset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spin {
    pub label: String,
    pub species: SpinSpecies,
    pub eps_eq: f64,
    pub t1: f64,
    /// Accepted and reported, never used: protocol states carry no coherences.
    pub t2: f64,
    pub role: Role,
}

/// An immutable, validated spin register. Spin 0 is the most significant
/// bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    name: String,
    spins: Vec<Spin>,
    j_couplings: Vec<JCoupling>,
    bath_temperature: f64,
    compression_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JCoupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// On-disk system description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub name: String,
    #[serde(rename = "bath_temperature_K", default = "default_bath_temperature")]
    pub bath_temperature_k: f64,
    /// Duration of one compression unitary; spins relax during it.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub compression_time_s: f64,
    pub spins: Vec<SpinConfig>,
    #[serde(default)]
    pub j_couplings_hz: Vec<JCoupling>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinConfig {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub species: Option<String>,
    pub gamma_rel: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_eq: Option<f64>,
    pub t1_s: f64,
    pub t2_s: f64,
    pub role: Role,
}

fn default_bath_temperature() -> f64 {
    AMBIENT_TEMPERATURE_K
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl SpinSystem {
    /// Validate a config document and resolve omitted equilibrium polarizations
    /// from `gamma_rel` relative to the first reset spin.
    pub fn from_config(cfg: &SystemConfig) -> Result<Self> {
        let n = cfg.spins.len();
        if n == 0 {
            return Err(HbacError::validation("spins", "register has no spins"));
        }
        if n > MAX_SPINS {
            return Err(HbacError::validation(
                "spins",
                format!("{n} spins exceeds engine limit {MAX_SPINS}"),
            ));
        }
        if !(cfg.bath_temperature_k > 0.0 && cfg.bath_temperature_k.is_finite()) {
            return Err(HbacError::validation(
                "bath_temperature_K",
                "must be positive and finite",
            ));
        }
        if !(cfg.compression_time_s >= 0.0 && cfg.compression_time_s.is_finite()) {
            return Err(HbacError::validation(
                "compression_time_s",
                "must be nonnegative and finite",
            ));
        }

        let mut seen = HashSet::new();
        for (k, s) in cfg.spins.iter().enumerate() {
            let path = |f: &str| format!("spins[{k}].{f}");
            if s.label.is_empty() {
                return Err(HbacError::validation(path("label"), "empty label"));
            }
            if !seen.insert(s.label.as_str()) {
                return Err(HbacError::validation(
                    path("label"),
                    format!("duplicate label `{}`", s.label),
                ));
            }
            if s.gamma_rel == 0.0 || !s.gamma_rel.is_finite() {
                return Err(HbacError::validation(path("gamma_rel"), "must be finite and nonzero"));
            }
            if !(s.t1_s > 0.0 && s.t1_s.is_finite()) {
                return Err(HbacError::validation(path("t1_s"), "must be positive"));
            }
            if !(s.t2_s > 0.0 && s.t2_s.is_finite()) {
                return Err(HbacError::validation(path("t2_s"), "must be positive"));
            }
            if let Some(e) = s.eps_eq {
                if !(e.abs() <= 1.0) {
                    return Err(HbacError::validation(path("eps_eq"), format!("|{e}| > 1")));
                }
            }
        }

        let targets = cfg.spins.iter().filter(|s| s.role == Role::Target).count();
        if targets != 1 {
            return Err(HbacError::validation(
                "spins[].role",
                format!("exactly one Target required, found {targets}"),
            ));
        }
        let reset = cfg.spins.iter().find(|s| s.role == Role::Reset);
        if n >= 2 && reset.is_none() {
            return Err(HbacError::MissingReset);
        }

        // Reference for omitted eps_eq: the first reset spin (or the lone target).
        let reference = reset.unwrap_or(&cfg.spins[0]);
        let ref_eps = reference.eps_eq.unwrap_or(1.0);
        let mut spins = Vec::with_capacity(n);
        for (k, s) in cfg.spins.iter().enumerate() {
            let eps_eq = match s.eps_eq {
                Some(e) => e,
                None => equilibrium_polarization(s.gamma_rel, reference.gamma_rel, ref_eps)?,
            };
            if eps_eq.abs() > 1.0 {
                return Err(HbacError::validation(
                    format!("spins[{k}].gamma_rel"),
                    format!("derived eps_eq {eps_eq} exceeds 1"),
                ));
            }
            spins.push(Spin {
                label: s.label.clone(),
                species: SpinSpecies::new(
                    s.species.clone().unwrap_or_else(|| s.label.clone()),
                    s.gamma_rel,
                )?,
                eps_eq,
                t1: s.t1_s,
                t2: s.t2_s,
                role: s.role,
            });
        }

        let mut keys = HashSet::new();
        for (k, jc) in cfg.j_couplings_hz.iter().enumerate() {
            if !(jc.i < jc.j && jc.j < n) {
                return Err(HbacError::validation(
                    format!("j_couplings_hz[{k}]"),
                    format!("indices must satisfy i < j < {n}, got ({}, {})", jc.i, jc.j),
                ));
            }
            if !keys.insert((jc.i, jc.j)) {
                return Err(HbacError::validation(
                    format!("j_couplings_hz[{k}]"),
                    "duplicate coupling",
                ));
            }
        }

        Ok(Self {
            name: cfg.name.clone(),
            spins,
            j_couplings: cfg.j_couplings_hz.clone(),
            bath_temperature: cfg.bath_temperature_k,
            compression_time: cfg.compression_time_s,
        })
    }

    /// Parse and validate a JSON system document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SystemConfig = serde_json::from_str(text)?;
        Self::from_config(&cfg)
    }

    /// The resolved config (every eps_eq filled in).
    pub fn to_config(&self) -> SystemConfig {
        SystemConfig {
            name: self.name.clone(),
            bath_temperature_k: self.bath_temperature,
            compression_time_s: self.compression_time,
            spins: self
                .spins
                .iter()
                .map(|s| SpinConfig {
                    label: s.label.clone(),
                    species: Some(s.species.name.clone()),
                    gamma_rel: s.species.gamma_rel,
                    eps_eq: Some(s.eps_eq),
                    t1_s: s.t1,
                    t2_s: s.t2,
                    role: s.role,
                })
                .collect(),
            j_couplings_hz: self.j_couplings.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.spins.len()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn spin(&self, i: usize) -> Result<&Spin> {
        self.spins.get(i).ok_or(HbacError::IndexOutOfRange {
            index: i,
            width: self.n(),
        })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.spins.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn j_couplings(&self) -> &[JCoupling] {
        &self.j_couplings
    }

    pub fn bath_temperature(&self) -> f64 {
        self.bath_temperature
    }

    pub fn compression_time(&self) -> f64 {
        self.compression_time
    }

    pub fn target_index(&self) -> usize {
        self.spins.iter().position(|s| s.role == Role::Target).unwrap()
    }

    pub fn reset_indices(&self) -> Vec<usize> {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, s)| s.role == Role::Reset)
            .map(|(i, _)| i)
            .collect()
    }

    /// T1 of the first reset spin.
    pub fn reset_t1(&self) -> Result<f64> {
        self.spins
            .iter()
            .find(|s| s.role == Role::Reset)
            .map(|s| s.t1)
            .ok_or(HbacError::MissingReset)
    }

    pub fn eps_eq(&self) -> Vec<f64> {
        self.spins.iter().map(|s| s.eps_eq).collect()
    }

    pub fn t1(&self) -> Vec<f64> {
        self.spins.iter().map(|s| s.t1).collect()
    }

    /// Copy with a different compression duration.
    pub fn with_compression_time(&self, seconds: f64) -> Result<Self> {
        if !(seconds >= 0.0 && seconds.is_finite()) {
            return Err(HbacError::InvalidArgument(format!(
                "compression time must be nonnegative, got {seconds}"
            )));
        }
        let mut s = self.clone();
        s.compression_time = seconds;
        Ok(s)
    }
}

/// High-temperature polarization ratio: ε_a = ε_b·|γ_a/γ_b|.
pub fn equilibrium_polarization(gamma_rel_a: f64, gamma_rel_b: f64, eps_b: f64) -> Result<f64> {
    if gamma_rel_b == 0.0 {
        return Err(HbacError::InvalidArgument("gamma_rel_b is zero".into()));
    }
    Ok(eps_b * (gamma_rel_a / gamma_rel_b).abs())
}

/// Boltzmann polarization tanh(hν/2kT) of a spin with Larmor frequency `larmor_hz`.
pub fn boltzmann_polarization(larmor_hz: f64, temperature_k: f64) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(HbacError::InvalidArgument(format!(
            "temperature must be positive, got {temperature_k}"
        )));
    }
    Ok((PLANCK * larmor_hz / (2.0 * BOLTZMANN * temperature_k)).tanh())
}

/// Absolute polarization of the system's reset spin at its bath temperature
/// and a 600 MHz proton field; the factor between normalized and physical
/// polarizations. Single-spin systems use the target spin.
pub fn physical_scale(system: &SpinSystem) -> Result<f64> {
    let reference = system
        .spins()
        .iter()
        .find(|s| s.role == Role::Reset)
        .unwrap_or(&system.spins()[system.target_index()]);
    let eps = boltzmann_polarization(PROTON_LARMOR_HZ * reference.species.gamma_rel.abs(), system.bath_temperature())?;
    Ok(eps / reference.eps_eq.abs().max(f64::MIN_POSITIVE))
}

/// A spin temperature reported as magnitude plus sign flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinTemperature {
    pub kelvin: f64,
    pub negative: bool,
}

impl SpinTemperature {
    pub fn signed(&self) -> f64 {
        if self.negative {
            -self.kelvin
        } else {
            self.kelvin
        }
    }
}

impl std::fmt::Display for SpinTemperature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.negative {
            write!(f, "|{:.2}| K (negative)", self.kelvin)
        } else {
            write!(f, "{:.2} K", self.kelvin)
        }
    }
}

/// T_final from T_initial·ε_initial = T_final·ε_final.
pub fn spin_temperature(t_initial: f64, eps_initial: f64, eps_final: f64) -> Result<SpinTemperature> {
    if eps_final == 0.0 {
        return Err(HbacError::DivideByZero("final polarization is zero"));
    }
    let t = t_initial * eps_initial / eps_final;
    Ok(SpinTemperature {
        kelvin: t.abs(),
        negative: t < 0.0,
    })
}

/// Binary Shannon entropy (bits) of a spin with bias `eps`.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(eps.abs() <= 1.0) {
        return Err(HbacError::PolarizationDomain(eps));
    }
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(h((1.0 + eps) / 2.0) + h((1.0 - eps) / 2.0))
}

/// Information content 1 − H(ε) in bits (exact, not the ε²/ln4 expansion).
pub fn information_content(eps: f64) -> Result<f64> {
    Ok(1.0 - binary_entropy(eps)?)
}

/// Leading-order information content ε²/ln4.
pub fn information_content_quadratic(eps: f64) -> f64 {
    eps * eps / (2.0 * LN_2)
}

/// Result of a Shannon-bound computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShannonBound {
    /// Total information content in units of the target's own content.
    pub ic_sum: f64,
    /// ε_max / ε_eq(target).
    pub factor: f64,
    /// ε_max in the same units as the system's eps_eq.
    pub eps_max: f64,
}

/// Shannon bound using the quadratic information content: conserved total
/// IC dumped onto the target gives ε_max = sqrt(Σ ε_i²).
pub fn shannon_bound(system: &SpinSystem, target_index: usize) -> Result<ShannonBound> {
    let target = system.spin(target_index)?.eps_eq;
    if target == 0.0 {
        return Err(HbacError::InvalidArgument("target eps_eq is zero".into()));
    }
    let ic_sum: f64 = system
        .spins()
        .iter()
        .map(|s| (s.eps_eq / target).powi(2))
        .sum();
    let factor = ic_sum.sqrt();
    Ok(ShannonBound {
        ic_sum,
        factor,
        eps_max: factor * target.abs(),
    })
}

/// Shannon bound with the exact binary entropy, evaluated at absolute
/// polarizations `eps_eq · scale`. `eps_max` is reported back in the
/// system's normalized units.
pub fn shannon_bound_exact(system: &SpinSystem, target_index: usize, scale: f64) -> Result<ShannonBound> {
    let target = system.spin(target_index)?.eps_eq;
    if target == 0.0 {
        return Err(HbacError::InvalidArgument("target eps_eq is zero".into()));
    }
    if !(scale > 0.0) {
        return Err(HbacError::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    let mut total = 0.0;
    for s in system.spins() {
        total += information_content(s.eps_eq * scale)?;
    }
    let target_ic = information_content(target * scale)?;
    let eps_max_abs = if total >= 1.0 {
        1.0
    } else {
        // IC is increasing on [0, 1]; bisect for IC(ε) = total.
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if information_content(mid)? < total {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let eps_max = eps_max_abs / scale;
    Ok(ShannonBound {
        ic_sum: total / target_ic,
        factor: eps_max / target.abs(),
        eps_max,
    })
}

/// PPA asymptotic target polarization for `n` spins and bath bias `eps_b`:
/// [(1+ε)^m − (1−ε)^m] / [(1+ε)^m + (1−ε)^m] with m = 2^(n−2).
pub fn ppa_limit(n: usize, eps_b: f64) -> Result<f64> {
    if n < 2 {
        return Err(HbacError::InvalidArgument(format!("ppa_limit needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&eps_b) {
        return Err(HbacError::InvalidArgument(format!("bath polarization {eps_b} outside [0, 1]")));
    }
    if n - 2 >= 63 {
        return Err(HbacError::InvalidArgument(format!("n = {n} too large")));
    }
    let m = 1u64 << (n - 2);
    // Divide through by (1+ε)^m so nothing overflows.
    let r = ((1.0 - eps_b) / (1.0 + eps_b)).powf(m as f64);
    Ok((1.0 - r) / (1.0 + r))
}
