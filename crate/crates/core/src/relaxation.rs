//! The reset step: T1 relaxation of every spin toward equilibrium, and the
//! ideal trace-and-replace bath contact.

use serde::{Deserialize, Serialize};

use crate::error::{HbacError, Result};
use crate::spin_model::SpinSystem;
use crate::state::PopulationState;

/// How reset spins are refreshed between compressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ResetModel {
    /// Reset spins are swapped for fresh bath spins of bias `bath_eps`.
    IdealReplace { bath_eps: f64 },
    /// All spins relax with their own T1 for `delay_s`.
    T1Exponential { delay_s: f64 },
}

impl ResetModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ResetModel::IdealReplace { bath_eps } if !(bath_eps.abs() <= 1.0) => {
                Err(HbacError::validation("reset.bath_eps", format!("{bath_eps} outside [-1, 1]")))
            }
            ResetModel::T1Exponential { delay_s } if !(delay_s >= 0.0 && delay_s.is_finite()) => {
                Err(HbacError::validation("reset.delay_s", format!("{delay_s} must be >= 0")))
            }
            _ => Ok(()),
        }
    }
}

/// Relax every spin for `t` seconds toward `scale · eps_eq`.
///
/// Each spin bias follows ε(t) = (ε₀ − ε_eq)·e^(−t/T1) + ε_eq while
/// correlations between spins decay with the product of the factors.
pub fn relax_scaled<S: PopulationState>(state: &S, system: &SpinSystem, scale: f64, t: f64) -> Result<S> {
    if state.width() != system.n() {
        return Err(HbacError::WidthMismatch {
            expected: system.n(),
            got: state.width(),
        });
    }
    let eq: Vec<f64> = system.eps_eq().iter().map(|e| e * scale).collect();
    state.relaxed(&eq, &system.t1(), t)
}

/// [`relax_scaled`] with the system's own (normalized) polarizations.
pub fn relax<S: PopulationState>(state: &S, system: &SpinSystem, t: f64) -> Result<S> {
    relax_scaled(state, system, 1.0, t)
}

/// Trace out every reset spin and replace it with a fresh spin of bias
/// `bath_eps`; other marginals and their correlations are untouched.
pub fn reset_replace<S: PopulationState>(state: &S, system: &SpinSystem, bath_eps: f64) -> Result<S> {
    if state.width() != system.n() {
        return Err(HbacError::WidthMismatch {
            expected: system.n(),
            got: state.width(),
        });
    }
    let resets = system.reset_indices();
    if resets.is_empty() {
        return Err(HbacError::MissingReset);
    }
    state.with_replaced(&resets, bath_eps)
}
