//! Heat-bath algorithmic cooling of small spin registers.
//!
//! The crate simulates the two-sort compression protocol (TSAC) and the
//! partner-pairing baseline (PPA) on diagonal states, with T1 relaxation
//! or ideal bath contact as the reset step, and computes the closed-form
//! cooling limits.
//!
//! ```
//! use hbac::{presets, protocol::{run_protocol, ProtocolConfig}, relaxation::ResetModel};
//!
//! let glycine = presets::glycine();
//! let cfg = ProtocolConfig::tsac(10, ResetModel::T1Exponential { delay_s: glycine.reset_delay });
//! let trace = run_protocol(&glycine.system, &cfg).unwrap();
//! assert!(trace.final_row().eps[0] > 0.5);
//! ```

// Validation uses `!(x <= bound)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compression;
pub mod csv;
pub mod error;
pub mod presets;
pub mod protocol;
pub mod relaxation;
pub mod spin_model;
pub mod state;

pub use error::{HbacError, Result};
pub use spin_model::SpinSystem;
pub use state::{DiagState, FullState, HighTempState, PopulationState};
