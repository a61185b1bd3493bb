//! State representations.
//!
//! [`DiagState`] is the authoritative engine: every protocol state is a
//! classical mixture, so a population vector of length 2^n is exact.
//! [`FullState`] is the dense density-matrix oracle used to cross-check it.
//! [`HighTempState`] is the first-order (high-temperature) limit in which
//! polarizations are tiny and every map acts linearly on them.
//!
//! Basis index `b` reads as the bitstring b₀b₁…b_{n−1} with spin 0 as the
//! most significant bit.

mod dense;
mod diag;
mod linear;

pub use dense::FullState;
pub use diag::DiagState;
pub use linear::HighTempState;

use crate::compression::PermutationUnitary;
use crate::error::{HbacError, Result};
use crate::spin_model::MAX_SPINS;

/// Operations the protocol needs from a state engine. Polarizations and
/// equilibrium biases are in the engine's native units.
pub trait PopulationState: Clone + Send + Sync + Sized {
    fn width(&self) -> usize;

    fn polarization(&self, i: usize) -> Result<f64>;

    fn permuted(&self, u: &PermutationUnitary) -> Result<Self>;

    /// Descending stable sort of the diagonal, plus the permutation used.
    fn sorted_descending(&self) -> (Self, PermutationUnitary);

    /// Independent per-spin longitudinal relaxation for `t` seconds.
    fn relaxed(&self, eq: &[f64], t1: &[f64], t: f64) -> Result<Self>;

    /// Trace out `qubits` and put fresh spins of bias `eps` in their place.
    fn with_replaced(&self, qubits: &[usize], eps: f64) -> Result<Self>;

    fn entropy_bits(&self) -> f64;

    /// Probability conservation and positivity.
    fn check_valid(&self) -> Result<()>;

    fn polarizations(&self) -> Vec<f64> {
        (0..self.width())
            .map(|i| self.polarization(i).expect("index in range"))
            .collect()
    }
}

#[inline]
pub(crate) fn bit(b: usize, i: usize, n: usize) -> usize {
    (b >> (n - 1 - i)) & 1
}

/// +1 if spin `i` is |0⟩ in basis state `b`, −1 otherwise.
#[inline]
pub(crate) fn sign(b: usize, i: usize, n: usize) -> f64 {
    if bit(b, i, n) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Bitstring label of basis state `b`, spin 0 first.
pub fn basis_label(b: usize, n: usize) -> String {
    (0..n).map(|i| if bit(b, i, n) == 0 { '0' } else { '1' }).collect()
}

pub(crate) fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SPINS {
        return Err(HbacError::InvalidArgument(format!(
            "register width {n} outside 1..={MAX_SPINS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(HbacError::IndexOutOfRange { index: i, width: n });
    }
    Ok(())
}

pub(crate) fn check_polarizations(eps: &[f64]) -> Result<()> {
    for &e in eps {
        if !(e.abs() <= 1.0) {
            return Err(HbacError::PolarizationDomain(e));
        }
    }
    Ok(())
}

/// Validated, sorted, deduplicated-checked list of kept qubits.
pub(crate) fn check_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(HbacError::InvalidArgument("keep set is empty".into()));
    }
    let mut k = keep.to_vec();
    k.sort_unstable();
    for w in k.windows(2) {
        if w[0] == w[1] {
            return Err(HbacError::InvalidArgument(format!("qubit {} listed twice", w[0])));
        }
    }
    for &i in &k {
        check_index(i, n)?;
    }
    Ok(k)
}

/// Map a full basis index to its index in the register of `keep` qubits.
pub(crate) fn project_index(b: usize, keep: &[usize], n: usize) -> usize {
    keep.iter().fold(0, |acc, &i| (acc << 1) | bit(b, i, n))
}

/// Per-spin relaxation parameters: decay factor λ = e^(−t/T1).
pub(crate) fn decay_factors(eq: &[f64], t1: &[f64], t: f64, n: usize) -> Result<Vec<f64>> {
    if eq.len() != n || t1.len() != n {
        return Err(HbacError::WidthMismatch {
            expected: n,
            got: eq.len().min(t1.len()),
        });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(HbacError::InvalidArgument(format!("relaxation time {t} must be >= 0")));
    }
    t1.iter()
        .map(|&tau| {
            if tau > 0.0 {
                Ok((-t / tau).exp())
            } else {
                Err(HbacError::InvalidArgument(format!("T1 {tau} must be positive")))
            }
        })
        .collect()
}

/// Basis indices ordered by descending value, ties by index.
pub(crate) fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}
