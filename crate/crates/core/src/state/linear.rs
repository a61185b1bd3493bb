use super::{
    check_index, check_keep, check_width, decay_factors, descending, sign, PopulationState,
};
use crate::compression::PermutationUnitary;
use crate::error::{HbacError, Result};

/// Diagonal state in the high-temperature limit.
///
/// Populations are `(1 + s·δ_b) / 2^n` with `s → 0`; only the deviation
/// vector `δ` is stored, in the same normalized units as the spin
/// polarizations. Every protocol map is affine in `δ` at first order, so
/// this engine is exact in that limit and normalized polarizations may
/// exceed 1. `scale` is the physical value of `s`, used only for entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct HighTempState {
    n: usize,
    dev: Vec<f64>,
    scale: f64,
}

impl HighTempState {
    /// δ_b = Σ_i (−1)^{b_i} ε_i.
    pub fn product(eps: &[f64], scale: f64) -> Result<Self> {
        let n = eps.len();
        check_width(n)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(HbacError::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        let dev = (0..1usize << n)
            .map(|b| eps.iter().enumerate().map(|(i, e)| sign(b, i, n) * e).sum())
            .collect();
        Ok(Self { n, dev, scale })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn deviations(&self) -> &[f64] {
        &self.dev
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn polarization_of(&self, i: usize) -> Result<f64> {
        check_index(i, self.n)?;
        let sum: f64 = self
            .dev
            .iter()
            .enumerate()
            .map(|(b, d)| sign(b, i, self.n) * d)
            .sum();
        Ok(sum / self.dev.len() as f64)
    }

    pub fn apply(&self, u: &PermutationUnitary) -> Result<Self> {
        if u.n() != self.n {
            return Err(HbacError::WidthMismatch {
                expected: self.n,
                got: u.n(),
            });
        }
        let mut dev = vec![0.0; self.dev.len()];
        for (b, &d) in self.dev.iter().enumerate() {
            dev[u.perm()[b]] = d;
        }
        Ok(Self { dev, ..self.clone() })
    }
}

impl PopulationState for HighTempState {
    fn width(&self) -> usize {
        self.n
    }

    fn polarization(&self, i: usize) -> Result<f64> {
        self.polarization_of(i)
    }

    fn permuted(&self, u: &PermutationUnitary) -> Result<Self> {
        self.apply(u)
    }

    fn sorted_descending(&self) -> (Self, PermutationUnitary) {
        let order = descending(&self.dev);
        let dev = order.iter().map(|&b| self.dev[b]).collect();
        (
            Self { dev, ..self.clone() },
            PermutationUnitary::from_sorted_order(self.n, &order),
        )
    }

    fn relaxed(&self, eq: &[f64], t1: &[f64], t: f64) -> Result<Self> {
        let n = self.n;
        let lambdas = decay_factors(eq, t1, t, n)?;
        let mut dev = self.dev.clone();
        for i in 0..n {
            let lam = lambdas[i];
            let mask = 1usize << (n - 1 - i);
            let prev = dev.clone();
            for b in 0..dev.len() {
                dev[b] = 0.5 * (1.0 + lam) * prev[b]
                    + 0.5 * (1.0 - lam) * prev[b ^ mask]
                    + (1.0 - lam) * eq[i] * sign(b, i, n);
            }
        }
        Ok(Self { dev, ..self.clone() })
    }

    fn with_replaced(&self, qubits: &[usize], eps: f64) -> Result<Self> {
        let n = self.n;
        let qubits = check_keep(qubits, n)?;
        let rmask = qubits.iter().fold(0usize, |m, &i| m | (1 << (n - 1 - i)));
        let mut sums = vec![0.0; self.dev.len()];
        for (b, d) in self.dev.iter().enumerate() {
            sums[b & !rmask] += d;
        }
        let group = (1usize << qubits.len()) as f64;
        let dev = (0..self.dev.len())
            .map(|b| {
                sums[b & !rmask] / group
                    + qubits.iter().map(|&r| eps * sign(b, r, n)).sum::<f64>()
            })
            .collect();
        Ok(Self { dev, ..self.clone() })
    }

    /// Leading-order entropy n − s²·⟨δ²⟩ / (2 ln 2).
    fn entropy_bits(&self) -> f64 {
        let mean_sq = self.dev.iter().map(|d| d * d).sum::<f64>() / self.dev.len() as f64;
        self.n as f64 - self.scale * self.scale * mean_sq / (2.0 * std::f64::consts::LN_2)
    }

    fn check_valid(&self) -> Result<()> {
        let sum: f64 = self.dev.iter().sum();
        let norm: f64 = self.dev.iter().map(|d| d.abs()).sum::<f64>().max(1.0);
        if !sum.is_finite() || sum.abs() > 1e-12 * norm {
            return Err(HbacError::InvalidState(format!("deviation sum {sum} is not zero")));
        }
        Ok(())
    }
}
