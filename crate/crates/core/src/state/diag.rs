use std::fmt::Write as _;

use super::{
    basis_label, check_index, check_keep, check_polarizations, check_width, decay_factors, descending,
    project_index, sign, PopulationState,
};
use crate::compression::PermutationUnitary;
use crate::error::{HbacError, Result};

/// Round-off below this is clamped to zero.
const NEGATIVE_CLAMP: f64 = 1e-12;
/// Normalization drift above this is renormalized away.
const RENORMALIZE_ABOVE: f64 = 1e-12;
/// Normalization drift above this is a logic error.
const HARD_SUM_LIMIT: f64 = 1e-9;

/// Diagonal density matrix: 2^n basis populations.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagState {
    n: usize,
    pops: Vec<f64>,
}

impl DiagState {
    /// Validate populations, clamping round-off negatives and renormalizing
    /// tiny drift. Anything larger is an error.
    pub fn new(n: usize, mut pops: Vec<f64>) -> Result<Self> {
        check_width(n)?;
        if pops.len() != 1 << n {
            return Err(HbacError::WidthMismatch {
                expected: 1 << n,
                got: pops.len(),
            });
        }
        for (b, p) in pops.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(HbacError::InvalidState(format!("population {b} is {p}")));
            }
            if *p < 0.0 {
                if *p < -NEGATIVE_CLAMP {
                    return Err(HbacError::InvalidState(format!(
                        "population {b} = {p} is negative"
                    )));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = pops.iter().sum();
        let drift = (sum - 1.0).abs();
        if drift > HARD_SUM_LIMIT {
            return Err(HbacError::InvalidState(format!("populations sum to {sum}")));
        }
        if drift > RENORMALIZE_ABOVE {
            pops.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(Self { n, pops })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_width(n)?;
        let p = 1.0 / (1usize << n) as f64;
        Ok(Self {
            n,
            pops: vec![p; 1 << n],
        })
    }

    /// Computational basis state |b⟩.
    pub fn basis(n: usize, b: usize) -> Result<Self> {
        check_width(n)?;
        if b >= 1 << n {
            return Err(HbacError::InvalidArgument(format!("basis index {b} out of range")));
        }
        let mut pops = vec![0.0; 1 << n];
        pops[b] = 1.0;
        Ok(Self { n, pops })
    }

    /// Uncorrelated spins: pops[b] = Π_i (1 + (−1)^{b_i} ε_i)/2.
    pub fn product(eps: &[f64]) -> Result<Self> {
        let n = eps.len();
        check_width(n)?;
        check_polarizations(eps)?;
        let pops = (0..1usize << n)
            .map(|b| {
                eps.iter()
                    .enumerate()
                    .map(|(i, e)| 0.5 * (1.0 + sign(b, i, n) * e))
                    .product()
            })
            .collect();
        Ok(Self { n, pops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pops(&self) -> &[f64] {
        &self.pops
    }

    pub fn into_pops(self) -> Vec<f64> {
        self.pops
    }

    /// P(spin i = 0) − P(spin i = 1).
    pub fn polarization_of(&self, i: usize) -> Result<f64> {
        check_index(i, self.n)?;
        Ok(self
            .pops
            .iter()
            .enumerate()
            .map(|(b, p)| sign(b, i, self.n) * p)
            .sum())
    }

    /// Marginal over the kept qubits (original relative order).
    pub fn reduce(&self, keep: &[usize]) -> Result<DiagState> {
        let keep = check_keep(keep, self.n)?;
        let mut out = vec![0.0; 1 << keep.len()];
        for (b, p) in self.pops.iter().enumerate() {
            out[project_index(b, &keep, self.n)] += p;
        }
        Ok(DiagState {
            n: keep.len(),
            pops: out,
        })
    }

    /// Shannon entropy of the populations in bits.
    pub fn entropy(&self) -> f64 {
        self.pops
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// pops′[perm(b)] = pops[b]; phases cancel under diagonal conjugation.
    pub fn apply(&self, u: &PermutationUnitary) -> Result<DiagState> {
        if u.n() != self.n {
            return Err(HbacError::WidthMismatch {
                expected: self.n,
                got: u.n(),
            });
        }
        let mut out = vec![0.0; self.pops.len()];
        for (b, &p) in self.pops.iter().enumerate() {
            out[u.perm()[b]] = p;
        }
        Ok(DiagState { n: self.n, pops: out })
    }

    /// `basis_bitstring,population` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("basis,population\n");
        for (b, p) in self.pops.iter().enumerate() {
            let _ = writeln!(s, "{},{}", basis_label(b, self.n), crate::csv::fmt_float(*p));
        }
        s
    }

    fn relax_in_place(&mut self, eq: &[f64], t1: &[f64], t: f64) -> Result<()> {
        let lambdas = decay_factors(eq, t1, t, self.n)?;
        check_polarizations(eq)?;
        let n = self.n;
        for i in 0..n {
            let lam = lambdas[i];
            if lam == 1.0 {
                continue;
            }
            let shift = 0.5 * (1.0 - lam) * eq[i];
            // Column-stochastic 2×2 map with stationary bias eq[i].
            let stay0 = 0.5 * (1.0 + lam) + shift;
            let to0 = 0.5 * (1.0 - lam) + shift;
            let mask = 1usize << (n - 1 - i);
            for b in 0..self.pops.len() {
                if b & mask != 0 {
                    continue;
                }
                let (p0, p1) = (self.pops[b], self.pops[b | mask]);
                self.pops[b] = stay0 * p0 + to0 * p1;
                self.pops[b | mask] = (1.0 - stay0) * p0 + (1.0 - to0) * p1;
            }
        }
        Ok(())
    }
}

impl PopulationState for DiagState {
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
        let order = descending(&self.pops);
        let sorted = order.iter().map(|&b| self.pops[b]).collect();
        (
            DiagState { n: self.n, pops: sorted },
            PermutationUnitary::from_sorted_order(self.n, &order),
        )
    }

    fn relaxed(&self, eq: &[f64], t1: &[f64], t: f64) -> Result<Self> {
        let mut s = self.clone();
        s.relax_in_place(eq, t1, t)?;
        Ok(s)
    }

    fn with_replaced(&self, qubits: &[usize], eps: f64) -> Result<Self> {
        check_polarizations(&[eps])?;
        let n = self.n;
        let qubits = check_keep(qubits, n)?;
        let rmask = qubits.iter().fold(0usize, |m, &i| m | (1 << (n - 1 - i)));
        let mut marginal = vec![0.0; self.pops.len()];
        for (b, p) in self.pops.iter().enumerate() {
            marginal[b & !rmask] += p;
        }
        let pops = (0..self.pops.len())
            .map(|b| {
                let fresh: f64 = qubits
                    .iter()
                    .map(|&r| 0.5 * (1.0 + sign(b, r, n) * eps))
                    .product();
                marginal[b & !rmask] * fresh
            })
            .collect();
        Ok(DiagState { n, pops })
    }

    fn entropy_bits(&self) -> f64 {
        self.entropy()
    }

    fn check_valid(&self) -> Result<()> {
        if let Some((b, p)) = self.pops.iter().enumerate().find(|(_, p)| **p < -1e-15 || !p.is_finite()) {
            return Err(HbacError::InvalidState(format!("population {b} = {p}")));
        }
        let sum: f64 = self.pops.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(HbacError::InvalidState(format!("populations sum to {sum}")));
        }
        Ok(())
    }
}
