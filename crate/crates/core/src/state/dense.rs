use nalgebra::{Complex, DMatrix};

use super::{bit, check_index, check_keep, check_polarizations, check_width, project_index, DiagState};
use crate::compression::PermutationUnitary;
use crate::error::{HbacError, Result};

type C64 = Complex<f64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;

/// Dense 2^n × 2^n density matrix. Slow; used to cross-check [`DiagState`].
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n: usize,
    rho: DMatrix<C64>,
}

fn single_qubit_thermal(eps: f64) -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5 * (1.0 + eps), 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.5 * (1.0 - eps), 0.0),
        ],
    )
}

/// Embed a single-qubit operator on qubit `i` of `n` (spin 0 leftmost).
fn embed(op: &DMatrix<C64>, i: usize, n: usize) -> DMatrix<C64> {
    let left = DMatrix::<C64>::identity(1 << i, 1 << i);
    let right = DMatrix::<C64>::identity(1 << (n - 1 - i), 1 << (n - 1 - i));
    left.kronecker(op).kronecker(&right)
}

impl FullState {
    pub fn new(n: usize, rho: DMatrix<C64>) -> Result<Self> {
        check_width(n)?;
        let dim = 1 << n;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(HbacError::WidthMismatch {
                expected: dim,
                got: rho.nrows(),
            });
        }
        let s = Self { n, rho };
        s.validate()?;
        Ok(s)
    }

    pub fn product(eps: &[f64]) -> Result<Self> {
        check_width(eps.len())?;
        check_polarizations(eps)?;
        let mut rho = DMatrix::<C64>::identity(1, 1);
        for &e in eps {
            rho = rho.kronecker(&single_qubit_thermal(e));
        }
        Ok(Self { n: eps.len(), rho })
    }

    pub fn from_diag(d: &DiagState) -> Self {
        let diag: Vec<C64> = d.pops().iter().map(|&p| C64::new(p, 0.0)).collect();
        Self {
            n: d.n(),
            rho: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    /// Hermiticity, unit trace and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let herm = (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(HbacError::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(HbacError::InvalidState(format!("trace {tr}")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -EIGEN_TOL {
            return Err(HbacError::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Real eigenvalues of the (Hermitian) density matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.rho.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// U ρ U†.
    pub fn conjugate(&self, u: &DMatrix<C64>) -> Result<Self> {
        if u.nrows() != self.rho.nrows() || u.ncols() != self.rho.ncols() {
            return Err(HbacError::WidthMismatch {
                expected: self.rho.nrows(),
                got: u.nrows(),
            });
        }
        Ok(Self {
            n: self.n,
            rho: u * &self.rho * u.adjoint(),
        })
    }

    pub fn apply(&self, u: &PermutationUnitary) -> Result<Self> {
        if u.n() != self.n {
            return Err(HbacError::WidthMismatch {
                expected: self.n,
                got: u.n(),
            });
        }
        self.conjugate(&u.to_matrix())
    }

    pub fn polarization_of(&self, i: usize) -> Result<f64> {
        check_index(i, self.n)?;
        Ok((0..self.rho.nrows())
            .map(|b| {
                let p = self.rho[(b, b)].re;
                if bit(b, i, self.n) == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }

    /// Partial trace onto the kept qubits.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<FullState> {
        let keep = check_keep(keep, self.n)?;
        let n = self.n;
        let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let dim = 1 << keep.len();
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        for a in 0..self.rho.nrows() {
            for b in 0..self.rho.ncols() {
                if project_index(a, &traced, n) != project_index(b, &traced, n) {
                    continue;
                }
                out[(project_index(a, &keep, n), project_index(b, &keep, n))] += self.rho[(a, b)];
            }
        }
        Ok(FullState { n: keep.len(), rho: out })
    }

    /// Trace out `qubits` and tensor in fresh thermal qubits of bias `eps`
    /// at the same positions.
    pub fn replace_qubits(&self, qubits: &[usize], eps: f64) -> Result<FullState> {
        check_polarizations(&[eps])?;
        let qubits = check_keep(qubits, self.n)?;
        let n = self.n;
        let keep: Vec<usize> = (0..n).filter(|i| !qubits.contains(i)).collect();
        let fresh = single_qubit_thermal(eps);
        let reduced = if keep.is_empty() {
            None
        } else {
            Some(self.partial_trace(&keep)?)
        };
        let dim = self.rho.nrows();
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let mut v = match &reduced {
                    Some(r) => r.rho[(project_index(a, &keep, n), project_index(b, &keep, n))],
                    None => C64::new(1.0, 0.0),
                };
                for &q in &qubits {
                    v *= fresh[(bit(a, q, n), bit(b, q, n))];
                }
                out[(a, b)] = v;
            }
        }
        Ok(FullState { n, rho: out })
    }

    /// Apply a single-qubit channel given by Kraus operators on qubit `i`.
    pub fn apply_kraus(&self, i: usize, kraus: &[DMatrix<C64>]) -> Result<FullState> {
        check_index(i, self.n)?;
        let dim = self.rho.nrows();
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        for k in kraus {
            let big = embed(k, i, self.n);
            out += &big * &self.rho * big.adjoint();
        }
        Ok(FullState { n: self.n, rho: out })
    }

    /// Generalized amplitude damping on every spin: the Kraus form of the
    /// T1 channel with stationary bias `eq[i]` and decay e^(−t/T1).
    pub fn relax(&self, eq: &[f64], t1: &[f64], t: f64) -> Result<FullState> {
        let lambdas = super::decay_factors(eq, t1, t, self.n)?;
        check_polarizations(eq)?;
        let mut s = self.clone();
        for i in 0..self.n {
            s = s.apply_kraus(i, &thermal_damping_kraus(eq[i], lambdas[i]))?;
        }
        Ok(s)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// Largest off-diagonal magnitude.
    pub fn max_coherence(&self) -> f64 {
        let mut m: f64 = 0.0;
        for a in 0..self.rho.nrows() {
            for b in 0..self.rho.ncols() {
                if a != b {
                    m = m.max(self.rho[(a, b)].norm());
                }
            }
        }
        m
    }

    /// The diagonal as a [`DiagState`].
    pub fn diagonal(&self) -> Result<DiagState> {
        DiagState::new(self.n, (0..self.rho.nrows()).map(|b| self.rho[(b, b)].re).collect())
    }
}

/// Kraus operators of generalized amplitude damping with ground-state
/// weight (1+eq)/2 and damping γ = 1 − λ.
pub fn thermal_damping_kraus(eq: f64, lambda: f64) -> Vec<DMatrix<C64>> {
    let p = 0.5 * (1.0 + eq);
    let g = 1.0 - lambda;
    let c = |x: f64| C64::new(x, 0.0);
    let m = |a: f64, b: f64, cc: f64, d: f64| DMatrix::from_row_slice(2, 2, &[c(a), c(b), c(cc), c(d)]);
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    vec![
        m(sp, 0.0, 0.0, sp * lambda.sqrt()),
        m(0.0, sp * g.sqrt(), 0.0, 0.0),
        m(sq * lambda.sqrt(), 0.0, 0.0, sq),
        m(0.0, 0.0, sq * g.sqrt(), 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_diag_engine() {
        let eps = [0.25, 0.25, 1.0];
        let f = FullState::product(&eps).unwrap();
        let d = DiagState::product(&eps).unwrap();
        assert_eq!(f.max_coherence(), 0.0);
        for (a, b) in f.diagonal().unwrap().pops().iter().zip(d.pops()) {
            assert!((a - b).abs() < 1e-15);
        }
        f.validate().unwrap();
    }

    #[test]
    fn kraus_set_is_trace_preserving() {
        let ks = thermal_damping_kraus(0.3, 0.6);
        let mut sum = DMatrix::<C64>::zeros(2, 2);
        for k in &ks {
            sum += k.adjoint() * k;
        }
        let id = DMatrix::<C64>::identity(2, 2);
        assert!((sum - id).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn partial_trace_of_product() {
        let f = FullState::product(&[0.2, -0.4, 0.9]).unwrap();
        let r = f.partial_trace(&[1]).unwrap();
        assert!((r.polarization_of(0).unwrap() + 0.4).abs() < 1e-15);
        let r = f.partial_trace(&[0, 2]).unwrap();
        assert!((r.polarization_of(1).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_states() {
        let bad = DMatrix::<C64>::from_diagonal_element(2, 2, C64::new(0.7, 0.0));
        assert!(FullState::new(1, bad).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[C64::new(1.2, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.2, 0.0)]);
        assert!(FullState::new(1, neg).is_err());
    }
}
