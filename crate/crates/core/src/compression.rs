//! Compression unitaries: the two-sort permutation U_TS, its 3-qubit gate
//! decomposition, and partner-pairing sorting.
//!
//! All unitaries here are signed permutations of the computational basis,
//! `U|b⟩ = phase[b]·|perm[b]⟩`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{HbacError, Result};
use crate::spin_model::MAX_SPINS;
use crate::state::PopulationState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
}

impl GateKind {
    pub fn control_count(self) -> usize {
        match self {
            GateKind::Not => 0,
            GateKind::Cnot => 1,
            GateKind::Toffoli => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = HbacError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NOT" | "X" => Ok(GateKind::Not),
            "CNOT" | "CX" => Ok(GateKind::Cnot),
            "TOFFOLI" | "CCNOT" | "CCX" => Ok(GateKind::Toffoli),
            _ => Err(HbacError::InvalidArgument(format!("unknown gate `{s}`"))),
        }
    }
}

/// A classical reversible gate: flip `target` iff every control is |1⟩.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub target: usize,
}

impl Gate {
    pub fn new(kind: GateKind, controls: Vec<usize>, target: usize) -> Result<Self> {
        if controls.len() != kind.control_count() {
            return Err(HbacError::InvalidArgument(format!(
                "{kind} takes {} controls, got {}",
                kind.control_count(),
                controls.len()
            )));
        }
        let mut wires = controls.clone();
        wires.push(target);
        wires.sort_unstable();
        if wires.windows(2).any(|w| w[0] == w[1]) {
            return Err(HbacError::InvalidArgument(format!(
                "{kind} wires must be distinct: controls {controls:?}, target {target}"
            )));
        }
        Ok(Self { kind, controls, target })
    }

    pub fn not(target: usize) -> Self {
        Self { kind: GateKind::Not, controls: vec![], target }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cnot, vec![control], target)
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Toffoli, vec![c0, c1], target)
    }

    pub fn check_width(&self, n: usize) -> Result<()> {
        for &w in self.controls.iter().chain(std::iter::once(&self.target)) {
            if w >= n {
                return Err(HbacError::IndexOutOfRange { index: w, width: n });
            }
        }
        Ok(())
    }

    /// Image of basis state `b` in an `n`-qubit register.
    fn map(&self, b: usize, n: usize) -> usize {
        let mask = |q: usize| 1usize << (n - 1 - q);
        if self.controls.iter().all(|&c| b & mask(c) != 0) {
            b ^ mask(self.target)
        } else {
            b
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.controls.is_empty() {
            let cs: Vec<String> = self.controls.iter().map(|c| c.to_string()).collect();
            write!(f, " c={}", cs.join(","))?;
        }
        write!(f, " t={}", self.target)
    }
}

/// Ordered gate list on an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        check_register(n, 1)?;
        for g in &gates {
            g.check_width(n)?;
        }
        Ok(Self { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// First `k` gates only.
    pub fn truncated(&self, k: usize) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates[..k.min(self.gates.len())].to_vec(),
        }
    }

    /// Composed basis permutation, gates applied in order.
    pub fn permutation(&self) -> PermutationUnitary {
        self.gates
            .iter()
            .fold(PermutationUnitary::identity_unchecked(self.n), |acc, g| {
                acc.then(&gate_permutation_unchecked(g, self.n))
            })
    }

    /// Parse the one-gate-per-line text format. Blank lines and `#`
    /// comments are ignored; the width is `n`.
    pub fn parse(text: &str, n: usize) -> Result<Circuit> {
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| HbacError::CircuitParse { line: line_no, message };
            let mut parts = line.split_whitespace();
            let kind: GateKind = parts
                .next()
                .expect("nonempty line")
                .parse()
                .map_err(|e: HbacError| err(e.to_string()))?;
            let mut controls = Vec::new();
            let mut target = None;
            for field in parts {
                let (key, value) = field
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, got `{field}`")))?;
                let parse_idx = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad qubit index `{s}`")))
                };
                match key {
                    "c" => {
                        for s in value.split(',') {
                            controls.push(parse_idx(s)?);
                        }
                    }
                    "t" => target = Some(parse_idx(value)?),
                    other => return Err(err(format!("unknown field `{other}`"))),
                }
            }
            let target = target.ok_or_else(|| err("missing t=".into()))?;
            let gate = Gate::new(kind, controls, target).map_err(|e| err(e.to_string()))?;
            gate.check_width(n).map_err(|e| err(e.to_string()))?;
            gates.push(gate);
        }
        Circuit::new(n, gates)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Signed basis permutation `U|b⟩ = phase[b]·|perm[b]⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationUnitary {
    n: usize,
    perm: Vec<usize>,
    phases: Vec<i8>,
}

fn check_register(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_SPINS {
        return Err(HbacError::InvalidArgument(format!(
            "register width {n} outside {min}..={MAX_SPINS}"
        )));
    }
    Ok(())
}

impl PermutationUnitary {
    pub fn new(n: usize, perm: Vec<usize>, phases: Vec<i8>) -> Result<Self> {
        check_register(n, 1)?;
        let dim = 1usize << n;
        if perm.len() != dim || phases.len() != dim {
            return Err(HbacError::WidthMismatch {
                expected: dim,
                got: perm.len().min(phases.len()),
            });
        }
        let mut seen = vec![false; dim];
        for &p in &perm {
            if p >= dim || seen[p] {
                return Err(HbacError::InvalidArgument(format!(
                    "not a bijection on 0..{dim} (image {p})"
                )));
            }
            seen[p] = true;
        }
        if let Some(&bad) = phases.iter().find(|&&s| s != 1 && s != -1) {
            return Err(HbacError::InvalidArgument(format!("phase {bad} is not ±1")));
        }
        Ok(Self { n, perm, phases })
    }

    pub fn from_perm(n: usize, perm: Vec<usize>) -> Result<Self> {
        let phases = vec![1; perm.len()];
        Self::new(n, perm, phases)
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_register(n, 1)?;
        Ok(Self::identity_unchecked(n))
    }

    fn identity_unchecked(n: usize) -> Self {
        Self {
            n,
            perm: (0..1usize << n).collect(),
            phases: vec![1; 1 << n],
        }
    }

    fn with_perm(mut self, perm: Vec<usize>) -> Self {
        self.perm = perm;
        self
    }

    /// The permutation that moves basis `order[k]` to position `k`.
    pub fn from_sorted_order(n: usize, order: &[usize]) -> Self {
        let mut perm = vec![0; order.len()];
        for (k, &b) in order.iter().enumerate() {
            perm[b] = k;
        }
        Self {
            n,
            perm,
            phases: vec![1; order.len()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[i8] {
        &self.phases
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(b, &p)| b == p) && self.phases.iter().all(|&s| s == 1)
    }

    /// `self` followed by `next`, i.e. the operator `next·self`.
    pub fn then(&self, next: &PermutationUnitary) -> PermutationUnitary {
        assert_eq!(self.n, next.n, "composing permutations of different widths");
        let perm = self.perm.iter().map(|&p| next.perm[p]).collect();
        let phases = self
            .perm
            .iter()
            .zip(&self.phases)
            .map(|(&p, &s)| s * next.phases[p])
            .collect();
        PermutationUnitary { n: self.n, perm, phases }
    }

    pub fn inverse(&self) -> PermutationUnitary {
        let mut perm = vec![0; self.perm.len()];
        let mut phases = vec![1; self.perm.len()];
        for (b, &p) in self.perm.iter().enumerate() {
            perm[p] = b;
            phases[p] = self.phases[b];
        }
        PermutationUnitary { n: self.n, perm, phases }
    }

    /// Dense matrix with `M[perm[b], b] = phase[b]`.
    pub fn to_matrix(&self) -> DMatrix<Complex<f64>> {
        let dim = self.perm.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (b, (&p, &s)) in self.perm.iter().zip(&self.phases).enumerate() {
            m[(p, b)] = Complex::new(f64::from(s), 0.0);
        }
        m
    }
}

/// Two-sort compression: fixes |0…0⟩ and |1…1⟩ and swaps (1,2), (3,4), ….
pub fn build_uts(n: usize) -> Result<PermutationUnitary> {
    check_register(n, 2)?;
    let dim = 1usize << n;
    let mut perm: Vec<usize> = (0..dim).collect();
    for k in (1..dim - 1).step_by(2) {
        perm.swap(k, k + 1);
    }
    Ok(PermutationUnitary::identity_unchecked(n).with_perm(perm))
}

/// Three-qubit U_TS with the sign of the |110⟩ → |101⟩ amplitude reversed.
pub fn build_uts_prime3() -> PermutationUnitary {
    let mut u = build_uts(3).expect("n = 3 is valid");
    u.phases[0b110] = -1;
    u
}

/// Basis permutation of a single gate on `n` qubits.
pub fn gate_permutation(g: &Gate, n: usize) -> Result<PermutationUnitary> {
    check_register(n, 1)?;
    g.check_width(n)?;
    Ok(gate_permutation_unchecked(g, n))
}

fn gate_permutation_unchecked(g: &Gate, n: usize) -> PermutationUnitary {
    PermutationUnitary::identity_unchecked(n).with_perm((0..1usize << n).map(|b| g.map(b, n)).collect())
}

/// Kind sequence of the 3-qubit decomposition.
pub const TSAC3_KINDS: [GateKind; 8] = [
    GateKind::Not,
    GateKind::Cnot,
    GateKind::Toffoli,
    GateKind::Toffoli,
    GateKind::Not,
    GateKind::Toffoli,
    GateKind::Cnot,
    GateKind::Not,
];

/// The 3-qubit U_TS as NOT, CNOT, TOFFOLI, TOFFOLI, NOT, TOFFOLI, CNOT, NOT.
/// Gates 1–3 are the cyclic shift b → b − 1 (mod 8).
pub fn tsac_circuit3() -> Circuit {
    let g = |k: GateKind, c: &[usize], t: usize| Gate {
        kind: k,
        controls: c.to_vec(),
        target: t,
    };
    Circuit {
        n: 3,
        gates: vec![
            g(GateKind::Not, &[], 2),
            g(GateKind::Cnot, &[2], 1),
            g(GateKind::Toffoli, &[1, 2], 0),
            g(GateKind::Toffoli, &[0, 1], 2),
            g(GateKind::Not, &[], 2),
            g(GateKind::Toffoli, &[1, 2], 0),
            g(GateKind::Cnot, &[2], 1),
            g(GateKind::Not, &[], 2),
        ],
    }
}

/// Cyclic shift b → b + k (mod 2^n).
pub fn cyclic_shift(n: usize, k: isize) -> Result<PermutationUnitary> {
    check_register(n, 1)?;
    let dim = 1isize << n;
    let perm = (0..dim).map(|b| (b + k).rem_euclid(dim) as usize).collect();
    Ok(PermutationUnitary::identity_unchecked(n).with_perm(perm))
}

fn wirings(kind: GateKind, n: usize) -> Vec<Gate> {
    let mut out = Vec::new();
    for t in 0..n {
        match kind {
            GateKind::Not => out.push(Gate::not(t)),
            GateKind::Cnot => {
                for c in (0..n).filter(|&c| c != t) {
                    out.push(Gate { kind, controls: vec![c], target: t });
                }
            }
            GateKind::Toffoli => {
                for c0 in 0..n {
                    for c1 in (c0 + 1)..n {
                        if c0 != t && c1 != t {
                            out.push(Gate { kind, controls: vec![c0, c1], target: t });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every wire assignment of [`TSAC3_KINDS`] whose first three gates form a
/// cyclic shift by ±1 and whose full permutation equals U_TS(3).
pub fn search_tsac_wiring() -> Vec<Circuit> {
    let n = 3;
    let target = build_uts(n).expect("n = 3 is valid");
    let shifts = [cyclic_shift(n, 1).unwrap(), cyclic_shift(n, -1).unwrap()];
    let options: Vec<Vec<Gate>> = TSAC3_KINDS.iter().map(|&k| wirings(k, n)).collect();
    let mut found = Vec::new();
    let mut chosen: Vec<Gate> = Vec::with_capacity(8);
    fn recurse(
        depth: usize,
        acc: PermutationUnitary,
        options: &[Vec<Gate>],
        chosen: &mut Vec<Gate>,
        shifts: &[PermutationUnitary],
        target: &PermutationUnitary,
        found: &mut Vec<Circuit>,
    ) {
        if depth == 3 && !shifts.iter().any(|s| s.perm == acc.perm) {
            return;
        }
        if depth == options.len() {
            if acc.perm == target.perm {
                found.push(Circuit { n: acc.n, gates: chosen.clone() });
            }
            return;
        }
        for g in &options[depth] {
            let next = acc.then(&gate_permutation_unchecked(g, acc.n));
            chosen.push(g.clone());
            recurse(depth + 1, next, options, chosen, shifts, target, found);
            chosen.pop();
        }
    }
    recurse(
        0,
        PermutationUnitary::identity_unchecked(n),
        &options,
        &mut chosen,
        &shifts,
        &target,
        &mut found,
    );
    found
}

/// Conjugate a diagonal state by `u`.
pub fn apply<S: PopulationState>(state: &S, u: &PermutationUnitary) -> Result<S> {
    state.permuted(u)
}

/// Apply `c` gate by gate, recording every spin's polarization after each
/// gate (one row per gate).
pub fn apply_circuit_traced<S: PopulationState>(state: &S, c: &Circuit) -> Result<(S, Vec<Vec<f64>>)> {
    if c.n != state.width() {
        return Err(HbacError::WidthMismatch {
            expected: state.width(),
            got: c.n,
        });
    }
    let mut s = state.clone();
    let mut table = Vec::with_capacity(c.len());
    for g in &c.gates {
        s = s.permuted(&gate_permutation_unchecked(g, c.n))?;
        table.push(s.polarizations());
    }
    Ok((s, table))
}

/// Partner-pairing step: sort populations descending (stable by index).
pub fn ppa_sort<S: PopulationState>(state: &S) -> (S, PermutationUnitary) {
    state.sorted_descending()
}
