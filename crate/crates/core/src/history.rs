//! Path-clock computation Hamiltonians: history states, propagation plus
//! in/out penalties, ground-energy bounds, the single-ancilla guard circuit,
//! and invariant-subspace analysis of clock transition systems.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::balance::BalanceParams;
use crate::error::{Error, Result};
use crate::log2::Log2Mag;
use crate::qpe::sim::{apply_controlled, apply_single};
use crate::qpe::{PhaseEncoding, StateVector};
use crate::spectra::HermitianOperator;

/// One placed gate of a circuit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateOp {
    pub name: String,
    pub targets: Vec<usize>,
    #[serde(default)]
    pub controls: Vec<usize>,
    #[serde(default)]
    pub params: Vec<f64>,
}

/// Ordered list of ≤2-qubit gates on an n-qubit register.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub gates: Vec<GateOp>,
}

/// Single-qubit matrix for a named gate.
fn named_gate(name: &str, params: &[f64]) -> Result<Matrix2<Complex64>> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    Ok(match name {
        "I" => Matrix2::identity(),
        "X" => Matrix2::new(z, one, one, z),
        "Y" => Matrix2::new(z, -Complex64::i(), Complex64::i(), z),
        "Z" => Matrix2::new(one, z, z, -one),
        "H" | "T" | "S" => {
            crate::qpe::sk::word_from_string(name).unwrap()[0].matrix()
        }
        // Real rotation by the full angle: [[cos, -sin], [sin, cos]].
        "R" => {
            let th = *params.first().ok_or_else(|| Error::invalid("R needs an angle"))?;
            Matrix2::new(
                Complex64::new(th.cos(), 0.0),
                Complex64::new(-th.sin(), 0.0),
                Complex64::new(th.sin(), 0.0),
                Complex64::new(th.cos(), 0.0),
            )
        }
        "RY" => {
            let th = *params.first().ok_or_else(|| Error::invalid("RY needs an angle"))?;
            Matrix2::new(
                Complex64::new((th / 2.0).cos(), 0.0),
                Complex64::new(-(th / 2.0).sin(), 0.0),
                Complex64::new((th / 2.0).sin(), 0.0),
                Complex64::new((th / 2.0).cos(), 0.0),
            )
        }
        "PHASE" => {
            let th = *params.first().ok_or_else(|| Error::invalid("PHASE needs an angle"))?;
            crate::qpe::sk::phase_gate(th)
        }
        other => return Err(Error::invalid(format!("unknown gate `{other}`"))),
    })
}

impl CircuitSpec {
    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if g.targets.len() != 1 {
                return Err(Error::invalid("gates act on exactly one target qubit"));
            }
            if g.controls.len() > 1 {
                return Err(Error::invalid("at most one control per gate"));
            }
            for &q in g.targets.iter().chain(&g.controls) {
                if q >= self.n_qubits {
                    return Err(Error::invalid(format!("qubit {q} outside register")));
                }
            }
            named_gate(&g.name, &g.params)?;
        }
        Ok(())
    }

    /// Apply gate t (1-based) to a register amplitude vector.
    fn apply_gate(&self, t: usize, amps: &mut [Complex64]) -> Result<()> {
        let g = &self.gates[t - 1];
        let m = named_gate(&g.name, &g.params)?;
        match g.controls.first() {
            Some(&c) => apply_controlled(amps, self.n_qubits, c, g.targets[0], &m),
            None => apply_single(amps, self.n_qubits, g.targets[0], &m),
        }
        Ok(())
    }

    /// Full 2ⁿ×2ⁿ unitary of gate t (1-based).
    fn gate_unitary(&self, t: usize) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for col in 0..dim {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[col] = Complex64::new(1.0, 0.0);
            self.apply_gate(t, &mut amps)?;
            for row in 0..dim {
                u[(row, col)] = amps[row];
            }
        }
        Ok(u)
    }

    /// Register states ψ_0..ψ_T along the computation.
    fn trajectory(&self, psi0: &StateVector) -> Result<Vec<Vec<Complex64>>> {
        if psi0.n_qubits != self.n_qubits {
            return Err(Error::invalid("initial state size mismatch"));
        }
        self.validate()?;
        let mut states = vec![psi0.amplitudes.clone()];
        for t in 1..=self.gates.len() {
            let mut next = states.last().unwrap().clone();
            self.apply_gate(t, &mut next)?;
            states.push(next);
        }
        Ok(states)
    }
}

/// Uniform superposition (1/√(T+1)) Σ_t |t⟩ ⊗ U_t⋯U₁|ψ₀⟩ over the clock
/// states 0..T, where T is the number of gates.
pub fn history_state(c: &CircuitSpec, psi0: &StateVector) -> Result<Vec<Complex64>> {
    let states = c.trajectory(psi0)?;
    let t_clock = states.len();
    let reg = 1usize << c.n_qubits;
    let norm = (t_clock as f64).sqrt();
    let mut out = Vec::with_capacity(t_clock * reg);
    for st in &states {
        out.extend(st.iter().map(|a| a / norm));
    }
    Ok(out)
}

/// Penalty configuration: an input projector active on clock window
/// [0, T_init) and an output projector at the final clock state.
#[derive(Clone, Debug)]
pub struct PenaltySpec {
    pub pi_in: Option<DMatrix<Complex64>>,
    pub t_init: usize,
    pub w_in: f64,
    pub pi_out: Option<DMatrix<Complex64>>,
    pub w_out: f64,
}

impl PenaltySpec {
    /// No penalties at all.
    pub fn none() -> Self {
        PenaltySpec {
            pi_in: None,
            t_init: 1,
            w_in: 0.0,
            pi_out: None,
            w_out: 0.0,
        }
    }

    fn validate(&self, reg_dim: usize, t_steps: usize) -> Result<()> {
        if self.t_init >= t_steps.max(1) && self.pi_in.is_some() {
            return Err(Error::invalid("T_init must be smaller than T"));
        }
        if self.w_in < 0.0 || self.w_out < 0.0 {
            return Err(Error::invalid("penalty weights must be nonnegative"));
        }
        for (p, what) in [(&self.pi_in, "input"), (&self.pi_out, "output")] {
            if let Some(p) = p {
                if p.nrows() != reg_dim || p.ncols() != reg_dim {
                    return Err(Error::invalid(format!("{what} projector has wrong shape")));
                }
                let idem = p * p - p;
                if idem.iter().any(|v| v.norm() > 1e-10) {
                    return Err(Error::invalid(format!("{what} projector is not idempotent")));
                }
                let asym = p.adjoint() - p;
                if asym.iter().any(|v| v.norm() > 1e-10) {
                    return Err(Error::invalid(format!("{what} projector is not Hermitian")));
                }
            }
        }
        Ok(())
    }
}

/// Default input window length, ⌈log₂ T⌉ clamped to [1, T−1].
pub fn default_t_init(t_steps: usize) -> usize {
    let raw = (t_steps.max(2) as f64).log2().ceil() as usize;
    raw.clamp(1, t_steps.saturating_sub(1).max(1))
}

/// Propagation Hamiltonian plus clock-windowed penalties on
/// clock ⊗ register space (clock dimension T+1 for T gates).
///
/// With both penalties absent the operator is frustration-free: the history
/// state is its unique-per-trajectory zero-energy ground state.
pub fn feynman_kitaev(c: &CircuitSpec, p: &PenaltySpec) -> Result<HermitianOperator> {
    c.validate()?;
    let t_steps = c.gates.len();
    if t_steps < 1 {
        return Err(Error::invalid("need at least one gate"));
    }
    let reg = 1usize << c.n_qubits;
    p.validate(reg, t_steps)?;
    let dim = (t_steps + 1) * reg;
    if dim > 1 << 20 {
        return Err(Error::Budget {
            what: "clock ⊗ register space".into(),
            needed: dim as u128,
            budget: 1 << 20,
        });
    }
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
    let idx = |t: usize, r: usize| t * reg + r;
    let half = Complex64::new(0.5, 0.0);
    for t in 1..=t_steps {
        // ½(|t−1⟩⟨t−1| + |t⟩⟨t|) ⊗ 1 − ½(|t⟩⟨t−1| ⊗ U_t + h.c.)
        for r in 0..reg {
            entries.push((idx(t - 1, r), idx(t - 1, r), half));
            entries.push((idx(t, r), idx(t, r), half));
        }
        let u = c.gate_unitary(t)?;
        for row in 0..reg {
            for col in 0..reg {
                let v = u[(row, col)];
                if v.norm() > 0.0 {
                    entries.push((idx(t, row), idx(t - 1, col), -half * v));
                }
            }
        }
    }
    if let Some(pi) = &p.pi_in {
        for t in 0..p.t_init {
            for row in 0..reg {
                for col in row..reg {
                    let v = pi[(row, col)] * p.w_in;
                    if v.norm() > 0.0 {
                        entries.push((idx(t, row), idx(t, col), v));
                    }
                }
            }
        }
    }
    if let Some(pi) = &p.pi_out {
        for row in 0..reg {
            for col in row..reg {
                let v = pi[(row, col)] * p.w_out;
                if v.norm() > 0.0 {
                    entries.push((idx(t_steps, row), idx(t_steps, col), v));
                }
            }
        }
    }
    HermitianOperator::from_entries(dim, entries, format!("history[T={t_steps},n={}]", c.n_qubits))
}

/// Ground-energy upper bound ε·(1 − cos(π / (2(T − T_init) + 1))) for an
/// output penalty of weight/overlap ε.
pub fn gs_upper_bound(eps: f64, t_steps: usize, t_init: usize) -> Result<f64> {
    if t_init >= t_steps {
        return Err(Error::invalid("T_init must be smaller than T"));
    }
    let denom = 2 * (t_steps - t_init) + 1;
    Ok(eps * (1.0 - (std::f64::consts::PI / denom as f64).cos()))
}

/// Guard-circuit overlap (3/4)(1 − α²ε²), computed by simulating the
/// rotation/controlled-rotation sandwich around a toy machine of halting
/// amplitude ε, on (ancilla, tape, flag) qubits with the tape prepared as
/// α|1⟩ + √(1−α²)|0⟩.
pub fn ancilla_guard_overlap(alpha: f64, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid("alpha and eps must lie in [0,1]"));
    }
    let n = 3; // qubit 0: guard ancilla, qubit 1: tape, qubit 2: halt flag
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    // Tape superposition; ancilla and flag start at |0⟩.
    amps[0b000] = Complex64::new((1.0 - alpha * alpha).sqrt(), 0.0);
    amps[0b010] = Complex64::new(alpha, 0.0);
    let rot = |theta: f64| {
        Matrix2::new(
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(-theta.sin(), 0.0),
            Complex64::new(theta.sin(), 0.0),
            Complex64::new(theta.cos(), 0.0),
        )
    };
    let third = 2.0 * std::f64::consts::PI / 3.0;
    // Unconditional R_{2π/3} on the ancilla.
    apply_single(&mut amps, n, 0, &rot(third));
    // Controlled R_{−π/3} on the ancilla where the tape is set.
    apply_controlled(&mut amps, n, 1, 0, &rot(-third / 2.0));
    // Toy machine: halts (flips the flag) with amplitude ε when the tape is set.
    apply_controlled(&mut amps, n, 1, 2, &rot(eps.asin()));
    // Controlled R_{−π/3} on the ancilla where the machine halted.
    apply_controlled(&mut amps, n, 2, 0, &rot(-third / 2.0));
    let overlap: f64 = amps
        .iter()
        .enumerate()
        .filter(|(i, _)| i & 0b100 != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(overlap)
}

/// Ground-energy interval of the encoded-computation Hamiltonian at scale L,
/// in the log₂ domain: a T^{-2}-type lower bound when the register is too
/// short or the computation does not halt, and a ((2^{−ℓ}+δ)/T)²-type upper
/// bound when it halts.
#[derive(Clone, Copy, Debug, Serialize)]
pub enum SpectrumCase {
    /// λ_min ≥ the contained bound (log₂).
    LowerBound(Log2Mag),
    /// λ_min ≤ the contained bound (log₂).
    UpperBound(Log2Mag),
}

pub fn hqtm_spectrum_case(
    enc: &PhaseEncoding,
    m: u64,
    l: u64,
    halting: bool,
    params: &BalanceParams,
) -> Result<SpectrumCase> {
    enc.validate()?;
    if m > l {
        return Err(Error::invalid("m must not exceed L"));
    }
    let (t_lower, t_upper) = crate::balance::clock_runtime_bounds(l, params.xi)?;
    if (m as u32) < enc.eta || !halting {
        // Ω(T^{-2}) instantiated with the slowest admissible clock.
        return Ok(SpectrumCase::LowerBound(Log2Mag(-2.0 * t_upper.0)));
    }
    let delta = crate::qpe::delta_bound_log2(l, m, params.c1, params.c2)?;
    let ell_term = Log2Mag(-(enc.ell as f64));
    let amp = ell_term.add(delta);
    Ok(SpectrumCase::UpperBound(Log2Mag(
        2.0 * amp.0 - 2.0 * t_lower.0,
    )))
}

// ---------------------------------------------------------------------------
// Transition systems: standard-form partition and subspace classification
// ---------------------------------------------------------------------------

/// Directed clock-transition rules with attached register unitaries and an
/// illegal-state set; the clock action of every rule is diagonal in the
/// labelled basis (pairs of basis states), which is the standard-form shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitionSystem {
    pub clock_labels: Vec<String>,
    /// Rules (from, to, gate): |to⟩⟨from| ⊗ U transitions.
    pub rules: Vec<(usize, usize, GateOp)>,
    pub illegal: BTreeSet<usize>,
    pub n_qubits: usize,
}

impl TransitionSystem {
    pub fn validate(&self) -> Result<()> {
        let n = self.clock_labels.len();
        for &(a, b, ref g) in &self.rules {
            if a >= n || b >= n {
                return Err(Error::invalid("rule references unknown clock state"));
            }
            if a == b {
                return Err(Error::invalid(
                    "self-loop rules break the diagonal-clock condition",
                ));
            }
            named_gate(&g.name, &g.params)?;
        }
        if self.illegal.iter().any(|&s| s >= n) {
            return Err(Error::invalid("illegal set references unknown clock state"));
        }
        Ok(())
    }

    /// Assemble Σ_rules (|b⟩⟨b|+|a⟩⟨a|)/2 ⊗ 1 − (|b⟩⟨a| ⊗ U + h.c.)/2
    /// + Σ_illegal |s⟩⟨s| ⊗ 1.
    pub fn assemble(&self) -> Result<HermitianOperator> {
        self.validate()?;
        let reg = 1usize << self.n_qubits;
        let nc = self.clock_labels.len();
        let dim = nc * reg;
        let idx = |s: usize, r: usize| s * reg + r;
        let half = Complex64::new(0.5, 0.0);
        let mut entries = Vec::new();
        let circuit = |g: &GateOp| CircuitSpec {
            n_qubits: self.n_qubits,
            gates: vec![g.clone()],
        };
        for &(a, b, ref g) in &self.rules {
            for r in 0..reg {
                entries.push((idx(a, r), idx(a, r), half));
                entries.push((idx(b, r), idx(b, r), half));
            }
            let u = circuit(g).gate_unitary(1)?;
            for row in 0..reg {
                for col in 0..reg {
                    let v = u[(row, col)];
                    if v.norm() > 0.0 {
                        entries.push((idx(b, row), idx(a, col), -half * v));
                    }
                }
            }
        }
        for &s in &self.illegal {
            for r in 0..reg {
                entries.push((idx(s, r), idx(s, r), Complex64::new(1.0, 0.0)));
            }
        }
        HermitianOperator::from_entries(dim, entries, "transition-system")
    }

    /// Connected components of the undirected rule graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.clock_labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b, _) in &self.rules {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for s in 0..n {
            let r = find(&mut parent, s);
            groups.entry(r).or_default().push(s);
        }
        groups.into_values().collect()
    }
}

/// Partition into transition-closed clock subsets plus a block-diagonality
/// verification of the assembled operator across the partition.
pub struct PartitionReport {
    pub blocks: Vec<Vec<usize>>,
    /// Largest off-block matrix element magnitude.
    pub max_off_block: f64,
}

pub fn standard_form_partition(ts: &TransitionSystem) -> Result<PartitionReport> {
    ts.validate()?;
    let blocks = ts.components();
    let h = ts.assemble()?;
    let reg = 1usize << ts.n_qubits;
    let mut block_of = vec![0usize; ts.clock_labels.len()];
    for (bi, b) in blocks.iter().enumerate() {
        for &s in b {
            block_of[s] = bi;
        }
    }
    let mut max_off = 0.0f64;
    for &(i, j, v) in h.entries() {
        if block_of[i / reg] != block_of[j / reg] {
            max_off = max_off.max(v.norm());
        }
    }
    if max_off > 1e-12 {
        return Err(Error::invalid(format!(
            "assembly not block diagonal: off-block element {max_off:e}"
        )));
    }
    Ok(PartitionReport {
        blocks,
        max_off_block: max_off,
    })
}

/// Category of one partition element per the subspace trichotomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SubspaceCategory {
    /// All clock states illegal: energy at least 1.
    AllIllegal = 1,
    /// Mixed legal/illegal: energy at least that of a penalized path Laplacian.
    Mixed = 2,
    /// All legal: positive semidefiniteness is the only certified bound.
    AllLegal = 3,
}

/// Classification outcome with the certified numerical bound.
pub struct Classification {
    pub category: SubspaceCategory,
    /// Certified lower bound on λ_min of H restricted to the block.
    pub certified_lower_bound: f64,
    /// Eigensolved λ_min of the restriction, for the verification report.
    pub restricted_min: f64,
}

/// Classify one partition element S and certify the corresponding bound by
/// direct diagonalization of the restriction of the assembly to S.
pub fn clairvoyance_classify(ts: &TransitionSystem, s: &[usize]) -> Result<Classification> {
    ts.validate()?;
    if s.is_empty() {
        return Err(Error::invalid("empty subset"));
    }
    let h = ts.assemble()?;
    let reg = 1usize << ts.n_qubits;
    // Restriction of the assembly to the clock subset.
    let pos: BTreeMap<usize, usize> = s.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut entries = Vec::new();
    for &(i, j, v) in h.entries() {
        let (ci, cj) = (i / reg, j / reg);
        if let (Some(&pi), Some(&pj)) = (pos.get(&ci), pos.get(&cj)) {
            entries.push((pi * reg + i % reg, pj * reg + j % reg, v));
        }
    }
    let restricted = HermitianOperator::from_entries(s.len() * reg, entries, "restricted")?;
    let spec = crate::spectra::eigen_spectrum(&restricted, Some(1))?;
    let restricted_min = spec.eigenvalues[0];
    let n_illegal = s.iter().filter(|c| ts.illegal.contains(c)).count();
    let (category, certified) = if n_illegal == s.len() {
        (SubspaceCategory::AllIllegal, 1.0)
    } else if n_illegal > 0 {
        // Comparison matrix: path Laplacian of size |S| (halved, matching the
        // propagation normalization) plus a unit penalty on one basis state.
        let k = s
            .iter()
            .position(|c| ts.illegal.contains(c))
            .expect("mixed block has an illegal state");
        let m = s.len();
        let mut cmp = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            let deg = if i == 0 || i == m - 1 { 1.0 } else { 2.0 };
            cmp[(i, i)] = deg / 2.0;
            if i + 1 < m {
                cmp[(i, i + 1)] = -0.5;
                cmp[(i + 1, i)] = -0.5;
            }
        }
        cmp[(k, k)] += 1.0;
        let min = cmp
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        (SubspaceCategory::Mixed, min)
    } else {
        (SubspaceCategory::AllLegal, 0.0)
    };
    if restricted_min < certified - 1e-9 {
        return Err(Error::invalid(format!(
            "certified bound {certified} exceeds eigensolved minimum {restricted_min}"
        )));
    }
    Ok(Classification {
        category,
        certified_lower_bound: certified,
        restricted_min,
    })
}
