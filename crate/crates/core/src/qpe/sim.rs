//! Statevector simulation of phase estimation: controlled-phase ladder on an
//! eigenstate ancilla followed by an exact or gate-synthesized inverse QFT.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use super::sk::{phase_gate, sk_synthesize};
use super::StateVector;
use crate::error::{Error, Result};

/// Largest counting-register size accepted by the simulators.
pub const MAX_COUNTING_QUBITS: u32 = 12;

/// Apply a 2×2 gate to one qubit (big-endian numbering: qubit 0 is the most
/// significant index bit).
pub fn apply_single(amps: &mut [Complex64], n_qubits: usize, qubit: usize, m: &Matrix2<Complex64>) {
    assert!(qubit < n_qubits);
    let bit = 1usize << (n_qubits - 1 - qubit);
    for i in 0..amps.len() {
        if i & bit == 0 {
            let a0 = amps[i];
            let a1 = amps[i | bit];
            amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            amps[i | bit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
}

/// Apply a controlled 2×2 gate (control and target in big-endian numbering).
pub fn apply_controlled(
    amps: &mut [Complex64],
    n_qubits: usize,
    control: usize,
    target: usize,
    m: &Matrix2<Complex64>,
) {
    assert!(control < n_qubits && target < n_qubits && control != target);
    let cbit = 1usize << (n_qubits - 1 - control);
    let tbit = 1usize << (n_qubits - 1 - target);
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            let a0 = amps[i];
            let a1 = amps[i | tbit];
            amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            amps[i | tbit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
}

fn hadamard() -> Matrix2<Complex64> {
    super::sk::Gate::H.matrix()
}

/// How the inverse-QFT phase rotations are realized.
enum RotationMode {
    Exact,
    /// Every rotation replaced by a phase-aligned synthesized word.
    Synthesized { epsilon: f64, depth_budget: usize },
}

/// Pre-synthesized inverse-QFT rotation words, one per rotation order;
/// `None` means the exact rotation.
fn rotation_words(t: usize, mode: &RotationMode) -> Result<Vec<Option<Matrix2<Complex64>>>> {
    let mut words: Vec<Option<Matrix2<Complex64>>> = vec![None; t + 2];
    if let RotationMode::Synthesized {
        epsilon,
        depth_budget,
    } = mode
    {
        for order in 2..=t.max(1) {
            let theta = -2.0 * std::f64::consts::PI * 2.0f64.powi(-(order as i32));
            let seq = sk_synthesize(theta, *epsilon, *depth_budget)?;
            words[order] = Some(seq.aligned_product());
        }
    }
    Ok(words)
}

/// Apply the full t-bit phase-estimation circuit for U_φ = diag(1, e^{iπφ})
/// to an arbitrary (t+1)-qubit state: Hadamard ladder, controlled-U powers
/// onto the last qubit, then the inverse QFT on the counting register with
/// the given rotation words.
fn apply_qpe_circuit(
    amps: &mut [Complex64],
    phi: f64,
    t: usize,
    words: &[Option<Matrix2<Complex64>>],
) {
    let n = t + 1;
    assert!(amps.len() == 1 << n);
    let h = hadamard();
    for q in 0..t {
        apply_single(amps, n, q, &h);
    }
    // Controlled-U_φ ladder: counting qubit q has bit significance 2^{t-1-q},
    // so it controls U_φ^{2^{t-q}}, i.e. the phase e^{2πi·φ·2^{t-1-q}}.
    for q in 0..t {
        let power = 2.0f64.powi((t - q) as i32);
        let u_pow = phase_gate(std::f64::consts::PI * phi * power);
        apply_controlled(amps, n, q, t, &u_pow);
    }
    // Inverse QFT on the counting register: bit-reversal swaps, then the
    // reversed circuit with daggered rotations.
    for q in 0..t / 2 {
        swap_qubits(amps, n, q, t - 1 - q);
    }
    for j in (0..t).rev() {
        for k in ((j + 1)..t).rev() {
            let order = k - j + 1;
            let gate = match &words[order] {
                Some(w) => *w,
                None => phase_gate(-2.0 * std::f64::consts::PI * 2.0f64.powi(-(order as i32))),
            };
            apply_controlled(amps, n, k, j, &gate);
        }
        apply_single(amps, n, j, &h);
    }
}

fn check_args(phi: f64, t: u32) -> Result<()> {
    if t < 1 || t > MAX_COUNTING_QUBITS {
        return Err(Error::Budget {
            what: "phase-estimation counting register".into(),
            needed: t as u128,
            budget: MAX_COUNTING_QUBITS as u128,
        });
    }
    if !(0.0..1.0).contains(&phi) {
        return Err(Error::invalid("phase must lie in [0,1)"));
    }
    Ok(())
}

/// Run t-bit phase estimation of U_φ = diag(1, e^{iπφ}) prepared on an
/// eigenstate ancilla; returns the counting-register statevector.
fn qpe_sim_impl(phi: f64, t: u32, mode: RotationMode) -> Result<StateVector> {
    check_args(phi, t)?;
    let t = t as usize;
    let n = t + 1; // counting register + eigenstate ancilla (last qubit)
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[1] = Complex64::new(1.0, 0.0); // |0…0⟩ ⊗ |1⟩
    let words = rotation_words(t, &mode)?;
    apply_qpe_circuit(&mut amps, phi, t, &words);
    // The ancilla stayed in |1⟩; peel it off and renormalize exactly.
    let mut counting = Vec::with_capacity(1 << t);
    let mut residue = 0.0f64;
    for x in 0..1 << t {
        counting.push(amps[(x << 1) | 1]);
        residue += amps[x << 1].norm_sqr();
    }
    if residue > 1e-20 {
        return Err(Error::invalid(format!(
            "ancilla left its eigenstate (residue {residue:.3e})"
        )));
    }
    let norm: f64 = counting.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in counting.iter_mut() {
        *a /= norm;
    }
    Ok(StateVector::new(t, counting))
}

fn swap_qubits(amps: &mut [Complex64], n_qubits: usize, a: usize, b: usize) {
    let abit = 1usize << (n_qubits - 1 - a);
    let bbit = 1usize << (n_qubits - 1 - b);
    for i in 0..amps.len() {
        if i & abit != 0 && i & bbit == 0 {
            amps.swap(i, (i & !abit) | bbit);
        }
    }
}

/// Full circuit unitary on the t+1 qubits, built column by column.
fn qpe_unitary_impl(phi: f64, t: u32, mode: RotationMode) -> Result<DMatrix<Complex64>> {
    check_args(phi, t)?;
    let t = t as usize;
    let dim = 1usize << (t + 1);
    let words = rotation_words(t, &mode)?;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[col] = Complex64::new(1.0, 0.0);
        apply_qpe_circuit(&mut amps, phi, t, &words);
        for row in 0..dim {
            u[(row, col)] = amps[row];
        }
    }
    Ok(u)
}

/// Exact circuit unitary on the t+1 qubits.
pub fn qpe_exact_unitary(phi: f64, t: u32) -> Result<DMatrix<Complex64>> {
    qpe_unitary_impl(phi, t, RotationMode::Exact)
}

/// Circuit unitary with synthesized rotations, plus the a-priori deviation
/// bound (t²/2)·ε.
pub fn qpe_approx_unitary(phi: f64, t: u32, epsilon: f64) -> Result<(DMatrix<Complex64>, f64)> {
    let u = qpe_unitary_impl(
        phi,
        t,
        RotationMode::Synthesized {
            epsilon,
            depth_budget: 7,
        },
    )?;
    let bound = (t as f64) * (t as f64) / 2.0 * epsilon;
    Ok((u, bound))
}

/// Exact phase-estimation statevector over the t counting qubits.
pub fn qpe_exact_sim(phi: f64, t: u32) -> Result<StateVector> {
    qpe_sim_impl(phi, t, RotationMode::Exact)
}

/// Phase estimation with every inverse-QFT rotation replaced by a synthesized
/// word; returns the state and the a-priori bound (t²/2)·ε on its deviation
/// from the exact simulation.
pub fn qpe_approx_sim(phi: f64, t: u32, epsilon: f64) -> Result<(StateVector, f64)> {
    let state = qpe_sim_impl(
        phi,
        t,
        RotationMode::Synthesized {
            epsilon,
            depth_budget: 7,
        },
    )?;
    let bound = (t as f64) * (t as f64) / 2.0 * epsilon;
    Ok((state, bound))
}
