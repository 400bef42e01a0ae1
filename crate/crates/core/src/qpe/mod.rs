//! Phase estimation: analytic output weights, statevector simulation with an
//! exact or gate-synthesized inverse QFT, and the associated error budget.

pub mod sim;
pub mod sk;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log2::Log2Mag;

/// Normalized amplitude vector over n qubits (big-endian bit order:
/// qubit 0 is the most significant index bit).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Build and check normalization to 1e-12.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), 1 << n_qubits, "length must be 2^n");
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        assert!(
            (norm - 1.0).abs() <= 1e-12,
            "statevector norm² = {norm} deviates from 1"
        );
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// |⟨basis_index|self⟩|.
    pub fn overlap_with_basis(&self, index: usize) -> f64 {
        self.amplitudes[index].norm()
    }

    /// Euclidean distance to another vector of the same size.
    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Phase parameter written as a perturbation of the unary encoding 2^{−η}.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PhaseEncoding {
    pub eta: u32,
    pub ell: u32,
    pub phi_prime: f64,
}

impl PhaseEncoding {
    /// Validate φ' ∈ [2^{−η}, 2^{−η} + 2^{−η−ℓ}).
    pub fn validate(&self) -> Result<()> {
        if self.eta < 1 || self.ell < 1 {
            return Err(Error::invalid("eta and ell must be at least 1"));
        }
        let lo = 2.0f64.powi(-(self.eta as i32));
        let hi = lo + 2.0f64.powi(-((self.eta + self.ell) as i32));
        if !(self.phi_prime >= lo && self.phi_prime < hi) {
            return Err(Error::invalid(format!(
                "phi_prime = {} outside [{lo}, {hi})",
                self.phi_prime
            )));
        }
        Ok(())
    }

    /// True when the phase is exactly the unperturbed 2^{−η}.
    pub fn is_exact(&self) -> bool {
        self.phi_prime == 2.0f64.powi(-(self.eta as i32))
    }
}

/// Unary phase encoding φ(η) = 2^{−η}.
pub fn encode_unary(eta: u32) -> Result<f64> {
    if eta < 1 {
        return Err(Error::invalid("eta must be at least 1"));
    }
    Ok(2.0f64.powi(-(eta as i32)))
}

/// Analytic output amplitudes of t-bit phase estimation of e^{2πiφ}.
///
/// Entry y holds the amplitude of outcome |y⟩. With b = ⌊φ·2^t⌋ and
/// x = (y − b) mod 2^t,
///   β = (1/2^t)·(1 − e^{2πi(2^t φ − b)}) / (1 − e^{2πi(φ − (b+x)/2^t)}),
/// collapsing to the delta distribution at y = b when φ·2^t is an integer.
pub fn qpe_weights(phi: f64, t: u32) -> Vec<Complex64> {
    assert!(t >= 1, "need at least one output bit");
    assert!((0.0..1.0).contains(&phi), "phase must lie in [0,1)");
    let size = 1usize << t;
    let scaled = phi * size as f64;
    let b = scaled.floor() as usize;
    let frac = scaled - b as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); size];
    if frac == 0.0 {
        out[b % size] = Complex64::new(1.0, 0.0);
        return out;
    }
    let num = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * frac);
    for x in 0..size {
        let y = (b + x) % size;
        let d = phi - (b + x) as f64 / size as f64;
        let den =
            Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * d);
        out[y] = num / den / size as f64;
    }
    out
}

/// δ(L, m) = (m²/2)·2^{−c₂·L^{1/c₁}} in the log₂ domain.
pub fn delta_bound_log2(l: u64, m: u64, c1: f64, c2: f64) -> Result<Log2Mag> {
    if m > l {
        return Err(Error::invalid(format!("m = {m} exceeds L = {l}")));
    }
    if !(c1 > 1.0) || !(c2 > 0.0) {
        return Err(Error::invalid("need c1 > 1 and c2 > 0"));
    }
    let head = ((m as f64) * (m as f64) / 2.0).log2();
    Ok(Log2Mag(head - c2 * (l as f64).powf(1.0 / c1)))
}

/// Smallest L₀ with δ(L, m) < δ₀ for all L ≥ L₀ (δ₀ given in log₂).
pub fn min_l_for_delta(m: u64, c1: f64, c2: f64, delta0_log2: f64) -> u64 {
    let head = ((m as f64) * (m as f64) / 2.0).log2();
    let needed = (head - delta0_log2) / c2;
    if needed <= 0.0 {
        return m.max(1);
    }
    let l0 = needed.powf(c1).ceil() as u64;
    l0.max(m).max(1)
}

/// Predicted peak outcome and overlap lower bound for estimating an encoded
/// phase with t output bits, given a synthesis error allowance δ.
///
/// Long register (t ≥ η): peak at |2^{t−η}⟩ with bound 1 − 2^{−ℓ} − δ
/// (bound 1 − δ when the phase is exactly 2^{−η}).
/// Short register (t < η): peak at |0⟩ with bound 1/4 − δ (1/2 − δ exact).
pub fn predicted_overlap(enc: &PhaseEncoding, t: u32, delta: f64) -> Result<(usize, f64)> {
    enc.validate()?;
    assert!(t >= 1);
    assert!(delta >= 0.0);
    if t >= enc.eta {
        let target = 1usize << (t - enc.eta);
        let bound = if enc.is_exact() {
            1.0 - delta
        } else {
            1.0 - 2.0f64.powi(-(enc.ell as i32)) - delta
        };
        Ok((target, bound))
    } else {
        let bound = if enc.is_exact() {
            0.5 - delta
        } else {
            0.25 - delta
        };
        Ok((0, bound))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unary_encoding() {
        assert_eq!(encode_unary(1).unwrap(), 0.5);
        assert_eq!(encode_unary(3).unwrap(), 0.125);
        assert!(encode_unary(0).is_err());
        // Binary expansion has η−1 zeros then a one: 2^{-η}·2^η = 1 exactly.
        for eta in 1..=40 {
            let phi = encode_unary(eta).unwrap();
            assert_eq!(phi * 2.0f64.powi(eta as i32), 1.0);
            assert!(phi * 2.0f64.powi(eta as i32 - 1) < 1.0);
        }
    }

    #[test]
    fn weights_exact_phase_is_delta() {
        let w = qpe_weights(0.25, 2);
        assert_abs_diff_eq!(w[1].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[0].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn weights_one_eighth_two_bits() {
        let w = qpe_weights(0.125, 2);
        let expect = 0.25 * (std::f64::consts::PI / 2.0).sin() / (std::f64::consts::PI / 8.0).sin();
        assert_abs_diff_eq!(w[0].norm(), expect, epsilon = 1e-12);
        assert!(w[0].norm() >= 0.5);
        assert_abs_diff_eq!(expect, 0.6532814824381883, epsilon = 1e-12);
    }

    #[test]
    fn weights_perturbed_quarter() {
        let w = qpe_weights(0.25 + 1.0 / 32.0, 2);
        let expect = 0.25 * (std::f64::consts::PI / 8.0).sin() / (std::f64::consts::PI / 32.0).sin();
        // The dominant outcome is y = 1 with weight ≈ 0.9760 ≥ 1 − 2^{-3}.
        assert_abs_diff_eq!(w[1].norm(), expect, epsilon = 1e-12);
        assert!(w[1].norm() >= 1.0 - 0.125);
    }

    #[test]
    fn weights_normalized() {
        for &(phi, t) in &[(0.1, 5u32), (0.73, 7), (1.0 / 3.0, 8), (0.5, 4), (0.999, 6)] {
            let w = qpe_weights(phi, t);
            let total: f64 = w.iter().map(|a| a.norm_sqr()).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn delta_bound_examples() {
        // L = 2^20, m = 100, c1 = 4, c2 = 1 → 5000·2^{-32}.
        let d = delta_bound_log2(1 << 20, 100, 4.0, 1.0).unwrap();
        assert_abs_diff_eq!(d.to_linear(), 5000.0 * 2.0f64.powi(-32), epsilon = 1e-15);
        // L = 16, m = 13 → 84.5·2^{-2} > 1 (vacuous bound).
        let d2 = delta_bound_log2(16, 13, 4.0, 1.0).unwrap();
        assert_abs_diff_eq!(d2.to_linear(), 84.5 * 0.25, epsilon = 1e-9);
        assert!(d2.to_linear() > 1.0);
        assert!(delta_bound_log2(16, 17, 4.0, 1.0).is_err());
    }

    #[test]
    fn delta_bound_monotone_and_threshold() {
        let m = 100;
        let mut prev = f64::INFINITY;
        for &l in &[1u64 << 10, 1 << 14, 1 << 18, 1 << 22] {
            let d = delta_bound_log2(l, m, 4.0, 1.0).unwrap().0;
            assert!(d < prev);
            prev = d;
        }
        // The reported L₀ really achieves the target.
        for delta0_log2 in [-1.0, -10.0, -30.0] {
            let l0 = min_l_for_delta(m, 4.0, 1.0, delta0_log2);
            let at = delta_bound_log2(l0, m, 4.0, 1.0).unwrap().0;
            assert!(at < delta0_log2, "L0={l0}: {at} !< {delta0_log2}");
        }
    }

    #[test]
    fn predicted_overlap_cases() {
        let exact = PhaseEncoding {
            eta: 3,
            ell: 1,
            phi_prime: 0.125,
        };
        // Long register, exact phase: peak |00100⟩ with certainty.
        let (target, bound) = predicted_overlap(&exact, 5, 0.0).unwrap();
        assert_eq!(target, 0b00100);
        assert_abs_diff_eq!(bound, 1.0, epsilon = 0.0);
        // Short register, perturbed phase: peak |0⟩ at 1/4.
        let pert = PhaseEncoding {
            eta: 6,
            ell: 2,
            phi_prime: 2.0f64.powi(-6) + 2.0f64.powi(-9),
        };
        let (target, bound) = predicted_overlap(&pert, 3, 0.0).unwrap();
        assert_eq!(target, 0);
        assert_abs_diff_eq!(bound, 0.25, epsilon = 0.0);
    }

    #[test]
    fn encoding_validation() {
        assert!(PhaseEncoding {
            eta: 3,
            ell: 2,
            phi_prime: 0.125 + 0.03125
        }
        .validate()
        .is_err());
        assert!(PhaseEncoding {
            eta: 3,
            ell: 2,
            phi_prime: 0.125 + 0.03
        }
        .validate()
        .is_ok());
    }
}
