//! Gate synthesis: approximating phase rotations by words over
//! {H, T, T†, S, S†, X} via a cached base net and the recursive balanced
//! group-commutator refinement.

use nalgebra::Matrix2;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;

use crate::error::{Error, Result};

/// Single-qubit alphabet. Serialized as H, T, t, S, s, X.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H,
    T,
    Tdg,
    S,
    Sdg,
    X,
}

impl Gate {
    pub fn to_char(self) -> char {
        match self {
            Gate::H => 'H',
            Gate::T => 'T',
            Gate::Tdg => 't',
            Gate::S => 'S',
            Gate::Sdg => 's',
            Gate::X => 'X',
        }
    }

    pub fn from_char(c: char) -> Result<Gate> {
        Ok(match c {
            'H' => Gate::H,
            'T' => Gate::T,
            't' => Gate::Tdg,
            'S' => Gate::S,
            's' => Gate::Sdg,
            'X' => Gate::X,
            other => return Err(Error::invalid(format!("unknown gate `{other}`"))),
        })
    }

    pub fn dagger(self) -> Gate {
        match self {
            Gate::T => Gate::Tdg,
            Gate::Tdg => Gate::T,
            Gate::S => Gate::Sdg,
            Gate::Sdg => Gate::S,
            g => g,
        }
    }

    /// Matrix in the usual U(2) convention.
    pub fn matrix(self) -> Matrix2<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Gate::H => Matrix2::new(
                Complex64::new(r, 0.0),
                Complex64::new(r, 0.0),
                Complex64::new(r, 0.0),
                Complex64::new(-r, 0.0),
            ),
            Gate::T => Matrix2::new(one, z, z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
            Gate::Tdg => Matrix2::new(one, z, z, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)),
            Gate::S => Matrix2::new(one, z, z, Complex64::new(0.0, 1.0)),
            Gate::Sdg => Matrix2::new(one, z, z, Complex64::new(0.0, -1.0)),
            Gate::X => Matrix2::new(z, one, one, z),
        }
    }
}

/// U(2) product of a word, applied left-to-right (first gate acts first).
pub fn word_product(word: &[Gate]) -> Matrix2<Complex64> {
    let mut m = Matrix2::identity();
    for g in word {
        m = g.matrix() * m;
    }
    m
}

/// Reverse the word and dagger every letter; the product is the exact inverse.
pub fn word_dagger(word: &[Gate]) -> Vec<Gate> {
    word.iter().rev().map(|g| g.dagger()).collect()
}

pub fn word_to_string(word: &[Gate]) -> String {
    word.iter().map(|g| g.to_char()).collect()
}

pub fn word_from_string(s: &str) -> Result<Vec<Gate>> {
    s.chars().map(Gate::from_char).collect()
}

// ---------------------------------------------------------------------------
// SU(2) utilities
// ---------------------------------------------------------------------------

/// Project a U(2) matrix onto SU(2) by dividing out a square root of the
/// determinant; sign canonicalized (largest-magnitude quaternion component
/// positive) so equal projective elements map to equal matrices.
pub fn to_su2(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let root = det.sqrt();
    let mut su = m / root;
    let q = quaternion(&su);
    let lead = q
        .iter()
        .cloned()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if lead < 0.0 {
        su = -su;
    }
    su
}

/// Quaternion components (a, b, c, d) with M = a·I + i(b·X + c·Y + d·Z).
pub fn quaternion(su: &Matrix2<Complex64>) -> [f64; 4] {
    let a = (su[(0, 0)].re + su[(1, 1)].re) / 2.0;
    let d = (su[(0, 0)].im - su[(1, 1)].im) / 2.0;
    let b = (su[(0, 1)].im + su[(1, 0)].im) / 2.0;
    let c = (su[(0, 1)].re - su[(1, 0)].re) / 2.0;
    [a, b, c, d]
}

fn from_quaternion(q: [f64; 4]) -> Matrix2<Complex64> {
    let [a, b, c, d] = q;
    Matrix2::new(
        Complex64::new(a, d),
        Complex64::new(c, b),
        Complex64::new(-c, b),
        Complex64::new(a, -d),
    )
}

/// Rotation by angle about a unit axis: exp(-i·angle/2 · n̂·σ).
pub fn rotation(axis: [f64; 3], angle: f64) -> Matrix2<Complex64> {
    let (s, c) = ((angle / 2.0).sin(), (angle / 2.0).cos());
    from_quaternion([c, -s * axis[0], -s * axis[1], -s * axis[2]])
}

/// Rotation angle (in [0, 2π]) and axis of an SU(2) element.
fn angle_axis(su: &Matrix2<Complex64>) -> (f64, [f64; 3]) {
    let [a, b, c, d] = quaternion(su);
    let s = (b * b + c * c + d * d).sqrt();
    let angle = 2.0 * s.atan2(a);
    if s < 1e-15 {
        return (angle, [1.0, 0.0, 0.0]);
    }
    (angle, [-b / s, -c / s, -d / s])
}

/// Projective operator-norm distance: min over global phase of ‖e^{iα}U − V‖.
pub fn projective_distance(u: &Matrix2<Complex64>, v: &Matrix2<Complex64>) -> f64 {
    let us = to_su2(u);
    let vs = to_su2(v);
    let dot: f64 = quaternion(&us)
        .iter()
        .zip(quaternion(&vs).iter())
        .map(|(x, y)| x * y)
        .sum();
    let c = dot.abs().min(1.0);
    (2.0 * (1.0 - c)).sqrt()
}

/// Global phase α minimizing ‖e^{iα}U − V‖, found in closed form from the
/// eigenphases of U†V, plus the achieved operator norm (recomputed directly).
pub fn optimal_alignment(u: &Matrix2<Complex64>, v: &Matrix2<Complex64>) -> (f64, f64) {
    let m = u.adjoint() * v;
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    // The two arc midpoints of the eigenphases are the square-root branches
    // of λ₁λ₂; try both and keep the better alignment.
    let alpha = (l1 * l2).sqrt();
    let mut best = (0.0, f64::INFINITY);
    for cand in [alpha.arg(), alpha.arg() + std::f64::consts::PI] {
        let err = operator_norm_2(&(u * Complex64::from_polar(1.0, cand) - v));
        if err < best.1 {
            best = (cand, err);
        }
    }
    best
}

/// Operator (spectral) norm of an arbitrary 2×2 complex matrix.
pub fn operator_norm_2(m: &Matrix2<Complex64>) -> f64 {
    let g = m.adjoint() * m;
    let tr = g[(0, 0)].re + g[(1, 1)].re;
    let det = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 + disc).max(0.0).sqrt()
}

// ---------------------------------------------------------------------------
// Base net
// ---------------------------------------------------------------------------

struct NetEntry {
    word: Vec<Gate>,
    su2: Matrix2<Complex64>,
}

const NET_MAX_LEN: usize = 24;

/// ε₀-net of {H,T} words, deduplicated projectively, keeping shortest words.
static BASE_NET: Lazy<Vec<NetEntry>> = Lazy::new(|| {
    let mut seen: HashMap<[i64; 4], usize> = HashMap::new();
    let mut net: Vec<NetEntry> = Vec::new();
    let key = |su: &Matrix2<Complex64>| -> [i64; 4] {
        let q = quaternion(su);
        [0, 1, 2, 3].map(|i| (q[i] * 3.0e4).round() as i64)
    };
    let identity = NetEntry {
        word: Vec::new(),
        su2: Matrix2::identity(),
    };
    seen.insert(key(&identity.su2), 0);
    net.push(identity);
    let mut frontier: Vec<usize> = vec![0];
    for _len in 1..=NET_MAX_LEN {
        let mut next = Vec::new();
        for &idx in &frontier {
            for g in [Gate::H, Gate::T] {
                // Skip immediate involutions/periods: HH = I, T^8 = I.
                let word = &net[idx].word;
                if g == Gate::H && word.last() == Some(&Gate::H) {
                    continue;
                }
                if g == Gate::T && word.len() >= 7 && word[word.len() - 7..].iter().all(|&x| x == Gate::T)
                {
                    continue;
                }
                let mut new_word = word.clone();
                new_word.push(g);
                let su2 = to_su2(&(g.matrix() * net[idx].su2));
                let k = key(&su2);
                if seen.contains_key(&k) {
                    continue;
                }
                let entry = NetEntry { word: new_word, su2 };
                seen.insert(k, net.len());
                next.push(net.len());
                net.push(entry);
            }
        }
        frontier = next;
    }
    net
});

/// Flat copy of the net's quaternions for cache-friendly nearest scans.
static NET_QUATS: Lazy<Vec<[f64; 4]>> =
    Lazy::new(|| BASE_NET.iter().map(|e| quaternion(&e.su2)).collect());

fn nearest_net_element(target: &Matrix2<Complex64>) -> (&'static [Gate], Matrix2<Complex64>) {
    let tq = quaternion(&to_su2(target));
    let mut best = (0usize, -1.0f64);
    for (i, q) in NET_QUATS.iter().enumerate() {
        let dot = q[0] * tq[0] + q[1] * tq[1] + q[2] * tq[2] + q[3] * tq[3];
        if dot.abs() > best.1 {
            best = (i, dot.abs());
        }
    }
    (&BASE_NET[best.0].word, BASE_NET[best.0].su2)
}

// ---------------------------------------------------------------------------
// Recursive synthesis
// ---------------------------------------------------------------------------

/// Word over the alphabet approximating a target, with the error recomputed
/// from the word product on construction.
#[derive(Clone, Debug)]
pub struct GateSequence {
    pub word: Vec<Gate>,
    pub target: Matrix2<Complex64>,
    /// Projective operator-norm distance between word product and target.
    pub achieved_error: f64,
    /// Global phase aligning the word product with the target.
    pub alignment_phase: f64,
}

impl GateSequence {
    fn build(word: Vec<Gate>, target: Matrix2<Complex64>) -> Self {
        let prod = word_product(&word);
        let (alignment_phase, achieved_error) = optimal_alignment(&prod, &target);
        GateSequence {
            word,
            target,
            achieved_error,
            alignment_phase,
        }
    }

    /// Word product with the alignment phase applied.
    pub fn aligned_product(&self) -> Matrix2<Complex64> {
        word_product(&self.word) * Complex64::from_polar(1.0, self.alignment_phase)
    }
}

/// Solve sin(θ/2) = 2 sin²(φ/2)·√(1 − sin⁴(φ/2)) for φ by bisection.
fn commutator_angle(theta: f64) -> f64 {
    let target = (theta / 2.0).sin();
    let f = |phi: f64| {
        let s2 = (phi / 2.0).sin().powi(2);
        2.0 * s2 * (1.0 - s2 * s2).sqrt()
    };
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

/// SU(2) element mapping unit vector `from` onto unit vector `to`.
fn axis_aligner(from: [f64; 3], to: [f64; 3]) -> Matrix2<Complex64> {
    let dot = from[0] * to[0] + from[1] * to[1] + from[2] * to[2];
    let cross = [
        from[1] * to[2] - from[2] * to[1],
        from[2] * to[0] - from[0] * to[2],
        from[0] * to[1] - from[1] * to[0],
    ];
    let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    if cn < 1e-12 {
        if dot > 0.0 {
            return Matrix2::identity();
        }
        // Antiparallel: rotate by π about any perpendicular axis.
        let perp = if from[0].abs() < 0.9 {
            [0.0, -from[2], from[1]]
        } else {
            [-from[1], from[0], 0.0]
        };
        let n = (perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]).sqrt();
        return rotation([perp[0] / n, perp[1] / n, perp[2] / n], std::f64::consts::PI);
    }
    let axis = [cross[0] / cn, cross[1] / cn, cross[2] / cn];
    rotation(axis, cn.atan2(dot))
}

/// One Solovay-Kitaev level: word and its SU(2) product.
fn sk_rec(target: &Matrix2<Complex64>, depth: usize) -> (Vec<Gate>, Matrix2<Complex64>) {
    if depth == 0 {
        let (w, m) = nearest_net_element(target);
        return (w.to_vec(), m);
    }
    let (word_prev, m_prev) = sk_rec(target, depth - 1);
    let delta = to_su2(&(target * m_prev.adjoint()));
    let (theta, d_axis) = angle_axis(&delta);
    if theta.min(2.0 * std::f64::consts::PI - theta) < 1e-14 {
        return (word_prev, m_prev);
    }
    let phi = commutator_angle(theta.min(2.0 * std::f64::consts::PI - theta));
    let v = rotation([1.0, 0.0, 0.0], phi);
    let w = rotation([0.0, 1.0, 0.0], phi);
    // Align the commutator's axis with delta's axis.
    let k = v * w * v.adjoint() * w.adjoint();
    let (_, k_axis) = angle_axis(&to_su2(&k));
    let s = axis_aligner(k_axis, d_axis);
    let (vw, vm) = sk_rec(&to_su2(&(s * v * s.adjoint())), depth - 1);
    let (ww, wm) = sk_rec(&to_su2(&(s * w * s.adjoint())), depth - 1);
    let mut word = Vec::with_capacity(2 * (vw.len() + ww.len()) + word_prev.len());
    word.extend(word_dagger(&ww));
    word.extend(word_dagger(&vw));
    word.extend(ww.iter().copied());
    word.extend(vw.iter().copied());
    word.extend(word_prev.iter().copied());
    let m = to_su2(&(vm * wm * vm.adjoint() * wm.adjoint() * m_prev));
    (word, m)
}

/// Phase gate diag(1, e^{iθ}).
pub fn phase_gate(theta: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, theta),
    )
}

/// Synthesize a word approximating the phase gate diag(1, e^{iθ}) to within
/// ε projectively; exact words are returned for θ a multiple of π/4.
pub fn sk_synthesize(theta: f64, epsilon: f64, depth_budget: usize) -> Result<GateSequence> {
    if epsilon < 1e-4 {
        return Err(Error::invalid("synthesis below ε = 1e-4 is out of scope"));
    }
    let target = phase_gate(theta);
    let tau = 2.0 * std::f64::consts::PI;
    let reduced = theta.rem_euclid(tau);
    let eighths = reduced / std::f64::consts::FRAC_PI_4;
    if (eighths - eighths.round()).abs() < 1e-12 {
        let k = (eighths.round() as usize) % 8;
        let mut word = vec![Gate::S; k / 2];
        if k % 2 == 1 {
            word.push(Gate::T);
        }
        return Ok(GateSequence::build(word, target));
    }
    let su_target = to_su2(&target);
    let mut best: Option<GateSequence> = None;
    for depth in 0..=depth_budget {
        let (word, _) = sk_rec(&su_target, depth);
        let seq = GateSequence::build(word, target);
        let better = best
            .as_ref()
            .map(|b| seq.achieved_error < b.achieved_error)
            .unwrap_or(true);
        if better {
            best = Some(seq);
        }
        if best.as_ref().unwrap().achieved_error <= epsilon {
            return Ok(best.unwrap());
        }
    }
    Err(Error::SynthesisShortfall {
        requested: epsilon,
        achieved: best.map(|b| b.achieved_error).unwrap_or(f64::INFINITY),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn word_string_roundtrip() {
        let w = vec![Gate::H, Gate::T, Gate::Tdg, Gate::S, Gate::Sdg, Gate::X];
        assert_eq!(word_to_string(&w), "HTtSsX");
        assert_eq!(word_from_string("HTtSsX").unwrap(), w);
        assert!(word_from_string("Q").is_err());
    }

    #[test]
    fn dagger_word_inverts_product() {
        let w = word_from_string("HTHTSHt").unwrap();
        let p = word_product(&w) * word_product(&word_dagger(&w));
        assert!(operator_norm_2(&(p - Matrix2::identity())) < 1e-12);
    }

    #[test]
    fn exact_words_for_eighth_turns() {
        let seq = sk_synthesize(std::f64::consts::FRAC_PI_4, 1e-2, 4).unwrap();
        assert_eq!(word_to_string(&seq.word), "T");
        assert!(seq.achieved_error < 1e-12);
        let seq0 = sk_synthesize(0.0, 1e-2, 4).unwrap();
        assert!(seq0.word.is_empty());
        let seq_half = sk_synthesize(std::f64::consts::FRAC_PI_2, 1e-2, 4).unwrap();
        assert_eq!(word_to_string(&seq_half.word), "S");
        // An exact word is exact in the plain (not just projective) norm.
        let d = operator_norm_2(&(seq_half.aligned_product() - seq_half.target));
        assert!(d < 1e-12);
    }

    #[test]
    fn projective_distance_ignores_phase() {
        let u = phase_gate(0.3);
        let v = u * Complex64::from_polar(1.0, 1.234);
        assert_abs_diff_eq!(projective_distance(&u, &v), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn alignment_recovers_phase() {
        let u = phase_gate(0.3);
        let shifted = u * Complex64::from_polar(1.0, -0.7);
        let (alpha, err) = optimal_alignment(&shifted, &u);
        assert_abs_diff_eq!(err, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            Complex64::from_polar(1.0, alpha - 0.7).re,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rotation_angle_axis_roundtrip() {
        let r = rotation([0.0, 1.0, 0.0], 0.8);
        let (angle, axis) = angle_axis(&to_su2(&r));
        assert_abs_diff_eq!(angle, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(axis[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn synthesis_meets_requested_error() {
        // Grid over generic angles at ε = 1e-2 and 1e-3.
        for &eps in &[1e-2, 1e-3] {
            for k in 1..=8 {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / 37.0;
                let seq = sk_synthesize(theta, eps, 7).unwrap();
                assert!(
                    seq.achieved_error <= eps,
                    "θ={theta}, ε={eps}: {}",
                    seq.achieved_error
                );
                // Recompute directly against the aligned product.
                let d = operator_norm_2(&(seq.aligned_product() - seq.target));
                assert!(d <= eps + 1e-12);
            }
        }
    }

    #[test]
    fn synthesis_qft_rotation_example() {
        let theta = 2.0 * std::f64::consts::PI / 32.0;
        let seq = sk_synthesize(theta, 1e-2, 7).unwrap();
        assert!(seq.achieved_error <= 1e-2);
    }

    #[test]
    fn word_length_polylog_growth() {
        // Word length should grow no faster than a power of log(1/ε).
        let theta = 2.0 * std::f64::consts::PI / 10.0;
        let mut lens = Vec::new();
        for &eps in &[1e-1, 1e-2, 1e-3] {
            lens.push(sk_synthesize(theta, eps, 7).unwrap().word.len() as f64);
        }
        let g1 = (lens[1] / lens[0].max(1.0)).log2() / ((2.0f64).log2());
        let g2 = (lens[2] / lens[1].max(1.0)).log2() / ((1.5f64).log2());
        // Loose sanity cap on the measured exponents.
        assert!(g1 < 12.0 && g2 < 12.0, "lens = {lens:?}");
    }

    #[test]
    fn shortfall_reported() {
        let r = sk_synthesize(0.123, 1e-4, 0);
        match r {
            Err(Error::SynthesisShortfall { achieved, .. }) => assert!(achieved > 1e-4),
            other => panic!("expected shortfall, got {other:?}"),
        }
    }
}
