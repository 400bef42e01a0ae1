//! Energy-balance calculus in the log₂ domain: clock runtime bounds, the ℓ
//! threshold, penalty-vs-bonus windows, per-square energy signs, and the
//! gapped/gapless phase classifier driven by a decidable toy halting oracle.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::log2::{integer_root_ceil, integer_root_floor, Log2Mag};
use crate::qpe::PhaseEncoding;

/// Injected decidable stand-in for the halting behaviour as a function of
/// the encoded input η; reports the halting space bound when it halts.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ToyOracle {
    /// Never halts.
    Never,
    /// Halts on every input within the given space.
    Always { space: u64 },
    /// Halts exactly on even η, within the given space.
    EvenEta { space: u64 },
    /// Explicit table: η present ⇒ halts within the listed space.
    Table { entries: BTreeMap<u32, u64> },
}

impl ToyOracle {
    /// Space within which the machine halts on input η, if it halts at all.
    pub fn halting_space(&self, eta: u32) -> Option<u64> {
        match self {
            ToyOracle::Never => None,
            ToyOracle::Always { space } => Some(*space),
            ToyOracle::EvenEta { space } => (eta % 2 == 0).then_some(*space),
            ToyOracle::Table { entries } => entries.get(&eta).copied(),
        }
    }
}

/// Constants of the balance calculus.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceParams {
    /// Clock base ξ ≥ 2; runtime scales as L·ξ^L.
    pub xi: f64,
    /// Constant in the non-halting penalty lower bound.
    pub k1: f64,
    /// Constant in the halting penalty upper bound.
    pub k2: f64,
    /// Falloff constant: edge bonus decays as 4^{−C(L+⌈L^{1/8}⌉)}.
    pub c_falloff: u64,
    /// Synthesis word-length exponent, 3.97 < c₁ < 4 by default.
    pub c1: f64,
    /// Synthesis error-decay constant.
    pub c2: f64,
    pub oracle: ToyOracle,
}

impl Default for BalanceParams {
    fn default() -> Self {
        BalanceParams {
            xi: 2.0,
            k1: 1.0,
            k2: 1.0,
            c_falloff: 1,
            c1: 3.985,
            c2: 1.0,
            oracle: ToyOracle::Never,
        }
    }
}

impl BalanceParams {
    pub fn validate(&self) -> Result<()> {
        if self.xi < 2.0 {
            return Err(Error::invalid("clock base xi must be at least 2"));
        }
        if self.k1 <= 0.0 || self.k2 <= 0.0 || self.c_falloff == 0 {
            return Err(Error::invalid("K1, K2 and C must be positive"));
        }
        if !(1.0 < self.c1 && self.c1 < 4.0) || self.c2 <= 0.0 {
            return Err(Error::invalid("need 1 < c1 < 4 and c2 > 0"));
        }
        Ok(())
    }
}

/// log₂ L as an f64, exact for powers of two.
fn log2_u64(l: u64) -> f64 {
    assert!(l >= 1);
    if l.is_power_of_two() {
        l.trailing_zeros() as f64
    } else {
        (l as f64).log2()
    }
}

/// L^{1/k} as an f64, exact when L is a perfect k-th power.
fn root_f64(l: u64, k: u32) -> f64 {
    let r = integer_root_floor(l as u128, k) as u64;
    if r.checked_pow(k).map(|p| p == l).unwrap_or(false) {
        r as f64
    } else {
        (l as f64).powf(1.0 / k as f64)
    }
}

/// Clock runtime bracket (Ω(Lξ^L), O(Lξ^L·log L)) with unit constants,
/// both endpoints in log₂.
pub fn clock_runtime_bounds(l: u64, xi: f64) -> Result<(Log2Mag, Log2Mag)> {
    if l < 2 {
        return Err(Error::invalid("clock runtime bounds need L >= 2"));
    }
    if xi < 2.0 {
        return Err(Error::invalid("clock base xi must be at least 2"));
    }
    let lower = log2_u64(l) + l as f64 * xi.log2();
    let upper = lower + log2_u64(l).log2();
    Ok((Log2Mag(lower), Log2Mag(upper.max(lower))))
}

/// Smallest admissible interval exponent: max(1, ⌈L^{1/4} − 2log₂L⌉).
pub fn ell_threshold(l: u64) -> u64 {
    assert!(l >= 2, "threshold defined for L >= 2");
    let raw = root_f64(l, 4) - 2.0 * log2_u64(l);
    // Snap near-integers before ceiling so exact cases stay exact.
    let snapped = if (raw - raw.round()).abs() < 1e-9 {
        raw.round()
    } else {
        raw.ceil()
    };
    if snapped < 1.0 {
        1
    } else {
        snapped as u64
    }
}

/// Penalty bracket at scale L in log₂: non-halting ground energies are at
/// least K₁/(L²ξ^{2L}log²L); halting ones at most K₂·2^{−L^{1/4}}/ξ^{2L}
/// (the latter only valid once ℓ reaches the threshold).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PenaltyBounds {
    pub nonhalt_lower_log2: f64,
    pub halt_upper_log2: f64,
    /// False when ℓ < ell_threshold(L), leaving the halting bound uncertified.
    pub halt_valid: bool,
}

pub fn penalty_bounds(l: u64, ell: u64, params: &BalanceParams) -> Result<PenaltyBounds> {
    params.validate()?;
    if l < 2 {
        return Err(Error::invalid("penalty bounds need L >= 2"));
    }
    let log_l = log2_u64(l);
    let clock = 2.0 * l as f64 * params.xi.log2();
    // log²L reads as (log₂ L)²; its log₂ is 2·log₂(log₂ L), zero at L = 2.
    let loglog = if log_l > 1.0 { 2.0 * log_l.log2() } else { 0.0 };
    let nonhalt_lower_log2 = params.k1.log2() - 2.0 * log_l - clock - loglog;
    let halt_upper_log2 = params.k2.log2() - root_f64(l, 4) - clock;
    Ok(PenaltyBounds {
        nonhalt_lower_log2,
        halt_upper_log2,
        halt_valid: ell >= ell_threshold(l),
    })
}

/// Marker falloff exponent f(L) = C·(L + ⌈L^{1/8}⌉).
pub fn falloff_exponent(l: u64, c: u64) -> u64 {
    assert!(c >= 1 && l >= 1);
    c * (l + integer_root_ceil(l as u128, 8) as u64)
}

/// One scan point of the falloff-window check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WindowEntry {
    pub l: u64,
    /// log₂ of the edge bonus magnitude 4^{−f(L)}.
    pub bonus_log2: f64,
    pub nonhalt_lower_log2: f64,
    pub halt_upper_log2: f64,
    /// Bonus strictly below the non-halting penalty floor.
    pub below_nonhalt: bool,
    /// Bonus strictly above the halting penalty ceiling.
    pub above_halt: bool,
}

impl WindowEntry {
    pub fn ok(&self) -> bool {
        self.below_nonhalt && self.above_halt
    }
}

/// Report of the finite-range surrogate of the asymptotic falloff window.
#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub entries: Vec<WindowEntry>,
    /// Longest contiguous run of passing scan points, as (first L, last L).
    pub passing_range: Option<(u64, u64)>,
}

/// Check 4^{−f(L)} against the two penalty bounds over the given scales.
///
/// This is a finite scan standing in for the paper-level asymptotic window;
/// the scan is exact because all quantities live in the log₂ domain.
pub fn falloff_window_check(c: u64, ls: &[u64], params: &BalanceParams) -> Result<WindowReport> {
    let mut entries = Vec::with_capacity(ls.len());
    for &l in ls {
        let pb = penalty_bounds(l, u64::MAX, params)?;
        let bonus_log2 = -2.0 * falloff_exponent(l, c) as f64;
        entries.push(WindowEntry {
            l,
            bonus_log2,
            nonhalt_lower_log2: pb.nonhalt_lower_log2,
            halt_upper_log2: pb.halt_upper_log2,
            below_nonhalt: bonus_log2 < pb.nonhalt_lower_log2,
            above_halt: bonus_log2 > pb.halt_upper_log2,
        });
    }
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = None;
    for (i, e) in entries.iter().enumerate() {
        if e.ok() {
            let s = *run_start.get_or_insert(i);
            if best.map(|(a, b)| i - s > b - a).unwrap_or(true) {
                best = Some((s, i));
            }
        } else {
            run_start = None;
        }
    }
    Ok(WindowReport {
        passing_range: best.map(|(a, b)| (entries[a].l, entries[b].l)),
        entries,
    })
}

/// Default scan grid for the window check: powers of two from 2² to 2⁶⁰.
pub fn default_window_scan() -> Vec<u64> {
    (2..=60).map(|e| 1u64 << e).collect()
}

/// Sign of the energy of one complete square of side s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnergySign {
    Nonnegative,
    Negative,
}

/// Per-square energy verdict with the log₂ quantities behind it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SquareEnergy {
    pub sign: EnergySign,
    /// log₂ of the certified edge bonus magnitude, when the bonus matters.
    pub edge_log2: Option<f64>,
    /// log₂ of the penalty bound used in the comparison.
    pub pen_log2: Option<f64>,
}

/// Decide the sign of one square's energy contribution.
///
/// Nonnegative when s < η (the estimate cannot resolve the phase), when the
/// encoded computation does not halt within space s, or when the certified
/// bonus cannot be shown to beat the halting penalty at this finite size;
/// negative when it strictly does.
pub fn square_energy_sign(s: u64, enc: &PhaseEncoding, params: &BalanceParams) -> Result<SquareEnergy> {
    enc.validate()?;
    params.validate()?;
    if s < 2 || s < enc.eta as u64 {
        return Ok(SquareEnergy {
            sign: EnergySign::Nonnegative,
            edge_log2: None,
            pen_log2: None,
        });
    }
    let pb = penalty_bounds(s, enc.ell as u64, params)?;
    let halts_within = params
        .oracle
        .halting_space(enc.eta)
        .map(|l0| l0 <= s)
        .unwrap_or(false);
    if !halts_within {
        return Ok(SquareEnergy {
            sign: EnergySign::Nonnegative,
            edge_log2: Some(-2.0 * falloff_exponent(s, params.c_falloff) as f64),
            pen_log2: Some(pb.nonhalt_lower_log2),
        });
    }
    let bonus_log2 = -2.0 * falloff_exponent(s, params.c_falloff) as f64;
    let negative = pb.halt_valid && bonus_log2 > pb.halt_upper_log2;
    Ok(SquareEnergy {
        sign: if negative {
            EnergySign::Negative
        } else {
            EnergySign::Nonnegative
        },
        edge_log2: Some(bonus_log2),
        pen_log2: Some(pb.halt_upper_log2),
    })
}

/// Total energy of complete w-squares packed into an L×H region.
pub fn lattice_energy(l: u64, h: u64, w: u64, per_square: f64) -> f64 {
    assert!(w >= 1, "square side must be positive");
    ((l / w) * (h / w)) as f64 * per_square
}

/// Phase classification of one φ′ value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Gapped,
    Gapless,
    OutsideCertifiedInterval,
}

/// Classifier output with everything a sweep row needs.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseVerdict {
    pub verdict: Verdict,
    pub eta: Option<u32>,
    pub ell_star: Option<u32>,
    /// Certified interval [2^{−η}, 2^{−η}+2^{−η−ℓ*}) when η resolved.
    pub interval: Option<(f64, f64)>,
    /// Smallest square size with negative energy, for Gapless verdicts.
    pub witness_w: Option<u64>,
    pub edge_log2: Option<f64>,
    pub pen_log2: Option<f64>,
}

/// Locate the unique η with φ′ ∈ [2^{−η}, 2^{−η+1}).
fn locate_eta(phi_prime: f64) -> Option<u32> {
    if phi_prime <= 0.0 || phi_prime >= 1.0 {
        return None;
    }
    let x = -phi_prime.log2();
    let eta = x.ceil().max(1.0);
    // Guard the boundary: floating log can land a power of two on either side.
    for cand in [eta as u32, eta as u32 + 1] {
        let lo = 2.0f64.powi(-(cand as i32));
        if phi_prime >= lo && phi_prime < 2.0 * lo {
            return Some(cand);
        }
    }
    None
}

/// Classify φ′ as Gapped/Gapless on its certified interval, scanning square
/// sizes up to s_max for a negative-energy witness.
pub fn classify_phase(phi_prime: f64, params: &BalanceParams, s_max: u64) -> Result<PhaseVerdict> {
    params.validate()?;
    if !(0.0..=1.0).contains(&phi_prime) {
        return Err(Error::invalid("phi_prime must lie in [0,1]"));
    }
    let Some(eta) = locate_eta(phi_prime) else {
        return Ok(PhaseVerdict {
            verdict: Verdict::OutsideCertifiedInterval,
            eta: None,
            ell_star: None,
            interval: None,
            witness_w: None,
            edge_log2: None,
            pen_log2: None,
        });
    };
    let ell_star = params
        .oracle
        .halting_space(eta)
        .map(|l0| ell_threshold(l0.max(2)).max(1))
        .unwrap_or(1) as u32;
    let lo = 2.0f64.powi(-(eta as i32));
    let hi = lo + 2.0f64.powi(-((eta + ell_star) as i32));
    if !(phi_prime >= lo && phi_prime < hi) {
        return Ok(PhaseVerdict {
            verdict: Verdict::OutsideCertifiedInterval,
            eta: Some(eta),
            ell_star: Some(ell_star),
            interval: Some((lo, hi)),
            witness_w: None,
            edge_log2: None,
            pen_log2: None,
        });
    }
    let enc = PhaseEncoding {
        eta,
        ell: ell_star,
        phi_prime,
    };
    for s in 2..=s_max {
        let sq = square_energy_sign(s, &enc, params)?;
        if sq.sign == EnergySign::Negative {
            return Ok(PhaseVerdict {
                verdict: Verdict::Gapless,
                eta: Some(eta),
                ell_star: Some(ell_star),
                interval: Some((lo, hi)),
                witness_w: Some(s),
                edge_log2: sq.edge_log2,
                pen_log2: sq.pen_log2,
            });
        }
    }
    Ok(PhaseVerdict {
        verdict: Verdict::Gapped,
        eta: Some(eta),
        ell_star: Some(ell_star),
        interval: Some((lo, hi)),
        witness_w: None,
        edge_log2: None,
        pen_log2: None,
    })
}

/// Default square-size scan ceiling for the classifier.
pub const DEFAULT_S_MAX: u64 = 4096;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clock_bounds_examples() {
        let (lo, hi) = clock_runtime_bounds(10, 2.0).unwrap();
        assert_abs_diff_eq!(lo.0, 10.0f64.log2() + 10.0, epsilon = 1e-12);
        // Linear-domain ratio upper/lower is exactly log₂ L.
        assert_abs_diff_eq!(hi.0 - lo.0, 10.0f64.log2().log2(), epsilon = 1e-12);
        let mut prev = f64::NEG_INFINITY;
        for l in 2..50 {
            let (lo, _) = clock_runtime_bounds(l, 3.0).unwrap();
            assert!(lo.0 > prev);
            prev = lo.0;
        }
        assert!(clock_runtime_bounds(1, 2.0).is_err());
    }

    #[test]
    fn ell_threshold_values() {
        // 16^{1/4} = 2, 2log₂16 = 8 → raw −6, clamped.
        assert_eq!(ell_threshold(16), 1);
        // 2²⁸: quarter root 2⁷ = 128, 2·28 = 56 → 72 exactly.
        assert_eq!(ell_threshold(1 << 28), 72);
        // Nondecreasing beyond 256.
        let mut prev = 0;
        for e in 8..=60 {
            let v = ell_threshold(1u64 << e);
            assert!(v >= prev, "2^{e}");
            prev = v;
        }
    }

    #[test]
    fn penalty_bounds_structure() {
        let p = BalanceParams::default();
        // ξ cancels in the log difference of the two bounds.
        for &l in &[8u64, 64, 1024] {
            let a = penalty_bounds(l, 1, &BalanceParams { xi: 2.0, ..p.clone() }).unwrap();
            let b = penalty_bounds(l, 1, &BalanceParams { xi: 7.0, ..p.clone() }).unwrap();
            assert_abs_diff_eq!(
                a.nonhalt_lower_log2 - a.halt_upper_log2,
                b.nonhalt_lower_log2 - b.halt_upper_log2,
                epsilon = 1e-9
            );
        }
        // Crossover: the bounds order correctly from some L* on.
        let crossover = (2..=40)
            .map(|e| 1u64 << e)
            .find(|&l| {
                let pb = penalty_bounds(l, u64::MAX, &p).unwrap();
                pb.nonhalt_lower_log2 > pb.halt_upper_log2
            })
            .expect("a crossover scale exists");
        let pb = penalty_bounds(crossover, u64::MAX, &p).unwrap();
        assert!(pb.nonhalt_lower_log2 > pb.halt_upper_log2);
        // Validity flag surfaces the ℓ precondition.
        let small_ell = penalty_bounds(1 << 28, 3, &p).unwrap();
        assert!(!small_ell.halt_valid);
        let big_ell = penalty_bounds(1 << 28, 72, &p).unwrap();
        assert!(big_ell.halt_valid);
    }

    #[test]
    fn window_nonempty_for_defaults() {
        let p = BalanceParams::default();
        let report = falloff_window_check(p.c_falloff, &default_window_scan(), &p).unwrap();
        let (a, b) = report.passing_range.expect("window must be nonempty");
        assert!(a < b);
        // Every reported entry inside the range actually passes.
        for e in report.entries.iter().filter(|e| e.l >= a && e.l <= b) {
            assert!(e.ok(), "L={}", e.l);
        }
    }

    #[test]
    fn window_violated_for_large_c() {
        // A too-large C makes the bonus decay below the halting ceiling.
        let p = BalanceParams::default();
        let report = falloff_window_check(50, &default_window_scan(), &p).unwrap();
        assert!(report.entries.iter().all(|e| !e.above_halt));
        assert!(report.passing_range.is_none());
    }

    #[test]
    fn falloff_growth_rates() {
        // C·⌈L^{1/8}⌉ outgrows log₂L and vanishes against L^{1/4} over the
        // scan (finite surrogate of the ω/o sandwich).
        let excess = |l: u64| (falloff_exponent(l, 1) - l) as f64;
        assert!(excess(1 << 56) / 56.0 > excess(1 << 16) / 16.0);
        assert!(
            excess(1 << 56) / 2.0f64.powf(14.0) < excess(1 << 16) / 2.0f64.powf(4.0)
        );
    }

    #[test]
    fn square_signs() {
        let params = BalanceParams {
            oracle: ToyOracle::Always { space: 4 },
            ..BalanceParams::default()
        };
        let enc = PhaseEncoding {
            eta: 3,
            ell: 1,
            phi_prime: 0.125,
        };
        // Too small to resolve the phase.
        let s2 = square_energy_sign(2, &enc, &params).unwrap();
        assert_eq!(s2.sign, EnergySign::Nonnegative);
        // Halting and large: negative.
        let sbig = square_energy_sign(4096, &enc, &params).unwrap();
        assert_eq!(sbig.sign, EnergySign::Negative);
        assert!(sbig.edge_log2.unwrap() > sbig.pen_log2.unwrap());
        // Non-halting: nonnegative at every size.
        let never = BalanceParams::default();
        for s in [4u64, 64, 4096] {
            let sq = square_energy_sign(s, &enc, &never).unwrap();
            assert_eq!(sq.sign, EnergySign::Nonnegative);
        }
        // Bonus magnitude strictly decreasing in s.
        let mut prev = f64::INFINITY;
        for s in 3..200 {
            let b = -2.0 * falloff_exponent(s, 1) as f64;
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn lattice_energy_counts_squares() {
        assert_abs_diff_eq!(lattice_energy(10, 10, 3, -0.5), 9.0 * -0.5, epsilon = 0.0);
        assert_eq!(lattice_energy(10, 10, 11, -0.5), 0.0);
        assert_eq!(lattice_energy(10, 10, 3, 0.0), 0.0);
        // Brute-force square counting agreement on a pseudo-random grid.
        let mut state = 0x2545F4914F6CDD1Du64;
        for _ in 0..50 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let l = 1 + (state >> 33) % 100;
            let h = 1 + (state >> 13) % 100;
            let w = 1 + state % 17;
            let mut count = 0u64;
            let mut x = w;
            while x <= l {
                let mut y = w;
                while y <= h {
                    count += 1;
                    y += w;
                }
                x += w;
            }
            assert_abs_diff_eq!(
                lattice_energy(l, h, w, 1.25),
                count as f64 * 1.25,
                epsilon = 0.0
            );
        }
    }

    #[test]
    fn classify_never_halting_is_gapped() {
        let v = classify_phase(0.125, &BalanceParams::default(), DEFAULT_S_MAX).unwrap();
        assert_eq!(v.verdict, Verdict::Gapped);
        assert_eq!(v.eta, Some(3));
        assert_eq!(v.ell_star, Some(1));
    }

    #[test]
    fn classify_halting_is_gapless_with_witness() {
        let params = BalanceParams {
            oracle: ToyOracle::Always { space: 4 },
            ..BalanceParams::default()
        };
        let v = classify_phase(0.125, &params, DEFAULT_S_MAX).unwrap();
        assert_eq!(v.verdict, Verdict::Gapless);
        let w = v.witness_w.unwrap();
        assert!(w >= 4);
        // Witness minimality: everything below it is nonnegative.
        let enc = PhaseEncoding {
            eta: 3,
            ell: v.ell_star.unwrap(),
            phi_prime: 0.125,
        };
        let below = square_energy_sign(w - 1, &enc, &params).unwrap();
        assert_eq!(below.sign, EnergySign::Nonnegative);
    }

    #[test]
    fn classify_outside_interval() {
        // Just below 2^{-3}: lands in η = 4's bracket but outside its
        // certified sliver unless φ' is within 2^{-4}+2^{-5}.
        let v = classify_phase(0.124, &BalanceParams::default(), 64).unwrap();
        assert_eq!(v.verdict, Verdict::OutsideCertifiedInterval);
        assert_eq!(v.eta, Some(4));
        assert!(classify_phase(1.5, &BalanceParams::default(), 64).is_err());
        let z = classify_phase(0.0, &BalanceParams::default(), 64).unwrap();
        assert_eq!(z.verdict, Verdict::OutsideCertifiedInterval);
    }

    #[test]
    fn classifier_constant_on_certified_interval() {
        let params = BalanceParams {
            oracle: ToyOracle::EvenEta { space: 4 },
            ..BalanceParams::default()
        };
        for eta in 1..=6u32 {
            let lo = 2.0f64.powi(-(eta as i32));
            let ell_star = params
                .oracle
                .halting_space(eta)
                .map(|l0| ell_threshold(l0.max(2)).max(1))
                .unwrap_or(1) as i32;
            let width = 2.0f64.powi(-(eta as i32 + ell_star));
            let mut verdicts = Vec::new();
            for i in 0..10 {
                let phi = lo + width * (i as f64 + 0.5) / 10.5;
                verdicts.push(classify_phase(phi, &params, DEFAULT_S_MAX).unwrap().verdict);
            }
            assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "eta={eta}");
            let expected = if eta % 2 == 0 {
                Verdict::Gapless
            } else {
                Verdict::Gapped
            };
            assert_eq!(verdicts[0], expected, "eta={eta}");
        }
    }

    #[test]
    fn params_json_roundtrip() {
        let p = BalanceParams {
            oracle: ToyOracle::Table {
                entries: [(2u32, 8u64)].into_iter().collect(),
            },
            ..BalanceParams::default()
        };
        let s = serde_json::to_string(&p).unwrap();
        let back: BalanceParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back.oracle.halting_space(2), Some(8));
        assert_eq!(back.oracle.halting_space(3), None);
        // Unknown fields rejected.
        let bad = serde_json::from_str::<BalanceParams>(&s.replace("\"xi\"", "\"zz\""));
        assert!(bad.is_err());
    }
}
