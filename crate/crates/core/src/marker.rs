//! Marker pinning energies: the perturbed path Laplacian, the closed-form
//! characteristic value p_w(λ), bounds on its root near -1/2, and the
//! segment Hamiltonian whose ground energy sits in a doubly-exponentially
//! small window below zero.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::log2::Log2Mag;
use crate::spectra::{eigen_spectrum, HermitianOperator};

/// Path Laplacian on w vertices with the end weight at vertex w reduced by 1.
///
/// For w ≥ 2 the diagonal reads (1, 2, ..., 2, 1) with the last entry then
/// lowered to 0... minus the defect: explicitly diag(1, 2, ..., 2, 0) for the
/// unperturbed end weight 1 minus 1. For w = 1 the operator is the 1×1
/// matrix [-1] (degree 0 at an isolated endpoint, minus the defect).
pub fn perturbed_path_laplacian(w: usize) -> HermitianOperator {
    assert!(w >= 1, "need at least one vertex");
    if w == 1 {
        return HermitianOperator::diagonal(&[-1.0], "perturbed-path[1]");
    }
    let mut entries = Vec::with_capacity(2 * w);
    for i in 0..w {
        let deg = if i == 0 || i == w - 1 { 1.0 } else { 2.0 };
        let defect = if i == w - 1 { 1.0 } else { 0.0 };
        entries.push((i, i, Complex64::new(deg - defect, 0.0)));
        if i + 1 < w {
            entries.push((i, i + 1, Complex64::new(-1.0, 0.0)));
        }
    }
    HermitianOperator::from_entries(w, entries, format!("perturbed-path[{w}]"))
        .expect("construction is Hermitian")
}

/// Characteristic value p_w(λ) = det(λI - Δ'_w) via the closed form
///
///   p_w(λ) = -(2^{-w-1}/√(λ-4)) · (3√λ (x_w - y_w) + √(λ-4)(x_w + y_w)),
///   x_w = (λ - √(λ-4)√λ - 2)^w,  y_w = (λ + √(λ-4)√λ - 2)^w,
///
/// with principal complex branches. Errors at the branch points λ ∈ {0, 4}.
pub fn pinning_char_value(w: usize, lambda: f64) -> Result<f64> {
    assert!(w >= 1);
    if lambda == 0.0 || lambda == 4.0 {
        return Err(Error::invalid(format!(
            "characteristic closed form has a branch point at λ = {lambda}"
        )));
    }
    let l = Complex64::new(lambda, 0.0);
    let s4 = (l - 4.0).sqrt();
    let sl = l.sqrt();
    let x = (l - s4 * sl - 2.0).powu(w as u32);
    let y = (l + s4 * sl - 2.0).powu(w as u32);
    let val = -(2.0f64.powi(-(w as i32) - 1)) / s4 * (3.0 * sl * (x - y) + s4 * (x + y));
    if val.im.abs() > 1e-9 * (1.0 + val.re.abs()) {
        return Err(Error::invalid(format!(
            "closed form returned a non-real value at λ = {lambda}: {val}"
        )));
    }
    Ok(val.re)
}

/// p_w(-1/2) = (-1)^{1+w} 2^{-w}, exactly.
pub fn pinning_char_at_half(w: usize) -> f64 {
    let sign = if w % 2 == 0 { -1.0 } else { 1.0 };
    sign * 2.0f64.powi(-(w as i32))
}

/// Bracket for the lowest eigenvalue of the perturbed path Laplacian:
/// λ_min ∈ (-1/2 - 3·4^{-w}, -1/2 - 4^{-w}); at w = 1 the eigenvalue -1
/// sits strictly inside (-5/4, -3/4).
pub fn pinning_root_bracket(w: usize) -> (f64, f64) {
    assert!(w >= 1);
    let q = 4.0f64.powi(-(w as i32));
    (-0.5 - 3.0 * q, -0.5 - q)
}

/// Marker-edge length as a function of lattice side: f(L) = C·(L + r).
pub fn marker_edge_length(l: u64, c: u64, r: u64) -> u64 {
    assert!(c >= 1 && l >= 1);
    c * (l + r)
}

/// log₂-domain bounds on the marker boundary energy above -1/2:
/// the shifted ground energy lies in [-3·4^{-f}, -4^{-f}], f = C(L + r).
///
/// Returns (lower, upper) as signed magnitudes |·| in log₂; both endpoints
/// are negative.
pub fn edge_energy_bounds_log2(l: u64, c: u64, r: u64) -> (Log2Mag, Log2Mag) {
    let f = marker_edge_length(l, c, r) as f64;
    let upper = Log2Mag(-2.0 * f);
    let lower = Log2Mag(3.0f64.log2() - 2.0 * f);
    (lower, upper)
}

/// Marker segment Hamiltonian: the perturbed path Laplacian plus the exact
/// boundary counter-shift of +1/2 per segment. Its ground energy equals
/// λ_min(Δ'_f) + 1/2 ∈ (-3·4^{-f}, -4^{-f}).
pub fn marker_segment_hamiltonian(f: usize) -> HermitianOperator {
    let lap = perturbed_path_laplacian(f);
    crate::spectra::shift_energy(&lap, 0.5)
}

/// Ground energy of the marker segment at numerically tractable f.
pub fn marker_segment_energy(f: usize) -> Result<f64> {
    let h = marker_segment_hamiltonian(f);
    let s = eigen_spectrum(&h, Some(1))?;
    Ok(s.eigenvalues[0])
}

/// Dense expansion of the perturbed path Laplacian (for determinant checks).
pub fn perturbed_path_dense(w: usize) -> DMatrix<Complex64> {
    perturbed_path_laplacian(w).to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// det(λI - Δ'_w) by LU on the real dense matrix.
    fn det_direct(w: usize, lambda: f64) -> f64 {
        let m = perturbed_path_dense(w);
        let n = m.nrows();
        let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = -m[(i, j)].re;
            }
            a[(i, i)] += lambda;
        }
        a.lu().determinant()
    }

    #[test]
    fn closed_form_matches_determinant() {
        for w in 1..=12 {
            for &lam in &[-2.0, -0.51, -0.5, -0.49, 0.3, 1.7, 3.9, 4.1, 6.0] {
                let cf = pinning_char_value(w, lam).unwrap();
                let dd = det_direct(w, lam);
                assert_abs_diff_eq!(cf, dd, epsilon = 1e-8 * (1.0 + dd.abs()));
            }
        }
    }

    #[test]
    fn branch_points_rejected() {
        assert!(pinning_char_value(3, 0.0).is_err());
        assert!(pinning_char_value(3, 4.0).is_err());
    }

    #[test]
    fn value_at_minus_half() {
        for w in 1..=20 {
            let closed = pinning_char_value(w, -0.5).unwrap();
            let stated = pinning_char_at_half(w);
            assert_abs_diff_eq!(closed, stated, epsilon = 1e-12 * stated.abs().max(1.0));
        }
    }

    #[test]
    fn w1_matrix_is_minus_one() {
        let m = perturbed_path_dense(1);
        assert_eq!(m.nrows(), 1);
        assert_abs_diff_eq!(m[(0, 0)].re, -1.0, epsilon = 0.0);
    }

    #[test]
    fn lowest_eigenvalue_in_bracket() {
        for w in 1..=14 {
            let s = eigen_spectrum(&perturbed_path_laplacian(w), None).unwrap();
            let (lo, hi) = pinning_root_bracket(w);
            assert!(
                s.eigenvalues[0] > lo && s.eigenvalues[0] < hi,
                "w={w}: {} not in ({lo}, {hi})",
                s.eigenvalues[0]
            );
        }
    }

    #[test]
    fn only_one_negative_eigenvalue() {
        for w in 2..=12 {
            let s = eigen_spectrum(&perturbed_path_laplacian(w), None).unwrap();
            assert!(s.eigenvalues[0] < 0.0);
            assert!(s.eigenvalues[1] >= -1e-12, "w={w}");
        }
    }

    #[test]
    fn segment_energy_matches_shift() {
        for f in 2..=12 {
            let e = marker_segment_energy(f).unwrap();
            let (lo, hi) = pinning_root_bracket(f);
            assert!(e > lo + 0.5 && e < hi + 0.5, "f={f}: e={e}");
        }
    }

    #[test]
    fn edge_bounds_log2_values() {
        // L = 256, C = 1, r = 2 → f = 258, upper endpoint has log₂|·| = -516.
        let (lo, hi) = edge_energy_bounds_log2(256, 1, 2);
        assert_abs_diff_eq!(hi.0, -516.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lo.0, -516.0 + 3.0f64.log2(), epsilon = 1e-9);
    }

    #[test]
    fn edge_bounds_match_small_direct() {
        for (l, c, r) in [(2u64, 1u64, 2u64), (3, 1, 2), (4, 1, 1), (2, 2, 0)] {
            let f = marker_edge_length(l, c, r) as usize;
            let e = marker_segment_energy(f).unwrap();
            let (lo, hi) = edge_energy_bounds_log2(l, c, r);
            // Both endpoints are negative magnitudes; compare logs of |e|.
            let loge = (-e).log2();
            assert!(e < 0.0);
            assert!(loge <= lo.0 + 1e-9 && loge >= hi.0 - 1e-9, "f={f}");
        }
    }
}
