//! Tilings as diagonal operators: each product basis state is a full grid
//! assignment and its energy is the integer grid score.  Small grids use the
//! full product basis; larger grids use a restricted basis of low-score
//! assignments found by the backtracking enumerator.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::spectra::HermitianOperator;
use crate::tiles::enumerate::{enumerate_min_tilings_rect, enumerate_under_cap};
use crate::tiles::{score_tiling, TileSet, Tiling};

/// Hard cap on the number of materialized basis states.
pub const BASIS_BUDGET: u128 = 1 << 21;

/// Extra score allowed above the minimum when building a restricted basis.
pub const RESTRICTED_CAP_SLACK: i64 = 2;

/// A diagonal operator whose basis states are grid assignments.
#[derive(Debug, Clone)]
pub struct DiagonalHamiltonian {
    pub operator: HermitianOperator,
    /// Basis index to the grid assignment it stands for.
    pub basis: Vec<Tiling>,
}

impl DiagonalHamiltonian {
    /// Diagonal entry at basis index `i`.
    pub fn energy(&self, i: usize) -> f64 {
        self.operator
            .entries()
            .iter()
            .find(|(r, c, _)| *r == i && *c == i)
            .map(|(_, _, v)| v.re)
            .unwrap_or(0.0)
    }
}

/// Builds the diagonal operator over the full product basis of an `l` by `l`
/// grid: entry at state `|t>` is the grid score of `t`.  Errors when the
/// basis would exceed the budget; use [`tiling_to_hamiltonian_restricted`]
/// beyond that.
pub fn tiling_to_hamiltonian(ts: &TileSet, l: usize) -> Result<DiagonalHamiltonian> {
    ts.validate()?;
    assert!(l >= 1, "grid must be non-empty");
    let cells = l * l;
    let n_tiles = ts.tiles.len() as u128;
    let mut dim: u128 = 1;
    for _ in 0..cells {
        dim = dim.saturating_mul(n_tiles);
        if dim > BASIS_BUDGET {
            return Err(Error::Budget {
                what: "product basis size; use the restricted-basis mode".into(),
                needed: dim,
                budget: BASIS_BUDGET,
            });
        }
    }
    let dim = dim as usize;
    let ids: Vec<_> = ts.tiles.iter().map(|t| t.id).collect();
    let mut basis = Vec::with_capacity(dim);
    let mut entries = Vec::new();
    let mut digits = vec![0usize; cells];
    for i in 0..dim {
        let t = Tiling {
            width: l,
            height: l,
            cells: digits.iter().map(|d| ids[*d]).collect(),
        };
        let score = score_tiling(ts, &t)? as f64;
        if score != 0.0 {
            entries.push((i, i, num_complex::Complex64::new(score, 0.0)));
        }
        basis.push(t);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < ids.len() {
                break;
            }
            *d = 0;
        }
    }
    let operator = HermitianOperator::from_entries(dim, entries, "tiling-diagonal")?;
    Ok(DiagonalHamiltonian { operator, basis })
}

/// Restricted-basis variant: the basis holds only assignments the solver
/// reaches with score at most `min_score + cap_slack`.
pub fn tiling_to_hamiltonian_restricted(
    ts: &TileSet,
    l: usize,
    cap_slack: i64,
    node_budget: u64,
) -> Result<DiagonalHamiltonian> {
    ts.validate()?;
    assert!(l >= 1 && cap_slack >= 0);
    let min = enumerate_min_tilings_rect(ts, l, l, node_budget, None)?.min_score;
    let found = enumerate_under_cap(ts, l, l, min + cap_slack, node_budget, None)?;
    let mut entries = Vec::new();
    let mut basis = Vec::with_capacity(found.len());
    for (i, (t, score)) in found.into_iter().enumerate() {
        debug_assert_eq!(score, score_tiling(ts, &t)?);
        if score != 0 {
            entries.push((i, i, num_complex::Complex64::new(score as f64, 0.0)));
        }
        basis.push(t);
    }
    let operator = HermitianOperator::from_entries(basis.len(), entries, "tiling-diagonal")?;
    Ok(DiagonalHamiltonian { operator, basis })
}

/// Minimum diagonal energy and its multiplicity, delegated to the
/// backtracking enumerator so it works beyond the full-basis budget.
pub fn ground_space(ts: &TileSet, l: usize, node_budget: u64) -> Result<(i64, usize)> {
    let r = enumerate_min_tilings_rect(ts, l, l, node_budget, None)?;
    Ok((r.min_score, r.tilings.len()))
}

/// Applies a row permutation and a column permutation to a grid assignment.
pub fn permute_tiling(t: &Tiling, row_perm: &[usize], col_perm: &[usize]) -> Tiling {
    assert!(row_perm.len() == t.height && col_perm.len() == t.width);
    Tiling::from_fn(t.width, t.height, |u, v| t.at(col_perm[u], row_perm[v]))
}

/// Checks that permuting lattice rows and columns conjugates the diagonal:
/// the energy of each permuted state equals the energy of its image.  Only
/// meaningful for permutations that preserve the score (e.g. the identity on
/// bonds), so this compares against freshly scored permuted grids.
pub fn permutation_conjugation_check(
    dh: &DiagonalHamiltonian,
    ts: &TileSet,
    row_perm: &[usize],
    col_perm: &[usize],
) -> Result<bool> {
    let index: BTreeMap<&Tiling, usize> = dh.basis.iter().zip(0..).collect();
    for (i, t) in dh.basis.iter().enumerate() {
        let p = permute_tiling(t, row_perm, col_perm);
        let want = score_tiling(ts, &p)? as f64;
        match index.get(&p) {
            Some(j) => {
                if (dh.energy(*j) - want).abs() > 0.0 {
                    return Ok(false);
                }
            }
            None => return Err(Error::invalid("basis not closed under the permutation")),
        }
        let _ = i;
    }
    Ok(true)
}
