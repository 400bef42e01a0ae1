//! Exhaustive tiling search by branch-and-bound backtracking.
//!
//! Cells are filled in row-major order from the bottom-left, so the neighbors
//! relevant to pair weights and site bonuses (below and to the left) are
//! always decided first.  Tiles are tried in tile-list order, which makes the
//! result ordering deterministic.  A node budget caps the number of placement
//! attempts; exhausting it is an explicit error carrying the best score seen.

use crate::error::{Error, Result};
use crate::tiles::{score_tiling, TileId, TileSet, Tiling};

/// Result of an exhaustive minimum-score search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinTilings {
    pub min_score: i64,
    pub tilings: Vec<Tiling>,
    /// Placement attempts consumed by the search.
    pub nodes: u64,
}

/// Finds the exact minimum score and every tiling attaining it on an
/// `l` x `l` grid.
pub fn enumerate_min_tilings(ts: &TileSet, l: usize, node_budget: u64) -> Result<MinTilings> {
    enumerate_min_tilings_rect(ts, l, l, node_budget, None)
}

/// Rectangular variant with an optional forced bottom row.
pub fn enumerate_min_tilings_rect(
    ts: &TileSet,
    width: usize,
    height: usize,
    node_budget: u64,
    forced_bottom: Option<&[TileId]>,
) -> Result<MinTilings> {
    // A greedy pass gives a valid upper bound for pruning; the greedy grid
    // itself is rediscovered by the exhaustive pass, so it is not recorded.
    let seed = greedy_score(ts, width, height, forced_bottom)?;
    let mut best: Option<i64> = None;
    let mut found: Vec<Tiling> = Vec::new();
    let nodes = search(
        ts,
        width,
        height,
        node_budget,
        forced_bottom,
        Some(seed),
        |t, score| {
            match best {
                Some(b) if score > b => {}
                Some(b) if score == b => found.push(t),
                _ => {
                    best = Some(score);
                    found.clear();
                    found.push(t);
                }
            }
            best
        },
    )?;
    let min_score = best.expect("non-empty grid always admits a tiling");
    Ok(MinTilings {
        min_score,
        tilings: found,
        nodes,
    })
}

/// Collects every tiling with score at most `cap`, with its score; used for
/// restricted-basis operator construction.
pub fn enumerate_under_cap(
    ts: &TileSet,
    width: usize,
    height: usize,
    cap: i64,
    node_budget: u64,
    forced_bottom: Option<&[TileId]>,
) -> Result<Vec<(Tiling, i64)>> {
    let mut found: Vec<(Tiling, i64)> = Vec::new();
    search(
        ts,
        width,
        height,
        node_budget,
        forced_bottom,
        Some(cap),
        |t, score| {
            if score <= cap {
                found.push((t, score));
            }
            Some(cap)
        },
    )?;
    Ok(found)
}

/// Depth-first search core.  Partial scores exceeding the current bound are
/// cut; `accept` consumes each completed grid whose score does not exceed the
/// bound and returns the updated bound.
fn search(
    ts: &TileSet,
    width: usize,
    height: usize,
    node_budget: u64,
    forced_bottom: Option<&[TileId]>,
    initial_bound: Option<i64>,
    mut accept: impl FnMut(Tiling, i64) -> Option<i64>,
) -> Result<u64> {
    assert!(width > 0 && height > 0, "grid must be non-empty");
    let compiled = ts.compile()?;
    if compiled.is_empty() {
        return Err(Error::invalid("tile set has no tiles"));
    }
    let forced: Option<Vec<usize>> = match forced_bottom {
        Some(row) => {
            if row.len() != width {
                return Err(Error::invalid(format!(
                    "forced bottom row has {} cells, grid width is {}",
                    row.len(),
                    width
                )));
            }
            let mut v = Vec::with_capacity(width);
            for id in row {
                let i = *compiled
                    .index
                    .get(id)
                    .ok_or_else(|| Error::invalid(format!("forced tile id {id} unknown")))?;
                v.push(i);
            }
            Some(v)
        }
        None => None,
    };
    let n = compiled.len();
    let cells = width * height;
    let min_delta = compiled.min_cell_delta().min(0);
    let has_marker_rule = ts.marker_rule.is_some();

    let mut assignment = vec![0usize; cells];
    let mut prefix = vec![0i64; cells + 1];
    let mut next_choice = vec![0usize; cells + 1];
    let mut nodes: u64 = 0;
    let mut bound = initial_bound;
    let mut cell = 0usize;
    loop {
        if cell == cells {
            // The marker rule is non-local; rescore complete grids through it.
            let tiling = Tiling {
                width,
                height,
                cells: assignment.iter().map(|&i| compiled.ids[i]).collect(),
            };
            let total = if has_marker_rule {
                score_tiling(ts, &tiling)?
            } else {
                prefix[cells]
            };
            if bound.is_none() || total <= bound.unwrap() {
                bound = accept(tiling, total);
            }
            match step_back(&mut cell, &mut next_choice) {
                Some(()) => continue,
                None => break,
            }
        }
        let u = cell % width;
        let v = cell / width;
        let choices: &[usize] = match (&forced, v) {
            (Some(f), 0) => std::slice::from_ref(&f[u]),
            _ => &[],
        };
        let upper = if choices.is_empty() { n } else { choices.len() };
        let mut advanced = false;
        while next_choice[cell] < upper {
            let pick = next_choice[cell];
            next_choice[cell] += 1;
            let i = if choices.is_empty() {
                pick
            } else {
                choices[pick]
            };
            nodes += 1;
            if nodes > node_budget {
                return Err(Error::EnumerationBudget {
                    budget: node_budget,
                    best_score: bound,
                });
            }
            let mut delta = compiled.site(i, v > 0, u > 0);
            if u > 0 {
                delta += compiled.horizontal(assignment[cell - 1], i);
            }
            if v > 0 {
                delta += compiled.vertical(assignment[cell - width], i);
            }
            let partial = prefix[cell] + delta;
            // Admissible lower bound on any completion; the marker rule only
            // ever adds penalties, so it never invalidates the cut.
            let completion = partial + min_delta * (cells - cell - 1) as i64;
            if let Some(b) = bound {
                if completion > b {
                    continue;
                }
            }
            assignment[cell] = i;
            prefix[cell + 1] = partial;
            cell += 1;
            advanced = true;
            break;
        }
        if !advanced {
            match step_back(&mut cell, &mut next_choice) {
                Some(()) => {}
                None => break,
            }
        }
    }
    Ok(nodes)
}

/// Score of a greedy row-major assignment picking the locally cheapest tile
/// (ties broken by tile order); an upper bound on the true minimum.
fn greedy_score(
    ts: &TileSet,
    width: usize,
    height: usize,
    forced_bottom: Option<&[TileId]>,
) -> Result<i64> {
    let compiled = ts.compile()?;
    if compiled.is_empty() {
        return Err(Error::invalid("tile set has no tiles"));
    }
    let n = compiled.len();
    let mut assignment: Vec<usize> = Vec::with_capacity(width * height);
    for v in 0..height {
        for u in 0..width {
            if v == 0 {
                if let Some(row) = forced_bottom {
                    let i = *compiled
                        .index
                        .get(&row[u])
                        .ok_or_else(|| Error::invalid(format!("forced tile id {} unknown", row[u])))?;
                    assignment.push(i);
                    continue;
                }
            }
            let mut pick = 0usize;
            let mut pick_cost = i64::MAX;
            for i in 0..n {
                let mut c = compiled.site(i, v > 0, u > 0);
                if u > 0 {
                    c += compiled.horizontal(assignment[v * width + u - 1], i);
                }
                if v > 0 {
                    c += compiled.vertical(assignment[(v - 1) * width + u], i);
                }
                if c < pick_cost {
                    pick = i;
                    pick_cost = c;
                }
            }
            assignment.push(pick);
        }
    }
    let tiling = Tiling {
        width,
        height,
        cells: assignment.iter().map(|&i| compiled.ids[i]).collect(),
    };
    score_tiling(ts, &tiling)
}

/// Resets the choice counter at the current cell and retreats one cell;
/// `None` when the search space is exhausted.
fn step_back(cell: &mut usize, next_choice: &mut [usize]) -> Option<()> {
    if *cell == 0 {
        return None;
    }
    next_choice[*cell] = 0;
    *cell -= 1;
    Some(())
}
