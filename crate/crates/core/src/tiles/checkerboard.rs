//! Square-grid ("checkerboard") tile sets and their ground patterns.
//!
//! Eleven tiles lay out a grid of squares: a corner tile, two alternating
//! horizontal edge tiles, two alternating vertical edge tiles, and six
//! interior tiles that draw a two-cell-wide diagonal separating an empty
//! lower-left region from a filled upper-right region inside each square.
//! The constrained variant adds site bonuses that force a corner tile into
//! the bottom-left lattice cell, making the zero-score tilings exactly the
//! corner-at-origin patterns.  Augmented variants additionally place one
//! marker dot on the edge above each square, offset by the eighth root of
//! the square size.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::log2::integer_root_ceil;
use crate::tiles::{
    marker_rule_penalties, BonusContext, MarkerRule, SiteBonus, Tile, TileId, TileSet, Tiling,
};

pub const CORNER: TileId = 0;
pub const EDGE_H_ODD: TileId = 1;
pub const EDGE_H_EVEN: TileId = 2;
pub const EDGE_V_ODD: TileId = 3;
pub const EDGE_V_EVEN: TileId = 4;
pub const DIAG_LEFT_END: TileId = 5;
pub const DIAG_RIGHT_END: TileId = 6;
pub const DIAG_MID: TileId = 7;
pub const DIAG_FLOOR: TileId = 8;
pub const INTERIOR_EMPTY: TileId = 9;
pub const INTERIOR_FULL: TileId = 10;

/// Decoration symbol carried by marked edge tiles.
pub const DOT: &str = "dot";

fn base_tiles() -> Vec<Tile> {
    vec![
        Tile::single(CORNER, "R", "B", "*R", "*B"),
        Tile::single(EDGE_H_ODD, "0", "*B", "1", "B"),
        Tile::single(EDGE_H_EVEN, "0", "B", "1", "*B"),
        Tile::single(EDGE_V_ODD, "*R", "0", "R", "1"),
        Tile::single(EDGE_V_EVEN, "R", "0", "*R", "1"),
        Tile::single(DIAG_LEFT_END, "1", "1", "D", "0"),
        Tile::single(DIAG_RIGHT_END, "1", "1", "0", "D"),
        Tile::single(DIAG_MID, "1", "1", "D", "D"),
        Tile::single(DIAG_FLOOR, "D", "D", "0", "0"),
        Tile::single(INTERIOR_EMPTY, "0", "0", "0", "0"),
        Tile::single(INTERIOR_FULL, "1", "1", "1", "1"),
    ]
}

/// Site bonuses that pin the pattern to the lattice origin: every interior
/// tile pays 2 unconditionally and earns 1 back for each of a tile below and
/// a tile to its left, so interior tiles are free in the bulk but cost on the
/// bottom row and left column.
fn origin_pinning_bonuses(interior: &[TileId]) -> Vec<SiteBonus> {
    let mut bonuses = Vec::new();
    for &t in interior {
        bonuses.push(SiteBonus {
            tile: t,
            context: BonusContext::Unconditional,
            bonus: 2,
        });
        bonuses.push(SiteBonus {
            tile: t,
            context: BonusContext::AboveAnother,
            bonus: -1,
        });
        bonuses.push(SiteBonus {
            tile: t,
            context: BonusContext::RightOfAnother,
            bonus: -1,
        });
    }
    bonuses
}

const INTERIOR_TILES: [TileId; 6] = [
    DIAG_LEFT_END,
    DIAG_RIGHT_END,
    DIAG_MID,
    DIAG_FLOOR,
    INTERIOR_EMPTY,
    INTERIOR_FULL,
];

/// The eleven-tile square-grid set.  With `constrained` the origin-pinning
/// bonuses are added, otherwise all weights are defaults and the pattern
/// offset is free.
pub fn checkerboard_tileset(constrained: bool) -> TileSet {
    let mut ts = TileSet::single_layer(base_tiles());
    if constrained {
        ts.bonuses = origin_pinning_bonuses(&INTERIOR_TILES);
    }
    ts
}

/// The square-grid pattern of period `s` with the corner tile at
/// `(offset_u, offset_v)` (modulo `s`), on a `width` x `height` grid.
pub fn checkerboard_pattern(
    s: usize,
    width: usize,
    height: usize,
    offset_u: usize,
    offset_v: usize,
) -> Tiling {
    assert!(s >= 1, "square period must be positive");
    Tiling::from_fn(width, height, |u, v| {
        let cu = (u + s - offset_u % s) % s;
        let cv = (v + s - offset_v % s) % s;
        match (cu, cv) {
            (0, 0) => CORNER,
            (_, 0) => {
                if cu % 2 == 1 {
                    EDGE_H_ODD
                } else {
                    EDGE_H_EVEN
                }
            }
            (0, _) => {
                if cv % 2 == 1 {
                    EDGE_V_ODD
                } else {
                    EDGE_V_EVEN
                }
            }
            _ => {
                let d = cu + cv;
                if d < s - 1 {
                    INTERIOR_EMPTY
                } else if d == s - 1 {
                    DIAG_FLOOR
                } else if d == s {
                    if cu == 1 {
                        DIAG_LEFT_END
                    } else if cv == 1 {
                        DIAG_RIGHT_END
                    } else {
                        DIAG_MID
                    }
                } else {
                    INTERIOR_FULL
                }
            }
        }
    })
}

/// All zero-score tilings of the constrained tile set on an `l` x `l` grid,
/// built constructively: corner-at-origin patterns of every period, scored
/// and deduplicated.  Sorted by cell vector for determinism.
pub fn ground_checkerboards(l: usize) -> Result<Vec<Tiling>> {
    let ts = checkerboard_tileset(true);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in 1..=(2 * l + 2) {
        let t = checkerboard_pattern(s, l, l, 0, 0);
        if crate::tiles::score_tiling(&ts, &t)? == 0 && seen.insert(t.cells.clone()) {
            out.push(t);
        }
    }
    out.sort();
    Ok(out)
}

/// How the marker layer of the augmented tile set is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AugmentedMode {
    /// Marker positions checked by a whole-run rule with an integer-root
    /// oracle; two extra decorated edge tiles.
    Semantic,
    /// Marker positions enforced by a second edge-color layer walked outward
    /// from each corner; edge tiles split into armed/disarmed variants.
    Full,
}

pub const MARKED_H_ODD: TileId = 11;
pub const MARKED_H_EVEN: TileId = 12;

// Full-mode edge-tile variants (odd/even refer to the underlying alternation).
pub const ARMED_START_ODD: TileId = 11;
pub const ARMED_START_EVEN: TileId = 12;
pub const ARMED_MARK_ODD: TileId = 13;
pub const ARMED_MARK_EVEN: TileId = 14;
pub const ARMED_CONT_ODD: TileId = 15;
pub const ARMED_CONT_EVEN: TileId = 16;
pub const DISARMED_START_ODD: TileId = 17;
pub const DISARMED_START_EVEN: TileId = 18;
pub const DISARMED_CONT_ODD: TileId = 19;
pub const DISARMED_CONT_EVEN: TileId = 20;

/// Constrained square-grid set extended so that every edge run above a square
/// carries exactly one marker dot at the eighth root of the square size,
/// while bottom-row runs stay unmarked.
pub fn augmented_checkerboard_tileset(mode: AugmentedMode) -> TileSet {
    match mode {
        AugmentedMode::Semantic => {
            let mut ts = checkerboard_tileset(true);
            ts.tiles.push(
                Tile::single(MARKED_H_ODD, "0", "*B", "1", "B").with_decoration(DOT),
            );
            ts.tiles.push(
                Tile::single(MARKED_H_EVEN, "0", "B", "1", "*B").with_decoration(DOT),
            );
            ts.marker_rule = Some(MarkerRule {
                anchor: CORNER,
                run_tiles: [EDGE_H_ODD, EDGE_H_EVEN].into_iter().collect(),
                marked_tiles: [MARKED_H_ODD, MARKED_H_EVEN].into_iter().collect(),
                offset: 2,
                eighth_root_closed: true,
            });
            ts
        }
        AugmentedMode::Full => full_mode_tileset(),
    }
}

/// Builds the two-layer full-mode set: the second layer walks a counter out
/// of each corner ("s" then "m" then "e"), and the tile receiving "m" carries
/// the dot, so the dot lands two cells east of the corner.  Disarmed variants
/// propagate "s"/"e" without a dot; site bonuses make armed variants free
/// exactly off the bottom row and disarmed variants free exactly on it.
fn full_mode_tileset() -> TileSet {
    let neutral = ".";
    let mut tiles = Vec::new();
    let base = base_tiles();
    for t in &base {
        if t.id == EDGE_H_ODD || t.id == EDGE_H_EVEN {
            continue; // replaced by armed/disarmed variants below
        }
        let (me, mw) = if t.id == CORNER {
            ("s", "e")
        } else {
            (neutral, neutral)
        };
        tiles.push(two_layer(t, me, mw, false));
    }
    let h_odd = &base[EDGE_H_ODD as usize];
    let h_even = &base[EDGE_H_EVEN as usize];
    let variants: [(TileId, TileId, &str, &str, bool); 10] = [
        (ARMED_START_ODD, EDGE_H_ODD, "m", "s", false),
        (ARMED_START_EVEN, EDGE_H_EVEN, "m", "s", false),
        (ARMED_MARK_ODD, EDGE_H_ODD, "e", "m", true),
        (ARMED_MARK_EVEN, EDGE_H_EVEN, "e", "m", true),
        (ARMED_CONT_ODD, EDGE_H_ODD, "e", "e", false),
        (ARMED_CONT_EVEN, EDGE_H_EVEN, "e", "e", false),
        (DISARMED_START_ODD, EDGE_H_ODD, "e", "s", false),
        (DISARMED_START_EVEN, EDGE_H_EVEN, "e", "s", false),
        (DISARMED_CONT_ODD, EDGE_H_ODD, "e", "e", false),
        (DISARMED_CONT_EVEN, EDGE_H_EVEN, "e", "e", false),
    ];
    for (id, base_id, me, mw, dotted) in variants {
        let src = if base_id == EDGE_H_ODD { h_odd } else { h_even };
        let mut t = two_layer(src, me, mw, dotted);
        t.id = id;
        tiles.push(t);
    }
    let mut bonuses = origin_pinning_bonuses(&INTERIOR_TILES);
    for id in ARMED_START_ODD..=ARMED_CONT_EVEN {
        bonuses.push(SiteBonus {
            tile: id,
            context: BonusContext::Unconditional,
            bonus: 1,
        });
        bonuses.push(SiteBonus {
            tile: id,
            context: BonusContext::AboveAnother,
            bonus: -1,
        });
    }
    for id in DISARMED_START_ODD..=DISARMED_CONT_EVEN {
        bonuses.push(SiteBonus {
            tile: id,
            context: BonusContext::AboveAnother,
            bonus: 1,
        });
    }
    TileSet {
        layers: vec!["base".to_string(), "mark".to_string()],
        tiles,
        weights: Vec::new(),
        bonuses,
        marker_rule: None,
    }
}

/// Extends a single-layer tile with marker-layer east/west colors (north and
/// south stay neutral).
fn two_layer(t: &Tile, mark_e: &str, mark_w: &str, dotted: bool) -> Tile {
    let mut out = t.clone();
    out.edges.n.push(".".to_string());
    out.edges.e.push(mark_e.to_string());
    out.edges.s.push(".".to_string());
    out.edges.w.push(mark_w.to_string());
    if dotted {
        out.decorations.insert(DOT.to_string());
    }
    out
}

/// Projects a full-mode tiling onto the semantic-mode tile alphabet, keeping
/// the underlying edge tile and the dot.
pub fn project_full_to_semantic(t: &Tiling) -> Tiling {
    let map = |id: TileId| -> TileId {
        match id {
            ARMED_MARK_ODD => MARKED_H_ODD,
            ARMED_MARK_EVEN => MARKED_H_EVEN,
            ARMED_START_ODD | ARMED_CONT_ODD | DISARMED_START_ODD | DISARMED_CONT_ODD => {
                EDGE_H_ODD
            }
            ARMED_START_EVEN | ARMED_CONT_EVEN | DISARMED_START_EVEN | DISARMED_CONT_EVEN => {
                EDGE_H_EVEN
            }
            other => other,
        }
    };
    Tiling {
        width: t.width,
        height: t.height,
        cells: t.cells.iter().map(|&c| map(c)).collect(),
    }
}

/// The zero-score semantic-mode tilings, built constructively: every ground
/// checkerboard with the required dot added to each qualifying edge run.
pub fn ground_augmented(l: usize) -> Result<Vec<Tiling>> {
    let ts = augmented_checkerboard_tileset(AugmentedMode::Semantic);
    let mut out = Vec::new();
    for base in ground_checkerboards(l)? {
        let mut t = base.clone();
        for v in 1..l {
            for u in 0..l {
                if t.at(u, v) != CORNER {
                    continue;
                }
                let mut reach = 0;
                while u + reach + 1 < l {
                    let id = t.at(u + reach + 1, v);
                    if id == EDGE_H_ODD || id == EDGE_H_EVEN {
                        reach += 1;
                    } else {
                        break;
                    }
                }
                let closes = u + reach + 1 < l && t.at(u + reach + 1, v) == CORNER;
                let want = if closes {
                    integer_root_ceil((reach + 1) as u128, 8) as usize
                } else {
                    2
                };
                if reach >= want && want >= 1 {
                    let p = v * l + u + want;
                    t.cells[p] = match t.cells[p] {
                        EDGE_H_ODD => MARKED_H_ODD,
                        EDGE_H_EVEN => MARKED_H_EVEN,
                        other => other,
                    };
                }
            }
        }
        debug_assert_eq!(crate::tiles::score_tiling(&ts, &t)?, 0);
        out.push(t);
    }
    out.sort();
    Ok(out)
}

/// One audit result for a corner/edge-tile occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Finding {
    /// Edge run east of the corner is intact; `marker_at` is the dot offset
    /// when the run is required to carry one.
    Intact {
        corner: (usize, usize),
        length: usize,
        marker_at: Option<usize>,
    },
    /// Edge run or the square below it carries a penalty; `penalty_at` is the
    /// closest penalized cell in Manhattan distance (ties broken by row, then
    /// column).
    Broken {
        corner: (usize, usize),
        penalty_at: (usize, usize),
        penalty: i64,
    },
}

/// Locations of all positive score contributions, attributed to the east/top
/// cell of each offending pair and to the cell itself for site and marker
/// penalties.
pub fn penalty_sites(ts: &TileSet, t: &Tiling) -> Result<Vec<((usize, usize), i64)>> {
    let compiled = ts.compile()?;
    let mut idx = Vec::with_capacity(t.cells.len());
    for &id in &t.cells {
        idx.push(compiled.index[&id]);
    }
    let mut sites = Vec::new();
    for v in 0..t.height {
        for u in 0..t.width {
            let i = idx[v * t.width + u];
            let mut p = compiled.site(i, v > 0, u > 0).max(0);
            if u > 0 {
                p += compiled.horizontal(idx[v * t.width + u - 1], i).max(0);
            }
            if v > 0 {
                p += compiled.vertical(idx[(v - 1) * t.width + u], i).max(0);
            }
            if p > 0 {
                sites.push(((u, v), p));
            }
        }
    }
    if let Some(rule) = &ts.marker_rule {
        sites.extend(marker_rule_penalties(rule, t));
    }
    Ok(sites)
}

/// Audits every corner tile with an edge tile to its east: certifies intact
/// runs (and their dot, when one is required) or points at the nearest
/// penalized cell.
pub fn audit_markers(ts: &TileSet, t: &Tiling) -> Result<Vec<Finding>> {
    let corner_edges = base_tiles()[CORNER as usize].edges.clone();
    let is_corner = |id: TileId| -> bool {
        ts.tiles
            .iter()
            .find(|tile| tile.id == id)
            .map(|tile| {
                tile.edges.n.first() == corner_edges.n.first()
                    && tile.edges.e.first() == corner_edges.e.first()
                    && tile.edges.s.first() == corner_edges.s.first()
                    && tile.edges.w.first() == corner_edges.w.first()
            })
            .unwrap_or(false)
    };
    let is_edge_tile = |id: TileId| -> bool {
        ts.tiles
            .iter()
            .find(|tile| tile.id == id)
            .map(|tile| {
                tile.edges.n.first().map(String::as_str) == Some("0")
                    && tile.edges.s.first().map(String::as_str) == Some("1")
            })
            .unwrap_or(false)
    };
    let is_dotted = |id: TileId| -> bool {
        ts.tiles
            .iter()
            .find(|tile| tile.id == id)
            .map(|tile| tile.decorations.contains(DOT))
            .unwrap_or(false)
    };
    let penalties = penalty_sites(ts, t)?;
    let mut findings = Vec::new();
    for v in 0..t.height {
        for u in 0..t.width {
            if !is_corner(t.at(u, v)) || u + 1 >= t.width || !is_edge_tile(t.at(u + 1, v)) {
                continue;
            }
            let mut reach = 0;
            while u + reach + 1 < t.width && is_edge_tile(t.at(u + reach + 1, v)) {
                reach += 1;
            }
            let closes = u + reach + 1 < t.width && is_corner(t.at(u + reach + 1, v));
            let s = reach + 1;
            let dots: Vec<usize> = (1..=reach)
                .filter(|&k| is_dotted(t.at(u + k, v)))
                .collect();
            let want: Option<usize> = if v == 0 {
                None
            } else if closes {
                Some(integer_root_ceil(s as u128, 8) as usize)
            } else if reach >= 2 {
                Some(2)
            } else {
                None
            };
            let dot_ok = match want {
                None => dots.is_empty(),
                Some(w) => dots == vec![w],
            };
            // Any penalty inside the run or the square below breaks the pair.
            let v_lo = v.saturating_sub(s);
            let local: Vec<((usize, usize), i64)> = penalties
                .iter()
                .filter(|((pu, pv), _)| *pu >= u && *pu <= u + s && *pv >= v_lo && *pv <= v)
                .cloned()
                .collect();
            if dot_ok && local.is_empty() {
                findings.push(Finding::Intact {
                    corner: (u, v),
                    length: s,
                    marker_at: want.filter(|_| !dots.is_empty()),
                });
            } else {
                let fallback = ((u, v), 1);
                let pool = if local.is_empty() { &penalties } else { &local };
                let best = pool
                    .iter()
                    .min_by_key(|((pu, pv), _)| {
                        let d = pu.abs_diff(u) + pv.abs_diff(v);
                        (d, *pv, *pu)
                    })
                    .cloned()
                    .unwrap_or(fallback);
                findings.push(Finding::Broken {
                    corner: (u, v),
                    penalty_at: best.0,
                    penalty: best.1,
                });
            }
        }
    }
    Ok(findings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::enumerate::enumerate_min_tilings;
    use crate::tiles::score_tiling;

    #[test]
    fn tile_count_is_eleven() {
        assert_eq!(checkerboard_tileset(false).tiles.len(), 11);
        assert_eq!(checkerboard_tileset(true).tiles.len(), 11);
    }

    #[test]
    fn corner_at_origin_patterns_score_zero() {
        let ts = checkerboard_tileset(true);
        for (s, l) in [(4, 5), (4, 9), (3, 3), (5, 5), (6, 5), (8, 7)] {
            let t = checkerboard_pattern(s, l, l, 0, 0);
            assert_eq!(score_tiling(&ts, &t).unwrap(), 0, "s={s} l={l}");
        }
    }

    #[test]
    fn complete_odd_squares_mismatch() {
        let ts = checkerboard_tileset(true);
        let t = checkerboard_pattern(3, 4, 4, 0, 0);
        assert!(score_tiling(&ts, &t).unwrap() >= 1);
    }

    #[test]
    fn all_empty_interior_costs_twice_the_side() {
        let ts = checkerboard_tileset(true);
        for l in 2..=6 {
            let t = Tiling::from_fn(l, l, |_, _| INTERIOR_EMPTY);
            assert_eq!(score_tiling(&ts, &t).unwrap(), 2 * l as i64);
        }
    }

    #[test]
    fn offsets_are_free_without_constraints_and_penalized_with() {
        let free = checkerboard_tileset(false);
        let pinned = checkerboard_tileset(true);
        let t = checkerboard_pattern(4, 5, 5, 1, 1);
        assert_eq!(score_tiling(&free, &t).unwrap(), 0);
        assert!(score_tiling(&pinned, &t).unwrap() >= 1);
    }

    #[test]
    fn primitive_strips_score_zero_without_constraints() {
        let ts = checkerboard_tileset(false);
        // Horizontal edge strip: filled below, edge row, empty above.
        let horizontal = Tiling::from_fn(5, 5, |u, v| match v {
            0 | 1 => INTERIOR_FULL,
            2 => {
                if u % 2 == 0 {
                    EDGE_H_ODD
                } else {
                    EDGE_H_EVEN
                }
            }
            _ => INTERIOR_EMPTY,
        });
        assert_eq!(score_tiling(&ts, &horizontal).unwrap(), 0);
        // Vertical edge strip: filled left, edge column, empty right.
        let vertical = Tiling::from_fn(5, 5, |u, v| match u {
            0 | 1 => INTERIOR_FULL,
            2 => {
                if v % 2 == 0 {
                    EDGE_V_ODD
                } else {
                    EDGE_V_EVEN
                }
            }
            _ => INTERIOR_EMPTY,
        });
        assert_eq!(score_tiling(&ts, &vertical).unwrap(), 0);
        // Diagonal strip: two-cell-wide separation line.
        let diagonal = Tiling::from_fn(5, 5, |u, v| {
            let d = u as i64 - v as i64;
            if d < 0 {
                INTERIOR_EMPTY
            } else if d == 0 {
                DIAG_FLOOR
            } else if d == 1 {
                DIAG_MID
            } else {
                INTERIOR_FULL
            }
        });
        assert_eq!(score_tiling(&ts, &diagonal).unwrap(), 0);
    }

    #[test]
    fn generator_matches_enumeration_on_a_small_grid() {
        let ts = checkerboard_tileset(true);
        let r = enumerate_min_tilings(&ts, 3, 50_000_000).unwrap();
        assert_eq!(r.min_score, 0);
        let mut enumerated = r.tilings.clone();
        enumerated.sort();
        assert_eq!(enumerated, ground_checkerboards(3).unwrap());
    }

    #[test]
    fn semantic_mode_requires_exactly_one_dot_per_upper_run() {
        let ts = augmented_checkerboard_tileset(AugmentedMode::Semantic);
        let base = checkerboard_pattern(4, 5, 5, 0, 0);
        // Undotted: the single run above the square misses its dot.
        assert_eq!(score_tiling(&ts, &base).unwrap(), 1);
        let mut dotted = base.clone();
        dotted.cells[4 * 5 + 2] = MARKED_H_EVEN;
        assert_eq!(score_tiling(&ts, &dotted).unwrap(), 0);
        let mut doubled = dotted.clone();
        doubled.cells[4 * 5 + 1] = MARKED_H_ODD;
        assert!(score_tiling(&ts, &doubled).unwrap() >= 1);
        let mut misplaced = base.clone();
        misplaced.cells[4 * 5 + 3] = MARKED_H_ODD;
        assert!(score_tiling(&ts, &misplaced).unwrap() >= 2);
    }

    #[test]
    fn full_mode_ground_assignment_scores_zero() {
        let ts = augmented_checkerboard_tileset(AugmentedMode::Full);
        let t = full_mode_period_four(5);
        assert_eq!(score_tiling(&ts, &t).unwrap(), 0);
        // Moving the dot breaks the marker layer.
        let mut moved = t.clone();
        moved.cells[4 * 5 + 2] = ARMED_CONT_EVEN;
        moved.cells[4 * 5 + 3] = ARMED_MARK_ODD;
        assert!(score_tiling(&ts, &moved).unwrap() >= 1);
    }

    /// Hand-built full-mode period-4 pattern on an `l` x `l` grid.
    fn full_mode_period_four(l: usize) -> Tiling {
        let base = checkerboard_pattern(4, l, l, 0, 0);
        Tiling {
            width: l,
            height: l,
            cells: base
                .cells
                .iter()
                .enumerate()
                .map(|(p, &id)| {
                    let u = p % l;
                    let v = p / l;
                    match id {
                        EDGE_H_ODD | EDGE_H_EVEN => {
                            let k = u % 4;
                            let odd = id == EDGE_H_ODD;
                            if v == 0 {
                                match (k, odd) {
                                    (1, true) => DISARMED_START_ODD,
                                    (1, false) => DISARMED_START_EVEN,
                                    (_, true) => DISARMED_CONT_ODD,
                                    (_, false) => DISARMED_CONT_EVEN,
                                }
                            } else {
                                match (k, odd) {
                                    (1, true) => ARMED_START_ODD,
                                    (1, false) => ARMED_START_EVEN,
                                    (2, true) => ARMED_MARK_ODD,
                                    (2, false) => ARMED_MARK_EVEN,
                                    (_, true) => ARMED_CONT_ODD,
                                    (_, false) => ARMED_CONT_EVEN,
                                }
                            }
                        }
                        other => other,
                    }
                })
                .collect(),
        }
    }

    #[test]
    fn projection_sends_full_ground_to_semantic_ground() {
        let sem = augmented_checkerboard_tileset(AugmentedMode::Semantic);
        let t = project_full_to_semantic(&full_mode_period_four(5));
        assert_eq!(score_tiling(&sem, &t).unwrap(), 0);
    }

    #[test]
    fn audit_certifies_ground_and_flags_breaks() {
        let ts = augmented_checkerboard_tileset(AugmentedMode::Semantic);
        let mut ground = checkerboard_pattern(4, 5, 5, 0, 0);
        ground.cells[4 * 5 + 2] = MARKED_H_EVEN;
        let findings = audit_markers(&ts, &ground).unwrap();
        assert!(!findings.is_empty());
        assert!(findings
            .iter()
            .all(|f| matches!(f, Finding::Intact { .. })));
        assert!(findings.iter().any(
            |f| matches!(f, Finding::Intact { marker_at: Some(2), corner: (0, 4), .. })
        ));
        // Break the upper edge run two cells east of the corner.
        let mut broken = ground.clone();
        broken.cells[4 * 5 + 2] = INTERIOR_EMPTY;
        let findings = audit_markers(&ts, &broken).unwrap();
        assert!(findings
            .iter()
            .any(|f| matches!(f, Finding::Broken { penalty_at: (2, 4), .. })));
    }

    #[test]
    fn augmented_ground_generator_scores_zero() {
        let grounds = ground_augmented(5).unwrap();
        assert!(!grounds.is_empty());
        let ts = augmented_checkerboard_tileset(AugmentedMode::Semantic);
        for t in &grounds {
            assert_eq!(score_tiling(&ts, t).unwrap(), 0);
        }
    }

    #[test]
    fn empty_grid_without_corner_pairs_yields_no_findings() {
        let ts = augmented_checkerboard_tileset(AugmentedMode::Semantic);
        let t = Tiling::from_fn(3, 3, |_, _| INTERIOR_EMPTY);
        assert!(audit_markers(&ts, &t).unwrap().is_empty());
    }
}
