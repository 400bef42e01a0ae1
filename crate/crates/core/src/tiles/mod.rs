//! Weighted, layered Wang-tile engine.
//!
//! Tiles carry one edge color per layer on each of their four sides, an
//! optional set of decoration symbols, and integer weights: adjacent edges
//! that disagree cost one unit per disagreeing layer (overridable per tile
//! pair), and individual tiles may carry site bonuses that depend on whether
//! the tile sits above or to the right of another tile.  All scoring is
//! integer arithmetic.

pub mod checkerboard;
pub mod enumerate;
pub mod layered;
pub mod tm;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a tile within its owning tile set.
pub type TileId = u32;

/// Relative placement of a tile pair: `Horizontal` reads left-right,
/// `Vertical` reads bottom-top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Context in which a site bonus applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BonusContext {
    /// The tile sits directly above another tile.
    AboveAnother,
    /// The tile sits directly to the right of another tile.
    RightOfAnother,
    /// Applies to every occurrence of the tile.
    Unconditional,
}

/// One square tile with per-layer edge colors and optional decorations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub id: TileId,
    /// Edge colors, one per layer, keyed n/e/s/w.
    pub edges: TileEdges,
    /// Decoration symbols carried by the tile (e.g. a marker dot).
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub decorations: BTreeSet<String>,
}

/// The four edge color stacks of a tile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileEdges {
    pub n: Vec<String>,
    pub e: Vec<String>,
    pub s: Vec<String>,
    pub w: Vec<String>,
}

impl Tile {
    /// Single-layer tile from four edge colors in (north, east, south, west) order.
    pub fn single(id: TileId, n: &str, e: &str, s: &str, w: &str) -> Self {
        Tile {
            id,
            edges: TileEdges {
                n: vec![n.to_string()],
                e: vec![e.to_string()],
                s: vec![s.to_string()],
                w: vec![w.to_string()],
            },
            decorations: BTreeSet::new(),
        }
    }

    /// Adds a decoration symbol and returns the tile.
    pub fn with_decoration(mut self, symbol: &str) -> Self {
        self.decorations.insert(symbol.to_string());
        self
    }
}

/// Override weight for one ordered tile pair in one orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWeight {
    pub a: TileId,
    pub b: TileId,
    pub orientation: Orientation,
    pub weight: i64,
}

/// Site bonus entry for one tile in one context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteBonus {
    pub tile: TileId,
    pub context: BonusContext,
    pub bonus: i64,
}

/// Declarative marker rule: scored by [`score_tiling`] on top of the local
/// weights, enforcing that every horizontal run of edge tiles east of an
/// anchor tile carries exactly one marked tile at a fixed offset, except on
/// the bottom row where markers are forbidden.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerRule {
    /// Tile that anchors the left end of a run.
    pub anchor: TileId,
    /// Plain run tiles.
    pub run_tiles: BTreeSet<TileId>,
    /// Marked run tiles (decorated variants of the run tiles).
    pub marked_tiles: BTreeSet<TileId>,
    /// Required marker offset east of the anchor for runs that never reach a
    /// closing anchor.
    pub offset: u32,
    /// When set, a run closing at another anchor at distance `s` requires the
    /// marker at the eighth root `ceil(s^(1/8))` instead of `offset`.
    #[serde(default)]
    pub eighth_root_closed: bool,
}

/// A weighted tile set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSet {
    /// Layer names; every tile's edge stacks have this length.
    pub layers: Vec<String>,
    pub tiles: Vec<Tile>,
    /// Pair weight overrides; absent pairs cost one unit per mismatching layer.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<PairWeight>,
    /// Site bonuses; absent entries contribute zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bonuses: Vec<SiteBonus>,
    /// Optional marker rule scored on top of the local terms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marker_rule: Option<MarkerRule>,
}

/// A full assignment of tiles to a rectangular grid, row-major from the
/// bottom-left cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tiling {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<TileId>,
}

impl Tiling {
    /// Tile id at column `u`, row `v` (row 0 is the bottom).
    pub fn at(&self, u: usize, v: usize) -> TileId {
        assert!(u < self.width && v < self.height, "cell out of range");
        self.cells[v * self.width + u]
    }

    /// Builds a tiling from a closure over (column, row).
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> TileId) -> Self {
        let mut cells = Vec::with_capacity(width * height);
        for v in 0..height {
            for u in 0..width {
                cells.push(f(u, v));
            }
        }
        Tiling {
            width,
            height,
            cells,
        }
    }
}

impl TileSet {
    /// Single-layer tile set with default weights and no bonuses.
    pub fn single_layer(tiles: Vec<Tile>) -> Self {
        TileSet {
            layers: vec!["base".to_string()],
            tiles,
            weights: Vec::new(),
            bonuses: Vec::new(),
            marker_rule: None,
        }
    }

    /// Looks up a tile by id.
    pub fn tile(&self, id: TileId) -> Result<&Tile> {
        self.tiles
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::invalid(format!("unknown tile id {id}")))
    }

    /// Checks ids are unique and edge stacks match the declared layer count.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let n_layers = self.layers.len();
        if n_layers == 0 {
            return Err(Error::invalid("tile set must declare at least one layer"));
        }
        for t in &self.tiles {
            if !seen.insert(t.id) {
                return Err(Error::invalid(format!("duplicate tile id {}", t.id)));
            }
            let ok = t.edges.n.len() == n_layers
                && t.edges.e.len() == n_layers
                && t.edges.s.len() == n_layers
                && t.edges.w.len() == n_layers;
            if !ok {
                return Err(Error::invalid(format!(
                    "tile {} has edge stacks not matching {} layers",
                    t.id, n_layers
                )));
            }
        }
        for w in &self.weights {
            if !seen.contains(&w.a) || !seen.contains(&w.b) {
                return Err(Error::invalid(format!(
                    "pair weight references unknown tile ({}, {})",
                    w.a, w.b
                )));
            }
        }
        for b in &self.bonuses {
            if !seen.contains(&b.tile) {
                return Err(Error::invalid(format!(
                    "site bonus references unknown tile {}",
                    b.tile
                )));
            }
        }
        Ok(())
    }

    /// Precomputes dense pair-weight and bonus tables for fast scoring.
    pub fn compile(&self) -> Result<CompiledTileSet> {
        self.validate()?;
        let ids: Vec<TileId> = self.tiles.iter().map(|t| t.id).collect();
        let index: BTreeMap<TileId, usize> =
            ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let n = self.tiles.len();
        let mismatch = |a: &[String], b: &[String]| -> i64 {
            a.iter().zip(b.iter()).filter(|(x, y)| x != y).count() as i64
        };
        let mut w_h = vec![0i64; n * n];
        let mut w_v = vec![0i64; n * n];
        for (i, a) in self.tiles.iter().enumerate() {
            for (j, b) in self.tiles.iter().enumerate() {
                // Horizontal: `a` west of `b`; vertical: `a` below `b`.
                w_h[i * n + j] = mismatch(&a.edges.e, &b.edges.w);
                w_v[i * n + j] = mismatch(&a.edges.n, &b.edges.s);
            }
        }
        for w in &self.weights {
            let i = index[&w.a];
            let j = index[&w.b];
            match w.orientation {
                Orientation::Horizontal => w_h[i * n + j] = w.weight,
                Orientation::Vertical => w_v[i * n + j] = w.weight,
            }
        }
        let mut unconditional = vec![0i64; n];
        let mut above = vec![0i64; n];
        let mut right = vec![0i64; n];
        for b in &self.bonuses {
            let i = index[&b.tile];
            match b.context {
                BonusContext::Unconditional => unconditional[i] += b.bonus,
                BonusContext::AboveAnother => above[i] += b.bonus,
                BonusContext::RightOfAnother => right[i] += b.bonus,
            }
        }
        Ok(CompiledTileSet {
            ids,
            index,
            w_h,
            w_v,
            unconditional,
            above,
            right,
        })
    }
}

/// Dense scoring tables for one tile set, indexed by tile position in the
/// tile list rather than tile id.
#[derive(Debug, Clone)]
pub struct CompiledTileSet {
    pub ids: Vec<TileId>,
    pub index: BTreeMap<TileId, usize>,
    w_h: Vec<i64>,
    w_v: Vec<i64>,
    unconditional: Vec<i64>,
    above: Vec<i64>,
    right: Vec<i64>,
}

impl CompiledTileSet {
    /// Number of tiles.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// True when the tile set is empty.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Weight of placing tile index `right` directly east of tile index `left`.
    pub fn horizontal(&self, left: usize, right: usize) -> i64 {
        self.w_h[left * self.ids.len() + right]
    }

    /// Weight of placing tile index `top` directly north of tile index `bottom`.
    pub fn vertical(&self, bottom: usize, top: usize) -> i64 {
        self.w_v[bottom * self.ids.len() + top]
    }

    /// Site contribution of tile index `i` at a cell with the given occupied
    /// neighbors below and to the left.
    pub fn site(&self, i: usize, has_below: bool, has_left: bool) -> i64 {
        let mut s = self.unconditional[i];
        if has_below {
            s += self.above[i];
        }
        if has_left {
            s += self.right[i];
        }
        s
    }

    /// Smallest possible score contribution of one additional cell; used as an
    /// admissible bound during enumeration.
    pub fn min_cell_delta(&self) -> i64 {
        let n = self.ids.len();
        let mut best = i64::MAX;
        for i in 0..n {
            let site = self.unconditional[i] + self.above[i].min(0) + self.right[i].min(0);
            let wh = (0..n).map(|j| self.horizontal(j, i).min(0)).min().unwrap_or(0);
            let wv = (0..n).map(|j| self.vertical(j, i).min(0)).min().unwrap_or(0);
            best = best.min(site + wh + wv);
        }
        if best == i64::MAX {
            0
        } else {
            best
        }
    }
}

/// Total integer score of a tiling: adjacent-pair weights plus site bonuses,
/// plus the marker rule when the tile set declares one.
pub fn score_tiling(ts: &TileSet, t: &Tiling) -> Result<i64> {
    assert!(
        t.cells.len() == t.width * t.height,
        "tiling cell count must equal width * height"
    );
    let compiled = ts.compile()?;
    let mut idx = Vec::with_capacity(t.cells.len());
    for &id in &t.cells {
        let i = *compiled
            .index
            .get(&id)
            .ok_or_else(|| Error::invalid(format!("unknown tile id {id} in tiling")))?;
        idx.push(i);
    }
    let mut score = 0i64;
    for v in 0..t.height {
        for u in 0..t.width {
            let i = idx[v * t.width + u];
            score += compiled.site(i, v > 0, u > 0);
            if u > 0 {
                score += compiled.horizontal(idx[v * t.width + u - 1], i);
            }
            if v > 0 {
                score += compiled.vertical(idx[(v - 1) * t.width + u], i);
            }
        }
    }
    if let Some(rule) = &ts.marker_rule {
        score += marker_rule_penalties(rule, t)
            .iter()
            .map(|(_, p)| p)
            .sum::<i64>();
    }
    Ok(score)
}

/// Marker-rule contribution with cell attribution: one unit per run violating
/// the rule and one unit per marked tile outside any sanctioned position.
pub fn marker_rule_penalties(rule: &MarkerRule, t: &Tiling) -> Vec<((usize, usize), i64)> {
    let mut penalties = Vec::new();
    let mut sanctioned: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 0..t.height {
        for u in 0..t.width {
            if t.at(u, v) != rule.anchor {
                continue;
            }
            // Walk the run of run/marked tiles east of the anchor.
            let mut reach = 0usize;
            while u + reach + 1 < t.width {
                let id = t.at(u + reach + 1, v);
                if rule.run_tiles.contains(&id) || rule.marked_tiles.contains(&id) {
                    reach += 1;
                } else {
                    break;
                }
            }
            let closes = u + reach + 1 < t.width && t.at(u + reach + 1, v) == rule.anchor;
            let want = if closes && rule.eighth_root_closed {
                crate::log2::integer_root_ceil((reach + 1) as u128, 8) as usize
            } else {
                rule.offset as usize
            };
            for k in 1..=reach {
                let marked = rule.marked_tiles.contains(&t.at(u + k, v));
                let required = v > 0 && k == want && reach >= want;
                if required {
                    sanctioned.insert((u + k, v));
                    if !marked {
                        penalties.push(((u + k, v), 1));
                    }
                }
            }
        }
    }
    for v in 0..t.height {
        for u in 0..t.width {
            if rule.marked_tiles.contains(&t.at(u, v)) && !sanctioned.contains(&(u, v)) {
                penalties.push(((u, v), 1));
            }
        }
    }
    penalties
}
