//! Stacking tile sets into one multi-layer set, with cross-layer
//! constraints expressed as data: same-cell pairing filters and rules firing
//! on the cell directly above a marked tile.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tiles::{
    BonusContext, Orientation, PairWeight, SiteBonus, Tile, TileEdges, TileId, TileSet, Tiling,
};

/// A constraint coupling two layers on the same cell: only the listed
/// component pairs may share a cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameCellRule {
    pub layer_a: usize,
    pub layer_b: usize,
    pub allowed: BTreeSet<(TileId, TileId)>,
}

/// A constraint on vertical adjacency: whenever the lower cell's component in
/// `watch_layer` is one of `watch_tiles`, the upper cell's component in
/// `target_layer` must come from `allowed`; each violation costs 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AboveRule {
    pub watch_layer: usize,
    pub watch_tiles: BTreeSet<TileId>,
    pub target_layer: usize,
    pub allowed: BTreeSet<TileId>,
}

/// Hard cap on the composed tile count, guarding against meta-alphabet
/// blowup.
pub const MAX_META_TILES: usize = 20_000;

/// A composed tile set plus the component ids behind each meta tile.
#[derive(Debug, Clone)]
pub struct LayeredTiles {
    pub tileset: TileSet,
    /// `components[meta_id][k]` is the layer-`k` tile inside meta tile `meta_id`.
    pub components: Vec<Vec<TileId>>,
}

impl LayeredTiles {
    /// Finds the meta tile with the given components.
    pub fn meta_id(&self, components: &[TileId]) -> Option<TileId> {
        self.components
            .iter()
            .position(|c| c == components)
            .map(|p| p as TileId)
    }

    /// Projects a tiling of the composed set onto one layer.
    pub fn project(&self, t: &Tiling, layer: usize) -> Result<Tiling> {
        let mut cells = Vec::with_capacity(t.cells.len());
        for id in &t.cells {
            let comp = self
                .components
                .get(*id as usize)
                .ok_or_else(|| Error::invalid(format!("meta tile {id} unknown")))?;
            cells.push(comp[layer]);
        }
        Ok(Tiling {
            width: t.width,
            height: t.height,
            cells,
        })
    }
}

/// Composes the given single-layer tile sets into one set whose tiles are
/// tuples of component tiles, scores summed across layers.  Same-cell rules
/// remove tuples outright; above rules become explicit vertical pair
/// weights.
pub fn layer_and_dovetail(
    layers: &[TileSet],
    same_cell: &[SameCellRule],
    above: &[AboveRule],
) -> Result<LayeredTiles> {
    if layers.is_empty() {
        return Err(Error::invalid("need at least one layer"));
    }
    for (k, ts) in layers.iter().enumerate() {
        ts.validate()?;
        if ts.layers.len() != 1 {
            return Err(Error::invalid(format!(
                "layer {k} must itself be single-layer"
            )));
        }
        if ts.marker_rule.is_some() {
            return Err(Error::invalid("marker rules do not compose"));
        }
    }
    for r in same_cell.iter() {
        if r.layer_a >= layers.len() || r.layer_b >= layers.len() {
            return Err(Error::invalid("same-cell rule names a missing layer"));
        }
    }
    for r in above.iter() {
        if r.watch_layer >= layers.len() || r.target_layer >= layers.len() {
            return Err(Error::invalid("above rule names a missing layer"));
        }
    }
    let mut count: usize = 1;
    for ts in layers {
        count = count.saturating_mul(ts.tiles.len());
    }
    if count > MAX_META_TILES {
        return Err(Error::Budget {
            what: "composed tile count".into(),
            needed: count as u128,
            budget: MAX_META_TILES as u128,
        });
    }

    // Enumerate the Cartesian product in odometer order.
    let mut components: Vec<Vec<TileId>> = Vec::new();
    let sizes: Vec<usize> = layers.iter().map(|ts| ts.tiles.len()).collect();
    let mut idx = vec![0usize; layers.len()];
    'outer: loop {
        let combo: Vec<TileId> = idx
            .iter()
            .zip(layers)
            .map(|(i, ts)| ts.tiles[*i].id)
            .collect();
        let ok = same_cell.iter().all(|r| {
            r.allowed
                .contains(&(combo[r.layer_a], combo[r.layer_b]))
        });
        if ok {
            components.push(combo);
        }
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < sizes[k] {
                continue 'outer;
            }
            idx[k] = 0;
            if k == 0 {
                break 'outer;
            }
        }
    }
    if components.is_empty() {
        return Err(Error::invalid("same-cell rules leave no tiles"));
    }

    let layer_names: Vec<String> = (0..layers.len()).map(|k| format!("layer{k}")).collect();
    let mut tiles = Vec::with_capacity(components.len());
    let mut bonuses: Vec<SiteBonus> = Vec::new();
    for (meta, combo) in components.iter().enumerate() {
        let mut n = Vec::new();
        let mut e = Vec::new();
        let mut s = Vec::new();
        let mut w = Vec::new();
        let mut decorations = BTreeSet::new();
        let mut bonus_by_ctx = [0i64; 3];
        for (k, id) in combo.iter().enumerate() {
            let tile = layers[k].tile(*id)?;
            n.extend(tile.edges.n.iter().cloned());
            e.extend(tile.edges.e.iter().cloned());
            s.extend(tile.edges.s.iter().cloned());
            w.extend(tile.edges.w.iter().cloned());
            decorations.extend(tile.decorations.iter().cloned());
            for b in &layers[k].bonuses {
                if b.tile == *id {
                    let slot = match b.context {
                        BonusContext::AboveAnother => 0,
                        BonusContext::RightOfAnother => 1,
                        BonusContext::Unconditional => 2,
                    };
                    bonus_by_ctx[slot] += b.bonus;
                }
            }
        }
        tiles.push(Tile {
            id: meta as TileId,
            edges: TileEdges { n, e, s, w },
            decorations,
        });
        for (slot, ctx) in [
            BonusContext::AboveAnother,
            BonusContext::RightOfAnother,
            BonusContext::Unconditional,
        ]
        .into_iter()
        .enumerate()
        {
            if bonus_by_ctx[slot] != 0 {
                bonuses.push(SiteBonus {
                    tile: meta as TileId,
                    context: ctx,
                    bonus: bonus_by_ctx[slot],
                });
            }
        }
    }

    // Per-layer mismatch for a meta pair, honoring component overrides.
    let layer_pair = |k: usize, a: TileId, b: TileId, orient: Orientation| -> Result<i64> {
        if let Some(pw) = layers[k]
            .weights
            .iter()
            .find(|pw| pw.a == a && pw.b == b && pw.orientation == orient)
        {
            return Ok(pw.weight);
        }
        let ta = layers[k].tile(a)?;
        let tb = layers[k].tile(b)?;
        let (xs, ys) = match orient {
            Orientation::Horizontal => (&ta.edges.e, &tb.edges.w),
            Orientation::Vertical => (&ta.edges.n, &tb.edges.s),
        };
        Ok(xs.iter().zip(ys).filter(|(x, y)| x != y).count() as i64)
    };

    // Explicit pair weights are needed wherever the summed score differs from
    // a plain per-color mismatch count: component overrides and above rules.
    let mut weights: Vec<PairWeight> = Vec::new();
    let needs_override_h: Vec<bool> = layers
        .iter()
        .map(|ts| {
            ts.weights
                .iter()
                .any(|pw| pw.orientation == Orientation::Horizontal)
        })
        .collect();
    let needs_override_v: Vec<bool> = layers
        .iter()
        .map(|ts| {
            ts.weights
                .iter()
                .any(|pw| pw.orientation == Orientation::Vertical)
        })
        .collect();
    let any_h = needs_override_h.iter().any(|b| *b);
    let any_v = needs_override_v.iter().any(|b| *b) || !above.is_empty();
    for (ma, ca) in components.iter().enumerate() {
        for (mb, cb) in components.iter().enumerate() {
            if any_h {
                let mut total = 0;
                for k in 0..layers.len() {
                    total += layer_pair(k, ca[k], cb[k], Orientation::Horizontal)?;
                }
                weights.push(PairWeight {
                    a: ma as TileId,
                    b: mb as TileId,
                    orientation: Orientation::Horizontal,
                    weight: total,
                });
            }
            if any_v {
                let mut total = 0;
                for k in 0..layers.len() {
                    total += layer_pair(k, ca[k], cb[k], Orientation::Vertical)?;
                }
                for r in above {
                    if r.watch_tiles.contains(&ca[r.watch_layer])
                        && !r.allowed.contains(&cb[r.target_layer])
                    {
                        total += 1;
                    }
                }
                weights.push(PairWeight {
                    a: ma as TileId,
                    b: mb as TileId,
                    orientation: Orientation::Vertical,
                    weight: total,
                });
            }
        }
    }

    let tileset = TileSet {
        layers: layer_names,
        tiles,
        weights,
        bonuses,
        marker_rule: None,
    };
    tileset.validate()?;
    Ok(LayeredTiles {
        tileset,
        components,
    })
}
