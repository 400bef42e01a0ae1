//! Classical Turing machines: a table-driven simulator, a machine-to-tiles
//! encoding (rows as time steps), and the concrete machines used elsewhere:
//! a unary incrementer, a unary-to-binary counter, and an eighth-root machine
//! built from three iterated integer square roots in unary.
//!
//! Conventions: tapes are finite and fixed-length; the head starts at cell 0;
//! stepping outside the tape is reported as a distinct outcome, not a halt.
//! Binary numbers are stored least-significant digit first.  Machines that
//! need to find the tape start carry an explicit `>` marker in cell 0.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tiles::{BonusContext, SiteBonus, Tile, TileEdges, TileId, TileSet, Tiling};

/// Head movement direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    L,
    R,
}

/// One transition rule: (state, read) -> (state, write, move).
pub type DeltaRule = (String, String, String, String, Dir);

/// A deterministic single-tape Turing machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TMSpec {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub delta: Vec<DeltaRule>,
    pub q0: String,
    pub qa: String,
    pub blank: String,
}

impl TMSpec {
    /// Looks up the transition for (state, symbol).
    pub fn step(&self, state: &str, symbol: &str) -> Option<&DeltaRule> {
        self.delta
            .iter()
            .find(|(q, c, _, _, _)| q == state && c == symbol)
    }

    /// Checks declarations, totality on non-accepting states, and that the
    /// accepting state has no outgoing rule.
    pub fn validate(&self) -> Result<()> {
        let states: BTreeSet<&str> = self.states.iter().map(String::as_str).collect();
        let alphabet: BTreeSet<&str> = self.alphabet.iter().map(String::as_str).collect();
        if !states.contains(self.q0.as_str()) || !states.contains(self.qa.as_str()) {
            return Err(Error::invalid("initial or accepting state undeclared"));
        }
        if !alphabet.contains(self.blank.as_str()) {
            return Err(Error::invalid("blank symbol undeclared"));
        }
        let mut seen = BTreeSet::new();
        for (q, c, q2, c2, _) in &self.delta {
            if q == &self.qa {
                return Err(Error::invalid("accepting state has an outgoing rule"));
            }
            if !states.contains(q.as_str()) || !states.contains(q2.as_str()) {
                return Err(Error::invalid(format!("rule uses undeclared state {q}/{q2}")));
            }
            if !alphabet.contains(c.as_str()) || !alphabet.contains(c2.as_str()) {
                return Err(Error::invalid(format!("rule uses undeclared symbol {c}/{c2}")));
            }
            if !seen.insert((q.clone(), c.clone())) {
                return Err(Error::invalid(format!("duplicate rule for ({q}, {c})")));
            }
        }
        for q in &self.states {
            if q == &self.qa {
                continue;
            }
            for c in &self.alphabet {
                if !seen.contains(&(q.clone(), c.clone())) {
                    return Err(Error::invalid(format!(
                        "transition table not total: missing ({q}, {c})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builder that accumulates rules and fills the gaps with a right-moving
/// sink state, keeping the table total.
pub struct TmBuilder {
    alphabet: Vec<String>,
    rules: Vec<DeltaRule>,
    states: Vec<String>,
}

impl TmBuilder {
    pub fn new(alphabet: &[&str]) -> Self {
        TmBuilder {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            rules: Vec::new(),
            states: Vec::new(),
        }
    }

    fn note_state(&mut self, q: &str) {
        if !self.states.iter().any(|s| s == q) {
            self.states.push(q.to_string());
        }
    }

    /// Adds (q, c) -> (q2, c2, dir).
    pub fn rule(&mut self, q: &str, c: &str, q2: &str, c2: &str, dir: Dir) -> &mut Self {
        self.note_state(q);
        self.note_state(q2);
        self.rules
            .push((q.into(), c.into(), q2.into(), c2.into(), dir));
        self
    }

    /// Adds a self rule moving over each of the given symbols.
    pub fn walk(&mut self, q: &str, symbols: &[&str], dir: Dir) -> &mut Self {
        for c in symbols {
            self.rule(q, c, q, c, dir);
        }
        self
    }

    /// Finishes the machine, routing every unspecified pair to a sink state.
    pub fn build(mut self, q0: &str, qa: &str, blank: &str) -> Result<TMSpec> {
        self.note_state(q0);
        self.note_state(qa);
        let covered: BTreeSet<(String, String)> = self
            .rules
            .iter()
            .map(|(q, c, _, _, _)| (q.clone(), c.clone()))
            .collect();
        let mut need_sink = false;
        let mut extra = Vec::new();
        for q in self.states.clone() {
            if q == qa {
                continue;
            }
            for c in self.alphabet.clone() {
                if !covered.contains(&(q.clone(), c.clone())) {
                    need_sink = true;
                    extra.push((q.clone(), c.clone(), "sink".to_string(), c.clone(), Dir::R));
                }
            }
        }
        if need_sink {
            self.note_state("sink");
            for c in self.alphabet.clone() {
                self.rules
                    .push(("sink".into(), c.clone(), "sink".into(), c, Dir::R));
            }
            self.rules.extend(extra);
        }
        let tm = TMSpec {
            alphabet: self.alphabet,
            states: self.states,
            delta: self.rules,
            q0: q0.into(),
            qa: qa.into(),
            blank: blank.into(),
        };
        tm.validate()?;
        Ok(tm)
    }
}

/// One machine configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmConfig {
    pub tape: Vec<String>,
    pub head: usize,
    pub state: String,
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceEnd {
    Halted,
    /// The head tried to leave the declared tape extent.
    OutOfTape,
    StepLimit,
}

/// A run: the visited configurations (including the initial one) and the
/// reason the run stopped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmTrace {
    pub configs: Vec<TmConfig>,
    pub end: TraceEnd,
}

/// Runs the machine from `tape` with the head at cell 0, collecting at most
/// `max_steps` configurations.
pub fn run_tm(tm: &TMSpec, tape: Vec<String>, max_steps: usize) -> Result<TmTrace> {
    tm.validate()?;
    assert!(max_steps >= 1, "need room for the initial configuration");
    if tape.is_empty() {
        return Err(Error::invalid("tape must be non-empty"));
    }
    for c in &tape {
        if !tm.alphabet.contains(c) {
            return Err(Error::invalid(format!("tape symbol {c} undeclared")));
        }
    }
    let mut configs = vec![TmConfig {
        tape,
        head: 0,
        state: tm.q0.clone(),
    }];
    loop {
        let cur = configs.last().unwrap().clone();
        if cur.state == tm.qa {
            return Ok(TmTrace {
                configs,
                end: TraceEnd::Halted,
            });
        }
        if configs.len() == max_steps {
            return Ok(TmTrace {
                configs,
                end: TraceEnd::StepLimit,
            });
        }
        let (_, _, q2, c2, dir) = tm
            .step(&cur.state, &cur.tape[cur.head])
            .expect("validated table is total")
            .clone();
        let mut tape = cur.tape.clone();
        tape[cur.head] = c2;
        let head = match dir {
            Dir::L => {
                if cur.head == 0 {
                    return Ok(TmTrace {
                        configs,
                        end: TraceEnd::OutOfTape,
                    });
                }
                cur.head - 1
            }
            Dir::R => {
                if cur.head + 1 == cur.tape.len() {
                    return Ok(TmTrace {
                        configs,
                        end: TraceEnd::OutOfTape,
                    });
                }
                cur.head + 1
            }
        };
        configs.push(TmConfig {
            tape,
            head,
            state: q2,
        });
    }
}

/// Two-state unary incrementer: extends a block of `1`s by one cell, moving
/// right only.
pub fn incrementer_tm() -> TMSpec {
    let mut b = TmBuilder::new(&["1", "#"]);
    b.rule("go", "1", "go", "1", Dir::R);
    b.rule("go", "#", "done", "1", Dir::R);
    b.build("go", "done", "#").unwrap()
}

/// Right-moving machine that never halts.
pub fn right_mover_tm() -> TMSpec {
    let mut b = TmBuilder::new(&["#"]);
    b.rule("move", "#", "move", "#", Dir::R);
    b.build("move", "done", "#").unwrap()
}

/// Sweep machine: runs right to the first blank, then back to the `>` start
/// marker; runtime is twice the swept length.
pub fn sweep_tm() -> TMSpec {
    let mut b = TmBuilder::new(&[">", "x", "#"]);
    b.rule("fw", ">", "fw", ">", Dir::R);
    b.rule("fw", "x", "fw", "x", Dir::R);
    b.rule("fw", "#", "bw", "#", Dir::L);
    b.rule("bw", "x", "bw", "x", Dir::L);
    b.rule("bw", ">", "done", ">", Dir::R);
    b.build("fw", "done", "#").unwrap()
}

/// Unary-to-binary counter.  Input: a block of `0` marks then a `1`
/// separator; output: the count in binary after the separator, least
/// significant digit first.
pub fn counter_tm() -> TMSpec {
    let mut b = TmBuilder::new(&["0", "1", "X", "#"]);
    // scan: find the next unerased mark, or stop at the separator.
    b.rule("scan", "X", "scan", "X", Dir::R);
    b.rule("scan", "0", "carry", "X", Dir::R);
    b.rule("scan", "1", "done", "1", Dir::R);
    // carry: cross the remaining marks and the separator.
    b.rule("carry", "0", "carry", "0", Dir::R);
    b.rule("carry", "1", "inc", "1", Dir::R);
    // inc: binary increment, least significant digit first.
    b.rule("inc", "0", "ret", "1", Dir::L);
    b.rule("inc", "1", "inc", "0", Dir::R);
    b.rule("inc", "#", "ret", "1", Dir::L);
    // ret: walk back to the erased region and resume scanning.
    b.rule("ret", "0", "ret", "0", Dir::L);
    b.rule("ret", "1", "ret", "1", Dir::L);
    b.rule("ret", "X", "scan", "X", Dir::R);
    b.build("scan", "done", "#").unwrap()
}

/// Adds one unary square-root phase to the builder.  The source block of `s`
/// marks sits between two `A` separators; the result is appended after the
/// right separator, one mark per round, where round `k` consumes `2k-1`
/// source marks.  The smallest round count whose square reaches the source
/// size is exactly the rounded-up square root.  On exhaustion the marks are
/// rewritten as the next phase's source block.
fn add_sqrt_phase(b: &mut TmBuilder, p: &str, next_entry: &str) {
    let s = |name: &str| format!("{p}_{name}");
    // new: append this round's mark, then pay its single erase.
    b.rule(&s("new"), "r", &s("new"), "r", Dir::R);
    b.rule(&s("new"), "#", &s("take1"), "m", Dir::L);
    b.rule(&s("take1"), "m", &s("take1"), "m", Dir::L);
    b.rule(&s("take1"), "r", &s("take1"), "r", Dir::L);
    b.rule(&s("take1"), "A", &s("src1"), "A", Dir::L);
    b.rule(&s("src1"), ".", &s("src1"), ".", Dir::L);
    b.rule(&s("src1"), "s", &s("ret"), ".", Dir::R);
    // Exhaustion on the round's first erase: the round does not count.
    b.rule(&s("src1"), "A", &s("fmw"), "A", Dir::R);
    // ret: back through the source to the result block.
    b.rule(&s("ret"), ".", &s("ret"), ".", Dir::R);
    b.rule(&s("ret"), "A", &s("next"), "A", Dir::R);
    // next: process one older mark, paying two erases.
    b.rule(&s("next"), "m", &s("next"), "m", Dir::R);
    b.rule(&s("next"), "r", &s("take2"), "m", Dir::L);
    b.rule(&s("next"), "#", &s("reset"), "#", Dir::L);
    b.rule(&s("take2"), "m", &s("take2"), "m", Dir::L);
    b.rule(&s("take2"), "r", &s("take2"), "r", Dir::L);
    b.rule(&s("take2"), "A", &s("src2a"), "A", Dir::L);
    b.rule(&s("src2a"), ".", &s("src2a"), ".", Dir::L);
    b.rule(&s("src2a"), "s", &s("src2b"), ".", Dir::L);
    b.rule(&s("src2a"), "A", &s("fw"), "A", Dir::R);
    b.rule(&s("src2b"), "s", &s("ret"), ".", Dir::R);
    b.rule(&s("src2b"), "A", &s("fw"), "A", Dir::R);
    // reset: re-arm the processed marks for the following round.
    b.rule(&s("reset"), "m", &s("reset"), "r", Dir::L);
    b.rule(&s("reset"), "A", &s("new"), "A", Dir::R);
    // fw: exhaustion mid-round; every mark counts.  Convert marks to the
    // next source block and terminate it.
    b.rule(&s("fw"), ".", &s("fw"), ".", Dir::R);
    b.rule(&s("fw"), "A", &s("fw"), "A", Dir::R);
    b.rule(&s("fw"), "m", &s("fw"), "s", Dir::R);
    b.rule(&s("fw"), "r", &s("fw"), "s", Dir::R);
    b.rule(&s("fw"), "#", next_entry, "A", Dir::R);
    // fmw: exhaustion on the first erase; all but the newest mark count.
    b.rule(&s("fmw"), ".", &s("fmw"), ".", Dir::R);
    b.rule(&s("fmw"), "A", &s("fmw"), "A", Dir::R);
    b.rule(&s("fmw"), "m", &s("fmw"), "s", Dir::R);
    b.rule(&s("fmw"), "r", &s("fmw"), "s", Dir::R);
    b.rule(&s("fmw"), "#", &s("fmb"), "#", Dir::L);
    b.rule(&s("fmb"), "s", next_entry, "A", Dir::R);
}

/// Machine computing the rounded-up eighth root of a binary input via three
/// iterated unary square roots.  Tape layout: `>` marker, the input least
/// significant digit first, then an `A` separator and blank working space
/// (at least the input's value plus a few cells).  The result is left in
/// binary, least significant digit first, after the last `A` separator.
pub fn root_tm() -> TMSpec {
    let mut b = TmBuilder::new(&[">", "0", "1", "A", "s", ".", "r", "m", "X", "#"]);
    // Phase: binary to unary by repeated decrement.
    b.rule("az", ">", "az", ">", Dir::R);
    b.rule("az", "0", "az", "0", Dir::R);
    b.rule("az", "1", "al", "1", Dir::L);
    b.rule("az", "A", "af", "A", Dir::R);
    b.rule("al", "0", "al", "0", Dir::L);
    b.rule("al", "1", "al", "1", Dir::L);
    b.rule("al", ">", "ad", ">", Dir::R);
    b.rule("ad", "0", "ad", "1", Dir::R);
    b.rule("ad", "1", "ap", "0", Dir::R);
    b.walk("ap", &["0", "1", "A", "s"], Dir::R);
    b.rule("ap", "#", "ar", "s", Dir::L);
    b.walk("ar", &["0", "1", "A", "s"], Dir::L);
    b.rule("ar", ">", "az", ">", Dir::R);
    // Terminate the unary block, then take three square roots.
    b.rule("af", "s", "af", "s", Dir::R);
    b.rule("af", "#", "b1_new", "A", Dir::R);
    add_sqrt_phase(&mut b, "b1", "b2_new");
    add_sqrt_phase(&mut b, "b2", "b3_new");
    add_sqrt_phase(&mut b, "b3", "cr");
    // Phase: count the final unary block into binary (same scheme as the
    // unary-to-binary counter, with distinct symbols).
    b.rule("cr", "#", "cr", "#", Dir::L);
    b.rule("cr", "A", "cr2", "A", Dir::L);
    b.rule("cr2", "s", "cr2", "s", Dir::L);
    b.rule("cr2", "A", "cscan", "A", Dir::R);
    b.rule("cscan", "X", "cscan", "X", Dir::R);
    b.rule("cscan", "s", "ccarry", "X", Dir::R);
    b.rule("cscan", "A", "done", "A", Dir::R);
    b.rule("ccarry", "s", "ccarry", "s", Dir::R);
    b.rule("ccarry", "A", "cinc", "A", Dir::R);
    b.rule("cinc", "0", "cret", "1", Dir::L);
    b.rule("cinc", "1", "cinc", "0", Dir::R);
    b.rule("cinc", "#", "cret", "1", Dir::L);
    b.walk("cret", &["0", "1", "A", "s"], Dir::L);
    b.rule("cret", "X", "cscan", "X", Dir::R);
    b.build("az", "done", "#").unwrap()
}

/// Builds the input tape for [`root_tm`]: marker, binary digits (least
/// significant first), separator, and enough blank working space.
pub fn root_tm_input(x: u64) -> Vec<String> {
    let mut tape = vec![">".to_string()];
    let mut v = x;
    loop {
        tape.push(if v % 2 == 1 { "1" } else { "0" }.to_string());
        v /= 2;
        if v == 0 {
            break;
        }
    }
    tape.push("A".to_string());
    let room = x as usize + 2 * (crate::log2::integer_root_ceil(x as u128, 2) as usize) + 16;
    tape.extend(std::iter::repeat("#".to_string()).take(room));
    tape
}

/// Reads the binary block after the last `A` separator, least significant
/// digit first.
pub fn read_binary_output(tape: &[String]) -> u64 {
    let last_a = tape.iter().rposition(|c| c == "A");
    let mut value = 0u64;
    if let Some(p) = last_a {
        for (k, c) in tape[p + 1..].iter().enumerate() {
            match c.as_str() {
                "1" => value |= 1 << k,
                "0" => {}
                _ => break,
            }
        }
    }
    value
}

/// Sequential composition: `b` continues from `a`'s final configuration.
/// States are namespaced; `a`'s accepting state is identified with `b`'s
/// initial state.
pub fn dovetail_tms(a: &TMSpec, b: &TMSpec) -> Result<TMSpec> {
    a.validate()?;
    b.validate()?;
    let mut alphabet = a.alphabet.clone();
    for c in &b.alphabet {
        if !alphabet.contains(c) {
            alphabet.push(c.clone());
        }
    }
    if a.blank != b.blank {
        return Err(Error::invalid("composed machines must share the blank"));
    }
    let ra = |q: &str| format!("a.{q}");
    let rb = |q: &str| {
        format!("b.{q}")
    };
    let map_a = |q: &str| {
        if q == a.qa {
            rb(&b.q0)
        } else {
            ra(q)
        }
    };
    let mut states: Vec<String> = a
        .states
        .iter()
        .filter(|q| *q != &a.qa)
        .map(|q| ra(q))
        .collect();
    states.extend(b.states.iter().map(|q| rb(q)));
    let mut delta: Vec<DeltaRule> = a
        .delta
        .iter()
        .map(|(q, c, q2, c2, d)| (map_a(q), c.clone(), map_a(q2), c2.clone(), *d))
        .collect();
    delta.extend(
        b.delta
            .iter()
            .map(|(q, c, q2, c2, d)| (rb(q), c.clone(), rb(q2), c2.clone(), *d)),
    );
    // Symbols new to either machine route to a shared sink to keep totality.
    let covered: BTreeSet<(String, String)> = delta
        .iter()
        .map(|(q, c, _, _, _)| (q.clone(), c.clone()))
        .collect();
    let qa = rb(&b.qa);
    let mut need_sink = false;
    let mut extra = Vec::new();
    for q in &states {
        if *q == qa {
            continue;
        }
        for c in &alphabet {
            if !covered.contains(&(q.clone(), c.clone())) {
                need_sink = true;
                extra.push((q.clone(), c.clone(), "sink".to_string(), c.clone(), Dir::R));
            }
        }
    }
    if need_sink {
        states.push("sink".to_string());
        for c in &alphabet {
            delta.push(("sink".into(), c.clone(), "sink".into(), c.clone(), Dir::R));
        }
        delta.extend(extra);
    }
    let tm = TMSpec {
        alphabet,
        states,
        delta,
        q0: ra(&a.q0),
        qa,
        blank: a.blank.clone(),
    };
    tm.validate()?;
    Ok(tm)
}

// ---------------------------------------------------------------------------
// Machine-to-tiles encoding.

const NO_HEAD: &str = ".";
const INIT_FLOOR: &str = "^";

fn head_v(c: &str, q: &str) -> String {
    format!("{c}|{q}")
}

fn head_h(q: &str, dir: Dir) -> String {
    match dir {
        Dir::R => format!("{q}|>"),
        Dir::L => format!("{q}|<"),
    }
}

/// The tile encoding of a machine together with lookup tables from machine
/// data to tile ids.
#[derive(Debug, Clone)]
pub struct TmTiles {
    pub tileset: TileSet,
    /// Plain cell tiles, by symbol.
    pub plain: BTreeMap<String, TileId>,
    /// Head-departure tiles, by (state, symbol read).
    pub depart: BTreeMap<(String, String), TileId>,
    /// Head-arrival tiles, by (cell symbol, incoming state, direction moved).
    pub arrive: BTreeMap<(String, String, Dir), TileId>,
    /// Bottom-row tiles pinning the initial configuration, by symbol.
    pub init_plain: BTreeMap<String, TileId>,
    /// Bottom-row tile pinning the initial head, by symbol under the head.
    pub init_head: BTreeMap<String, TileId>,
}

fn tile4(id: TileId, n: String, e: String, s: String, w: String) -> Tile {
    Tile {
        id,
        edges: TileEdges {
            n: vec![n],
            e: vec![e],
            s: vec![s],
            w: vec![w],
        },
        decorations: BTreeSet::new(),
    }
}

/// Encodes a machine as tiles: rows are time steps, vertical edges carry cell
/// contents (with the head where present), horizontal edges carry the moving
/// head.  Zero-score tilings above a pinned initial row reproduce the
/// machine's evolution row by row; a head halting below the top row leaves an
/// unmatchable edge, so such grids always score at least 1.
pub fn tm_tileset(tm: &TMSpec) -> Result<TmTiles> {
    tm.validate()?;
    let mut tiles = Vec::new();
    let mut bonuses = Vec::new();
    let mut next_id: TileId = 0;
    let mut plain = BTreeMap::new();
    let mut depart = BTreeMap::new();
    let mut arrive = BTreeMap::new();
    let mut init_plain = BTreeMap::new();
    let mut init_head = BTreeMap::new();
    for c in &tm.alphabet {
        tiles.push(tile4(
            next_id,
            c.clone(),
            NO_HEAD.into(),
            c.clone(),
            NO_HEAD.into(),
        ));
        plain.insert(c.clone(), next_id);
        next_id += 1;
    }
    for (q, c, q2, c2, dir) in &tm.delta {
        let (e, w) = match dir {
            Dir::R => (head_h(q2, Dir::R), NO_HEAD.to_string()),
            Dir::L => (NO_HEAD.to_string(), head_h(q2, Dir::L)),
        };
        tiles.push(tile4(next_id, c2.clone(), e, head_v(c, q), w));
        depart.insert((q.clone(), c.clone()), next_id);
        next_id += 1;
    }
    // Arrival tiles for every (cell symbol, state, direction) that the table
    // can produce.
    let mut incoming: BTreeSet<(String, Dir)> = BTreeSet::new();
    for (_, _, q2, _, dir) in &tm.delta {
        incoming.insert((q2.clone(), *dir));
    }
    for (q2, dir) in &incoming {
        for c in &tm.alphabet {
            let (e, w) = match dir {
                Dir::R => (NO_HEAD.to_string(), head_h(q2, Dir::R)),
                Dir::L => (head_h(q2, Dir::L), NO_HEAD.to_string()),
            };
            tiles.push(tile4(next_id, head_v(c, q2), e, c.clone(), w));
            arrive.insert((c.clone(), q2.clone(), *dir), next_id);
            // A right-moving head entering through the left lattice boundary
            // would be created from nothing; make that placement cost 1.
            if *dir == Dir::R {
                bonuses.push(SiteBonus {
                    tile: next_id,
                    context: BonusContext::Unconditional,
                    bonus: 1,
                });
                bonuses.push(SiteBonus {
                    tile: next_id,
                    context: BonusContext::RightOfAnother,
                    bonus: -1,
                });
            }
            next_id += 1;
        }
    }
    // Initial-row tiles: south edge is a floor color used nowhere else.
    for c in &tm.alphabet {
        tiles.push(tile4(
            next_id,
            c.clone(),
            NO_HEAD.into(),
            INIT_FLOOR.into(),
            NO_HEAD.into(),
        ));
        init_plain.insert(c.clone(), next_id);
        next_id += 1;
    }
    for c in &tm.alphabet {
        tiles.push(tile4(
            next_id,
            head_v(c, &tm.q0),
            NO_HEAD.into(),
            INIT_FLOOR.into(),
            NO_HEAD.into(),
        ));
        init_head.insert(c.clone(), next_id);
        next_id += 1;
    }
    let mut tileset = TileSet::single_layer(tiles);
    tileset.bonuses = bonuses;
    Ok(TmTiles {
        tileset,
        plain,
        depart,
        arrive,
        init_plain,
        init_head,
    })
}

impl TmTiles {
    /// Bottom-row tile ids pinning tape contents and the head at cell 0 state.
    pub fn initial_row(&self, tape: &[String], head: usize) -> Result<Vec<TileId>> {
        if head >= tape.len() {
            return Err(Error::invalid("head outside the tape"));
        }
        let mut row = Vec::with_capacity(tape.len());
        for (i, c) in tape.iter().enumerate() {
            let table = if i == head {
                &self.init_head
            } else {
                &self.init_plain
            };
            let id = table
                .get(c)
                .ok_or_else(|| Error::invalid(format!("symbol {c} unknown")))?;
            row.push(*id);
        }
        Ok(row)
    }

    /// Decodes row `v` of a tiling into the configuration its north edges
    /// carry: the tape and, when present, the head position and state.
    pub fn decode_row(&self, t: &Tiling, v: usize) -> Result<(Vec<String>, Option<(usize, String)>)> {
        let mut tape = Vec::with_capacity(t.width);
        let mut head = None;
        for u in 0..t.width {
            let id = t.at(u, v);
            let tile = self.tileset.tile(id)?;
            let n = &tile.edges.n[0];
            match n.split_once('|') {
                Some((c, q)) => {
                    tape.push(c.to_string());
                    head = Some((u, q.to_string()));
                }
                None => tape.push(n.clone()),
            }
        }
        Ok((tape, head))
    }
}
