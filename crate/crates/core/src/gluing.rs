//! Tree gluing of formal disks across a shared boundary.
//!
//! A glued disk is a tree of factors: lower-level factors meet upper-level
//! factors at chords of the shared boundary, a positive puncture of the lower
//! factor against a negative puncture of the upper one. The enumerator grows
//! such trees one edge at a time, always filling the open shared puncture with
//! the least (vertex, slot) label, so each labeled tree is produced by exactly
//! one sequence of choices. Partial disks that fail admissibility are pruned,
//! which is sound because admissibility of a glued disk forces admissibility
//! of every partial sub-disk when all factors carry a positive puncture.
//!
//! Strips `[c+ c-]` inside a repeatable source are never attached as explicit
//! vertices. Instead an open puncture at `c` may stay free, which is the same
//! glued word.
//!
//! Split gluing places a zero-width marker where the order of the k-factor
//! along the designated piece begins. An open puncture counts as "after" the
//! k-factor when the marker precedes it in the order of the current partial
//! disk, and "before" otherwise.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::boundary::{check_piece_agreement, same_chord, zero, Action, BoundaryData, Ends, Sym};
use crate::disk::{order_start, segments_ok, FormalDisk, OrderStart, Puncture, Sign};
use crate::error::{Error, Result};
use crate::vector::{Alpha, DiskVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Lower,
    Upper,
}

impl Level {
    fn other(self) -> Level {
        match self {
            Level::Lower => Level::Upper,
            Level::Upper => Level::Lower,
        }
    }

    /// Punctures of a factor on this level that sit on the shared boundary.
    fn shared_sign(self) -> Sign {
        match self {
            Level::Lower => Sign::Positive,
            Level::Upper => Sign::Negative,
        }
    }
}

/// A two-level stack: `lower.pos` and `upper.neg` are the shared boundary.
#[derive(Clone, Debug)]
pub struct Joint {
    pub lower: Ends,
    pub upper: Ends,
    pub joined: Ends,
}

impl Joint {
    pub fn new(lower: &Ends, upper: &Ends) -> Result<Self> {
        if *lower.pos != *upper.neg {
            return Err(Error::BoundaryMismatch(
                "the lower positive end differs from the upper negative end".into(),
            ));
        }
        check_piece_agreement(&upper.pos, &lower.neg)?;
        let joined = Ends::new(upper.pos.clone(), lower.neg.clone())?;
        Ok(Joint { lower: lower.clone(), upper: upper.clone(), joined })
    }

    pub fn shared(&self) -> &BoundaryData {
        &self.lower.pos
    }
}

/// One enumerated factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingTree {
    /// Factor disks with their level and the index of the source they came from.
    pub vertices: Vec<(Level, usize, FormalDisk)>,
    /// (parent vertex, parent puncture index, child vertex, child puncture index).
    pub edges: Vec<(usize, usize, usize, usize)>,
    /// Chords of the shared boundary left free, i.e. capped by implicit strips.
    pub strip_caps: usize,
}

impl GluingTree {
    pub fn root(&self) -> usize {
        0
    }
}

// ---------------------------------------------------------------------------
// chord table

#[derive(Clone, Debug)]
struct Row {
    id: Sym,
    start: u32,
    end: u32,
    action: Action,
}

impl Row {
    fn mixed(&self) -> bool {
        self.start != self.end
    }
}

struct Table {
    rows: Vec<Row>,
    shared: HashMap<Sym, u32>,
    top: HashMap<Sym, u32>,
    bottom: HashMap<Sym, u32>,
    piece_ix: HashMap<Sym, u32>,
}

impl Table {
    fn new(joint: &Joint) -> Self {
        let mut piece_ix: HashMap<Sym, u32> = HashMap::new();
        let mut comp_piece: HashMap<Sym, u32> = HashMap::new();
        for b in [&joint.upper.pos, joint.shared(), &joint.lower.neg] {
            for c in b.components() {
                let n = piece_ix.len() as u32;
                let p = *piece_ix.entry(c.piece.clone()).or_insert(n);
                comp_piece.insert(c.id.clone(), p);
            }
        }
        let mut rows = Vec::new();
        let mut load = |b: &BoundaryData| -> HashMap<Sym, u32> {
            b.chords()
                .iter()
                .map(|c| {
                    rows.push(Row {
                        id: c.id.clone(),
                        start: comp_piece[&c.start],
                        end: comp_piece[&c.end],
                        action: c.action,
                    });
                    (c.id.clone(), rows.len() as u32 - 1)
                })
                .collect()
        };
        let shared = load(joint.shared());
        let top = load(&joint.upper.pos);
        let bottom = load(&joint.lower.neg);
        Table { rows, shared, top, bottom, piece_ix }
    }

    fn row_of(&self, level: Level, p: &Puncture) -> u32 {
        let map = match (level, p.sign) {
            (Level::Lower, Sign::Positive) | (Level::Upper, Sign::Negative) => &self.shared,
            (Level::Upper, Sign::Positive) => &self.top,
            (Level::Lower, Sign::Negative) => &self.bottom,
        };
        map[&p.chord]
    }
}

// ---------------------------------------------------------------------------
// sources

#[derive(Clone, Debug)]
struct Prep {
    disk: FormalDisk,
    toks: Vec<(u32, Sign)>,
    aplus_outer: Action,
}

struct Src {
    level: Level,
    preps: Vec<Prep>,
    /// shared row -> (disk, slot) of punctures on the shared boundary
    index: HashMap<u32, Vec<(u32, u16)>>,
    group: Option<usize>,
    strips: HashSet<u32>,
}

/// Input to a gluing problem.
#[derive(Clone, Debug)]
pub(crate) struct SrcSpec<'a> {
    pub v: &'a DiskVector,
    pub level: Level,
    /// Factors from grouped sources are counted against `need`.
    pub group: Option<usize>,
}

impl<'a> SrcSpec<'a> {
    pub fn many(v: &'a DiskVector, level: Level) -> Self {
        SrcSpec { v, level, group: None }
    }

    pub fn grouped(v: &'a DiskVector, level: Level, group: usize) -> Self {
        SrcSpec { v, level, group: Some(group) }
    }
}

/// Which sources may fill an open puncture whose child lives on a level.
#[derive(Clone, Debug)]
pub(crate) enum Attach {
    Plain(Vec<usize>),
    Split { after: Vec<usize>, before: Vec<usize> },
}

#[derive(Clone, Debug)]
pub(crate) enum Roots {
    /// Root at every factor of the given group; the group must need exactly one.
    Anchor(usize),
    /// Root anywhere, keep only the canonical rooting.
    Free,
    /// Root at a k-factor glued directly to a center factor.
    Split { k: usize, center: usize, piece: Sym },
}

#[derive(Clone, Debug)]
pub(crate) struct Problem<'a> {
    pub srcs: Vec<SrcSpec<'a>>,
    pub need: Vec<u32>,
    pub lower_children: Attach,
    pub upper_children: Attach,
    pub roots: Roots,
    /// Refuse non-strip factors of non-positive action in repeatable sources.
    pub guard: bool,
}

#[derive(Clone, Copy, Debug)]
struct Tok {
    row: u32,
    sign: Sign,
    open: bool,
    marker: bool,
    vert: u16,
    slot: u16,
}

#[derive(Clone, Copy, Debug)]
struct Vert {
    src: u32,
    disk: u32,
    /// (parent vertex, parent slot, own slot)
    parent: Option<(u16, u16, u16)>,
}

#[derive(Clone, Debug)]
struct State {
    toks: Vec<Tok>,
    verts: Vec<Vert>,
    aplus: Action,
    counts: Vec<u32>,
    caps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    After,
    Before,
}

struct Engine {
    table: Table,
    srcs: Vec<Src>,
    need: Vec<u32>,
    lower_children: Attach,
    upper_children: Attach,
    alpha: Alpha,
    hat: Option<u32>,
}

fn is_open(level: Level, sign: Sign) -> bool {
    level.shared_sign() == sign
}

impl Engine {
    fn new(joint: &Joint, problem: &Problem<'_>, alpha: Alpha) -> Result<Self> {
        let table = Table::new(joint);
        let mut srcs = Vec::new();
        for spec in &problem.srcs {
            let cob = match spec.level {
                Level::Lower => &joint.lower,
                Level::Upper => &joint.upper,
            };
            if spec.v.ends() != cob {
                return Err(Error::BoundaryMismatch(format!(
                    "a {:?}-level vector lives over the wrong ends",
                    spec.level
                )));
            }
            let mut src = Src {
                level: spec.level,
                preps: Vec::new(),
                index: HashMap::new(),
                group: spec.group,
                strips: HashSet::new(),
            };
            for d in spec.v.iter() {
                if spec.group.is_none() && d.is_strip(cob) {
                    src.strips.insert(table.shared[&d.word()[0].chord]);
                    continue;
                }
                if problem.guard && spec.group.is_none() && d.action(cob) <= zero() {
                    return Err(Error::ZeroActionCycle(d.to_string()));
                }
                let toks: Vec<(u32, Sign)> =
                    d.word().iter().map(|p| (table.row_of(spec.level, p), p.sign)).collect();
                let aplus_outer = match spec.level {
                    Level::Upper => d.action_plus(cob),
                    Level::Lower => zero(),
                };
                let di = src.preps.len() as u32;
                for (slot, &(row, sign)) in toks.iter().enumerate() {
                    if is_open(spec.level, sign) {
                        src.index.entry(row).or_default().push((di, slot as u16));
                    }
                }
                src.preps.push(Prep { disk: d.clone(), toks, aplus_outer });
            }
            srcs.push(src);
        }
        let hat = match &problem.roots {
            Roots::Split { piece, .. } => Some(
                *table.piece_ix.get(piece).ok_or_else(|| Error::UnknownPiece(piece.to_string()))?,
            ),
            _ => None,
        };
        Ok(Engine {
            table,
            srcs,
            need: problem.need.clone(),
            lower_children: problem.lower_children.clone(),
            upper_children: problem.upper_children.clone(),
            alpha,
            hat,
        })
    }

    fn out_piece(&self, t: &Tok) -> u32 {
        let r = &self.table.rows[t.row as usize];
        match t.sign {
            Sign::Positive => r.end,
            Sign::Negative => r.start,
        }
    }

    fn admissible(&self, toks: &[Tok]) -> bool {
        let real: Vec<&Tok> = toks.iter().filter(|t| !t.marker).collect();
        let pieces: Vec<u32> = real.iter().map(|t| self.out_piece(t)).collect();
        let bad: Vec<bool> = real
            .iter()
            .map(|t| t.sign == Sign::Positive || self.table.rows[t.row as usize].mixed())
            .collect();
        segments_ok(&pieces, &bad)
    }

    fn vert_level(&self, v: &Vert) -> Level {
        self.srcs[v.src as usize].level
    }

    fn root_state(&self, src: usize, disk: usize) -> Option<State> {
        let s = &self.srcs[src];
        let p = &s.preps[disk];
        let toks = p
            .toks
            .iter()
            .enumerate()
            .map(|(i, &(row, sign))| Tok {
                row,
                sign,
                open: is_open(s.level, sign),
                marker: false,
                vert: 0,
                slot: i as u16,
            })
            .collect();
        let mut counts = vec![0; self.need.len()];
        if let Some(g) = s.group {
            counts[g] += 1;
            if counts[g] > self.need[g] {
                return None;
            }
        }
        let st = State {
            toks,
            verts: vec![Vert { src: src as u32, disk: disk as u32, parent: None }],
            aplus: p.aplus_outer,
            counts,
            caps: 0,
        };
        (self.alpha.admits(&st.aplus) && self.admissible(&st.toks)).then_some(st)
    }

    /// Attach factor (src, disk) at slot `cslot` to the open token at `pos`.
    fn attach(&self, st: &State, pos: usize, src: usize, disk: usize, cslot: usize) -> Option<State> {
        let s = &self.srcs[src];
        let p = &s.preps[disk];
        let mut counts = st.counts.clone();
        if let Some(g) = s.group {
            counts[g] += 1;
            if counts[g] > self.need[g] {
                return None;
            }
        }
        let aplus = st.aplus + p.aplus_outer;
        if !self.alpha.admits(&aplus) {
            return None;
        }
        let parent = st.toks[pos];
        let vid = st.verts.len() as u16;
        let m = p.toks.len();
        let mut toks = Vec::with_capacity(st.toks.len() + m - 2);
        toks.extend_from_slice(&st.toks[..pos]);
        for k in 1..m {
            let i = (cslot + k) % m;
            let (row, sign) = p.toks[i];
            toks.push(Tok { row, sign, open: is_open(s.level, sign), marker: false, vert: vid, slot: i as u16 });
        }
        toks.extend_from_slice(&st.toks[pos + 1..]);
        if !self.admissible(&toks) {
            return None;
        }
        let mut verts = st.verts.clone();
        verts.push(Vert {
            src: src as u32,
            disk: disk as u32,
            parent: Some((parent.vert, parent.slot, cslot as u16)),
        });
        Some(State { toks, verts, aplus, counts, caps: st.caps })
    }

    /// Leave the open token at `pos` free (an implicit strip caps it).
    fn cap(&self, st: &State, pos: usize) -> Option<State> {
        let t = st.toks[pos];
        let mut aplus = st.aplus;
        if t.sign == Sign::Positive {
            aplus += self.table.rows[t.row as usize].action;
            if !self.alpha.admits(&aplus) {
                return None;
            }
        }
        let mut next = st.clone();
        next.toks[pos].open = false;
        next.aplus = aplus;
        next.caps += 1;
        Some(next)
    }

    fn side(&self, toks: &[Tok], pos: usize) -> Result<Side> {
        let hat = self.hat.expect("split rules need a piece");
        let real: Vec<usize> = (0..toks.len()).filter(|&i| !toks[i].marker).collect();
        let on: Vec<bool> = real.iter().map(|&i| self.out_piece(&toks[i]) == hat).collect();
        let mixed: Vec<bool> = real.iter().map(|&i| self.table.rows[toks[i].row as usize].mixed()).collect();
        let n = toks.len();
        let start = match order_start(&on, &mixed, real.iter().map(|&i| toks[i].sign == Sign::Positive)) {
            OrderStart::At(s) => {
                if mixed.iter().any(|&x| x) {
                    let mut at = real[s];
                    while toks[(at + n - 1) % n].marker {
                        at = (at + n - 1) % n;
                    }
                    at
                } else {
                    // one past the positive puncture
                    let positive = real[(s + real.len() - 1) % real.len()];
                    (positive + 1) % n
                }
            }
            _ => return Err(Error::GlueMismatch("partial disk has no order along the piece".into())),
        };
        let mut i = start;
        loop {
            if i == pos {
                return Ok(Side::Before);
            }
            if toks[i].marker {
                return Ok(Side::After);
            }
            i = (i + 1) % n;
        }
    }

    fn run(&self, roots: &Roots, sink: &mut dyn FnMut(FormalDisk, &State)) -> Result<()> {
        match roots {
            Roots::Anchor(g) => {
                for (si, s) in self.srcs.iter().enumerate() {
                    if s.group != Some(*g) {
                        continue;
                    }
                    for di in 0..s.preps.len() {
                        if let Some(st) = self.root_state(si, di) {
                            self.grow(st, sink)?;
                        }
                    }
                }
            }
            Roots::Free => {
                for si in 0..self.srcs.len() {
                    for di in 0..self.srcs[si].preps.len() {
                        if let Some(st) = self.root_state(si, di) {
                            self.grow(st, &mut |d, st: &State| {
                                if self.canonical_root(st) {
                                    sink(d, st)
                                }
                            })?;
                        }
                    }
                }
            }
            Roots::Split { k, center, .. } => self.split_roots(*k, *center, sink)?,
        }
        Ok(())
    }

    fn split_roots(&self, k: usize, center: usize, sink: &mut dyn FnMut(FormalDisk, &State)) -> Result<()> {
        let hat = self.hat.expect("split roots carry a piece");
        let ks = &self.srcs[k];
        for kd in 0..ks.preps.len() {
            let Some(mut st) = self.root_state(k, kd) else { continue };
            // marker at the start of the k-factor's own order along the piece
            let on: Vec<bool> = st.toks.iter().map(|t| self.out_piece(t) == hat).collect();
            let mixed: Vec<bool> = st.toks.iter().map(|t| self.table.rows[t.row as usize].mixed()).collect();
            let at = match order_start(&on, &mixed, st.toks.iter().map(|t| t.sign == Sign::Positive)) {
                OrderStart::At(s) => s,
                OrderStart::NoArc => {
                    return Err(Error::NoArcOnPiece {
                        disk: ks.preps[kd].disk.to_string(),
                        piece: self.piece_name(hat),
                    })
                }
                OrderStart::ManyRuns => return Err(Error::TooManyMixed(ks.preps[kd].disk.to_string())),
            };
            st.toks.insert(at, Tok { row: 0, sign: Sign::Positive, open: false, marker: true, vert: 0, slot: u16::MAX });
            let open: Vec<usize> = (0..st.toks.len()).filter(|&i| st.toks[i].open).collect();
            for pos in open {
                let row = st.toks[pos].row;
                let Some(cands) = self.srcs[center].index.get(&row) else { continue };
                for &(cd, cslot) in cands {
                    if let Some(next) = self.attach(&st, pos, center, cd as usize, cslot as usize) {
                        self.grow(next, sink)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn piece_name(&self, ix: u32) -> String {
        self.table.piece_ix.iter().find(|(_, &v)| v == ix).map(|(k, _)| k.to_string()).unwrap_or_default()
    }

    fn grow(&self, st: State, sink: &mut dyn FnMut(FormalDisk, &State)) -> Result<()> {
        let next = st
            .toks
            .iter()
            .enumerate()
            .filter(|(_, t)| t.open)
            .min_by_key(|(_, t)| (t.vert, t.slot))
            .map(|(i, _)| i);
        let Some(pos) = next else {
            if st.counts == self.need {
                let word: Vec<Puncture> = st
                    .toks
                    .iter()
                    .filter(|t| !t.marker)
                    .map(|t| Puncture { chord: self.table.rows[t.row as usize].id.clone(), sign: t.sign })
                    .collect();
                if word.iter().any(|p| p.sign == Sign::Positive) {
                    sink(FormalDisk::from_consistent(word), &st);
                }
            }
            return Ok(());
        };
        let tok = st.toks[pos];
        let child_level = self.vert_level(&st.verts[tok.vert as usize]).other();
        let rule = match child_level {
            Level::Lower => &self.lower_children,
            Level::Upper => &self.upper_children,
        };
        let sources: &[usize] = match rule {
            Attach::Plain(s) => s,
            Attach::Split { after, before } => match self.side(&st.toks, pos)? {
                Side::After => after,
                Side::Before => before,
            },
        };
        if sources.iter().any(|&s| self.srcs[s].strips.contains(&tok.row)) {
            if let Some(next) = self.cap(&st, pos) {
                self.grow(next, sink)?;
            }
        }
        for &si in sources {
            let Some(cands) = self.srcs[si].index.get(&tok.row) else { continue };
            for &(di, cslot) in cands {
                if let Some(next) = self.attach(&st, pos, si, di as usize, cslot as usize) {
                    self.grow(next, sink)?;
                }
            }
        }
        Ok(())
    }

    /// Whether vertex 0 has the least rooted encoding; index-labeled trees
    /// have no automorphisms, so exactly one rooting passes.
    fn canonical_root(&self, st: &State) -> bool {
        let adj = adjacency(&st.verts);
        let mine = self.encode(st, &adj, 0);
        (1..st.verts.len()).all(|r| {
            let other = self.encode(st, &adj, r);
            debug_assert!(other != mine, "automorphism in an index-labeled tree");
            mine < other
        })
    }

    fn encode(&self, st: &State, adj: &[BTreeMap<u16, (usize, u16)>], root: usize) -> Vec<u32> {
        let mut out = Vec::new();
        self.encode_at(st, adj, root, usize::MAX, u32::MAX, &mut out);
        out
    }

    fn encode_at(
        &self,
        st: &State,
        adj: &[BTreeMap<u16, (usize, u16)>],
        v: usize,
        from: usize,
        entry: u32,
        out: &mut Vec<u32>,
    ) {
        let vert = &st.verts[v];
        out.extend([u32::MAX - 1, vert.src, vert.disk, entry]);
        for (&slot, &(nbr, nslot)) in &adj[v] {
            if nbr != from {
                out.push(slot as u32);
                self.encode_at(st, adj, nbr, v, nslot as u32, out);
            }
        }
        out.push(u32::MAX - 2);
    }

    fn tree(&self, st: &State) -> GluingTree {
        let vertices = st
            .verts
            .iter()
            .map(|v| {
                let s = &self.srcs[v.src as usize];
                (s.level, v.src as usize, s.preps[v.disk as usize].disk.clone())
            })
            .collect();
        let edges = st
            .verts
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.parent.map(|(p, ps, cs)| (p as usize, ps as usize, i, cs as usize)))
            .collect();
        GluingTree { vertices, edges, strip_caps: st.caps }
    }
}

/// slot -> (neighbor, neighbor's slot)
fn adjacency(verts: &[Vert]) -> Vec<BTreeMap<u16, (usize, u16)>> {
    let mut adj = vec![BTreeMap::new(); verts.len()];
    for (i, v) in verts.iter().enumerate() {
        if let Some((p, ps, cs)) = v.parent {
            adj[p as usize].insert(ps, (i, cs));
            adj[i].insert(cs, (p as usize, ps));
        }
    }
    adj
}

impl<'a> Problem<'a> {
    fn out_alpha(&self, alpha: Alpha) -> Alpha {
        self.srcs.iter().map(|s| s.v.alpha()).fold(alpha, Alpha::min)
    }

    /// Sum of all glued disks, mod 2.
    pub fn collect(&self, joint: &Joint, alpha: Alpha) -> Result<DiskVector> {
        let alpha = self.out_alpha(alpha);
        let mut parity: HashMap<FormalDisk, bool> = HashMap::new();
        self.visit(joint, alpha, &mut |d, _| {
            *parity.entry(d).or_insert(false) ^= true;
        })?;
        let mut out = DiskVector::zero(&joint.joined, alpha);
        for (d, odd) in parity {
            if odd {
                out.toggle_unchecked(d);
            }
        }
        Ok(out)
    }

    /// Calls `sink` on every factorization.
    pub fn visit(
        &self,
        joint: &Joint,
        alpha: Alpha,
        sink: &mut dyn FnMut(FormalDisk, GluingTree),
    ) -> Result<()> {
        let engine = Engine::new(joint, self, alpha)?;
        if matches!(self.roots, Roots::Free) && self.need.iter().all(|&n| n == 0) {
            // trees made of a lower and an upper strip over the same chord
            let lower: HashSet<u32> = engine
                .srcs
                .iter()
                .filter(|s| s.level == Level::Lower)
                .flat_map(|s| s.strips.iter().copied())
                .collect();
            let mut both: Vec<u32> = engine
                .srcs
                .iter()
                .filter(|s| s.level == Level::Upper)
                .flat_map(|s| s.strips.iter().copied())
                .filter(|r| lower.contains(r))
                .collect();
            both.sort_unstable();
            both.dedup();
            for r in both {
                let row = &engine.table.rows[r as usize];
                if alpha.admits(&row.action) {
                    let d = FormalDisk::from_consistent(vec![
                        Puncture { chord: row.id.clone(), sign: Sign::Positive },
                        Puncture { chord: row.id.clone(), sign: Sign::Negative },
                    ]);
                    sink(d, GluingTree { vertices: vec![], edges: vec![], strip_caps: 1 });
                }
            }
        }
        engine.run(&self.roots, &mut |d, st| sink(d, engine.tree(st)))
    }
}

// ---------------------------------------------------------------------------
// public operations

/// Splices `lower` and `upper` at `lower[pos_idx] = c+` and `upper[neg_idx] = c-`.
pub fn glue_at(lower: &FormalDisk, pos_idx: usize, upper: &FormalDisk, neg_idx: usize) -> Result<FormalDisk> {
    let (l, u) = (lower.word(), upper.word());
    let lp = l.get(pos_idx).ok_or_else(|| Error::GlueMismatch(format!("no puncture {pos_idx} in [{lower}]")))?;
    let up = u.get(neg_idx).ok_or_else(|| Error::GlueMismatch(format!("no puncture {neg_idx} in [{upper}]")))?;
    if lp.sign != Sign::Positive || up.sign != Sign::Negative {
        return Err(Error::GlueMismatch(format!("sign mismatch: {lp} against {up}")));
    }
    if lp.chord != up.chord {
        return Err(Error::GlueMismatch(format!("chord mismatch: {lp} against {up}")));
    }
    let mut word = Vec::with_capacity(l.len() + u.len() - 2);
    for k in 1..l.len() {
        word.push(l[(pos_idx + k) % l.len()].clone());
    }
    for k in 1..u.len() {
        word.push(u[(neg_idx + k) % u.len()].clone());
    }
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(FormalDisk::from_consistent(word))
}

fn joint_of(lower: &DiskVector, upper: &DiskVector) -> Result<Joint> {
    Joint::new(lower.ends(), upper.ends())
}

/// `(v_lower | v_upper)`: every admissible glued disk with 𝒜⁺ ≤ alpha,
/// counted by factorizations mod 2.
pub fn gluing_pairing(v_lower: &DiskVector, v_upper: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    let joint = joint_of(v_lower, v_upper)?;
    pairing_problem(v_lower, v_upper).collect(&joint, alpha)
}

/// Every factorization counted by [`gluing_pairing`].
pub fn pairing_trees(
    v_lower: &DiskVector,
    v_upper: &DiskVector,
    alpha: Alpha,
    sink: &mut dyn FnMut(FormalDisk, GluingTree),
) -> Result<()> {
    let joint = joint_of(v_lower, v_upper)?;
    pairing_problem(v_lower, v_upper).visit(&joint, alpha, sink)
}

fn pairing_problem<'a>(v_lower: &'a DiskVector, v_upper: &'a DiskVector) -> Problem<'a> {
    Problem {
        srcs: vec![SrcSpec::many(v_lower, Level::Lower), SrcSpec::many(v_upper, Level::Upper)],
        need: vec![],
        lower_children: Attach::Plain(vec![0]),
        upper_children: Attach::Plain(vec![1]),
        roots: Roots::Free,
        guard: true,
    }
}

fn linearized<'a>(f_lower: &'a DiskVector, f_upper: &'a DiskVector, w: &'a DiskVector, w_level: Level) -> Problem<'a> {
    let (lower, upper) = match w_level {
        Level::Lower => (vec![0, 2], vec![1]),
        Level::Upper => (vec![0], vec![1, 2]),
    };
    Problem {
        srcs: vec![
            SrcSpec::many(f_lower, Level::Lower),
            SrcSpec::many(f_upper, Level::Upper),
            SrcSpec::grouped(w, w_level, 0),
        ],
        need: vec![1],
        lower_children: Attach::Plain(lower),
        upper_children: Attach::Plain(upper),
        roots: Roots::Anchor(0),
        guard: true,
    }
}

/// Trees with exactly one lower factor from `w`, the rest from the potentials.
pub fn linearize_lower(f_lower: &DiskVector, f_upper: &DiskVector, w: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    let joint = joint_of(f_lower, f_upper)?;
    linearized(f_lower, f_upper, w, Level::Lower).collect(&joint, alpha)
}

/// Trees with exactly one upper factor from `w`, the rest from the potentials.
pub fn linearize_upper(f_lower: &DiskVector, f_upper: &DiskVector, w: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    let joint = joint_of(f_lower, f_upper)?;
    linearized(f_lower, f_upper, w, Level::Upper).collect(&joint, alpha)
}

/// Arguments of a split gluing on the k-factor's level, each split into a
/// plain part and a marked part (at most one marked factor per tree).
#[derive(Clone, Debug)]
pub(crate) struct SplitArgs<'a> {
    pub k: &'a DiskVector,
    pub center: &'a DiskVector,
    pub after: (&'a DiskVector, Option<&'a DiskVector>),
    pub before: (&'a DiskVector, Option<&'a DiskVector>),
    pub side: &'a DiskVector,
    pub piece: &'a Sym,
    pub k_level: Level,
    /// Keep only trees with exactly this many marked factors.
    pub marked: u32,
}

pub(crate) fn split_general(joint: &Joint, a: &SplitArgs<'_>, alpha: Alpha) -> Result<DiskVector> {
    let kl = a.k_level;
    let mut srcs = vec![
        SrcSpec::grouped(a.k, kl, 0),
        SrcSpec::grouped(a.center, kl.other(), 1),
        SrcSpec::many(a.side, kl.other()),
        SrcSpec::many(a.after.0, kl),
        SrcSpec::many(a.before.0, kl),
    ];
    let mut after = vec![3];
    let mut before = vec![4];
    if let Some(t) = a.after.1 {
        srcs.push(SrcSpec::grouped(t, kl, 2));
        after.push(srcs.len() - 1);
    }
    if let Some(t) = a.before.1 {
        srcs.push(SrcSpec::grouped(t, kl, 2));
        before.push(srcs.len() - 1);
    }
    let split = Attach::Split { after, before };
    let plain = Attach::Plain(vec![2]);
    let (lower_children, upper_children) = match kl {
        Level::Lower => (split, plain),
        Level::Upper => (plain, split),
    };
    let problem = Problem {
        srcs,
        need: vec![1, 1, a.marked],
        lower_children,
        upper_children,
        roots: Roots::Split { k: 0, center: 1, piece: a.piece.clone() },
        guard: false,
    };
    problem.collect(joint, alpha)
}

fn check_piece(k: &DiskVector, piece: &str) -> Result<Sym> {
    for d in k.iter() {
        d.order_punctures(k.ends(), piece)?;
    }
    Ok(Sym::from(piece))
}

/// `{k → h}(v0, v1, v_up)` with `k` on the lower level.
pub fn split_glue_down(
    k: &DiskVector,
    h_upper: &DiskVector,
    v0: &DiskVector,
    v1: &DiskVector,
    v_up: &DiskVector,
    piece: &str,
    alpha: Alpha,
) -> Result<DiskVector> {
    let piece = check_piece(k, piece)?;
    let joint = Joint::new(k.ends(), h_upper.ends())?;
    let args = SplitArgs {
        k,
        center: h_upper,
        after: (v0, None),
        before: (v1, None),
        side: v_up,
        piece: &piece,
        k_level: Level::Lower,
        marked: 0,
    };
    split_general(&joint, &args, alpha)
}

/// `{h ← k}(v_low, v0, v1)` with `k` on the upper level.
pub fn split_glue_up(
    h_lower: &DiskVector,
    k: &DiskVector,
    v_low: &DiskVector,
    v0: &DiskVector,
    v1: &DiskVector,
    piece: &str,
    alpha: Alpha,
) -> Result<DiskVector> {
    let piece = check_piece(k, piece)?;
    let joint = Joint::new(h_lower.ends(), k.ends())?;
    let args = SplitArgs {
        k,
        center: h_lower,
        after: (v0, None),
        before: (v1, None),
        side: v_low,
        piece: &piece,
        k_level: Level::Upper,
        marked: 0,
    };
    split_general(&joint, &args, alpha)
}

/// The strip `[c+ c-]` for every chord of `b`: the potential of `b × R`.
pub fn strip_vector(b: &std::sync::Arc<BoundaryData>, alpha: Alpha) -> DiskVector {
    let ends = Ends::cylinder(b.clone());
    let mut v = DiskVector::zero(&ends, alpha);
    for c in b.chords() {
        debug_assert!(same_chord(b, b, &c.id));
        let d = FormalDisk::from_consistent(vec![
            Puncture { chord: c.id.clone(), sign: Sign::Positive },
            Puncture { chord: c.id.clone(), sign: Sign::Negative },
        ]);
        v.toggle_unchecked(d);
    }
    v
}
