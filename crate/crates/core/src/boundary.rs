//! Contact boundary data: Lagrangian components grouped into pieces, and
//! the Reeb chords between them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Interned identifier.
pub type Sym = Arc<str>;

/// Exact action values.
pub type Action = Ratio<i128>;

/// Parses an exact decimal (`"3"`, `"0.25"`) or fraction (`"7/3"`).
pub fn parse_action(text: &str) -> Result<Action> {
    let bad = || Error::BadAction(text.to_string());
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let den = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let value = Ratio::new(num, den);
    Ok(if neg { -value } else { value })
}

/// Formats an action exactly: a terminating decimal when one exists,
/// otherwise `p/q`.
pub fn format_action(a: &Action) -> String {
    let mut den = *a.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", a.numer(), a.denom());
    }
    let places = twos.max(fives);
    let scale = 10i128.pow(places);
    let scaled = (a * Ratio::from_integer(scale)).to_integer();
    let sign = if scaled < 0 { "-" } else { "" };
    let mag = scaled.unsigned_abs();
    if places == 0 {
        return format!("{sign}{mag}");
    }
    let unit = 10u128.pow(places);
    format!("{sign}{}.{:0width$}", mag / unit, mag % unit, width = places as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianComponent {
    pub id: Sym,
    pub piece: Sym,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebChord {
    pub id: Sym,
    pub start: Sym,
    pub end: Sym,
    pub action: Action,
    pub grading: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChordKind {
    Pure,
    Mixed,
}

/// Unchecked boundary description, as read from a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundarySpec {
    pub pieces: Vec<Sym>,
    pub components: Vec<LagrangianComponent>,
    pub chords: Vec<ReebChord>,
    /// Lower bound on chord actions; the least chord action when absent.
    pub min_action: Option<Action>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every structural problem with `spec`.
pub fn validate_boundary(spec: &BoundarySpec) -> ValidationReport {
    let mut out = Vec::new();
    let pieces: BTreeSet<&str> = spec.pieces.iter().map(|p| &**p).collect();
    if pieces.len() != spec.pieces.len() {
        out.push("duplicate piece id".to_string());
    }
    let mut comps = BTreeSet::new();
    for c in &spec.components {
        if !comps.insert(&*c.id) {
            out.push(format!("duplicate component id `{}`", c.id));
        }
        if !pieces.contains(&*c.piece) {
            out.push(format!("component `{}` lies on undeclared piece `{}`", c.id, c.piece));
        }
    }
    let mut chords = BTreeSet::new();
    for ch in &spec.chords {
        if !chords.insert(&*ch.id) {
            out.push(format!("duplicate chord id `{}`", ch.id));
        }
        for end in [&ch.start, &ch.end] {
            if !comps.contains(&**end) {
                out.push(format!("chord `{}`: dangling endpoint `{}`", ch.id, end));
            }
        }
        if !ch.action.is_positive() {
            out.push(format!("chord `{}`: action must be strictly positive", ch.id));
        }
    }
    if let Some(m) = spec.min_action {
        if !m.is_positive() {
            out.push("min_action must be strictly positive".to_string());
        }
        for ch in &spec.chords {
            if ch.action < m {
                out.push(format!(
                    "chord `{}`: action {} is below min_action {}",
                    ch.id,
                    format_action(&ch.action),
                    format_action(&m)
                ));
            }
        }
    }
    ValidationReport { violations: out }
}

/// A validated contact boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryData {
    pieces: Vec<Sym>,
    components: Vec<LagrangianComponent>,
    chords: Vec<ReebChord>,
    min_action: Action,
    comp_piece: BTreeMap<Sym, Sym>,
    chord_at: BTreeMap<Sym, usize>,
}

impl BoundaryData {
    pub fn new(spec: BoundarySpec) -> Result<Self> {
        let report = validate_boundary(&spec);
        if !report.is_empty() {
            return Err(Error::InvalidBoundary(report.violations.join("; ")));
        }
        let min_action = spec
            .min_action
            .or_else(|| spec.chords.iter().map(|c| c.action).min())
            .unwrap_or_else(|| Ratio::from_integer(1));
        let comp_piece = spec.components.iter().map(|c| (c.id.clone(), c.piece.clone())).collect();
        let chord_at = spec.chords.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();
        Ok(BoundaryData {
            pieces: spec.pieces,
            components: spec.components,
            chords: spec.chords,
            min_action,
            comp_piece,
            chord_at,
        })
    }

    pub fn pieces(&self) -> &[Sym] {
        &self.pieces
    }

    pub fn components(&self) -> &[LagrangianComponent] {
        &self.components
    }

    pub fn chords(&self) -> &[ReebChord] {
        &self.chords
    }

    pub fn min_action(&self) -> Action {
        self.min_action
    }

    pub fn chord(&self, id: &str) -> Option<&ReebChord> {
        self.chord_at.get(id).map(|&i| &self.chords[i])
    }

    pub fn piece_of(&self, component: &str) -> Option<&Sym> {
        self.comp_piece.get(component)
    }

    pub fn to_spec(&self) -> BoundarySpec {
        BoundarySpec {
            pieces: self.pieces.clone(),
            components: self.components.clone(),
            chords: self.chords.clone(),
            min_action: Some(self.min_action),
        }
    }
}

/// Pure iff both endpoints lie on the same piece.
pub fn classify_chord(chord: &ReebChord, boundary: &BoundaryData) -> Result<ChordKind> {
    let piece = |c: &Sym| {
        boundary
            .piece_of(c)
            .ok_or_else(|| Error::InvalidBoundary(format!("chord `{}`: dangling endpoint `{c}`", chord.id)))
    };
    Ok(if piece(&chord.start)? == piece(&chord.end)? { ChordKind::Pure } else { ChordKind::Mixed })
}

/// The two ends of a cobordism; positive punctures use `pos`, negative ones `neg`.
#[derive(Clone, Debug)]
pub struct Ends {
    pub pos: Arc<BoundaryData>,
    pub neg: Arc<BoundaryData>,
}

impl PartialEq for Ends {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.pos, &other.pos) || self.pos == other.pos)
            && (Arc::ptr_eq(&self.neg, &other.neg) || self.neg == other.neg)
    }
}

impl Ends {
    /// Components are global: a component id on both ends must sit on one piece.
    pub fn new(pos: Arc<BoundaryData>, neg: Arc<BoundaryData>) -> Result<Self> {
        check_piece_agreement(&pos, &neg)?;
        Ok(Ends { pos, neg })
    }

    /// Both ends equal to `b`, as for a trivial cobordism or a symplectization.
    pub fn cylinder(b: Arc<BoundaryData>) -> Self {
        Ends { pos: b.clone(), neg: b }
    }

    pub fn piece_of(&self, component: &str) -> Option<&Sym> {
        self.pos.piece_of(component).or_else(|| self.neg.piece_of(component))
    }

    /// All piece ids on either end, sorted.
    pub fn pieces(&self) -> BTreeSet<Sym> {
        self.pos.pieces().iter().chain(self.neg.pieces()).cloned().collect()
    }
}

pub(crate) fn check_piece_agreement(a: &BoundaryData, b: &BoundaryData) -> Result<()> {
    for c in a.components() {
        if let Some(p) = b.piece_of(&c.id) {
            if *p != c.piece {
                return Err(Error::BoundaryMismatch(format!(
                    "component `{}` lies on piece `{}` at one end and `{p}` at the other",
                    c.id, c.piece
                )));
            }
        }
    }
    Ok(())
}

/// True when chord `id` carries identical data on both boundaries, so a
/// strip over it is a trivial cylinder.
pub(crate) fn same_chord(a: &BoundaryData, b: &BoundaryData, id: &str) -> bool {
    matches!((a.chord(id), b.chord(id)), (Some(x), Some(y)) if x == y)
}

pub(crate) fn zero() -> Action {
    Action::zero()
}
