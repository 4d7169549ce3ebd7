//! JSON documents for cobordisms, deformation scenarios and spectral pages.
//!
//! Actions are written as exact decimal strings (or `p/q` when no finite
//! decimal exists) so the action filtration survives a round trip unchanged.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{format_action, parse_action, BoundaryData, BoundarySpec, Ends, LagrangianComponent, ReebChord, Sym};
use crate::deform::DeformationScenario;
use crate::error::{Error, Result};
use crate::sft::CobordismData;
use crate::spectral::{FilteredComplex, SpectralPage};
use crate::vector::{Alpha, DiskVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub id: String,
    pub piece: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChordEntry {
    pub id: String,
    pub start: String,
    pub end: String,
    pub action: String,
    pub grading: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryEntry {
    pub pieces: Vec<String>,
    pub components: Vec<ComponentEntry>,
    pub chords: Vec<ChordEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismFile {
    pub pos_boundary: BoundaryEntry,
    pub neg_boundary: BoundaryEntry,
    pub potential: Vec<String>,
    pub ham_pos: Vec<String>,
    pub ham_neg: Vec<String>,
    #[serde(default)]
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Path of the cobordism before the moment, relative to the scenario file.
    pub cob0: String,
    pub k: Vec<String>,
    pub hatpiece: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cob1: Option<String>,
}

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

impl BoundaryEntry {
    pub fn to_spec(&self) -> Result<BoundarySpec> {
        let sym = |s: &str| Sym::from(s);
        Ok(BoundarySpec {
            pieces: self.pieces.iter().map(|p| sym(p)).collect(),
            components: self.components.iter().map(|c| LagrangianComponent { id: sym(&c.id), piece: sym(&c.piece) }).collect(),
            chords: self
                .chords
                .iter()
                .map(|c| {
                    Ok(ReebChord {
                        id: sym(&c.id),
                        start: sym(&c.start),
                        end: sym(&c.end),
                        action: parse_action(&c.action)?,
                        grading: c.grading,
                    })
                })
                .collect::<Result<_>>()?,
            min_action: None,
        })
    }

    pub fn to_data(&self) -> Result<BoundaryData> {
        BoundaryData::new(self.to_spec()?)
    }

    pub fn from_data(b: &BoundaryData) -> Self {
        BoundaryEntry {
            pieces: b.pieces().iter().map(|p| p.to_string()).collect(),
            components: b.components().iter().map(|c| ComponentEntry { id: c.id.to_string(), piece: c.piece.to_string() }).collect(),
            chords: b
                .chords()
                .iter()
                .map(|c| ChordEntry {
                    id: c.id.to_string(),
                    start: c.start.to_string(),
                    end: c.end.to_string(),
                    action: format_action(&c.action),
                    grading: c.grading,
                })
                .collect(),
        }
    }
}

impl CobordismFile {
    /// Data over the file's ends, without the degree and action checks.
    pub fn to_data(&self) -> Result<CobordismData> {
        let pos = Arc::new(self.pos_boundary.to_data()?);
        let neg = self.neg_boundary.to_data()?;
        let neg = if neg == *pos { pos.clone() } else { Arc::new(neg) };
        let ends = Ends::new(pos.clone(), neg.clone())?;
        let potential = DiskVector::parse(&ends, Alpha::Infinite, &self.potential)?;
        let ham_pos = DiskVector::parse(&Ends::cylinder(pos), Alpha::Infinite, &self.ham_pos)?;
        let ham_neg = DiskVector::parse(&Ends::cylinder(neg), Alpha::Infinite, &self.ham_neg)?;
        CobordismData::from_parts(ends, potential, ham_pos, ham_neg, self.trivial)
    }

    pub fn from_data(c: &CobordismData) -> Self {
        CobordismFile {
            pos_boundary: BoundaryEntry::from_data(&c.ends.pos),
            neg_boundary: BoundaryEntry::from_data(&c.ends.neg),
            potential: c.potential.words(),
            ham_pos: c.ham_pos.words(),
            ham_neg: c.ham_neg.words(),
            trivial: c.trivial,
        }
    }
}

/// The raw document, before any boundary or disk is interpreted.
pub fn parse_cobordism_file(text: &str) -> Result<CobordismFile> {
    serde_json::from_str(text).map_err(|e| json_err("cobordism", e))
}

/// Parses a cobordism document; checks structure but not the count-data invariants.
pub fn parse_cobordism(text: &str) -> Result<CobordismData> {
    parse_cobordism_file(text)?.to_data()
}

/// Pretty JSON with disk words in canonical order, newline-terminated.
pub fn cobordism_to_json(c: &CobordismData) -> String {
    let mut s = serde_json::to_string_pretty(&CobordismFile::from_data(c)).expect("plain data serializes");
    s.push('\n');
    s
}

/// Reads a whole file; failures become [`Error::Io`].
pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_cobordism(path: &Path) -> Result<CobordismData> {
    parse_cobordism(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

pub fn save_cobordism(path: &Path, c: &CobordismData) -> Result<()> {
    std::fs::write(path, cobordism_to_json(c)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loads a scenario; `cob0` and `cob1` are resolved against the scenario's directory.
pub fn load_scenario(path: &Path) -> Result<DeformationScenario> {
    let f: ScenarioFile = serde_json::from_str(&read(path)?).map_err(|e| json_err(&path.display().to_string(), e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let cob0 = load_cobordism(&dir.join(&f.cob0))?;
    let cob1 = f.cob1.as_ref().map(|p| load_cobordism(&dir.join(p))).transpose()?;
    let k = DiskVector::parse(&cob0.ends, Alpha::Infinite, &f.k)?;
    DeformationScenario::new(cob0, cob1, k, &f.hatpiece)
}

#[derive(Serialize)]
struct EntryOut {
    p: usize,
    q: i64,
    dim: usize,
    unreliable: bool,
}

#[derive(Serialize)]
struct DiffOut<'a> {
    p: usize,
    q: i64,
    matrix: &'a [Vec<u8>],
}

#[derive(Serialize)]
struct PageOut<'a> {
    r: usize,
    infinity: bool,
    entries: Vec<EntryOut>,
    differentials: Vec<DiffOut<'a>>,
}

#[derive(Serialize)]
struct PagesOut<'a> {
    alpha: String,
    k: usize,
    generators: Vec<String>,
    pages: Vec<PageOut<'a>>,
}

/// Machine-readable pages: per page, `(p, q, dim)` triples and `d_r` matrices.
pub fn pages_to_json(c: &FilteredComplex, pages: &[SpectralPage]) -> String {
    let out = PagesOut {
        alpha: c.alpha.to_string(),
        k: c.k,
        generators: (0..c.len()).map(|j| c.label(j)).collect(),
        pages: pages
            .iter()
            .map(|pg| PageOut {
                r: pg.r,
                infinity: pg.infinity,
                entries: pg
                    .entries
                    .iter()
                    .map(|(&(p, q), e)| EntryOut { p, q, dim: e.dim, unreliable: e.unreliable })
                    .collect(),
                differentials: pg.differentials.iter().map(|(&(p, q), m)| DiffOut { p, q, matrix: m }).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("plain data serializes");
    s.push('\n');
    s
}
