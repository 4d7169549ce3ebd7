//! Finite disk bases, filtered GF(2) complexes and their spectral sequences.
//!
//! Page entries are computed directly from the cycle spaces
//! `Z_r^p = {x ∈ F^p : dx ∈ F^{p+r}}` in each total degree, with
//! `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::boundary::{Action, Ends, Sym};
use crate::disk::{least_rotation, FormalDisk, Puncture, Sign};
use crate::error::{Error, Result};
use crate::gf2::{kernel, Bits, Echelon};
use crate::sft::{differential_of, CobordismData};
use crate::vector::{Alpha, DiskVector};

/// Size limits for the enumerated basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub max_punctures: usize,
    /// Inclusive degree range.
    pub degree_window: Option<(i64, i64)>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_punctures: 8, degree_window: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClosureReport {
    /// (generator, disk of d(generator) missing from the basis)
    pub leaks: Vec<(FormalDisk, FormalDisk)>,
}

struct Token {
    p: Puncture,
    inc: usize,
    out: usize,
    plus: Option<Action>,
    mixed: bool,
}

/// Every admissible disk over `ends` within the budgets, in canonical order.
pub fn enumerate_disks(ends: &Ends, alpha: Alpha, budgets: &Budgets) -> Vec<FormalDisk> {
    let mut comps: HashMap<Sym, usize> = HashMap::new();
    let mut piece_of = Vec::new();
    for b in [&ends.pos, &ends.neg] {
        for c in b.components() {
            if !comps.contains_key(&c.id) {
                comps.insert(c.id.clone(), piece_of.len());
                piece_of.push(c.piece.clone());
            }
        }
    }
    let mut toks = Vec::new();
    for (b, sign) in [(&ends.pos, Sign::Positive), (&ends.neg, Sign::Negative)] {
        for c in b.chords() {
            let (s, e) = (comps[&c.start], comps[&c.end]);
            let (inc, out) = if sign == Sign::Positive { (s, e) } else { (e, s) };
            toks.push(Token {
                p: Puncture { chord: c.id.clone(), sign },
                inc,
                out,
                plus: (sign == Sign::Positive).then_some(c.action),
                mixed: piece_of[s] != piece_of[e],
            });
        }
    }
    toks.sort_by(|a, b| a.p.cmp(&b.p));
    let k = ends.pieces().len();
    let mut found = Vec::new();
    for first in 0..toks.len() {
        let mut walk = Walk { toks: &toks, first, alpha, k, budgets, ends, word: vec![first], found: &mut found };
        let t = &toks[first];
        walk.grow(t.plus.unwrap_or_default(), t.plus.is_some() as usize, t.mixed as usize);
    }
    found.sort();
    found
}

struct Walk<'a> {
    toks: &'a [Token],
    first: usize,
    alpha: Alpha,
    k: usize,
    budgets: &'a Budgets,
    ends: &'a Ends,
    word: Vec<usize>,
    found: &'a mut Vec<FormalDisk>,
}

impl Walk<'_> {
    fn grow(&mut self, aplus: Action, positives: usize, mixed: usize) {
        // admissible disks carry at most k positive and k mixed punctures
        if !self.alpha.admits(&aplus) || positives > self.k || mixed > self.k {
            return;
        }
        let last = self.toks[*self.word.last().unwrap()].out;
        if last == self.toks[self.first].inc {
            self.emit();
        }
        if self.word.len() == self.budgets.max_punctures {
            return;
        }
        for i in self.first..self.toks.len() {
            let t = &self.toks[i];
            if t.inc != last {
                continue;
            }
            self.word.push(i);
            self.grow(aplus + t.plus.unwrap_or_default(), positives + t.plus.is_some() as usize, mixed + t.mixed as usize);
            self.word.pop();
        }
    }

    fn emit(&mut self) {
        if positives_of(self) == 0 || least_rotation(&self.word) != 0 {
            return;
        }
        let d = FormalDisk::from_consistent(self.word.iter().map(|&i| self.toks[i].p.clone()).collect());
        if !d.is_admissible(self.ends) {
            return;
        }
        if let Some((lo, hi)) = self.budgets.degree_window {
            let deg = d.degree(self.ends);
            if deg < lo || deg > hi {
                return;
            }
        }
        self.found.push(d);
    }
}

fn positives_of(w: &Walk<'_>) -> usize {
    w.word.iter().filter(|&&i| w.toks[i].plus.is_some()).count()
}

/// The enumerated basis of `V_[α]` and the disks its differential misses.
pub fn enumerate_basis(cob: &CobordismData, alpha: Alpha, budgets: &Budgets) -> Result<(Vec<FormalDisk>, ClosureReport)> {
    let basis = enumerate_disks(&cob.ends, alpha, budgets);
    let images = differentials(cob, &basis, alpha)?;
    let set: BTreeSet<&FormalDisk> = basis.iter().collect();
    let mut leaks = Vec::new();
    for (g, dg) in basis.iter().zip(&images) {
        for x in dg.iter() {
            if !set.contains(x) {
                leaks.push((g.clone(), x.clone()));
            }
        }
    }
    Ok((basis, ClosureReport { leaks }))
}

fn differentials(cob: &CobordismData, basis: &[FormalDisk], alpha: Alpha) -> Result<Vec<DiskVector>> {
    basis.par_iter().map(|g| differential_of(cob, g, alpha)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// `None` for abstract complexes.
    pub disk: Option<FormalDisk>,
    pub degree: i64,
    /// Number of positive punctures.
    pub filtration: usize,
    pub action_plus: Option<Action>,
}

/// A finite filtered cochain complex over GF(2); `F^p` is spanned by the
/// generators of filtration at least `p`, for `p = 1..=k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredComplex {
    pub k: usize,
    pub alpha: Alpha,
    pub generators: Vec<Generator>,
    /// `columns[j]` lists the generators in `d(g_j)`, ascending.
    pub columns: Vec<Vec<usize>>,
    /// (p, degree) bidegrees touched by a truncation leak.
    pub unreliable: BTreeSet<(usize, i64)>,
}

impl FilteredComplex {
    /// A complex with no disk labels; checks degree, filtration and `d² = 0`.
    pub fn from_matrix(k: usize, degrees: &[i64], filtrations: &[usize], columns: Vec<Vec<usize>>) -> Result<Self> {
        let generators = degrees
            .iter()
            .zip(filtrations)
            .map(|(&degree, &filtration)| Generator { disk: None, degree, filtration, action_plus: None })
            .collect();
        let c = FilteredComplex { k, alpha: Alpha::Infinite, generators, columns, unreliable: BTreeSet::new() };
        c.check()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn label(&self, j: usize) -> String {
        match &self.generators[j].disk {
            Some(d) => format!("[{d}]"),
            None => format!("g{j}"),
        }
    }

    pub fn index_of(&self, d: &FormalDisk) -> Option<usize> {
        self.generators.iter().position(|g| g.disk.as_ref() == Some(d))
    }

    pub(crate) fn column_bits(&self, j: usize) -> Bits {
        Bits::from_indices(self.len(), self.columns[j].iter().copied())
    }

    /// `d` of a combination of generators.
    pub(crate) fn apply(&self, x: &Bits) -> Bits {
        let mut out = Bits::zeros(self.len());
        for j in x.ones() {
            for &i in &self.columns[j] {
                out.flip(i);
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        let n = self.len();
        for (j, g) in self.generators.iter().enumerate() {
            if g.filtration < 1 || g.filtration > self.k {
                return Err(Error::InvalidCobordism(format!("{} has filtration {} outside 1..={}", self.label(j), g.filtration, self.k)));
            }
            for &i in &self.columns[j] {
                if i >= n {
                    return Err(Error::InvalidCobordism(format!("d({}) names generator {i} of {n}", self.label(j))));
                }
                let t = &self.generators[i];
                if t.degree != g.degree + 1 || t.filtration < g.filtration {
                    return Err(Error::InvalidCobordism(format!(
                        "d({}) contains {} of wrong degree or lower filtration",
                        self.label(j),
                        self.label(i)
                    )));
                }
                if let (Some(a), Some(b)) = (&g.action_plus, &t.action_plus) {
                    if b < a {
                        return Err(Error::InvalidCobordism(format!("d({}) lowers the (+)-action", self.label(j))));
                    }
                }
            }
            if !self.apply(&self.column_bits(j)).is_zero() {
                return Err(Error::DSquared(self.label(j)));
            }
        }
        Ok(())
    }
}

/// Matrix of `d^f_α` in the enumerated basis.
pub fn build_complex(cob: &CobordismData, alpha: Alpha, budgets: &Budgets, allow_leaks: bool) -> Result<FilteredComplex> {
    let mut basis = enumerate_disks(&cob.ends, alpha, budgets);
    let key = |d: &FormalDisk| (d.degree(&cob.ends), d.positives());
    basis.sort_by(|a, b| key(a).cmp(&key(b)).then_with(|| a.cmp(b)));
    let images = differentials(cob, &basis, alpha)?;
    let index: HashMap<&FormalDisk, usize> = basis.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut unreliable = BTreeSet::new();
    let mut columns = Vec::with_capacity(basis.len());
    for (g, dg) in basis.iter().zip(&images) {
        let mut col = Vec::new();
        for x in dg.iter() {
            match index.get(x) {
                Some(&i) => col.push(i),
                None if allow_leaks => {
                    unreliable.insert((g.positives(), g.degree(&cob.ends)));
                    unreliable.insert((x.positives(), x.degree(&cob.ends)));
                }
                None => return Err(Error::Leak(format!("d[{g}] contains [{x}], which lies outside the basis"))),
            }
        }
        col.sort_unstable();
        columns.push(col);
    }
    let generators = basis
        .into_iter()
        .map(|d| Generator {
            degree: d.degree(&cob.ends),
            filtration: d.positives(),
            action_plus: Some(d.action_plus(&cob.ends)),
            disk: Some(d),
        })
        .collect();
    let k = cob.piece_count();
    let c = FilteredComplex { k, alpha, generators, columns, unreliable };
    c.check()?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageEntry {
    pub dim: usize,
    /// Representatives of a basis of the entry, as sets of generator indices.
    pub representatives: Vec<Vec<usize>>,
    /// Basis of the subspace that is divided out.
    pub denominator: Vec<Vec<usize>>,
    pub unreliable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub r: usize,
    /// The last page, `E_{k+1} = E_∞`.
    pub infinity: bool,
    /// Keyed by (p, q) with p + q the total degree.
    pub entries: BTreeMap<(usize, i64), PageEntry>,
    /// `d_r` out of (p, q); a target-dim × source-dim 0/1 matrix.
    pub differentials: BTreeMap<(usize, i64), Vec<Vec<u8>>>,
}

impl SpectralPage {
    pub fn dim(&self, p: usize, q: i64) -> usize {
        self.entries.get(&(p, q)).map_or(0, |e| e.dim)
    }

    pub fn total_dim(&self) -> usize {
        self.entries.values().map(|e| e.dim).sum()
    }
}

struct Ctx<'a> {
    c: &'a FilteredComplex,
    dcol: Vec<Bits>,
    zmemo: HashMap<(usize, i64, i64), Vec<Bits>>,
}

fn to_ix(b: &Bits) -> Vec<usize> {
    b.ones().collect()
}

impl<'a> Ctx<'a> {
    fn new(c: &'a FilteredComplex) -> Self {
        let dcol = (0..c.len()).map(|j| c.column_bits(j)).collect();
        Ctx { c, dcol, zmemo: HashMap::new() }
    }

    /// Z_r^p in total degree n.
    fn z(&mut self, r: usize, p: i64, n: i64) -> Vec<Bits> {
        if let Some(z) = self.zmemo.get(&(r, p, n)) {
            return z.clone();
        }
        let len = self.c.len();
        let gens = &self.c.generators;
        let mask = Bits::from_indices(len, (0..len).filter(|&i| (gens[i].filtration as i64) < p + r as i64));
        let mut dom = Vec::new();
        let mut img = Vec::new();
        for (j, g) in gens.iter().enumerate() {
            if g.degree == n && g.filtration as i64 >= p {
                dom.push(Bits::unit(len, j));
                let mut v = self.dcol[j].clone();
                v.and(&mask);
                img.push(v);
            }
        }
        let z = kernel(&dom, &img);
        self.zmemo.insert((r, p, n), z.clone());
        z
    }

    fn denominator(&mut self, r: usize, p: i64, n: i64) -> Vec<Bits> {
        let mut b = self.z(r - 1, p + 1, n);
        for x in self.z(r - 1, p - r as i64 + 1, n - 1) {
            b.push(self.c.apply(&x));
        }
        let mut e = Echelon::new(0);
        b.into_iter().filter(|v| e.insert(v.clone(), Bits::zeros(0)).is_none()).collect()
    }

    fn entry(&mut self, r: usize, p: usize, n: i64) -> PageEntry {
        let den = self.denominator(r, p as i64, n);
        let mut e = Echelon::new(0);
        for v in &den {
            e.insert(v.clone(), Bits::zeros(0));
        }
        let reps: Vec<Bits> =
            self.z(r, p as i64, n).into_iter().filter(|v| e.insert(v.clone(), Bits::zeros(0)).is_none()).collect();
        PageEntry {
            dim: reps.len(),
            representatives: reps.iter().map(to_ix).collect(),
            denominator: den.iter().map(to_ix).collect(),
            unreliable: self.c.unreliable.contains(&(p, n)),
        }
    }
}

/// Echelon form of an entry's quotient; reducing a cycle yields its coordinates.
pub(crate) fn quotient_of(len: usize, e: &PageEntry) -> Echelon {
    let mut q = Echelon::new(e.dim);
    for v in &e.denominator {
        q.insert(Bits::from_indices(len, v.iter().copied()), Bits::zeros(e.dim));
    }
    for (i, v) in e.representatives.iter().enumerate() {
        q.insert(Bits::from_indices(len, v.iter().copied()), Bits::unit(e.dim, i));
    }
    q
}

/// Pages `E_1 ..= E_{k+1}`; the last one is `E_∞`.
pub fn spectral_sequence(c: &FilteredComplex) -> Vec<SpectralPage> {
    let mut ctx = Ctx::new(c);
    let bideg: BTreeSet<(usize, i64)> = c.generators.iter().map(|g| (g.filtration, g.degree)).collect();
    let len = c.len();
    (1..=c.k + 1)
        .map(|r| {
            let entries: BTreeMap<(usize, i64), PageEntry> =
                bideg.iter().map(|&(p, n)| ((p, n - p as i64), ctx.entry(r, p, n))).collect();
            let mut differentials = BTreeMap::new();
            for (&(p, q), e) in &entries {
                let target = (p + r, q - r as i64 + 1);
                let Some(t) = entries.get(&target) else { continue };
                if e.dim == 0 || t.dim == 0 {
                    continue;
                }
                let quot = quotient_of(len, t);
                let mut m = vec![vec![0u8; e.dim]; t.dim];
                for (j, rep) in e.representatives.iter().enumerate() {
                    let dx = c.apply(&Bits::from_indices(len, rep.iter().copied()));
                    let (rem, coords) = quot.reduce(dx);
                    debug_assert!(rem.is_zero());
                    for i in coords.ones() {
                        m[i][j] = 1;
                    }
                }
                differentials.insert((p, q), m);
            }
            SpectralPage { r, infinity: r == c.k + 1, entries, differentials }
        })
        .collect()
}

/// Induced maps of a filtered chain map on each page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageMorphism {
    pub r: usize,
    /// target-dim × source-dim matrices keyed by (p, q)
    pub maps: BTreeMap<(usize, i64), Vec<Vec<u8>>>,
    pub not_injective: Vec<(usize, i64)>,
    pub not_surjective: Vec<(usize, i64)>,
}

impl PageMorphism {
    pub fn is_iso(&self) -> bool {
        self.not_injective.is_empty() && self.not_surjective.is_empty()
    }
}

fn rank(m: &[Vec<u8>], cols: usize) -> usize {
    let mut e = Echelon::new(0);
    (0..cols)
        .filter(|&j| e.insert(Bits::from_indices(m.len(), (0..m.len()).filter(|&i| m[i][j] == 1)), Bits::zeros(0)).is_none())
        .count()
}

/// Checks that `map` (columns over `a`'s generators, entries indexing `b`'s)
/// is a filtered chain map and computes its action on every page.
pub fn page_morphism(
    map: &[Vec<usize>],
    a: &FilteredComplex,
    pages_a: &[SpectralPage],
    b: &FilteredComplex,
    pages_b: &[SpectralPage],
) -> Result<Vec<PageMorphism>> {
    if map.len() != a.len() {
        return Err(Error::NotChainMap("map has the wrong number of columns".into()));
    }
    let apply = |x: &Bits| {
        let mut y = Bits::zeros(b.len());
        for j in x.ones() {
            for &i in &map[j] {
                y.flip(i);
            }
        }
        y
    };
    for (j, col) in map.iter().enumerate() {
        let g = &a.generators[j];
        for &i in col {
            let t = &b.generators[i];
            if t.degree != g.degree || t.filtration < g.filtration {
                return Err(Error::NotChainMap(format!("{} maps to {} across degree or filtration", a.label(j), b.label(i))));
            }
        }
        let e = Bits::unit(a.len(), j);
        if apply(&a.apply(&e)) != b.apply(&apply(&e)) {
            return Err(Error::NotChainMap(format!("map does not commute with d at {}", a.label(j))));
        }
    }
    let mut out = Vec::new();
    for (pa, pb) in pages_a.iter().zip(pages_b) {
        let mut maps = BTreeMap::new();
        let mut not_injective = Vec::new();
        let mut not_surjective = Vec::new();
        let keys: BTreeSet<(usize, i64)> = pa.entries.keys().chain(pb.entries.keys()).copied().collect();
        for key in keys {
            let da = pa.dim(key.0, key.1);
            let db = pb.dim(key.0, key.1);
            let mut m = vec![vec![0u8; da]; db];
            if da > 0 && db > 0 {
                let ea = &pa.entries[&key];
                let quot = quotient_of(b.len(), &pb.entries[&key]);
                for (j, rep) in ea.representatives.iter().enumerate() {
                    let y = apply(&Bits::from_indices(a.len(), rep.iter().copied()));
                    let (rem, coords) = quot.reduce(y);
                    if !rem.is_zero() {
                        return Err(Error::NotChainMap(format!("image of a page-{} cycle at {key:?} is not a cycle", pa.r)));
                    }
                    for i in coords.ones() {
                        m[i][j] = 1;
                    }
                }
            }
            let rk = rank(&m, da);
            if rk < da {
                not_injective.push(key);
            }
            if rk < db {
                not_surjective.push(key);
            }
            maps.insert(key, m);
        }
        out.push(PageMorphism { r: pa.r, maps, not_injective, not_surjective });
    }
    Ok(out)
}

/// Generator-level matrix of the identity of `c`.
pub fn identity_map(c: &FilteredComplex) -> Vec<Vec<usize>> {
    (0..c.len()).map(|j| vec![j]).collect()
}

/// The truncation `π^α_β` from the complex at α to the complex at β ≤ α.
pub fn projection_map(from: &FilteredComplex, to: &FilteredComplex) -> Vec<Vec<usize>> {
    from.generators
        .iter()
        .map(|g| g.disk.as_ref().and_then(|d| to.index_of(d)).into_iter().collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizationLevel {
    pub alpha: Alpha,
    pub generators: usize,
    /// (r, total dimension) per page
    pub page_dims: Vec<(usize, usize)>,
    pub unreliable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizationReport {
    pub levels: Vec<StabilizationLevel>,
    /// `isos[i]`: whether `π` from level i+1 to level i is an isomorphism on every page.
    pub isos: Vec<bool>,
    /// Least level from which every later projection is an isomorphism on pages.
    pub stable_from: Alpha,
    /// Least level from which the enumerated basis no longer grows.
    pub basis_saturated_from: Alpha,
}

/// Pages at each α and the projections between consecutive levels.
pub fn stabilize(cob: &CobordismData, alphas: &[Alpha], budgets: &Budgets, allow_leaks: bool) -> Result<StabilizationReport> {
    if alphas.is_empty() || alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidCobordism("alphas must be a non-empty increasing list".into()));
    }
    let complexes = alphas.iter().map(|&a| build_complex(cob, a, budgets, allow_leaks)).collect::<Result<Vec<_>>>()?;
    let pages: Vec<Vec<SpectralPage>> = complexes.iter().map(spectral_sequence).collect();
    let mut isos = Vec::new();
    for i in 1..complexes.len() {
        let pi = projection_map(&complexes[i], &complexes[i - 1]);
        let m = page_morphism(&pi, &complexes[i], &pages[i], &complexes[i - 1], &pages[i - 1])?;
        isos.push(m.iter().all(PageMorphism::is_iso));
    }
    let stable = isos.iter().rposition(|ok| !ok).map_or(0, |i| i + 1);
    let sat = (1..complexes.len()).rev().find(|&i| complexes[i].len() != complexes[i - 1].len()).unwrap_or(0);
    let levels = complexes
        .iter()
        .zip(&pages)
        .map(|(c, ps)| StabilizationLevel {
            alpha: c.alpha,
            generators: c.len(),
            page_dims: ps.iter().map(|p| (p.r, p.total_dim())).collect(),
            unreliable: !c.unreliable.is_empty(),
        })
        .collect();
    Ok(StabilizationReport { levels, isos, stable_from: alphas[stable], basis_saturated_from: alphas[sat] })
}
