//! Shared helpers for the integration tests: fixtures, random boundaries,
//! exhaustive word enumeration and dense oracles written independently of the
//! library's own algorithms.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rasft::io::load_cobordism;
use rasft::{
    parse_action, Alpha, BoundaryData, BoundarySpec, CobordismData, Ends, FilteredComplex, LagrangianComponent,
    ReebChord, SpectralPage, Sym,
};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load(name: &str) -> CobordismData {
    load_cobordism(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn alpha(s: &str) -> Alpha {
    Alpha::Finite(parse_action(s).unwrap())
}

/// Every consistent cobordism fixture.
pub const COBORDISMS: [&str; 8] = [
    "twist1.json",
    "twist1_flat.json",
    "cyl.json",
    "bif.json",
    "bif_alt.json",
    "cyl_low.json",
    "shrink.json",
    "three.json",
];

/// Scenario fixtures that describe consistent moments.
pub const SCENARIOS: [&str; 4] = ["scen_bif.json", "scen_alt.json", "scen_empty.json", "scen_back.json"];

fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// A random boundary with 1..=max_pieces pieces (each carrying a component)
/// and 1..=max_chords chords.
pub fn random_boundary(rng: &mut impl Rng, max_pieces: usize, max_chords: usize) -> Arc<BoundaryData> {
    let npieces = rng.gen_range(1..=max_pieces);
    let ncomps = rng.gen_range(npieces..=3.max(npieces));
    let pieces: Vec<Sym> = (0..npieces).map(|i| sym(&format!("P{}", i + 1))).collect();
    let components: Vec<LagrangianComponent> = (0..ncomps)
        .map(|i| LagrangianComponent {
            id: sym(&format!("C{}", i + 1)),
            piece: pieces[if i < npieces { i } else { rng.gen_range(0..npieces) }].clone(),
        })
        .collect();
    let nchords = rng.gen_range(1..=max_chords);
    let chords = (0..nchords)
        .map(|i| ReebChord {
            id: sym(&((b'a' + i as u8) as char).to_string()),
            start: components[rng.gen_range(0..ncomps)].id.clone(),
            end: components[rng.gen_range(0..ncomps)].id.clone(),
            action: parse_action(&rng.gen_range(1..=5).to_string()).unwrap(),
            grading: rng.gen_range(-1..=2),
        })
        .collect();
    Arc::new(BoundaryData::new(BoundarySpec { pieces, components, chords, min_action: None }).unwrap())
}

/// A puncture token with its arc and piece data, derived from chord endpoints.
#[derive(Clone, Debug)]
pub struct Tok {
    pub chord: String,
    pub positive: bool,
    pub incoming: String,
    pub outgoing: String,
    pub mixed: bool,
}

impl Tok {
    pub fn text(&self) -> String {
        format!("{}{}", self.chord, if self.positive { '+' } else { '-' })
    }
}

/// All tokens over a cylinder on `b`.
pub fn tokens(b: &BoundaryData) -> Vec<Tok> {
    let piece = |c: &str| b.piece_of(c).unwrap().to_string();
    let mut out = Vec::new();
    for ch in b.chords() {
        let mixed = piece(&ch.start) != piece(&ch.end);
        out.push(Tok { chord: ch.id.to_string(), positive: true, incoming: ch.start.to_string(), outgoing: ch.end.to_string(), mixed });
        out.push(Tok { chord: ch.id.to_string(), positive: false, incoming: ch.end.to_string(), outgoing: ch.start.to_string(), mixed });
    }
    out
}

/// Every arc-consistent cyclic word of 1..=max_len tokens, one per rotation
/// class (the rotation whose index sequence is least).
pub fn cyclic_words(toks: &[Tok], max_len: usize) -> Vec<Vec<usize>> {
    fn least(w: &[usize]) -> bool {
        (1..w.len()).all(|r| {
            let rot: Vec<usize> = w[r..].iter().chain(&w[..r]).copied().collect();
            w <= &rot[..]
        })
    }
    fn go(toks: &[Tok], max_len: usize, w: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let first = w[0];
        if toks[*w.last().unwrap()].outgoing == toks[first].incoming && least(w) {
            out.push(w.clone());
        }
        if w.len() == max_len {
            return;
        }
        for t in first..toks.len() {
            if toks[*w.last().unwrap()].outgoing == toks[t].incoming {
                w.push(t);
                go(toks, max_len, w, out);
                w.pop();
            }
        }
    }
    let mut out = Vec::new();
    for t in 0..toks.len() {
        go(toks, max_len, &mut vec![t], &mut out);
    }
    out
}

/// Admissibility by checking every pair of boundary arcs on the same piece.
pub fn admissible_oracle(b: &BoundaryData, toks: &[Tok], w: &[usize]) -> bool {
    if !w.iter().any(|&t| toks[t].positive) {
        return false;
    }
    let m = w.len();
    let piece = |t: usize| b.piece_of(&toks[w[t]].outgoing).unwrap().clone();
    let harmless = |t: usize| !toks[w[t]].positive && !toks[w[t]].mixed;
    for i in 0..m {
        for j in i + 1..m {
            if piece(i) != piece(j) {
                continue;
            }
            // arc i follows puncture i; the cut separates punctures i+1..=j from the rest
            let inside = (i + 1..=j).all(harmless);
            let outside = (j + 1..m).chain(0..=i).all(harmless);
            if !inside && !outside {
                return false;
            }
        }
    }
    true
}

pub fn word_text(toks: &[Tok], w: &[usize]) -> String {
    w.iter().map(|&t| toks[t].text()).collect::<Vec<_>>().join(" ")
}

pub fn cylinder(b: &Arc<BoundaryData>) -> Ends {
    Ends::cylinder(b.clone())
}

// ---------------------------------------------------------------------------
// dense GF(2)

/// Rank of a set of 0/1 vectors.
pub fn rank(vs: &[Vec<u8>]) -> usize {
    let mut rows: Vec<Vec<u8>> = vs.to_vec();
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] == 1) else { continue };
        rows.swap(r, piv);
        for i in 0..rows.len() {
            if i != r && rows[i][col] == 1 {
                let pr = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(pr) {
                    *a ^= b;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the kernel of `x ↦ Σ x_j images[j]`, expressed over `domain`.
pub fn kernel(domain: &[Vec<u8>], images: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let k = domain.len();
    if k == 0 {
        return Vec::new();
    }
    // augmented rows [image | unit]
    let mut rows: Vec<(Vec<u8>, Vec<u8>)> =
        (0..k).map(|j| (images[j].clone(), (0..k).map(|i| (i == j) as u8).collect())).collect();
    let n = images.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..k).find(|&i| rows[i].0[col] == 1) else { continue };
        rows.swap(r, piv);
        for i in 0..k {
            if i != r && rows[i].0[col] == 1 {
                let (pa, pb) = rows[r].clone();
                for (a, b) in rows[i].0.iter_mut().zip(&pa) {
                    *a ^= b;
                }
                for (a, b) in rows[i].1.iter_mut().zip(&pb) {
                    *a ^= b;
                }
            }
        }
        r += 1;
    }
    rows[r..]
        .iter()
        .map(|(_, comb)| {
            let mut x = vec![0u8; domain[0].len()];
            for (j, &c) in comb.iter().enumerate() {
                if c == 1 {
                    for (a, b) in x.iter_mut().zip(&domain[j]) {
                        *a ^= b;
                    }
                }
            }
            x
        })
        .collect()
}

/// Dense view of a filtered complex.
pub struct Dense {
    pub n: usize,
    pub k: usize,
    pub deg: Vec<i64>,
    pub filt: Vec<usize>,
    pub d: Vec<Vec<u8>>,
}

impl Dense {
    pub fn of(c: &FilteredComplex) -> Self {
        let n = c.len();
        let d = (0..n)
            .map(|j| {
                let mut col = vec![0u8; n];
                for &i in &c.columns[j] {
                    col[i] ^= 1;
                }
                col
            })
            .collect();
        Dense {
            n,
            k: c.k,
            deg: c.generators.iter().map(|g| g.degree).collect(),
            filt: c.generators.iter().map(|g| g.filtration).collect(),
            d,
        }
    }

    pub fn apply(&self, x: &[u8]) -> Vec<u8> {
        let mut y = vec![0u8; self.n];
        for (j, &c) in x.iter().enumerate() {
            if c == 1 {
                for (a, b) in y.iter_mut().zip(&self.d[j]) {
                    *a ^= b;
                }
            }
        }
        y
    }

    fn unit(&self, j: usize) -> Vec<u8> {
        (0..self.n).map(|i| (i == j) as u8).collect()
    }

    /// Units spanning `F^p` in degree `n`; `p <= 1` is everything.
    fn filtered(&self, p: i64, n: i64) -> Vec<Vec<u8>> {
        (0..self.n).filter(|&j| self.deg[j] == n && self.filt[j] as i64 >= p).map(|j| self.unit(j)).collect()
    }

    /// Zeroes the coordinates in `F^p`.
    fn mod_f(&self, v: &[u8], p: i64) -> Vec<u8> {
        v.iter().enumerate().map(|(i, &x)| if self.filt[i] as i64 >= p { 0 } else { x }).collect()
    }

    /// `{x ∈ F^p_n : dx ∈ F^{p+r}}`
    pub fn z(&self, r: i64, p: i64, n: i64) -> Vec<Vec<u8>> {
        let dom = self.filtered(p, n);
        let im: Vec<Vec<u8>> = dom.iter().map(|x| self.mod_f(&self.apply(x), p + r)).collect();
        kernel(&dom, &im)
    }

    /// `dim E_r^{p}` in total degree `n`, as `Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`.
    pub fn page_dim(&self, r: i64, p: i64, n: i64) -> usize {
        let zr = self.z(r, p, n);
        let mut den = self.z(r - 1, p + 1, n);
        den.extend(self.z(r - 1, p - r + 1, n - 1).iter().map(|x| self.apply(x)));
        rank(&zr) - rank(&den)
    }

    /// `dim H(F^p/F^{p+1})` in degree `n`, from the quotient complex alone.
    pub fn e1_from_quotient(&self, p: usize, n: i64) -> usize {
        let gens = |deg: i64| -> Vec<usize> { (0..self.n).filter(|&j| self.deg[j] == deg && self.filt[j] == p).collect() };
        let here = gens(n);
        let below = gens(n - 1);
        let above = gens(n + 1);
        let restrict = |j: usize, rows: &[usize]| -> Vec<u8> { rows.iter().map(|&i| self.d[j][i]).collect() };
        let out: Vec<Vec<u8>> = here.iter().map(|&j| restrict(j, &above)).collect();
        let inc: Vec<Vec<u8>> = below.iter().map(|&j| restrict(j, &here)).collect();
        let rk_out = if above.is_empty() { 0 } else { rank(&out) };
        let rk_in = if here.is_empty() { 0 } else { rank(&inc) };
        here.len() - rk_out - rk_in
    }

    /// `dim F^pH_n / F^{p+1}H_n` where `F^pH` is the image of `H(F^p)`.
    pub fn graded_homology(&self, p: i64, n: i64) -> usize {
        let boundaries: Vec<Vec<u8>> = self.filtered(1, n - 1).iter().map(|x| self.apply(x)).collect();
        let image_dim = |p: i64| {
            let mut s = self.z(i64::MAX / 4, p, n);
            s.extend(boundaries.iter().cloned());
            rank(&s) - rank(&boundaries)
        };
        image_dim(p) - image_dim(p + 1)
    }

    pub fn homology(&self, n: i64) -> usize {
        let cycles = self.z(i64::MAX / 4, 1, n);
        let boundaries: Vec<Vec<u8>> = self.filtered(1, n - 1).iter().map(|x| self.apply(x)).collect();
        rank(&cycles) - rank(&boundaries)
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.deg.clone();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Compares every page against the dense oracle; returns the mismatches.
pub fn check_pages(c: &FilteredComplex, pages: &[SpectralPage]) -> Vec<String> {
    let dense = Dense::of(c);
    let mut bad = Vec::new();
    let mut degs = dense.degrees();
    if let (Some(&lo), Some(&hi)) = (degs.first(), degs.last()) {
        degs = (lo - 1..=hi + 1).collect();
    }
    let dim = |pg: &SpectralPage, p: usize, n: i64| pg.dim(p, n - p as i64);
    for n in degs.iter().copied() {
        let mut einf_total = 0;
        for p in 1..=dense.k {
            let e1 = dense.e1_from_quotient(p, n);
            if dim(&pages[0], p, n) != e1 {
                bad.push(format!("E1 at p={p} n={n}: {} vs quotient {e1}", dim(&pages[0], p, n)));
            }
            for pg in pages {
                let o = dense.page_dim(pg.r as i64, p as i64, n);
                if dim(pg, p, n) != o {
                    bad.push(format!("E{} at p={p} n={n}: {} vs oracle {o}", pg.r, dim(pg, p, n)));
                }
            }
            let last = pages.last().unwrap();
            let gh = dense.graded_homology(p as i64, n);
            if dim(last, p, n) != gh {
                bad.push(format!("E_inf at p={p} n={n}: {} vs graded homology {gh}", dim(last, p, n)));
            }
            einf_total += dim(last, p, n);
        }
        if einf_total != dense.homology(n) {
            bad.push(format!("Euler bookkeeping in degree {n}: {einf_total} vs {}", dense.homology(n)));
        }
    }
    // E_{r+1} = H(E_r, d_r) through the reported d_r matrices.
    for w in pages.windows(2) {
        let (pg, next) = (&w[0], &w[1]);
        let mut out_rank: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        let mut in_rank: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for (&(p, q), m) in &pg.differentials {
            let cols = pg.dim(p, q);
            let colvecs: Vec<Vec<u8>> = (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect();
            let rk = if m.is_empty() { 0 } else { rank(&colvecs) };
            *out_rank.entry((p, q)).or_default() += rk;
            *in_rank.entry((p + pg.r, q - pg.r as i64 + 1)).or_default() += rk;
        }
        for (&(p, q), e) in &pg.entries {
            let expect = e.dim - out_rank.get(&(p, q)).copied().unwrap_or(0) - in_rank.get(&(p, q)).copied().unwrap_or(0);
            if next.dim(p, q) != expect {
                bad.push(format!("E{} at ({p},{q}) is {} but H(E{}, d) has {expect}", next.r, next.dim(p, q), pg.r));
            }
        }
    }
    bad
}

/// A random filtered complex with `d = A D A⁻¹`, where `D` pairs generators
/// and `A` is a unipotent filtered change of basis.
pub fn random_complex(rng: &mut impl Rng) -> FilteredComplex {
    let n = rng.gen_range(1..=32);
    let k = rng.gen_range(1..=4);
    let deg: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    let filt: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=k)).collect();
    let mut dd = vec![vec![0u8; n]; n];
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &x in &order {
        if used[x] || !rng.gen_bool(0.7) {
            continue;
        }
        let ys: Vec<usize> = (0..n).filter(|&y| !used[y] && y != x && deg[y] == deg[x] + 1 && filt[y] >= filt[x]).collect();
        if let Some(&y) = ys.choose(rng) {
            used[x] = true;
            used[y] = true;
            dd[x][y] = 1;
        }
    }
    // A e_j = e_j + Σ N[i][j] e_i with i strictly later in (filtration, index)
    let mut a = vec![vec![0u8; n]; n];
    for j in 0..n {
        a[j][j] = 1;
        for i in 0..n {
            if i != j && deg[i] == deg[j] && (filt[i], i) > (filt[j], j) && rng.gen_bool(0.3) {
                a[j][i] = 1;
            }
        }
    }
    let inv = invert(&a);
    let apply = |m: &Vec<Vec<u8>>, x: &[u8]| -> Vec<u8> {
        let mut y = vec![0u8; n];
        for (j, &c) in x.iter().enumerate() {
            if c == 1 {
                for (t, s) in y.iter_mut().zip(&m[j]) {
                    *t ^= s;
                }
            }
        }
        y
    };
    let columns = (0..n)
        .map(|j| {
            let y = apply(&a, &apply(&dd, &inv[j]));
            (0..n).filter(|&i| y[i] == 1).collect()
        })
        .collect();
    FilteredComplex::from_matrix(k, &deg, &filt, columns).unwrap()
}

/// Inverse of a matrix given by columns, by Gauss-Jordan elimination.
pub fn invert(cols: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = cols.len();
    let mut rows: Vec<(Vec<u8>, Vec<u8>)> = (0..n)
        .map(|i| ((0..n).map(|j| cols[j][i]).collect(), (0..n).map(|j| (i == j) as u8).collect()))
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| rows[i].0[c] == 1).expect("invertible");
        rows.swap(c, p);
        for i in 0..n {
            if i != c && rows[i].0[c] == 1 {
                let (pa, pb) = rows[c].clone();
                rows[i].0.iter_mut().zip(&pa).for_each(|(x, y)| *x ^= y);
                rows[i].1.iter_mut().zip(&pb).for_each(|(x, y)| *x ^= y);
            }
        }
    }
    (0..n).map(|j| (0..n).map(|i| rows[i].1[j]).collect()).collect()
}
