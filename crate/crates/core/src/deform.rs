//! Bifurcation of potentials at a moment where rigid index −1 disks appear,
//! and the chain isomorphisms and homotopies comparing the complexes before
//! and after.
//!
//! Every increment is a fixed point of one split-gluing stage
//! `S(u, v) = {k → h⁺}(u, v) + {h⁻ ← k}(u, v)`, iterated as
//! `ρ ← S(u, u + ρ) + W` from `ρ = 0`. First-order variations are carried as
//! a second vector whose factors are marked: a stage keeps exactly the trees
//! with one marked factor.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::boundary::{zero, Action, Ends, Sym};
use crate::disk::Sign;
use crate::error::{Error, Result};
use crate::gf2::Bits;
use crate::gluing::{linearize_lower, linearize_upper, split_general, strip_vector, Joint, Level, SplitArgs};
use crate::sft::{differential, join, verify_d_squared, CobordismData, DSquaredReport};
use crate::spectral::{build_complex, enumerate_disks, page_morphism, spectral_sequence, Budgets, FilteredComplex, PageMorphism};
use crate::vector::{Alpha, DiskVector};

/// A cobordism before a moment with index −1 disks `k` meeting `hatpiece`.
#[derive(Clone, Debug)]
pub struct DeformationScenario {
    pub cob0: CobordismData,
    /// Expected data after the moment, if known.
    pub cob1: Option<CobordismData>,
    pub k: DiskVector,
    pub hatpiece: Sym,
}

impl DeformationScenario {
    pub fn new(cob0: CobordismData, cob1: Option<CobordismData>, k: DiskVector, hatpiece: &str) -> Result<Self> {
        let s = DeformationScenario { cob0, cob1, k, hatpiece: Sym::from(hatpiece) };
        let v = s.violations();
        if v.is_empty() {
            Ok(s)
        } else {
            Err(Error::InvalidScenario(v.join("; ")))
        }
    }

    /// One line per broken condition on `k` or on `cob1`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ends = &self.cob0.ends;
        if *self.k.ends() != *ends {
            out.push("k is not over the cobordism ends".into());
            return out;
        }
        if !ends.pieces().contains(&self.hatpiece) {
            out.push(format!("unknown piece `{}`", self.hatpiece));
        }
        for d in self.k.iter() {
            let deg = d.degree(ends);
            if deg != -1 {
                out.push(format!("k disk [{d}] has degree {deg}, expected -1"));
            }
            if d.action(ends) <= zero() {
                out.push(format!("k disk [{d}] has non-positive action"));
            }
            if let Err(e) = d.order_punctures(ends, &self.hatpiece) {
                out.push(e.to_string());
            }
        }
        if let Some(c1) = &self.cob1 {
            if c1.ends != *ends {
                out.push("cob1 has different ends".into());
            }
            if c1.ham_pos.words() != self.cob0.ham_pos.words() || c1.ham_neg.words() != self.cob0.ham_neg.words() {
                out.push("cob1 has different Hamiltonian vectors".into());
            }
        }
        out
    }

    pub fn moment(&self) -> Result<Moment> {
        Moment::new(self.cob0.clone(), self.k.clone(), &self.hatpiece)
    }
}

/// The data a split-gluing stage needs: the cobordism before the moment,
/// its index −1 vector and the piece that orders punctures.
#[derive(Clone, Debug)]
pub struct Moment {
    pub cob: CobordismData,
    pub k: DiskVector,
    pub piece: Sym,
    down: Joint,
    up: Joint,
    up_strips: DiskVector,
    down_strips: DiskVector,
}

impl Moment {
    pub fn new(cob: CobordismData, k: DiskVector, piece: &str) -> Result<Self> {
        if *k.ends() != cob.ends {
            return Err(Error::BoundaryMismatch("k is not over the cobordism ends".into()));
        }
        for d in k.iter() {
            d.order_punctures(&cob.ends, piece)?;
        }
        let down = Joint::new(&cob.ends, &cob.pos_ends())?;
        let up = Joint::new(&cob.neg_ends(), &cob.ends)?;
        let up_strips = strip_vector(&cob.ends.pos, Alpha::Infinite);
        let down_strips = strip_vector(&cob.ends.neg, Alpha::Infinite);
        Ok(Moment { cob, k, piece: Sym::from(piece), down, up, up_strips, down_strips })
    }

    fn zero(&self) -> DiskVector {
        DiskVector::zero(&self.cob.ends, Alpha::Infinite)
    }

    /// `S(after, before)` keeping trees with exactly `marked` marked factors.
    fn stage(
        &self,
        after: (&DiskVector, Option<&DiskVector>),
        before: (&DiskVector, Option<&DiskVector>),
        marked: u32,
        alpha: Alpha,
    ) -> Result<DiskVector> {
        if self.k.is_empty() {
            return Ok(DiskVector::zero(&self.cob.ends, alpha));
        }
        let down = SplitArgs {
            k: &self.k,
            center: &self.cob.ham_pos,
            after,
            before,
            side: &self.up_strips,
            piece: &self.piece,
            k_level: Level::Lower,
            marked,
        };
        let up = SplitArgs { center: &self.cob.ham_neg, side: &self.down_strips, k_level: Level::Upper, ..down.clone() };
        let a = split_general(&self.down, &down, alpha)?.rebase(&self.cob.ends);
        let b = split_general(&self.up, &up, alpha)?.rebase(&self.cob.ends);
        a.add(&b)
    }

    fn rounds(&self, alpha: Alpha) -> usize {
        let min = self.cob.ends.pos.min_action().min(self.cob.ends.neg.min_action());
        match alpha {
            Alpha::Finite(a) if min > zero() => {
                let q = (a / min).floor().to_integer().max(0) as usize;
                2 * q + 4
            }
            _ => 256,
        }
    }

    fn check(&self, v: &DiskVector) -> Result<()> {
        if *v.ends() != self.cob.ends {
            return Err(Error::BoundaryMismatch("vector is not over the cobordism ends".into()));
        }
        Ok(())
    }

    /// `Δ(u, k)`.
    pub fn increment(&self, u: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
        self.deformed_increment(u, &self.zero(), alpha)
    }

    /// `Δ_W(u, k)`: the recursion with `W` added at every stage.
    pub fn deformed_increment(&self, u: &DiskVector, w: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
        self.check(u)?;
        self.check(w)?;
        let w = w.project(w.alpha().min(alpha))?;
        let mut rho = DiskVector::zero(&self.cob.ends, alpha);
        for _ in 0..self.rounds(alpha) {
            let before = u.add(&rho)?;
            let next = self.stage((u, None), (&before, None), 0, alpha)?.add(&w)?;
            if next == rho {
                return Ok(rho);
            }
            rho = next;
        }
        Err(Error::NoStabilization(self.rounds(alpha)))
    }

    /// Base and first-order parts of `Δ_{εw}(u + εv, k)`.
    pub fn linearized_increment(
        &self,
        u: &DiskVector,
        v: Option<&DiskVector>,
        w: Option<&DiskVector>,
        alpha: Alpha,
    ) -> Result<(DiskVector, DiskVector)> {
        self.check(u)?;
        let zero = DiskVector::zero(&self.cob.ends, alpha);
        let w = match w {
            Some(w) => {
                self.check(w)?;
                w.project(w.alpha().min(alpha))?
            }
            None => zero.clone(),
        };
        let (mut base, mut tan) = (zero.clone(), zero.clone());
        for _ in 0..self.rounds(alpha) {
            let before = u.add(&base)?;
            let tan_before = match v {
                Some(v) => v.add(&tan)?,
                None => tan.clone(),
            };
            let next_base = self.stage((u, None), (&before, None), 0, alpha)?;
            let next_tan = self.stage((u, v), (&before, Some(&tan_before)), 1, alpha)?.add(&w)?;
            if next_base == base && next_tan == tan {
                return Ok((base, tan));
            }
            base = next_base;
            tan = next_tan;
        }
        Err(Error::NoStabilization(self.rounds(alpha)))
    }

    /// `B(v)`: the first-order part of `Δ(F + εv, k)` at the potential `F`.
    pub fn tangent(&self, v: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
        Ok(self.linearized_increment(&self.cob.potential, Some(v), None, alpha)?.1)
    }

    /// The cobordism after the moment: potential `f + Δ(f, k)`.
    pub fn bifurcate(&self, alpha: Alpha) -> Result<CobordismData> {
        let f = &self.cob.potential;
        let f1 = f.add(&self.increment(f, alpha)?)?;
        let c = &self.cob;
        CobordismData::from_parts(c.ends.clone(), f1, c.ham_pos.clone(), c.ham_neg.clone(), false)
    }
}

/// `Δ(u, k)` for the scenario's index −1 vector.
pub fn increment(u: &DiskVector, scen: &DeformationScenario, alpha: Alpha) -> Result<DiskVector> {
    scen.moment()?.increment(u, alpha)
}

/// `Δ_W(F, K)` over the cobordism `cob` (usually a joined one).
pub fn deformed_increment(
    cob: &CobordismData,
    f: &DiskVector,
    k: &DiskVector,
    w: &DiskVector,
    piece: &str,
    alpha: Alpha,
) -> Result<DiskVector> {
    Moment::new(cob.clone(), k.clone(), piece)?.deformed_increment(f, w, alpha)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BifurcationReport {
    /// Whether the supplied `cob1` agrees with the computed one below α.
    pub supplied_matches: Option<bool>,
    pub violations: Vec<String>,
    pub d_squared: DSquaredReport,
}

impl BifurcationReport {
    pub fn is_ok(&self) -> bool {
        self.supplied_matches != Some(false) && self.violations.is_empty() && self.d_squared.is_empty()
    }
}

/// Computes the potential after the moment and checks it.
pub fn bifurcate(scen: &DeformationScenario, alpha: Alpha, budgets: &Budgets) -> Result<(CobordismData, BifurcationReport)> {
    let cob1 = scen.moment()?.bifurcate(alpha)?;
    let supplied_matches = match &scen.cob1 {
        Some(c) => Some(c.potential.project(c.potential.alpha().min(alpha))?.words() == cob1.potential.words()),
        None => None,
    };
    let violations = cob1.violations();
    let d_squared = verify_d_squared(&cob1, alpha, budgets)?;
    Ok((cob1, BifurcationReport { supplied_matches, violations, d_squared }))
}

/// A stationary cobordism joined to a moving one, before and after the moment.
#[derive(Clone, Debug)]
pub struct JoinedFamily {
    /// The joined cobordism before the moment, with the joined index −1 vector `K`.
    pub moment: Moment,
    /// The join of the cobordisms after the moment.
    pub after: CobordismData,
    pub moving: Level,
    pub lower: CobordismData,
    pub upper: CobordismData,
    /// The moving cobordism after the moment.
    pub moved: CobordismData,
    pub k: DiskVector,
}

impl JoinedFamily {
    /// The moving cobordism before the moment.
    pub fn moving_before(&self) -> &CobordismData {
        match self.moving {
            Level::Lower => &self.lower,
            Level::Upper => &self.upper,
        }
    }

    /// `F₁ + F₀ + Δ(F₀, K)`, empty when the joined potentials bifurcate as expected.
    pub fn discrepancy(&self, alpha: Alpha) -> Result<DiskVector> {
        let f0 = &self.moment.cob.potential;
        let f1 = f0.add(&self.moment.increment(f0, alpha)?)?;
        f1.add(&self.after.potential.project(self.after.potential.alpha().min(alpha))?)
    }
}

fn moved(scen: &DeformationScenario, alpha: Alpha) -> Result<CobordismData> {
    scen.moment()?.bifurcate(alpha)
}

/// `K = {k → f^a}(f^b₀, f^b₁, f^a)` for a moving lower cobordism.
pub fn joined_k(scen_b: &DeformationScenario, upper: &CobordismData, alpha: Alpha) -> Result<DiskVector> {
    let b1 = moved(scen_b, alpha)?;
    joined_k_with(scen_b, &b1, upper, alpha)
}

fn joined_k_with(scen_b: &DeformationScenario, b1: &CobordismData, upper: &CobordismData, alpha: Alpha) -> Result<DiskVector> {
    let joint = Joint::new(&scen_b.cob0.ends, &upper.ends)?;
    let args = SplitArgs {
        k: &scen_b.k,
        center: &upper.potential,
        after: (&scen_b.cob0.potential, None),
        before: (&b1.potential, None),
        side: &upper.potential,
        piece: &scen_b.hatpiece,
        k_level: Level::Lower,
        marked: 0,
    };
    split_potential(&joint, &args, alpha)
}

/// Split gluing whose center is a potential. Strips act as the identity:
/// they never serve as the center, and a `k` disk whose shared punctures all
/// carry strips of the potential passes through unchanged.
fn split_potential(joint: &Joint, args: &SplitArgs<'_>, alpha: Alpha) -> Result<DiskVector> {
    let ends = args.center.ends();
    let solid = DiskVector::from_disks(ends, args.center.alpha(), args.center.iter().filter(|d| !d.is_strip(ends)).cloned())?;
    let mut out = split_general(joint, &SplitArgs { center: &solid, ..args.clone() }, alpha)?.rebase(&joint.joined);
    let strips: BTreeSet<&Sym> =
        args.center.iter().filter(|d| d.is_strip(ends)).map(|d| &d.word()[0].chord).collect();
    let shared = match args.k_level {
        Level::Lower => Sign::Positive,
        Level::Upper => Sign::Negative,
    };
    for d in args.k.iter() {
        if d.word().iter().filter(|p| p.sign == shared).all(|p| strips.contains(&p.chord)) {
            out.toggle(d.clone())?;
        }
    }
    Ok(out)
}

/// `K = {f^b ← k}(f^b, f^a₀, f^a₁)` for a moving upper cobordism.
pub fn joined_k_rev(lower: &CobordismData, scen_a: &DeformationScenario, alpha: Alpha) -> Result<DiskVector> {
    let a1 = moved(scen_a, alpha)?;
    joined_k_rev_with(lower, scen_a, &a1, alpha)
}

fn joined_k_rev_with(lower: &CobordismData, scen_a: &DeformationScenario, a1: &CobordismData, alpha: Alpha) -> Result<DiskVector> {
    let joint = Joint::new(&lower.ends, &scen_a.cob0.ends)?;
    let args = SplitArgs {
        k: &scen_a.k,
        center: &lower.potential,
        after: (&scen_a.cob0.potential, None),
        before: (&a1.potential, None),
        side: &lower.potential,
        piece: &scen_a.hatpiece,
        k_level: Level::Upper,
        marked: 0,
    };
    split_potential(&joint, &args, alpha)
}

/// Joins a moving lower family `scen_b` to a stationary `upper`.
pub fn join_moving_lower(scen_b: &DeformationScenario, upper: &CobordismData, alpha: Alpha) -> Result<JoinedFamily> {
    let b1 = moved(scen_b, alpha)?;
    let k = joined_k_with(scen_b, &b1, upper, alpha)?;
    let before = join(&scen_b.cob0, upper, alpha)?;
    let after = join(&b1, upper, alpha)?;
    Ok(JoinedFamily {
        moment: Moment::new(before, k.clone(), &scen_b.hatpiece)?,
        after,
        moving: Level::Lower,
        lower: scen_b.cob0.clone(),
        upper: upper.clone(),
        moved: b1,
        k,
    })
}

/// Joins a stationary `lower` to a moving upper family `scen_a`.
pub fn join_moving_upper(lower: &CobordismData, scen_a: &DeformationScenario, alpha: Alpha) -> Result<JoinedFamily> {
    let a1 = moved(scen_a, alpha)?;
    let k = joined_k_rev_with(lower, scen_a, &a1, alpha)?;
    let before = join(lower, &scen_a.cob0, alpha)?;
    let after = join(lower, &a1, alpha)?;
    Ok(JoinedFamily {
        moment: Moment::new(before, k.clone(), &scen_a.hatpiece)?,
        after,
        moving: Level::Upper,
        lower: lower.clone(),
        upper: scen_a.cob0.clone(),
        moved: a1,
        k,
    })
}

// ---------------------------------------------------------------------------
// chain isomorphism

#[derive(Clone, Debug, PartialEq)]
pub struct ChainIsoReport {
    /// Least (+)-action increase of `B`; `None` when `B = 0`.
    pub action_gap: Option<Action>,
    /// `(id + B)^n = id`.
    pub n: u64,
    /// Generators where `d¹ ∘ Φ ≠ Φ ∘ d⁰`.
    pub chain_map_failures: Vec<String>,
    /// Generators where `(id + B)^n` is not the identity.
    pub power_failures: Vec<String>,
    /// Generators where `Φ ∘ inverse` is not the identity.
    pub inverse_failures: Vec<String>,
    /// Images of `B` that fall outside the enumerated basis.
    pub leaks: Vec<String>,
    pub pages: Vec<PageMorphism>,
}

impl ChainIsoReport {
    pub fn is_ok(&self) -> bool {
        self.chain_map_failures.is_empty()
            && self.power_failures.is_empty()
            && self.inverse_failures.is_empty()
            && self.leaks.is_empty()
            && !self.pages.is_empty()
            && self.pages.iter().all(PageMorphism::is_iso)
    }
}

#[derive(Clone, Debug)]
pub struct ChainIso {
    pub before: FilteredComplex,
    pub after: FilteredComplex,
    /// Generator-level matrix of `Φ = id + B`, columns over `before`.
    pub forward: Vec<Vec<usize>>,
    pub inverse: Vec<Vec<usize>>,
    pub report: ChainIsoReport,
}

type Matrix = Vec<Bits>;

fn apply(m: &Matrix, x: &Bits) -> Bits {
    let mut y = Bits::zeros(x.len());
    for j in x.ones() {
        y.xor(&m[j]);
    }
    y
}

fn compose(a: &Matrix, b: &Matrix) -> Matrix {
    b.par_iter().map(|col| apply(a, col)).collect()
}

fn to_columns(m: &Matrix) -> Vec<Vec<usize>> {
    m.iter().map(|c| c.ones().collect()).collect()
}

fn unit_vector(c: &FilteredComplex, j: usize, ends: &Ends, alpha: Alpha) -> Result<DiskVector> {
    let d = c.generators[j].disk.clone().expect("complex built from disks");
    DiskVector::from_disks(ends, alpha, [d])
}

/// `Φ = id + B` for the moment, its inverse `(id + B)^{N−1}`, and checks.
pub fn chain_iso(m: &Moment, after: &CobordismData, alpha: Alpha, budgets: &Budgets, allow_leaks: bool) -> Result<ChainIso> {
    let c0 = build_complex(&m.cob, alpha, budgets, allow_leaks)?;
    let c1 = build_complex(after, alpha, budgets, allow_leaks)?;
    let n = c0.len();
    let ends = &m.cob.ends;
    let images: Vec<DiskVector> =
        (0..n).into_par_iter().map(|j| m.tangent(&unit_vector(&c0, j, ends, alpha)?, alpha)).collect::<Result<_>>()?;
    let mut leaks = Vec::new();
    let mut gap: Option<Action> = None;
    let mut forward: Matrix = Vec::with_capacity(n);
    for (j, b) in images.iter().enumerate() {
        let mut col = Bits::unit(n, j);
        let a = c0.generators[j].action_plus.expect("complex built from disks");
        for d in b.iter() {
            let step = d.action_plus(ends) - a;
            gap = Some(gap.map_or(step, |g: Action| g.min(step)));
            match c1.index_of(d) {
                Some(i) => col.flip(i),
                None => leaks.push(format!("B({}) contains [{d}], outside the basis", c0.label(j))),
            }
        }
        forward.push(col);
    }
    if gap.is_some_and(|g| g <= zero()) {
        return Err(Error::NoActionGap);
    }
    if !leaks.is_empty() && !allow_leaks {
        return Err(Error::Leak(leaks[0].clone()));
    }
    // N = 2^steps with N·α₀ above every (+)-action in play
    let steps = match gap {
        None => 0,
        Some(g) => {
            let top = match alpha {
                Alpha::Finite(a) => a,
                Alpha::Infinite => c0.generators.iter().filter_map(|g| g.action_plus).max().unwrap_or_else(zero),
            };
            let mut s = 0u32;
            while Action::from_integer(1i128 << s) * g <= top {
                s += 1;
            }
            s
        }
    };
    let mut power = forward.clone();
    let mut inverse: Matrix = (0..n).map(|j| Bits::unit(n, j)).collect();
    for _ in 0..steps {
        inverse = compose(&power, &inverse);
        power = compose(&power, &power);
    }
    let id_fail = |mat: &Matrix| -> Vec<String> {
        mat.iter().enumerate().filter(|(j, c)| **c != Bits::unit(n, *j)).map(|(j, _)| c0.label(j)).collect()
    };
    let power_failures = id_fail(&power);
    let inverse_failures = id_fail(&compose(&forward, &inverse));
    let chain_map_failures: Vec<String> = (0..n)
        .filter(|&j| c1.apply(&forward[j]) != apply(&forward, &c0.column_bits(j)))
        .map(|j| c0.label(j))
        .collect();
    let forward = to_columns(&forward);
    let pages = if chain_map_failures.is_empty() {
        page_morphism(&forward, &c0, &spectral_sequence(&c0), &c1, &spectral_sequence(&c1))?
    } else {
        Vec::new()
    };
    let report = ChainIsoReport {
        action_gap: gap,
        n: 1u64 << steps,
        chain_map_failures,
        power_failures,
        inverse_failures,
        leaks,
        pages,
    };
    Ok(ChainIso { before: c0, after: c1, forward, inverse: to_columns(&inverse), report })
}

/// Chain isomorphism of a scenario: the moment against its bifurcation.
pub fn scenario_chain_iso(scen: &DeformationScenario, alpha: Alpha, budgets: &Budgets, allow_leaks: bool) -> Result<ChainIso> {
    let m = scen.moment()?;
    let after = m.bifurcate(alpha)?;
    chain_iso(&m, &after, alpha, budgets, allow_leaks)
}

// ---------------------------------------------------------------------------
// chain homotopies

/// `Θ(v)` for `v` over the stationary upper cobordism of `fam`.
pub fn homotopy_theta(fam: &JoinedFamily, scen_b: &DeformationScenario, v: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    if fam.moving != Level::Lower {
        return Err(Error::InvalidScenario("Θ needs a moving lower cobordism".into()));
    }
    let joint = Joint::new(&fam.lower.ends, &fam.upper.ends)?;
    let empty = DiskVector::zero(&fam.upper.ends, Alpha::Infinite);
    let args = SplitArgs {
        k: &scen_b.k,
        center: v,
        after: (&fam.lower.potential, None),
        before: (&fam.moved.potential, None),
        side: &empty,
        piece: &scen_b.hatpiece,
        k_level: Level::Lower,
        marked: 0,
    };
    let theta = split_general(&joint, &args, alpha)?.rebase(&joint.joined);
    let m = &fam.moment;
    Ok(m.linearized_increment(&m.cob.potential, None, Some(&theta), alpha)?.1)
}

/// `Ω(v) = {v ← k}(f^b, f^a₀, f^a₁)` for `v` over the stationary lower cobordism.
pub fn homotopy_omega(fam: &JoinedFamily, scen_a: &DeformationScenario, v: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    if fam.moving != Level::Upper {
        return Err(Error::InvalidScenario("Ω needs a moving upper cobordism".into()));
    }
    let joint = Joint::new(&fam.lower.ends, &fam.upper.ends)?;
    let args = SplitArgs {
        k: &scen_a.k,
        center: v,
        after: (&fam.upper.potential, None),
        before: (&fam.moved.potential, None),
        side: &fam.lower.potential,
        piece: &scen_a.hatpiece,
        k_level: Level::Upper,
        marked: 0,
    };
    Ok(split_general(&joint, &args, alpha)?.rebase(&joint.joined))
}

/// Per generator: whether any term is non-zero, and the failure if the identity breaks.
type HomotopyRow = (bool, Option<(String, Vec<String>)>);

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HomotopyReport {
    pub checked: usize,
    /// Generators where at least one of the four terms is non-zero.
    pub active: usize,
    /// Generators where the identity fails on their graded quotient, with the residue.
    pub failures: Vec<(String, Vec<String>)>,
}

impl HomotopyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, for every basis disk `v` of the stationary cobordism with `p`
/// positive punctures, the identity on the quotient `C^p`:
/// `[Φ]^p [ι₀]^p v + [ι₁]^p v = d¹ H^p v + H^p d v`,
/// where `ι_s` is the linearized inclusion into the joined cobordism at time
/// `s`, `Φ = id + B` and `H` is `Θ` or `Ω`.
pub fn verify_homotopy(fam: &JoinedFamily, scen: &DeformationScenario, alpha: Alpha, budgets: &Budgets) -> Result<HomotopyReport> {
    let stationary = match fam.moving {
        Level::Lower => &fam.upper,
        Level::Upper => &fam.lower,
    };
    // the linearized inclusion at time 0 or 1
    let include = |v: &DiskVector, after: bool| {
        let moving = if after { &fam.moved.potential } else { &fam.moving_before().potential };
        match fam.moving {
            Level::Lower => linearize_upper(moving, &fam.upper.potential, v, alpha),
            Level::Upper => linearize_lower(&fam.lower.potential, moving, v, alpha),
        }
    };
    let homotopy = |v: &DiskVector| match fam.moving {
        Level::Lower => homotopy_theta(fam, scen, v, alpha),
        Level::Upper => homotopy_omega(fam, scen, v, alpha),
    };
    let joined = &fam.moment.cob.ends;
    let basis = enumerate_disks(&stationary.ends, alpha, budgets);
    let rows = basis
        .par_iter()
        .map(|g| -> Result<HomotopyRow> {
            let p = g.positives();
            let v = DiskVector::from_disks(&stationary.ends, alpha, [g.clone()])?;
            let i0 = include(&v, false)?.rebase(joined).graded_part(p);
            let l0 = i0.add(&fam.moment.tangent(&i0, alpha)?)?.graded_part(p);
            let l1 = include(&v, true)?.rebase(joined).graded_part(p);
            let hv = homotopy(&v)?.graded_part(p);
            let r1 = differential(&fam.after, &hv, alpha)?.graded_part(p);
            let dv = differential(stationary, &v, alpha)?.graded_part(p);
            let r2 = homotopy(&dv)?.graded_part(p);
            let active = [&l0, &l1, &r1, &r2].iter().any(|t| !t.is_empty());
            let residue = l0.add(&l1)?.add(&r1)?.add(&r2)?;
            Ok((active, (!residue.is_empty()).then(|| (format!("[{g}]"), residue.words()))))
        })
        .collect::<Result<Vec<_>>>()?;
    let active = rows.iter().filter(|r| r.0).count();
    let failures = rows.into_iter().filter_map(|r| r.1).collect();
    Ok(HomotopyReport { checked: basis.len(), active, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::trivial_cobordism;
    use crate::test_support::*;

    #[test]
    fn empty_k_changes_nothing() {
        let b = twist1_boundary();
        let e = Ends::cylinder(b.clone());
        let c = trivial_cobordism(b, DiskVector::parse(&e, Alpha::Infinite, &["a+ b-"]).unwrap()).unwrap();
        let k = DiskVector::zero(&e, Alpha::Infinite);
        let s = DeformationScenario::new(c.clone(), None, k, "P1").unwrap();
        let a = Alpha::Finite(act("6"));
        assert!(increment(&c.potential, &s, a).unwrap().is_empty());
        let (c1, rep) = bifurcate(&s, a, &Budgets::default()).unwrap();
        assert_eq!(c1.potential.words(), c.potential.words());
        assert!(rep.is_ok());
        let iso = scenario_chain_iso(&s, a, &Budgets::default(), false).unwrap();
        assert!(iso.report.is_ok(), "{:?}", iso.report);
        assert_eq!(iso.report.n, 1);
        assert_eq!(iso.forward, iso.inverse);
        let w = DiskVector::parse(&e, Alpha::Infinite, &["b+ a-"]).unwrap();
        let m = s.moment().unwrap();
        assert_eq!(m.deformed_increment(&c.potential, &w, a).unwrap().words(), w.words());
    }
}
