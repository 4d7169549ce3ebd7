//! Cobordism count data, the linearized differential and chain maps of joins.

use std::sync::Arc;

use rayon::prelude::*;

use crate::boundary::{zero, BoundaryData, Ends};
use crate::disk::FormalDisk;
use crate::error::{Error, Result};
use crate::gluing::{gluing_pairing, linearize_lower, linearize_upper, strip_vector, Attach, Joint, Level, Problem, Roots, SrcSpec};
use crate::spectral::{enumerate_basis, Budgets};
use crate::vector::{Alpha, DiskVector};

/// An exact cobordism reduced to its ends and the supplied disk counts.
#[derive(Clone, Debug, PartialEq)]
pub struct CobordismData {
    pub ends: Ends,
    /// Rigid disks in the cobordism, over `ends`.
    pub potential: DiskVector,
    /// Hamiltonian vector of the positive end, over `pos × R`.
    pub ham_pos: DiskVector,
    /// Hamiltonian vector of the negative end, over `neg × R`.
    pub ham_neg: DiskVector,
    pub trivial: bool,
}

impl CobordismData {
    /// Builds the data and rejects it unless [`violations`](Self::violations) is empty.
    pub fn new(ends: Ends, potential: DiskVector, ham_pos: DiskVector, ham_neg: DiskVector, trivial: bool) -> Result<Self> {
        let c = Self::from_parts(ends, potential, ham_pos, ham_neg, trivial)?;
        let v = c.violations();
        if v.is_empty() {
            Ok(c)
        } else {
            Err(Error::InvalidCobordism(v.join("; ")))
        }
    }

    /// Checks only that each vector lives over the right ends.
    pub fn from_parts(ends: Ends, potential: DiskVector, ham_pos: DiskVector, ham_neg: DiskVector, trivial: bool) -> Result<Self> {
        if *potential.ends() != ends {
            return Err(Error::BoundaryMismatch("potential is not over the cobordism ends".into()));
        }
        if *ham_pos.ends() != Ends::cylinder(ends.pos.clone()) || *ham_neg.ends() != Ends::cylinder(ends.neg.clone()) {
            return Err(Error::BoundaryMismatch("Hamiltonian vectors must live over the symplectizations of the ends".into()));
        }
        Ok(CobordismData { ends, potential, ham_pos, ham_neg, trivial })
    }

    /// One line per broken degree or action condition.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for d in self.potential.iter() {
            let deg = d.degree(&self.ends);
            if deg != 0 {
                out.push(format!("potential disk [{d}] has degree {deg}, expected 0"));
            }
            if d.action(&self.ends) < zero() {
                out.push(format!("potential disk [{d}] has negative action"));
            }
        }
        for (name, h) in [("ham_pos", &self.ham_pos), ("ham_neg", &self.ham_neg)] {
            for d in h.iter() {
                let deg = d.degree(h.ends());
                if deg != 1 {
                    out.push(format!("ham disk [{d}] has degree {deg}, expected 1 ({name})"));
                }
                if d.action(h.ends()) <= zero() {
                    out.push(format!("ham disk [{d}] has non-positive action ({name})"));
                }
            }
        }
        if self.trivial {
            if *self.ends.pos != *self.ends.neg {
                out.push("trivial cobordism with different ends".into());
            } else {
                let strips = strip_vector(&self.ends.pos, self.potential.alpha());
                if self.potential.words() != strips.words() {
                    out.push("trivial cobordism potential is not the strip vector".into());
                }
                if self.ham_pos.words() != self.ham_neg.words() {
                    out.push("trivial cobordism with different Hamiltonian vectors at its ends".into());
                }
            }
        }
        out
    }

    pub fn pos_ends(&self) -> Ends {
        Ends::cylinder(self.ends.pos.clone())
    }

    pub fn neg_ends(&self) -> Ends {
        Ends::cylinder(self.ends.neg.clone())
    }

    pub fn piece_count(&self) -> usize {
        self.ends.pieces().len()
    }
}

/// `b × R` with the strip potential and Hamiltonian vector `h` at both ends.
pub fn trivial_cobordism(boundary: Arc<BoundaryData>, h: DiskVector) -> Result<CobordismData> {
    let ends = Ends::cylinder(boundary.clone());
    let h = DiskVector::from_disks(&ends, h.alpha(), h.iter().cloned())?;
    let f = strip_vector(&boundary, Alpha::Infinite);
    CobordismData::new(ends, f, h.clone(), h, true)
}

fn ham_plus_problem<'a>(v: &'a DiskVector, strips: &'a DiskVector, h: &'a DiskVector) -> Problem<'a> {
    Problem {
        srcs: vec![SrcSpec::many(v, Level::Lower), SrcSpec::grouped(h, Level::Upper, 0), SrcSpec::many(strips, Level::Upper)],
        need: vec![1],
        lower_children: Attach::Plain(vec![0]),
        upper_children: Attach::Plain(vec![1, 2]),
        roots: Roots::Anchor(0),
        guard: false,
    }
}

fn ham_minus_problem<'a>(h: &'a DiskVector, strips: &'a DiskVector, v: &'a DiskVector) -> Problem<'a> {
    Problem {
        srcs: vec![SrcSpec::grouped(h, Level::Lower, 0), SrcSpec::many(strips, Level::Lower), SrcSpec::many(v, Level::Upper)],
        need: vec![1],
        lower_children: Attach::Plain(vec![0, 1]),
        upper_children: Attach::Plain(vec![2]),
        roots: Roots::Anchor(0),
        guard: false,
    }
}

/// One `h⁺` disk on top, every other factor from `v` below it.
pub fn ham_op_plus(cob: &CobordismData, v: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    let strips = strip_vector(&cob.ends.pos, Alpha::Infinite);
    let joint = Joint::new(v.ends(), &cob.pos_ends())?;
    ham_plus_problem(v, &strips, &cob.ham_pos).collect(&joint, alpha)
}

/// One `h⁻` disk below, every other factor from `v` above it.
pub fn ham_op_minus(cob: &CobordismData, v: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    let strips = strip_vector(&cob.ends.neg, Alpha::Infinite);
    let joint = Joint::new(&cob.neg_ends(), v.ends())?;
    ham_minus_problem(&cob.ham_neg, &strips, v).collect(&joint, alpha)
}

/// `h(f)`, which vanishes for consistent count data.
pub fn ham_at_potential(cob: &CobordismData, alpha: Alpha) -> Result<DiskVector> {
    ham_op_plus(cob, &cob.potential, alpha)?.add(&ham_op_minus(cob, &cob.potential, alpha)?)
}

/// The two halves of `d^f(v)`: an `h⁺` factor above, or an `h⁻` factor below.
pub fn differential_parts(cob: &CobordismData, v: &DiskVector, alpha: Alpha) -> Result<(DiskVector, DiskVector)> {
    if *v.ends() != cob.ends {
        return Err(Error::BoundaryMismatch("vector is not over the cobordism ends".into()));
    }
    let f = &cob.potential;
    let up = strip_vector(&cob.ends.pos, Alpha::Infinite);
    let plus = Problem {
        srcs: vec![
            SrcSpec::many(f, Level::Lower),
            SrcSpec::grouped(v, Level::Lower, 1),
            SrcSpec::grouped(&cob.ham_pos, Level::Upper, 0),
            SrcSpec::many(&up, Level::Upper),
        ],
        need: vec![1, 1],
        lower_children: Attach::Plain(vec![0, 1]),
        upper_children: Attach::Plain(vec![2, 3]),
        roots: Roots::Anchor(0),
        guard: false,
    }
    .collect(&Joint::new(&cob.ends, &cob.pos_ends())?, alpha)?;
    let down = strip_vector(&cob.ends.neg, Alpha::Infinite);
    let minus = Problem {
        srcs: vec![
            SrcSpec::grouped(&cob.ham_neg, Level::Lower, 0),
            SrcSpec::many(&down, Level::Lower),
            SrcSpec::many(f, Level::Upper),
            SrcSpec::grouped(v, Level::Upper, 1),
        ],
        need: vec![1, 1],
        lower_children: Attach::Plain(vec![0, 1]),
        upper_children: Attach::Plain(vec![2, 3]),
        roots: Roots::Anchor(0),
        guard: false,
    }
    .collect(&Joint::new(&cob.neg_ends(), &cob.ends)?, alpha)?;
    Ok((plus.rebase(&cob.ends), minus.rebase(&cob.ends)))
}

/// The linearized differential `d^f_α(v)`.
pub fn differential(cob: &CobordismData, v: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    let (p, m) = differential_parts(cob, v, alpha)?;
    p.add(&m)
}

/// `d` of a single disk.
pub fn differential_of(cob: &CobordismData, g: &FormalDisk, alpha: Alpha) -> Result<DiskVector> {
    let v = DiskVector::from_disks(&cob.ends, alpha, [g.clone()])?;
    differential(cob, &v, alpha)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DSquaredReport {
    /// Generators with `d(d(g)) != 0`, with the offending image.
    pub failures: Vec<(FormalDisk, DiskVector)>,
    /// (generator, image disk) pairs where `d(g)` leaves the enumerated basis.
    pub leaks: Vec<(FormalDisk, FormalDisk)>,
    /// `h(f)`; must vanish.
    pub ham_at_potential: Option<DiskVector>,
}

impl DSquaredReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty() && self.ham_at_potential.as_ref().is_none_or(|v| v.is_empty())
    }
}

/// Applies `d` twice to every basis generator at `alpha`, and checks `h(f) = 0`.
pub fn verify_d_squared(cob: &CobordismData, alpha: Alpha, budgets: &Budgets) -> Result<DSquaredReport> {
    let (basis, closure) = enumerate_basis(cob, alpha, budgets)?;
    let failures = basis
        .par_iter()
        .map(|g| -> Result<Option<(FormalDisk, DiskVector)>> {
            let dd = differential(cob, &differential_of(cob, g, alpha)?, alpha)?;
            Ok((!dd.is_empty()).then(|| (g.clone(), dd)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let hf = ham_at_potential(cob, alpha)?;
    Ok(DSquaredReport { failures, leaks: closure.leaks, ham_at_potential: Some(hf) })
}

/// Stacks `lower` below `upper`; the potential is `(f_lower | f_upper)`.
pub fn join(lower: &CobordismData, upper: &CobordismData, alpha: Alpha) -> Result<CobordismData> {
    if *lower.ends.pos != *upper.ends.neg {
        return Err(Error::BoundaryMismatch("the lower positive end differs from the upper negative end".into()));
    }
    if lower.ham_pos.words() != upper.ham_neg.words() {
        return Err(Error::BoundaryMismatch("Hamiltonian vectors at the shared end differ".into()));
    }
    let joint = Joint::new(&lower.ends, &upper.ends)?;
    let potential = gluing_pairing(&lower.potential, &upper.potential, alpha)?.rebase(&joint.joined);
    let ham_pos = upper.ham_pos.clone();
    let ham_neg = lower.ham_neg.clone();
    let trivial = lower.trivial && upper.trivial;
    CobordismData::from_parts(joint.joined, potential, ham_pos, ham_neg, trivial)
}

/// `w` over the upper cobordism, linearized with the lower potential fixed.
pub fn chain_map_lower(lower: &CobordismData, upper: &CobordismData, w: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    linearize_upper(&lower.potential, &upper.potential, w, alpha)
}

/// `w` over the lower cobordism, linearized with the upper potential fixed.
pub fn chain_map_upper(lower: &CobordismData, upper: &CobordismData, w: &DiskVector, alpha: Alpha) -> Result<DiskVector> {
    linearize_lower(&lower.potential, &upper.potential, w, alpha)
}
