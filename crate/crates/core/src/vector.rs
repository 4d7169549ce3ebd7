//! Finite Z₂-combinations of admissible formal disks with an action cutoff.

use std::collections::BTreeSet;
use std::fmt;

use crate::boundary::{format_action, Action, Ends};
use crate::disk::FormalDisk;
use crate::error::{Error, Result};

/// Truncation level: keep disks with 𝒜⁺ ≤ level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alpha {
    Finite(Action),
    Infinite,
}

impl Alpha {
    pub fn admits(&self, a: &Action) -> bool {
        match self {
            Alpha::Finite(x) => a <= x,
            Alpha::Infinite => true,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => f.write_str(&format_action(a)),
            Alpha::Infinite => f.write_str("inf"),
        }
    }
}

impl From<Action> for Alpha {
    fn from(a: Action) -> Self {
        Alpha::Finite(a)
    }
}

#[derive(Clone, Debug)]
pub struct DiskVector {
    ends: Ends,
    alpha: Alpha,
    support: BTreeSet<FormalDisk>,
}

impl PartialEq for DiskVector {
    fn eq(&self, other: &Self) -> bool {
        self.alpha == other.alpha && self.support == other.support && self.ends == other.ends
    }
}

impl DiskVector {
    pub fn zero(ends: &Ends, alpha: Alpha) -> Self {
        DiskVector { ends: ends.clone(), alpha, support: BTreeSet::new() }
    }

    /// Sums the given disks mod 2, dropping those above `alpha`.
    pub fn from_disks(ends: &Ends, alpha: Alpha, disks: impl IntoIterator<Item = FormalDisk>) -> Result<Self> {
        let mut v = Self::zero(ends, alpha);
        for d in disks {
            v.toggle(d)?;
        }
        Ok(v)
    }

    /// Parses disk-word strings.
    pub fn parse<S: AsRef<str>>(ends: &Ends, alpha: Alpha, words: &[S]) -> Result<Self> {
        let disks = words.iter().map(|w| FormalDisk::parse(w.as_ref(), ends)).collect::<Result<Vec<_>>>()?;
        Self::from_disks(ends, alpha, disks)
    }

    /// Adds one disk (mod 2). Non-admissible disks are rejected.
    pub fn toggle(&mut self, d: FormalDisk) -> Result<()> {
        if !d.is_admissible(&self.ends) {
            return Err(Error::NotAdmissible(d.to_string()));
        }
        self.toggle_unchecked(d);
        Ok(())
    }

    pub(crate) fn toggle_unchecked(&mut self, d: FormalDisk) {
        if !self.alpha.admits(&d.action_plus(&self.ends)) {
            return;
        }
        if !self.support.remove(&d) {
            self.support.insert(d);
        }
    }

    pub fn ends(&self) -> &Ends {
        &self.ends
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, d: &FormalDisk) -> bool {
        self.support.contains(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FormalDisk> {
        self.support.iter()
    }

    /// Disk words in canonical sorted order.
    pub fn words(&self) -> Vec<String> {
        self.support.iter().map(|d| d.to_string()).collect()
    }

    pub fn add(&self, other: &DiskVector) -> Result<DiskVector> {
        if self.ends != other.ends {
            return Err(Error::BoundaryMismatch("vectors live over different ends".into()));
        }
        let alpha = self.alpha.min(other.alpha);
        let mut out = DiskVector::zero(&self.ends, alpha);
        for d in self.support.symmetric_difference(&other.support) {
            out.toggle_unchecked(d.clone());
        }
        Ok(out)
    }

    /// Drops disks with 𝒜⁺ above `beta`.
    pub fn project(&self, beta: Alpha) -> Result<DiskVector> {
        if beta > self.alpha {
            return Err(Error::ProjectAbove { beta: beta.to_string(), alpha: self.alpha.to_string() });
        }
        let mut out = DiskVector::zero(&self.ends, beta);
        for d in &self.support {
            out.toggle_unchecked(d.clone());
        }
        Ok(out)
    }

    /// Same support, reinterpreted over ends that agree on every chord used.
    pub(crate) fn rebase(&self, ends: &Ends) -> DiskVector {
        DiskVector { ends: ends.clone(), alpha: self.alpha, support: self.support.clone() }
    }

    /// Keeps only disks with exactly `p` positive punctures.
    pub fn graded_part(&self, p: usize) -> DiskVector {
        let mut out = DiskVector::zero(&self.ends, self.alpha);
        out.support = self.support.iter().filter(|d| d.positives() == p).cloned().collect();
        out
    }
}

impl fmt::Display for DiskVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{d}]")?;
        }
        f.write_str("}")
    }
}
