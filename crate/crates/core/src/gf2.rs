//! Bit-packed GF(2) vectors and an incremental echelon form.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut b = Self::zeros(len);
        b.set(i);
        b
    }

    pub fn from_indices(len: usize, ix: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::zeros(len);
        for i in ix {
            b.flip(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// Rows with distinct leading bits; each row carries a tag recording how it
/// was combined from inserted vectors.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    rows: BTreeMap<usize, (Bits, Bits)>,
    tag_len: usize,
}

impl Echelon {
    pub fn new(tag_len: usize) -> Self {
        Echelon { rows: BTreeMap::new(), tag_len }
    }

    /// Reduces `v` against the rows; returns the remainder and the combined tag.
    pub fn reduce(&self, mut v: Bits) -> (Bits, Bits) {
        let mut tag = Bits::zeros(self.tag_len);
        for (&p, (row, t)) in &self.rows {
            if v.get(p) {
                v.xor(row);
                tag.xor(t);
            }
        }
        (v, tag)
    }

    /// Inserts `v` with `tag`. Returns `None` if independent, otherwise the
    /// tag combination that reduces to zero.
    pub fn insert(&mut self, v: Bits, tag: Bits) -> Option<Bits> {
        let (r, mut t) = self.reduce(v);
        t.xor(&tag);
        match r.first_one() {
            Some(p) => {
                self.rows.insert(p, (r, t));
                None
            }
            None => Some(t),
        }
    }
}

/// Kernel of the map sending `domain[j]` to `images[j]`, as combinations of `domain`.
pub(crate) fn kernel(domain: &[Bits], images: &[Bits]) -> Vec<Bits> {
    let mut e = Echelon::new(domain.len());
    let mut out = Vec::new();
    for (j, im) in images.iter().enumerate() {
        if let Some(t) = e.insert(im.clone(), Bits::unit(domain.len(), j)) {
            let mut x = Bits::zeros(domain.first().map_or(0, |d| d.len()));
            for i in t.ones() {
                x.xor(&domain[i]);
            }
            out.push(x);
        }
    }
    out
}
