//! Formal disks as cyclic words of signed chord punctures.

use std::fmt;
use std::sync::Arc;

use crate::boundary::{zero, Action, Ends, ReebChord, Sym};
use crate::error::{Error, Result};

/// Declaration order is the token order used for canonical rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Puncture {
    pub chord: Sym,
    pub sign: Sign,
}

impl Puncture {
    pub fn new(chord: &str, sign: Sign) -> Self {
        Puncture { chord: Arc::from(chord), sign }
    }
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Positive => '+',
            Sign::Negative => '-',
        };
        write!(f, "{}{s}", self.chord)
    }
}

/// A formal disk, stored in its canonical (least) rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalDisk {
    word: Arc<[Puncture]>,
}

impl fmt::Display for FormalDisk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses whitespace separated `<chord>+` / `<chord>-` tokens.
pub fn parse_word(text: &str) -> Result<Vec<Puncture>> {
    text.split_whitespace()
        .map(|tok| {
            let (id, sign) = if let Some(id) = tok.strip_suffix('+') {
                (id, Sign::Positive)
            } else if let Some(id) = tok.strip_suffix('-') {
                (id, Sign::Negative)
            } else {
                return Err(Error::BadWord(format!("token `{tok}` lacks a trailing + or -")));
            };
            if id.is_empty() {
                return Err(Error::BadWord(format!("token `{tok}` has no chord id")));
            }
            Ok(Puncture::new(id, sign))
        })
        .collect()
}

/// Index of the least rotation.
pub(crate) fn least_rotation<T: Ord>(w: &[T]) -> usize {
    let m = w.len();
    let mut best = 0;
    for s in 1..m {
        for k in 0..m {
            let a = &w[(s + k) % m];
            let b = &w[(best + k) % m];
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    best
}

/// Resolved chord data of one puncture.
#[derive(Clone, Debug)]
pub(crate) struct Resolved<'a> {
    pub chord: &'a ReebChord,
    pub incoming: &'a Sym,
    pub outgoing: &'a Sym,
}

pub(crate) fn resolve<'a>(p: &Puncture, ends: &'a Ends) -> Result<Resolved<'a>> {
    let b = match p.sign {
        Sign::Positive => &ends.pos,
        Sign::Negative => &ends.neg,
    };
    let chord = b.chord(&p.chord).ok_or_else(|| Error::UnknownChord(p.to_string()))?;
    let (incoming, outgoing) = match p.sign {
        Sign::Positive => (&chord.start, &chord.end),
        Sign::Negative => (&chord.end, &chord.start),
    };
    Ok(Resolved { chord, incoming, outgoing })
}

/// Canonical rotation of an arc-consistent word.
pub fn canonicalize(word: Vec<Puncture>, ends: &Ends) -> Result<FormalDisk> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let res = word.iter().map(|p| resolve(p, ends)).collect::<Result<Vec<_>>>()?;
    let m = word.len();
    for i in 0..m {
        let j = (i + 1) % m;
        if res[i].outgoing != res[j].incoming {
            return Err(Error::ArcMismatch {
                left: i,
                left_token: word[i].to_string(),
                out: res[i].outgoing.to_string(),
                right: j,
                right_token: word[j].to_string(),
                inc: res[j].incoming.to_string(),
            });
        }
    }
    Ok(FormalDisk::from_consistent(word))
}

impl FormalDisk {
    /// Canonicalizes a word already known to be arc-consistent.
    pub(crate) fn from_consistent(mut word: Vec<Puncture>) -> Self {
        let s = least_rotation(&word);
        word.rotate_left(s);
        FormalDisk { word: word.into() }
    }

    pub fn parse(text: &str, ends: &Ends) -> Result<Self> {
        canonicalize(parse_word(text)?, ends)
    }

    pub fn word(&self) -> &[Puncture] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Number of positive punctures; the filtration level.
    pub fn positives(&self) -> usize {
        self.word.iter().filter(|p| p.sign == Sign::Positive).count()
    }

    fn resolved<'a>(&self, ends: &'a Ends) -> Vec<Resolved<'a>> {
        self.word
            .iter()
            .map(|p| resolve(p, ends).unwrap_or_else(|e| panic!("disk [{self}] does not live over these ends: {e}")))
            .collect()
    }

    fn signed_sum(&self, ends: &Ends, sign: Sign) -> Action {
        self.word
            .iter()
            .zip(self.resolved(ends))
            .filter(|(p, _)| p.sign == sign)
            .fold(zero(), |acc, (_, r)| acc + r.chord.action)
    }

    pub fn action_plus(&self, ends: &Ends) -> Action {
        self.signed_sum(ends, Sign::Positive)
    }

    pub fn action_minus(&self, ends: &Ends) -> Action {
        self.signed_sum(ends, Sign::Negative)
    }

    pub fn action(&self, ends: &Ends) -> Action {
        self.action_plus(ends) - self.action_minus(ends)
    }

    /// Σ_pos |c| − Σ_neg |c| + 1 − #positives.
    pub fn degree(&self, ends: &Ends) -> i64 {
        let mut d = 1;
        for (p, r) in self.word.iter().zip(self.resolved(ends)) {
            match p.sign {
                Sign::Positive => d += r.chord.grading - 1,
                Sign::Negative => d -= r.chord.grading,
            }
        }
        d
    }

    /// Component label of arc `i`, the arc following puncture `i`.
    pub fn arcs(&self, ends: &Ends) -> Vec<Sym> {
        self.resolved(ends).into_iter().map(|r| r.outgoing.clone()).collect()
    }

    fn arc_pieces(&self, ends: &Ends) -> Vec<Sym> {
        self.arcs(ends)
            .iter()
            .map(|c| ends.piece_of(c).cloned().unwrap_or_else(|| panic!("component `{c}` has no piece")))
            .collect()
    }

    /// Per puncture: is the chord mixed.
    pub fn mixed_flags(&self, ends: &Ends) -> Vec<bool> {
        self.resolved(ends).iter().map(|r| ends.piece_of(r.incoming) != ends.piece_of(r.outgoing)).collect()
    }

    pub fn mixed_count(&self, ends: &Ends) -> usize {
        self.mixed_flags(ends).into_iter().filter(|&m| m).count()
    }

    /// A chord strip `[c+ c-]` with identical chord data at both ends.
    pub fn is_strip(&self, ends: &Ends) -> bool {
        match &*self.word {
            [a, b] => {
                a.chord == b.chord
                    && a.sign == Sign::Positive
                    && b.sign == Sign::Negative
                    && crate::boundary::same_chord(&ends.pos, &ends.neg, &a.chord)
            }
            _ => false,
        }
    }

    /// Admissibility in the sense of conditions (a1) and (a2).
    pub fn is_admissible(&self, ends: &Ends) -> bool {
        let flags = self.mixed_flags(ends);
        let bad: Vec<bool> =
            self.word.iter().zip(&flags).map(|(p, &mixed)| p.sign == Sign::Positive || mixed).collect();
        self.word.iter().any(|p| p.sign == Sign::Positive) && segments_ok(&self.arc_pieces(ends), &bad)
    }

    /// Punctures ordered along the given piece; see the module docs of
    /// [`crate::gluing`] for how the order is used.
    pub fn order_punctures(&self, ends: &Ends, piece: &str) -> Result<Vec<usize>> {
        let pieces = self.arc_pieces(ends);
        let flags = self.mixed_flags(ends);
        let on: Vec<bool> = pieces.iter().map(|p| &**p == piece).collect();
        match order_start(&on, &flags, self.word.iter().map(|p| p.sign == Sign::Positive)) {
            OrderStart::NoArc => Err(Error::NoArcOnPiece { disk: self.to_string(), piece: piece.to_string() }),
            OrderStart::ManyRuns => Err(Error::TooManyMixed(self.to_string())),
            OrderStart::At(s) => {
                let m = self.word.len();
                Ok((0..m).map(|k| (s + k) % m).collect())
            }
        }
    }
}

/// Optimized (a2): for each piece, at most one of the circle segments cut
/// out by its arcs may hold a positive or mixed puncture.
pub(crate) fn segments_ok<P: PartialEq>(arc_piece: &[P], bad: &[bool]) -> bool {
    let m = arc_piece.len();
    let mut done = vec![false; m];
    for i in 0..m {
        if done[i] {
            continue;
        }
        let on: Vec<usize> = (0..m).filter(|&j| arc_piece[j] == arc_piece[i]).collect();
        for &j in &on {
            done[j] = true;
        }
        if on.len() < 2 {
            continue;
        }
        let mut bad_segments = 0;
        for (t, &a) in on.iter().enumerate() {
            let b = on[(t + 1) % on.len()];
            // Punctures a+1 ..= b (cyclically) lie between arcs a and b.
            let mut x = (a + 1) % m;
            let mut hit = false;
            loop {
                hit |= bad[x];
                if x == b {
                    break;
                }
                x = (x + 1) % m;
            }
            if hit {
                bad_segments += 1;
                if bad_segments > 1 {
                    return false;
                }
            }
        }
    }
    true
}

pub(crate) enum OrderStart {
    NoArc,
    ManyRuns,
    At(usize),
}

/// Start puncture of the order along a piece, given which arcs lie on it.
pub(crate) fn order_start(on: &[bool], mixed: &[bool], positive: impl Iterator<Item = bool>) -> OrderStart {
    let m = on.len();
    if !on.iter().any(|&x| x) {
        return OrderStart::NoArc;
    }
    if !mixed.iter().any(|&x| x) {
        // Pure case: start right after the positive puncture.
        let pos: Vec<usize> = positive.enumerate().filter(|(_, p)| *p).map(|(i, _)| i).collect();
        return match pos.as_slice() {
            [p] => OrderStart::At((p + 1) % m),
            _ => OrderStart::ManyRuns,
        };
    }
    // Mixed case: the puncture entering the unique run of arcs on the piece.
    let entries: Vec<usize> = (0..m).filter(|&i| on[i] && !on[(i + m - 1) % m]).collect();
    match entries.as_slice() {
        [s] => OrderStart::At(*s),
        _ => OrderStart::ManyRuns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::*;

    #[test]
    fn canonical_rotation_and_text() {
        let ends = twist1_ends();
        let d = FormalDisk::parse("b- a+", &ends).unwrap();
        assert_eq!(d.to_string(), "a+ b-");
        assert_eq!(FormalDisk::parse("a+ b-", &ends).unwrap(), d);
    }

    #[test]
    fn arc_mismatch_is_named() {
        let ends = twist1_reversed_b_ends();
        let e = FormalDisk::parse("a+ b-", &ends).unwrap_err();
        assert!(matches!(e, Error::ArcMismatch { .. }), "{e}");
    }

    #[test]
    fn empty_word_rejected() {
        assert_eq!(FormalDisk::parse("", &twist1_ends()).unwrap_err(), Error::EmptyWord);
    }

    #[test]
    fn actions_and_degrees() {
        let ends = twist1_ends();
        let h = FormalDisk::parse("a+ b-", &ends).unwrap();
        assert_eq!(h.action_plus(&ends), act("3"));
        assert_eq!(h.action_minus(&ends), act("1"));
        assert_eq!(h.action(&ends), act("2"));
        assert_eq!(h.degree(&ends), 1);
        let g = FormalDisk::parse("b+ a-", &ends).unwrap();
        assert_eq!(g.degree(&ends), -1);
        let s = FormalDisk::parse("a+ a-", &ends).unwrap();
        assert_eq!(s.action(&ends), act("0"));
        assert_eq!(s.degree(&ends), 0);
        assert!(s.is_strip(&ends));
    }

    #[test]
    fn admissibility_examples() {
        let ends = twist1_ends();
        assert!(FormalDisk::parse("a+ b-", &ends).unwrap().is_admissible(&ends));
        assert!(!FormalDisk::parse("b+ b- b+ b-", &ends).unwrap().is_admissible(&ends));
        assert!(!FormalDisk::parse("a- b-", &ends).map(|d| d.is_admissible(&ends)).unwrap_or(false));
    }

    #[test]
    fn ordering_examples() {
        let ends = twist1_ends();
        let h = FormalDisk::parse("a+ b-", &ends).unwrap();
        assert_eq!(h.order_punctures(&ends, "P2").unwrap(), vec![0, 1]);
        let pure = pure_ends();
        let d = FormalDisk::parse("c+ d- e-", &pure).unwrap();
        let order: Vec<String> =
            d.order_punctures(&pure, "P1").unwrap().into_iter().map(|i| d.word()[i].to_string()).collect();
        assert_eq!(order, ["d-", "e-", "c+"]);
    }
}
