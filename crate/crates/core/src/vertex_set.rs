//! Dense bit-indexed vertex subsets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GraphError;

const WORD: usize = 64;

/// A subset of `{0, .., universe_size - 1}` stored as a bitset.
///
/// This is the common currency for dominating sets, packings, witnesses and
/// construction certificates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for v in 0..universe {
            set.insert_unchecked(v);
        }
        set
    }

    /// Builds a set from member indices, rejecting anything outside the universe.
    pub fn from_indices<I>(universe: usize, members: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(universe);
        for v in members {
            if v >= universe {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: universe });
            }
            set.insert_unchecked(v);
        }
        Ok(set)
    }

    /// Builds a set from the low `universe` bits of a mask. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask sets hold at most 64 vertices");
        let mut set = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == WORD { u64::MAX } else { (1u64 << universe) - 1 };
            set.words[0] = mask & keep;
        }
        set
    }

    /// The set as a single-word mask, if the universe fits in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] & (1u64 << (v % WORD)) != 0
    }

    pub fn insert(&mut self, v: usize) -> Result<bool, GraphError> {
        if v >= self.universe {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.universe });
        }
        let fresh = !self.contains(v);
        self.insert_unchecked(v);
        Ok(fresh)
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if !self.contains(v) {
            return false;
        }
        self.words[v / WORD] &= !(1u64 << (v % WORD));
        true
    }

    fn insert_unchecked(&mut self, v: usize) {
        self.words[v / WORD] |= 1u64 << (v % WORD);
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::full(self.universe);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o &= !w;
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        VertexSet { universe: self.universe, words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        VertexSet { universe: self.universe, words }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Comma-separated ascending member list, e.g. `0,2,5`.
impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

// Serialized as the sorted member list; the universe travels with the enclosing record.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Plain member list, used when deserializing reports. The universe is taken
/// as one past the largest member.
impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        let universe = members.iter().max().map_or(0, |m| m + 1);
        VertexSet::from_indices(universe, members).map_err(serde::de::Error::custom)
    }
}

/// Parses a set literal such as `"0,2,5"` (whitespace tolerated, empty string = empty set).
pub fn parse_set_literal(universe: usize, text: &str) -> Result<VertexSet, GraphError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(VertexSet::empty(universe));
    }
    let mut members = Vec::new();
    for token in trimmed.split(',') {
        let token = token.trim();
        let v: usize = token
            .parse()
            .map_err(|_| GraphError::MalformedSet(format!("`{token}` is not a vertex index")))?;
        members.push(v);
    }
    VertexSet::from_indices(universe, members)
}
