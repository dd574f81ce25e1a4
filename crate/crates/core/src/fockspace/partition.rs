use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer partition labelling a Fock basis state `α_{-λ1} ⋯ α_{-λk} 1`.
///
/// Parts are stored non-increasing. The empty partition is the vacuum.
/// Ordering is graded-lexicographic: by weight first, then lexicographically on
/// the part sequence, so within a weight `[1,1,1] < [2,1] < [3]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn vacuum() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition { parts })
    }

    /// Panics on zero parts; for literals in tests and examples.
    pub fn from_parts(parts: &[u32]) -> Self {
        Self::new(parts.to_vec()).expect("parts must be positive")
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.parts.iter().map(|&p| p as i64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    pub fn with_part(&self, part: u32) -> Self {
        let pos = self.parts.iter().position(|&p| p < part).unwrap_or(self.parts.len());
        let mut parts = self.parts.clone();
        parts.insert(pos, part);
        Partition { parts }
    }

    /// Removes one copy of `part`, if present.
    pub fn without_part(&self, part: u32) -> Option<Self> {
        let pos = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    /// Splits off the largest part: `λ = (m) ∪ rest`.
    pub fn split_first(&self) -> Option<(u32, Partition)> {
        let (&m, rest) = self.parts.split_first()?;
        Some((m, Partition { parts: rest.to_vec() }))
    }

    /// All partitions of `w` in ascending graded-lex order.
    pub fn all_of_weight(w: i64) -> Vec<Partition> {
        if w < 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(w as u32, w as u32, &mut cur, &mut out);
        out.sort();
        out
    }
}

fn fill(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        cur.push(p);
        fill(remaining - p, p, cur, out);
        cur.pop();
    }
}

/// Number of partitions of `w` (zero for negative `w`).
pub fn partition_count(w: i64) -> u64 {
    if w < 0 {
        return 0;
    }
    let w = w as usize;
    let mut table = vec![0u64; w + 1];
    table[0] = 1;
    for part in 1..=w {
        for total in part..=w {
            table[total] += table[total - part];
        }
    }
    table[w]
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "vac");
        }
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).ok_or_else(|| serde::de::Error::custom("partition parts must be positive"))
    }
}
