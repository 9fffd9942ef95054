//! Integer partitions (Young diagrams) and the orders used on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Weakly decreasing sequence of positive integers; trailing zeros are trimmed.
///
/// The derived `Ord` is the lexicographic order on the parts, which is a
/// linear extension of the dominance order on partitions of equal size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

/// Derived quantities of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStats {
    pub conjugate: Partition,
    pub n_lambda: u64,
    pub double_union: Partition,
    pub size: u64,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts into decreasing order first.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// `i`-th part, 0-based, zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `n`; `None` if the partition is longer.
    pub fn padded(&self, n: usize) -> Option<Vec<u32>> {
        if self.len() > n {
            return None;
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        Some(v)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0) as usize;
        let parts = (1..=first)
            .map(|j| self.0.iter().filter(|&&p| p as usize >= j).count() as u32)
            .collect();
        Partition(parts)
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// `(2λ₁, 2λ₁, 2λ₂, 2λ₂, …)`.
    pub fn double_union(&self) -> Partition {
        Partition(self.0.iter().flat_map(|&p| [2 * p, 2 * p]).collect())
    }

    pub fn stats(&self) -> PartitionStats {
        PartitionStats {
            conjugate: self.conjugate(),
            n_lambda: self.n(),
            double_union: self.double_union(),
            size: self.size() as u64,
        }
    }

    /// Boxes `(i, j)` of the diagram, 1-based row and column, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    /// Diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(o, s)| o <= s)
    }

    /// Dominance `other ≤ self`; only partitions of equal size are comparable.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..self.len().max(other.len()) {
            a += self.part(i) as u64;
            b += other.part(i) as u64;
            if b > a {
                return false;
            }
        }
        true
    }
}

/// Size first, then lexicographic; a total order extending dominance within each degree.
pub fn graded_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| a.cmp(b))
}

/// All partitions of `n` with at most `max_len` parts, lexicographically decreasing.
pub fn partitions_of(n: usize, max_len: usize) -> Vec<Partition> {
    fn rec(
        rem: usize,
        max_part: usize,
        slots: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p as u32);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_len, &mut Vec::new(), &mut out);
    out
}

/// All partitions of size `≤ d` with at most `max_len` parts, in increasing [`graded_cmp`] order.
pub fn partitions_up_to(d: usize, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for n in 0..=d {
        let mut level = partitions_of(n, max_len);
        level.reverse();
        out.extend(level);
    }
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"2,1"`, `"(2,1)"`, `"[2,1]"`, or an empty string / `"()"` for ∅.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']'])
            .trim();
        if inner.is_empty() || inner == "∅" {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}
