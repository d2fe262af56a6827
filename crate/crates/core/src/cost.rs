//! Costs extended with infinity, and per-player cost vectors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index};

/// A natural number or `∞`.
///
/// `∞` is the cost of a player whose target set is never visited. Addition
/// saturates: `∞ + x = ∞`. The derived order puts every finite value below
/// `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CostValue {
    Finite(u64),
    Infinite,
}

impl CostValue {
    pub const ZERO: CostValue = CostValue::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            CostValue::Finite(v) => Some(v),
            CostValue::Infinite => None,
        }
    }
}

impl Default for CostValue {
    fn default() -> Self {
        CostValue::ZERO
    }
}

impl From<u64> for CostValue {
    fn from(v: u64) -> Self {
        CostValue::Finite(v)
    }
}

impl Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a.saturating_add(b)),
            _ => CostValue::Infinite,
        }
    }
}

impl Add<u64> for CostValue {
    type Output = CostValue;

    fn add(self, rhs: u64) -> CostValue {
        self + CostValue::Finite(rhs)
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(v) => write!(f, "{v}"),
            CostValue::Infinite => f.write_str("inf"),
        }
    }
}

/// One [`CostValue`] per player, indexed by player ordinal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CostVector(Vec<CostValue>);

impl CostVector {
    pub fn new(entries: Vec<CostValue>) -> Self {
        CostVector(entries)
    }

    pub fn zeros(players: usize) -> Self {
        CostVector(vec![CostValue::ZERO; players])
    }

    pub fn finite(entries: &[u64]) -> Self {
        CostVector(entries.iter().map(|&v| CostValue::Finite(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[CostValue] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = CostValue> + '_ {
        self.0.iter().copied()
    }

    /// Componentwise `≤`. Vectors of different lengths are incomparable.
    pub fn le(&self, other: &CostVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self ≤ other` and `self ≠ other`.
    pub fn dominates(&self, other: &CostVector) -> bool {
        self != other && self.le(other)
    }

    /// Partial order under componentwise `≤`.
    pub fn partial_cmp_dominance(&self, other: &CostVector) -> Option<Ordering> {
        if self == other {
            Some(Ordering::Equal)
        } else if self.le(other) {
            Some(Ordering::Less)
        } else if other.le(self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Social utility: the sum of all entries.
    pub fn util(&self) -> CostValue {
        self.0.iter().fold(CostValue::ZERO, |acc, &c| acc + c)
    }
}

impl Index<usize> for CostVector {
    type Output = CostValue;

    fn index(&self, player: usize) -> &CostValue {
        &self.0[player]
    }
}

impl FromIterator<CostValue> for CostVector {
    fn from_iter<I: IntoIterator<Item = CostValue>>(iter: I) -> Self {
        CostVector(iter.into_iter().collect())
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Keeps the componentwise-minimal vectors of `vectors`, sorted and deduplicated.
///
/// Returns `None` when the vectors do not all have the same length.
pub fn pareto_filter<I>(vectors: I) -> Option<Vec<CostVector>>
where
    I: IntoIterator<Item = CostVector>,
{
    let mut all: Vec<CostVector> = vectors.into_iter().collect();
    if let Some(first) = all.first() {
        let n = first.len();
        if all.iter().any(|v| v.len() != n) {
            return None;
        }
    }
    all.sort();
    all.dedup();
    let minimal = all
        .iter()
        .filter(|v| !all.iter().any(|w| w.dominates(v)))
        .cloned()
        .collect();
    Some(minimal)
}
