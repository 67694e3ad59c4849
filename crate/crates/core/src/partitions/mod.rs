//! Partitions of a deck into piles, and the operators acting on them.

mod enumerate;
mod moves;
mod reference;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use enumerate::{enumerate_partitions, MAX_ENUMERATION_CARDS};
pub use moves::{q1_move, qp_move, qp_transition_distribution, BernoulliField, MAX_KERNEL_PILES};
pub(crate) use reference::snapped_ceil;
pub use reference::{
    in_g, in_rough_triangle, is_nondegenerate, scaled_radius, t0_config, triangle_side,
    triangular_number, triangular_target, TriangularTarget,
};

/// A configuration of the game: pile sizes in non-increasing order, zeros removed.
///
/// Ordering is lexicographic on the pile sequence, which gives a stable key for
/// maps over the state space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    piles: Vec<u64>,
    total: u64,
}

impl Partition {
    /// Validates that `piles` is already non-increasing and zero-free.
    pub fn new(piles: Vec<u64>) -> Result<Self> {
        if piles.contains(&0) {
            return Err(Error::Parse(
                render(&piles),
                "pile sizes must be positive".into(),
            ));
        }
        if piles.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(
                render(&piles),
                "pile sizes must be non-increasing".into(),
            ));
        }
        Ok(Self::from_sorted(piles))
    }

    /// Sorts `sizes` in decreasing order and discards zeros.
    pub fn ord<I: IntoIterator<Item = u64>>(sizes: I) -> Self {
        let mut piles: Vec<u64> = sizes.into_iter().filter(|&k| k > 0).collect();
        piles.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(piles)
    }

    pub(crate) fn from_sorted(piles: Vec<u64>) -> Self {
        debug_assert!(piles.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(piles.last().is_none_or(|&k| k > 0));
        let total = piles.iter().sum();
        Self { piles, total }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The staircase `(k, k-1, ..., 1)`.
    pub fn staircase(k: u64) -> Self {
        Self::from_sorted((1..=k).rev().collect())
    }

    pub fn single_pile(n: u64) -> Self {
        Self::ord([n])
    }

    pub fn piles(&self) -> &[u64] {
        &self.piles
    }

    pub fn into_piles(self) -> Vec<u64> {
        self.piles
    }

    /// Number of piles.
    pub fn len(&self) -> usize {
        self.piles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.piles.is_empty()
    }

    /// Size of the biggest pile (0 when empty).
    pub fn largest(&self) -> u64 {
        self.piles.first().copied().unwrap_or(0)
    }

    /// Number of cards.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Size of pile `j` (1-based), reading missing piles as 0.
    pub fn pile(&self, j: usize) -> u64 {
        j.checked_sub(1)
            .and_then(|i| self.piles.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// Sup-distance between the two pile sequences, padding with zeros.
    pub fn rho(&self, other: &Partition) -> u64 {
        let n = self.len().max(other.len());
        (1..=n)
            .map(|j| self.pile(j).abs_diff(other.pile(j)))
            .max()
            .unwrap_or(0)
    }

    /// Componentwise domination: no more piles than `other`, and each pile no
    /// bigger than the pile of the same rank in `other`.
    pub fn leq(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.piles.iter().zip(&other.piles).all(|(a, b)| a <= b)
    }

    pub fn is_staircase(&self) -> bool {
        let k = self.len() as u64;
        self.piles
            .iter()
            .enumerate()
            .all(|(i, &v)| v == k - i as u64)
    }
}

pub fn rho(s1: &Partition, s2: &Partition) -> u64 {
    s1.rho(s2)
}

pub fn leq(s1: &Partition, s2: &Partition) -> bool {
    s1.leq(s2)
}

fn render(piles: &[u64]) -> String {
    let mut out = String::new();
    for (i, k) in piles.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&k.to_string());
    }
    out
}

/// Canonical text form: comma-separated pile sizes, e.g. `5,3,2,1`. The empty
/// partition renders as the empty string.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.piles))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let piles = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(s.to_string(), format!("`{}`: {e}", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(piles)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A probability in `(0, 1]`. Zero is rejected: with `p = 0` nothing ever moves.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ONE: Probability = Probability(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidProbability(p, "(0, 1]"))
        }
    }

    /// Like [`Probability::new`] but also rejects `p = 1`, for the truly random game.
    pub fn strictly_random(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidProbability(p, "(0, 1)"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}
