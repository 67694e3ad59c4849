//! Etienne diagrams.
//!
//! Cards live in the cells of the half-quadrant `{(i, j) : i >= 1, 1 <= j <= i}`,
//! at most one per cell. Pile `n` of size `k_n` occupies the cells
//! `(n + m - 1, m)` for `m = 1..=k_n`, so row `i` is an anti-diagonal of the
//! Young diagram and column `j` collects the `j`-th card of every pile.
//!
//! In this picture a deterministic move is a cyclic shift of every row
//! (`(i, j) -> (i, j - 1)`, with `(i, 1)` wrapping to `(i, i)`) followed by
//! gravity: particles fall down their column into empty cells until nothing
//! can move. Each unit fall lowers the energy by exactly one.

mod render;
mod stats;
mod trajectory;

use crate::error::{Error, Result};
use crate::partitions::Partition;

pub use render::{to_svg, to_text_grid};
pub use stats::{shape_stats, ShapeStats};
pub use trajectory::{j_hat, track, CellKind, Tracker, TrajectoryRecord};

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    bits: Vec<u64>,
    count: usize,
}

impl Row {
    fn new(width: usize) -> Self {
        Self {
            bits: vec![0; width.div_ceil(WORD)],
            count: 0,
        }
    }

    #[inline]
    fn get(&self, col: usize) -> bool {
        let b = col - 1;
        self.bits[b / WORD] >> (b % WORD) & 1 == 1
    }

    #[inline]
    fn set(&mut self, col: usize, on: bool) {
        let b = col - 1;
        let mask = 1u64 << (b % WORD);
        let word = &mut self.bits[b / WORD];
        let was = *word & mask != 0;
        if on && !was {
            *word |= mask;
            self.count += 1;
        } else if !on && was {
            *word &= !mask;
            self.count -= 1;
        }
    }

    /// Rotate a row of `width` cells one step to the left, column 1 wrapping to `width`.
    fn rotate(&mut self, width: usize) {
        let first = self.bits[0] & 1;
        let words = self.bits.len();
        for w in 0..words {
            let carry = if w + 1 < words {
                self.bits[w + 1] & 1
            } else {
                0
            };
            self.bits[w] = (self.bits[w] >> 1) | (carry << (WORD - 1));
        }
        let b = width - 1;
        self.bits[b / WORD] |= first << (b % WORD);
    }
}

/// Occupancy of the half-quadrant. Row `i` (1-based) has `i` cells; rows are
/// stored up to the highest occupied one.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EtienneDiagram {
    rows: Vec<Row>,
}

impl EtienneDiagram {
    pub fn from_partition(s: &Partition) -> Self {
        let height = s
            .piles()
            .iter()
            .enumerate()
            .map(|(a, &k)| a + k as usize)
            .max()
            .unwrap_or(0);
        let mut d = Self {
            rows: (1..=height).map(Row::new).collect(),
        };
        for (a, &k) in s.piles().iter().enumerate() {
            for m in 1..=k as usize {
                d.rows[a + m - 1].set(m, true);
            }
        }
        d
    }

    /// Builds a diagram from occupied cells, checking the two occupancy laws.
    pub fn from_cells<I: IntoIterator<Item = (usize, usize)>>(cells: I) -> Result<Self> {
        let mut d = Self::default();
        for (i, j) in cells {
            if i == 0 || j == 0 || j > i {
                return Err(Error::Precondition(format!(
                    "cell ({i},{j}) is outside the half-quadrant"
                )));
            }
            while d.rows.len() < i {
                let width = d.rows.len() + 1;
                d.rows.push(Row::new(width));
            }
            d.rows[i - 1].set(j, true);
        }
        d.trim();
        if !d.satisfies_occupancy_laws() {
            return Err(Error::Precondition(
                "cells do not encode a partition".into(),
            ));
        }
        Ok(d)
    }

    pub fn to_partition(&self) -> Partition {
        let mut piles = Vec::new();
        let mut a = 1;
        while self.is_occupied(a, 1) {
            let mut m = 1;
            while self.is_occupied(a + m, m + 1) {
                m += 1;
            }
            piles.push(m as u64);
            a += 1;
        }
        Partition::new(piles).expect("occupancy laws imply sorted piles")
    }

    /// Whether `(i, j)` holds a particle; cells outside the stored rows are empty.
    pub fn is_occupied(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && j <= i && i <= self.rows.len() && self.rows[i - 1].get(j)
    }

    /// Highest occupied row `H` (0 when empty).
    pub fn height(&self) -> usize {
        self.rows.len()
    }

    /// Occupied cells in row `i`.
    pub fn row_count(&self, i: usize) -> usize {
        if i >= 1 && i <= self.rows.len() {
            self.rows[i - 1].count
        } else {
            0
        }
    }

    /// Number of particles, i.e. cards.
    pub fn particle_count(&self) -> u64 {
        self.rows.iter().map(|r| r.count as u64).sum()
    }

    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.rows.len()).flat_map(move |i| {
            (1..=i)
                .filter(move |&j| self.is_occupied(i, j))
                .map(move |j| (i, j))
        })
    }

    /// Local form of the two staircase laws: an empty cell has empty cells at
    /// `(i+1, j)` and `(i+1, j+1)`; an occupied cell is supported at `(i-1, j)`
    /// (when in range) and `(i-1, j-1)` (when `j > 1`). Iterating these steps
    /// sweeps out exactly the regions the global laws quantify over.
    pub fn satisfies_occupancy_laws(&self) -> bool {
        let h = self.rows.len();
        for i in 1..=h + 1 {
            for j in 1..=i {
                if self.is_occupied(i, j) {
                    if i > 1 && j < i && !self.is_occupied(i - 1, j) {
                        return false;
                    }
                    if i > 1 && j > 1 && !self.is_occupied(i - 1, j - 1) {
                        return false;
                    }
                } else if self.is_occupied(i + 1, j) || self.is_occupied(i + 1, j + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// One deterministic move on a copy; returns the new diagram and the number
    /// of unit falls.
    pub fn etienne_move(&self) -> (Self, u64) {
        let mut next = self.clone();
        let falls = next.step();
        (next, falls)
    }

    /// One deterministic move in place; returns the number of unit falls.
    pub fn step(&mut self) -> u64 {
        self.shift();
        let mut buf = Vec::new();
        let mut falls = 0;
        for j in 1..=self.rows.len() {
            falls += self.settle_column(j, &mut buf);
        }
        self.trim();
        falls
    }

    /// Cyclic shift of every row.
    pub(crate) fn shift(&mut self) {
        for (idx, row) in self.rows.iter_mut().enumerate() {
            row.rotate(idx + 1);
        }
    }

    /// Lets every particle of column `j` fall as far as it can. `rows_before` is
    /// filled with the (ascending) rows the column's particles occupied before
    /// settling; they end up in rows `j, j+1, ...` in the same order.
    pub(crate) fn settle_column(&mut self, j: usize, rows_before: &mut Vec<usize>) -> u64 {
        rows_before.clear();
        rows_before.extend((j..=self.rows.len()).filter(|&i| self.rows[i - 1].get(j)));
        let mut falls = 0;
        for (rank, &i) in rows_before.iter().enumerate() {
            let target = j + rank;
            if target != i {
                self.rows[i - 1].set(j, false);
                self.rows[target - 1].set(j, true);
                falls += (i - target) as u64;
            }
        }
        falls
    }

    fn trim(&mut self) {
        while self.rows.last().is_some_and(|r| r.count == 0) {
            self.rows.pop();
        }
    }
}

pub fn from_partition(s: &Partition) -> EtienneDiagram {
    EtienneDiagram::from_partition(s)
}

pub fn to_partition(d: &EtienneDiagram) -> Partition {
    d.to_partition()
}

pub fn etienne_move(d: &EtienneDiagram) -> (EtienneDiagram, u64) {
    d.etienne_move()
}
