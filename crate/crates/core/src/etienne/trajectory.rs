//! Particle and hole trajectories under repeated moves.
//!
//! Identities follow the natural correspondence: the shift carries every cell
//! of row `i` one column to the left (column 1 wraps to column `i`), and a unit
//! fall swaps a particle with the hole directly below it. Within a column the
//! particles keep their vertical order while settling, so a particle with `r`
//! particles below it ends in row `j + r`, and a hole rises by one for every
//! particle above it.

use serde::{Deserialize, Serialize};

use super::EtienneDiagram;
use crate::error::{Error, Result};

/// Column a tracked cell would reach after `n` moves if it never changed row.
pub fn j_hat(i: u64, j: u64, n: u64) -> u64 {
    debug_assert!(1 <= j && j <= i);
    let turns = n / i;
    let rest = n - i * turns;
    if rest < j {
        j + i * turns - n
    } else {
        j + i * (turns + 1) - n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Particle,
    Hole,
}

/// Where the content of `origin` is after `moves` moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub origin: (u64, u64),
    pub kind: CellKind,
    /// Current row: `i - M` for a particle, `i + M` for a hole.
    pub row: u64,
    /// Current column `J`.
    pub column: u64,
    /// Number of unit vertical moves so far `M` (falls for particles, rises for holes).
    pub vertical_moves: u64,
    pub moves: u64,
    /// Predicted column `J-hat` for the origin row.
    pub j_hat: u64,
}

impl TrajectoryRecord {
    fn turns_times_m(&self) -> u64 {
        self.moves / self.origin.0 * self.vertical_moves
    }

    /// The drift bound `floor(n / i) * M`.
    pub fn drift_bound(&self) -> u64 {
        self.turns_times_m()
    }

    /// Whether the record satisfies the hypothesis under which the drift bound is
    /// claimed: `i - J-hat > floor(n/i) M` for a hole, `J-hat > floor(n/i) M` for a
    /// particle.
    pub fn drift_hypothesis(&self) -> bool {
        let bound = self.turns_times_m();
        match self.kind {
            CellKind::Hole => self.origin.0 - self.j_hat > bound,
            CellKind::Particle => self.j_hat > bound,
        }
    }

    /// `|J - J-hat|`.
    pub fn drift(&self) -> u64 {
        self.column.abs_diff(self.j_hat)
    }
}

#[derive(Clone, Copy, Debug)]
struct Tracked {
    origin: (usize, usize),
    kind: CellKind,
    row: usize,
    column: usize,
    vertical_moves: u64,
}

/// A diagram evolving under deterministic moves while following a set of cells.
#[derive(Clone, Debug)]
pub struct Tracker {
    diagram: EtienneDiagram,
    items: Vec<Tracked>,
    moves: u64,
    by_column: Vec<Vec<usize>>,
    rows_before: Vec<usize>,
}

impl Tracker {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(
        diagram: EtienneDiagram,
        cells: I,
    ) -> Result<Self> {
        let items = cells
            .into_iter()
            .map(|(i, j)| {
                if i == 0 || j == 0 || j > i {
                    return Err(Error::Precondition(format!(
                        "cell ({i},{j}) is outside the half-quadrant"
                    )));
                }
                let kind = if diagram.is_occupied(i, j) {
                    CellKind::Particle
                } else {
                    CellKind::Hole
                };
                Ok(Tracked {
                    origin: (i, j),
                    kind,
                    row: i,
                    column: j,
                    vertical_moves: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            diagram,
            items,
            moves: 0,
            by_column: Vec::new(),
            rows_before: Vec::new(),
        })
    }

    /// Every cell in rows `1..=rows`, particles and holes alike.
    pub fn all_cells(diagram: EtienneDiagram, rows: usize) -> Self {
        let cells: Vec<_> = (1..=rows)
            .flat_map(|i| (1..=i).map(move |j| (i, j)))
            .collect();
        Self::new(diagram, cells).expect("cells in range")
    }

    pub fn diagram(&self) -> &EtienneDiagram {
        &self.diagram
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    /// One move; returns the number of unit falls.
    pub fn step(&mut self) -> u64 {
        self.diagram.shift();
        for t in &mut self.items {
            t.column = if t.column > 1 { t.column - 1 } else { t.row };
        }

        let h = self.diagram.height();
        self.by_column.iter_mut().for_each(Vec::clear);
        self.by_column.resize_with(h + 1, Vec::new);
        for (idx, t) in self.items.iter().enumerate() {
            // nothing sits above row h, so cells there never move vertically
            if t.row <= h {
                self.by_column[t.column].push(idx);
            }
        }

        let mut falls = 0;
        for j in 1..=h {
            falls += self.diagram.settle_column(j, &mut self.rows_before);
            let rows = &self.rows_before;
            for &idx in &self.by_column[j] {
                let t = &mut self.items[idx];
                match t.kind {
                    CellKind::Particle => {
                        let rank = rows
                            .binary_search(&t.row)
                            .expect("tracked particle present");
                        let target = j + rank;
                        t.vertical_moves += (t.row - target) as u64;
                        t.row = target;
                    }
                    CellKind::Hole => {
                        let above = rows.len() - rows.partition_point(|&r| r < t.row);
                        t.vertical_moves += above as u64;
                        t.row += above;
                    }
                }
            }
        }
        self.diagram.trim();
        self.moves += 1;
        falls
    }

    pub fn advance(&mut self, n: u64) {
        for _ in 0..n {
            self.step();
        }
    }

    pub fn records(&self) -> impl Iterator<Item = TrajectoryRecord> + '_ {
        self.items.iter().map(move |t| TrajectoryRecord {
            origin: (t.origin.0 as u64, t.origin.1 as u64),
            kind: t.kind,
            row: t.row as u64,
            column: t.column as u64,
            vertical_moves: t.vertical_moves,
            moves: self.moves,
            j_hat: j_hat(t.origin.0 as u64, t.origin.1 as u64, self.moves),
        })
    }
}

/// Evolves `d` for `n` moves following `cells`, and reports where each one went.
pub fn track<I: IntoIterator<Item = (usize, usize)>>(
    d: &EtienneDiagram,
    cells: I,
    n: u64,
) -> Result<Vec<TrajectoryRecord>> {
    let mut tracker = Tracker::new(d.clone(), cells)?;
    tracker.advance(n);
    Ok(tracker.records().collect())
}
