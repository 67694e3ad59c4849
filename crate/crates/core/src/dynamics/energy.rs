use serde::{Deserialize, Serialize};

use crate::etienne::ShapeStats;
use crate::partitions::{q1_move, Partition};

/// One sampled row of an energy trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub move_index: u64,
    /// Doubled energy `2E`, exact.
    #[serde(rename = "E2x")]
    pub e2x: u64,
    #[serde(rename = "E_tilde")]
    pub e_tilde: f64,
    pub h_minus: u64,
    pub h_plus: u64,
    #[serde(rename = "V_minus")]
    pub v_minus: u64,
    #[serde(rename = "V_plus")]
    pub v_plus: u64,
}

impl TraceRow {
    pub fn new(move_index: u64, st: &ShapeStats) -> Self {
        Self {
            move_index,
            e2x: st.e_total2(),
            e_tilde: st.e_tilde(),
            h_minus: st.h_minus,
            h_plus: st.h_plus,
            v_minus: st.v_minus,
            v_plus: st.v_plus,
        }
    }
}

/// Shape statistics every `stride` moves over `moves` deterministic moves,
/// including move 0 and the final move.
pub fn energy_trace(s0: &Partition, moves: u64, stride: u64) -> Vec<TraceRow> {
    let stride = stride.max(1);
    let mut s = s0.clone();
    let mut rows = vec![TraceRow::new(0, &ShapeStats::of_partition(&s))];
    for t in 1..=moves {
        s = q1_move(&s);
        if t % stride == 0 || t == moves {
            rows.push(TraceRow::new(t, &ShapeStats::of_partition(&s)));
        }
    }
    rows
}

/// Normalised energy at the end of a block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub move_index: u64,
    pub e2x: u64,
    pub e_tilde: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyDecay {
    pub block_constant: f64,
    /// Block boundaries, starting with move 0.
    pub points: Vec<DecayPoint>,
    /// Whether the energy never increased on any single move.
    pub monotone: bool,
}

impl EnergyDecay {
    /// `E~` lost over each block.
    pub fn decrements(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| w[0].e_tilde - w[1].e_tilde)
            .collect()
    }

    /// `decrement / E~^10` per block, for blocks starting at positive energy.
    pub fn decay_rates(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .filter(|w| w[0].e2x > 0)
            .map(|w| (w[0].e_tilde - w[1].e_tilde) / w[0].e_tilde.powi(10))
            .collect()
    }

    pub fn final_e_tilde(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.e_tilde)
    }

    pub fn total_moves(&self) -> u64 {
        self.points.last().map_or(0, |p| p.move_index)
    }
}

/// Runs up to `stages` blocks of `ceil(c E~^-2 sqrt(N))` moves each, where `E~`
/// is taken at the start of the block.
///
/// Blocks are capped at `2N` moves: the orbit is on its cycle by then and the
/// energy is constant there. The run stops once the energy is zero or a capped
/// block leaves it unchanged.
pub fn energy_decay_experiment(s0: &Partition, stages: usize, block_constant: f64) -> EnergyDecay {
    let root = (s0.total() as f64).sqrt();
    let cap = 2 * s0.total() + 2;
    let mut s = s0.clone();
    let st = ShapeStats::of_partition(&s);
    let mut points = vec![DecayPoint {
        move_index: 0,
        e2x: st.e_total2(),
        e_tilde: st.e_tilde(),
    }];
    let mut monotone = true;
    let mut t = 0u64;
    for _ in 0..stages {
        let last = *points.last().expect("nonempty");
        if last.e2x == 0 {
            break;
        }
        let wanted = (block_constant * root / (last.e_tilde * last.e_tilde))
            .ceil()
            .max(1.0);
        let len = if wanted >= cap as f64 {
            cap
        } else {
            wanted as u64
        };
        let mut prev = last.e2x;
        for _ in 0..len {
            s = q1_move(&s);
            let e = ShapeStats::of_partition(&s).e_total2();
            monotone &= e <= prev;
            prev = e;
        }
        t += len;
        let st = ShapeStats::of_partition(&s);
        points.push(DecayPoint {
            move_index: t,
            e2x: st.e_total2(),
            e_tilde: st.e_tilde(),
        });
        if len == cap && st.e_total2() == last.e2x {
            break;
        }
    }
    EnergyDecay {
        block_constant,
        points,
        monotone,
    }
}
