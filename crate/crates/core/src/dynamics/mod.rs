//! Deterministic orbits (cycles, hitting times, energy decay) and the
//! immigration process that dominates the rescaled random game.

mod cycle;
mod energy;
mod hitting;
mod immigration;

pub use cycle::{brent, detect_cycle, within_staircase_envelope, worst_case_config, CycleReport};
pub use energy::{energy_decay_experiment, energy_trace, DecayPoint, EnergyDecay, TraceRow};
pub use hitting::{default_budget, hitting_time, HittingReport};
pub use immigration::{
    d_map, d_tilde_map, domination_experiment, floor_over_p, immigration_size, DominationConfig,
    DominationOutcome, ImmigrationProcess,
};

use crate::etienne::ShapeStats;
use crate::partitions::{q1_move, scaled_radius, Partition};

/// `n` deterministic moves from `s`.
pub fn q1_iterate(s: &Partition, n: u64) -> Partition {
    let mut t = s.clone();
    for _ in 0..n {
        t = q1_move(&t);
    }
    t
}

/// Both defect heights `h_-`, `h_+` are at most `eps sqrt(N)`.
pub fn in_v(s: &Partition, eps: f64) -> bool {
    let st = ShapeStats::of_partition(s);
    let r = scaled_radius(eps, st.n);
    st.h_minus as f64 <= r && st.h_plus as f64 <= r
}

/// [`in_v`] plus the height cap `H <= theta + eps sqrt(N)`.
pub fn in_v_hat(s: &Partition, eps: f64) -> bool {
    let st = ShapeStats::of_partition(s);
    let r = scaled_radius(eps, st.n);
    st.h_minus as f64 <= r && st.h_plus as f64 <= r && st.height as f64 <= st.theta as f64 + r
}
