use serde::{Deserialize, Serialize};

use super::energy::TraceRow;
use crate::error::{Error, Result};
use crate::etienne::ShapeStats;
use crate::partitions::{
    in_g, is_nondegenerate, q1_move, scaled_radius, triangular_target, Partition, Probability,
};

/// First entry of the deterministic orbit into the rough triangle `T(eps, 1, N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingReport {
    /// Target set with its parameters, e.g. `rough-triangle(eps=0.25,p=1)`.
    pub target: String,
    pub n: u64,
    pub eps: f64,
    pub budget: u64,
    pub hit_time: Option<u64>,
    /// Membership held at every move from the hit up to the budget.
    pub stayed: bool,
    /// Moves spent outside the target after the first hit.
    pub exits_after_hit: u64,
    /// First move from which the orbit stays in the target up to the budget.
    pub settle_time: Option<u64>,
    pub energy_trace: Vec<TraceRow>,
}

impl HittingReport {
    /// Measured `hit_time / sqrt(N)`.
    pub fn hit_constant(&self) -> Option<f64> {
        self.hit_time.map(|t| t as f64 / (self.n as f64).sqrt())
    }

    /// Measured `settle_time / sqrt(N)`.
    pub fn settle_constant(&self) -> Option<f64> {
        self.settle_time.map(|t| t as f64 / (self.n as f64).sqrt())
    }
}

/// `ceil(100 sqrt(N))` moves.
pub fn default_budget(n: u64) -> u64 {
    (100.0 * (n as f64).sqrt()).ceil() as u64
}

/// Follows the orbit of `s0` for `budget` moves, checking membership in
/// `T(eps, 1, N)` after every move and sampling the shape every `ceil(sqrt N)`
/// moves. `reasonable` optionally imposes `s0 in G(gamma_1, gamma_2)`.
pub fn hitting_time(
    s0: &Partition,
    eps: f64,
    budget: u64,
    reasonable: Option<(f64, f64)>,
) -> Result<HittingReport> {
    let n = s0.total();
    if n == 0 {
        return Err(Error::Precondition(
            "the deck must hold at least one card".into(),
        ));
    }
    if !is_nondegenerate(eps, n) {
        return Err(Error::Precondition(format!(
            "eps = {eps} is degenerate for N = {n}"
        )));
    }
    if let Some((g1, g2)) = reasonable {
        if !in_g(s0, g1, g2) {
            return Err(Error::Precondition(format!(
                "start is not in G({g1}, {g2})"
            )));
        }
    }
    let target = triangular_target(Probability::ONE, n).profile;
    let radius = scaled_radius(eps, n);
    let inside = |s: &Partition| s.rho(&target) as f64 <= radius;
    let stride = (n as f64).sqrt().ceil() as u64;

    let mut s = s0.clone();
    let mut trace = vec![TraceRow::new(0, &ShapeStats::of_partition(&s))];
    let mut hit_time = inside(&s).then_some(0);
    let mut exits = 0u64;
    let mut settle_time = hit_time;
    for t in 1..=budget {
        s = q1_move(&s);
        let now = inside(&s);
        match (hit_time, now) {
            (None, true) => hit_time = Some(t),
            (Some(_), false) => exits += 1,
            _ => {}
        }
        if !now {
            settle_time = None;
        } else if settle_time.is_none() {
            settle_time = Some(t);
        }
        if t % stride == 0 || t == budget {
            trace.push(TraceRow::new(t, &ShapeStats::of_partition(&s)));
        }
    }
    Ok(HittingReport {
        target: format!("rough-triangle(eps={eps},p=1)"),
        n,
        eps,
        budget,
        hit_time,
        stayed: hit_time.is_some() && exits == 0,
        exits_after_hit: exits,
        settle_time,
        energy_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::t0_config;

    #[test]
    fn staircase_hits_at_zero() {
        let s = Partition::staircase(40);
        let r = hitting_time(&s, 0.25, 200, Some((2.0, 2.0))).unwrap();
        assert_eq!(r.hit_time, Some(0));
        assert!(r.stayed);
        assert_eq!(r.hit_constant(), Some(0.0));
        assert_eq!(r.settle_time, Some(0));
    }

    #[test]
    fn settle_time_follows_last_exit() {
        let s = Partition::single_pile(300);
        let r = hitting_time(&s, 0.3, 2000, None).unwrap();
        let settle = r.settle_time.unwrap();
        assert!(r.hit_time.unwrap() <= settle);
        assert_eq!(r.stayed, r.hit_time == Some(settle));
        let target = triangular_target(Probability::ONE, 300).profile;
        let radius = scaled_radius(0.3, 300);
        let mut t = s;
        for k in 0..=2000 {
            let inside = t.rho(&target) as f64 <= radius;
            if k >= settle {
                assert!(inside);
            } else if k + 1 == settle {
                assert!(!inside);
            }
            t = q1_move(&t);
        }
    }

    #[test]
    fn near_triangle_hits_at_zero() {
        for n in [100u64, 500, 2000] {
            let eps = 2.0 / (n as f64).sqrt();
            let r = hitting_time(&t0_config(n), eps, 50, None).unwrap();
            assert_eq!(r.hit_time, Some(0), "N = {n}");
        }
    }

    #[test]
    fn preconditions() {
        let s = Partition::single_pile(100);
        assert!(hitting_time(&s, 0.001, 10, None).is_err());
        assert!(hitting_time(&s, 0.5, 10, Some((2.0, 2.0))).is_err());
    }

    #[test]
    fn trace_is_sampled() {
        let s = Partition::single_pile(100);
        let r = hitting_time(&s, 0.5, 35, None).unwrap();
        let idx: Vec<u64> = r.energy_trace.iter().map(|t| t.move_index).collect();
        assert_eq!(idx, vec![0, 10, 20, 30, 35]);
    }
}
