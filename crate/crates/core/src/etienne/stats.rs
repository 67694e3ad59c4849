//! Energy and shape functionals relative to the reference row `theta_N`.

use serde::{Deserialize, Serialize};

use super::EtienneDiagram;
use crate::partitions::{triangle_side, triangular_number, Partition};

/// Shape diagnostics of one configuration.
///
/// Energies carry half-integer offsets and are stored doubled (`e_*2`) so all
/// bookkeeping is exact; the `*_tilde` methods give the `N`-normalised floats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeStats {
    /// Number of cards `N`.
    pub n: u64,
    /// Largest `k` with `k(k+1)/2 <= N`.
    pub theta: u64,
    /// `2 E_-`: holes at rows `i <= theta` weighted by `2(theta - i) + 1`.
    pub e_minus2: u64,
    /// `2 E_+`: particles at rows `i > theta` weighted by `2(i - theta) - 1`.
    pub e_plus2: u64,
    pub h_minus: u64,
    pub h_plus: u64,
    pub v_minus: u64,
    pub v_plus: u64,
    /// Highest occupied row.
    pub height: u64,
}

impl ShapeStats {
    /// Same quantities computed from the pile sizes in `O(len + theta)`, without
    /// materialising the diagram.
    ///
    /// Pile `a` fills rows `a ..= a + k_a - 1`, its first hole sits in row
    /// `a + k_a`, and its cells with column at most `theta` reach row
    /// `a + min(k_a, theta) - 1`.
    pub fn of_partition(s: &Partition) -> Self {
        let n = s.total();
        let theta = triangle_side(n);
        let mut e_plus2 = 0u64;
        let mut v_plus = 0u64;
        let mut filled_below2 = 0u64;
        let mut first_hole_row = s.len() as u64 + 1;
        let mut spike_top = 0u64;
        let mut height = 0u64;
        for (idx, &k) in s.piles().iter().enumerate() {
            let a = idx as u64 + 1;
            let top = a + k - 1;
            height = height.max(top);
            first_hole_row = first_hole_row.min(a + k);
            if a <= theta + 1 {
                spike_top = spike_top.max(a + k.min(theta) - 1);
            }
            if top > theta {
                // rows above theta, as offsets r = row - theta
                let lo = a.max(theta + 1) - theta;
                let hi = top - theta;
                e_plus2 += hi * hi - (lo - 1) * (lo - 1);
                v_plus += hi - lo + 1;
            }
            if a <= theta {
                // rows at or below theta, as depths s = theta - row
                let hi = theta - a;
                let lo = theta - top.min(theta);
                filled_below2 += (hi + 1) * (hi + 1) - lo * lo;
            }
        }
        let all_below2: u64 = (1..=theta).map(|i| i * (2 * (theta - i) + 1)).sum();
        let v_minus = triangular_number(theta) - (n - v_plus);
        Self {
            n,
            theta,
            e_minus2: all_below2 - filled_below2,
            e_plus2,
            h_minus: theta.saturating_sub(first_hole_row),
            h_plus: spike_top.saturating_sub(theta),
            v_minus,
            v_plus,
            height,
        }
    }

    /// `2E = 2E_- + 2E_+`.
    pub fn e_total2(&self) -> u64 {
        self.e_minus2 + self.e_plus2
    }

    pub fn energy(&self) -> f64 {
        self.e_total2() as f64 / 2.0
    }

    fn root(&self) -> f64 {
        (self.n as f64).sqrt()
    }

    pub fn h_minus_tilde(&self) -> f64 {
        self.h_minus as f64 / self.root()
    }

    pub fn h_plus_tilde(&self) -> f64 {
        self.h_plus as f64 / self.root()
    }

    pub fn v_minus_tilde(&self) -> f64 {
        self.v_minus as f64 / self.n as f64
    }

    pub fn v_plus_tilde(&self) -> f64 {
        self.v_plus as f64 / self.n as f64
    }

    pub fn e_minus_tilde(&self) -> f64 {
        self.e_minus2 as f64 / 2.0 / (self.n as f64).powf(1.5)
    }

    pub fn e_plus_tilde(&self) -> f64 {
        self.e_plus2 as f64 / 2.0 / (self.n as f64).powf(1.5)
    }

    pub fn e_tilde(&self) -> f64 {
        self.energy() / (self.n as f64).powf(1.5)
    }

    /// `(V_+ - V_-) / sqrt(N)`; the difference is `N - theta(theta+1)/2`, so this
    /// stays below `theta / sqrt(N) <= sqrt(2)`.
    pub fn beta_hat(&self) -> f64 {
        (self.v_plus - self.v_minus) as f64 / self.root()
    }
}

/// Shape diagnostics read directly off the diagram.
pub fn shape_stats(d: &EtienneDiagram) -> ShapeStats {
    let n = d.particle_count();
    let theta = triangle_side(n) as usize;
    let h = d.height();
    let mut s = ShapeStats {
        n,
        theta: theta as u64,
        e_minus2: 0,
        e_plus2: 0,
        h_minus: 0,
        h_plus: 0,
        v_minus: 0,
        v_plus: 0,
        height: h as u64,
    };
    for i in 1..=theta {
        let holes = (i - d.row_count(i)) as u64;
        s.v_minus += holes;
        s.e_minus2 += holes * (2 * (theta - i) + 1) as u64;
    }
    for i in theta + 1..=h {
        let parts = d.row_count(i) as u64;
        s.v_plus += parts;
        s.e_plus2 += parts * (2 * (i - theta) - 1) as u64;
    }
    let first_hole_row = (1..=h + 1).find(|&i| d.row_count(i) < i).unwrap_or(h + 1);
    s.h_minus = theta.saturating_sub(first_hole_row) as u64;
    let spike_top = (1..=h)
        .rev()
        .find(|&i| {
            let lo = i.saturating_sub(theta).max(1);
            (lo..=theta.min(i)).any(|j| d.is_occupied(i, j))
        })
        .unwrap_or(0);
    s.h_plus = spike_top.saturating_sub(theta) as u64;
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, t0_config, triangular_number};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn both(s: &Partition) -> ShapeStats {
        let fast = ShapeStats::of_partition(s);
        let slow = shape_stats(&EtienneDiagram::from_partition(s));
        assert_eq!(fast, slow, "{s}");
        fast
    }

    #[test]
    fn staircase_is_zero() {
        for k in 1..30 {
            let st = both(&Partition::staircase(k));
            assert_eq!(st.e_total2(), 0);
            assert_eq!((st.h_minus, st.h_plus, st.v_minus, st.v_plus), (0, 0, 0, 0));
            assert_eq!((st.height, st.theta), (k, k));
        }
    }

    #[test]
    fn near_triangle_eleven() {
        let st = both(&t0_config(11));
        assert_eq!(st.theta, 4);
        assert_eq!((st.e_minus2, st.e_plus2), (0, 1));
        assert_eq!((st.v_minus, st.v_plus), (0, 1));
        assert_eq!((st.h_minus, st.h_plus), (0, 0));
        assert_eq!(st.height, 5);
    }

    #[test]
    fn three_pairs() {
        let st = both(&part("2,2,2"));
        assert_eq!(st.theta, 3);
        assert_eq!((st.e_minus2, st.e_plus2), (1, 1));
        assert_eq!((st.v_minus, st.v_plus), (1, 1));
        assert_eq!((st.h_minus, st.h_plus), (0, 1));
        assert_eq!(st.height, 4);
    }

    #[test]
    fn fast_path_matches_diagram_exhaustively() {
        for n in 1..=16 {
            for s in enumerate_partitions(n).unwrap() {
                let st = both(&s);
                assert_eq!(st.v_plus - st.v_minus, n - triangular_number(st.theta));
                assert!(st.v_plus - st.v_minus <= st.theta + 1);
            }
        }
    }

    #[test]
    fn single_pile_energy() {
        // (N): pile on the diagonal, rows 1..=N; N = 10 gives theta = 4
        let st = both(&Partition::single_pile(10));
        assert_eq!(st.v_plus, 6);
        // particles at rows 5..=10 weigh 1,3,5,7,9,11 (doubled)
        assert_eq!(st.e_plus2, 36);
        // row i <= 4 keeps one particle, so i-1 holes weighing 2(4-i)+1
        assert_eq!(st.e_minus2, 5 + 2 * 3 + 3);
        assert_eq!(st.h_minus, 2);
        assert_eq!(st.h_plus, 0);
    }
}
