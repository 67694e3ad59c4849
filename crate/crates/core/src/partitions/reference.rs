//! Reference triangular configurations and the membership predicates built on them.

use serde::{Deserialize, Serialize};

use super::{Partition, Probability};

/// Largest `k` with `k(k+1)/2 <= n`.
pub fn triangle_side(n: u64) -> u64 {
    let mut k = ((2.0 * n as f64).sqrt() as u64).saturating_sub(1);
    while triangular_number(k + 1) <= n {
        k += 1;
    }
    while triangular_number(k) > n {
        k -= 1;
    }
    k
}

pub fn triangular_number(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Ceiling that snaps values within rounding noise of an integer onto it.
pub(crate) fn snapped_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// The rescaled triangular profile `n_j = ceil(sqrt(2Np) - p j)`, truncated after
/// its last positive entry. Its card count generally differs from `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangularTarget {
    pub p: Probability,
    pub n: u64,
    pub profile: Partition,
}

pub fn triangular_target(p: Probability, n: u64) -> TriangularTarget {
    let p_ = p.get();
    let top = (2.0 * n as f64 * p_).sqrt();
    let mut piles = Vec::new();
    for j in 1u64.. {
        let v = snapped_ceil(top - p_ * j as f64);
        if v < 1.0 {
            break;
        }
        piles.push(v as u64);
    }
    TriangularTarget {
        p,
        n,
        profile: Partition::from_sorted(piles),
    }
}

/// `c sqrt(N)`, nudged up by a relative `1e-12` so integer counts sitting exactly
/// on the boundary are not lost to rounding (e.g. `2 / sqrt(1000) * sqrt(1000)`).
pub fn scaled_radius(c: f64, n: u64) -> f64 {
    c * (n as f64).sqrt() * (1.0 + 1e-12)
}

/// Within `eps * sqrt(N)` of the triangular profile for `(p, N = |s|)`.
pub fn in_rough_triangle(s: &Partition, eps: f64, p: Probability) -> bool {
    let n = s.total();
    let target = triangular_target(p, n);
    s.rho(&target.profile) as f64 <= scaled_radius(eps, n)
}

/// The staircase `(k, ..., 1)` with one extra card on each of the
/// `N - k(k+1)/2` largest piles; always holds exactly `n` cards.
pub fn t0_config(n: u64) -> Partition {
    let k = triangle_side(n);
    let extra = n - triangular_number(k);
    Partition::from_sorted((1..=k).map(|i| k + 1 - i + u64::from(i <= extra)).collect())
}

/// Sufficient check that the `eps`-neighbourhood of `T(1, N)` holds `T_0^N` and
/// every configuration at distance 1 from it: `rho(T_0, T(1,N)) + 1 <= eps sqrt(N)`.
/// May say `false` for some boundary `eps` where the exact neighbour check would pass.
pub fn is_nondegenerate(eps: f64, n: u64) -> bool {
    let t0 = t0_config(n);
    let target = triangular_target(Probability::ONE, n);
    (t0.rho(&target.profile) + 1) as f64 <= scaled_radius(eps, n)
}

/// "Reasonable" configurations: at most `alpha sqrt(N)` piles, none larger than `beta sqrt(N)`.
pub fn in_g(s: &Partition, alpha: f64, beta: f64) -> bool {
    s.len() as f64 <= scaled_radius(alpha, s.total())
        && s.largest() as f64 <= scaled_radius(beta, s.total())
}
