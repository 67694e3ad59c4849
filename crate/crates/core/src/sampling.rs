//! Random starting configurations for tests and experiments.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// A random partition of `n`: pile count uniform in `1..=n`, then a uniformly
/// random composition into that many positive parts, sorted.
pub fn random_partition<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Partition {
    if n == 0 {
        return Partition::empty();
    }
    let piles = rng.random_range(1..=n);
    Partition::ord(random_composition(n, piles, rng))
}

fn random_composition<R: Rng + ?Sized>(n: u64, parts: u64, rng: &mut R) -> Vec<u64> {
    let mut cuts: Vec<u64> = index::sample(rng, (n - 1) as usize, (parts - 1) as usize)
        .into_iter()
        .map(|c| c as u64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(parts as usize);
    let mut last = 0;
    for c in cuts {
        sizes.push(c - last);
        last = c;
    }
    sizes.push(n - last);
    sizes
}

/// A random member of `G(alpha, beta)`: at most `alpha sqrt(n)` piles, none
/// bigger than `beta sqrt(n)`.
///
/// The pile count is uniform over the feasible range; a random composition is
/// drawn and any excess over the cap is moved card by card onto random piles
/// with room, which keeps a good spread of shapes.
pub fn random_reasonable<R: Rng + ?Sized>(
    n: u64,
    alpha: f64,
    beta: f64,
    rng: &mut R,
) -> Result<Partition> {
    let root = (n as f64).sqrt();
    let max_piles = ((alpha * root).floor() as u64).min(n);
    let cap = ((beta * root).floor() as u64).min(n);
    if n == 0 || cap == 0 || max_piles == 0 {
        return Err(Error::Precondition(format!(
            "G({alpha}, {beta}) is empty for N = {n}"
        )));
    }
    let min_piles = n.div_ceil(cap);
    if min_piles > max_piles {
        return Err(Error::Precondition(format!(
            "G({alpha}, {beta}) is empty for N = {n}"
        )));
    }
    let piles = rng.random_range(min_piles..=max_piles);
    let mut sizes = random_composition(n, piles, rng);
    let mut excess: u64 = sizes.iter().map(|&k| k.saturating_sub(cap)).sum();
    sizes.iter_mut().for_each(|k| *k = (*k).min(cap));
    while excess > 0 {
        let i = rng.random_range(0..sizes.len());
        if sizes[i] < cap {
            sizes[i] += 1;
            excess -= 1;
        }
    }
    Ok(Partition::ord(sizes))
}
