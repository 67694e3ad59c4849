use std::collections::BTreeMap;

use rand::distr::{Bernoulli, Distribution};

use super::{Partition, Probability};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};

/// Largest pile count accepted by [`qp_transition_distribution`].
pub const MAX_KERNEL_PILES: usize = 24;

/// One deterministic move: take a card from every pile and form a new pile.
///
/// Decrementing keeps the old piles sorted, so the only work besides the pass
/// is placing the new pile of size `len` by binary search.
pub fn q1_move(s: &Partition) -> Partition {
    let fresh = s.len() as u64;
    let mut piles = Vec::with_capacity(s.len() + 1);
    piles.extend(s.piles().iter().filter(|&&k| k > 1).map(|&k| k - 1));
    if fresh > 0 {
        let at = piles.partition_point(|&k| k >= fresh);
        piles.insert(at, fresh);
    }
    Partition::from_sorted(piles)
}

/// Source of the i.i.d. Bernoulli(p) indicators deciding which piles lose a card.
#[derive(Clone, Debug)]
pub struct BernoulliField {
    p: Probability,
    seed: u64,
    stream: u64,
    coin: Bernoulli,
    rng: StreamRng,
}

impl BernoulliField {
    pub fn new(p: Probability, seed: u64) -> Self {
        Self::with_stream(p, seed, 0)
    }

    /// Independent stream `stream` under the master `seed` (one per chain).
    pub fn with_stream(p: Probability, seed: u64, stream: u64) -> Self {
        let coin = Bernoulli::new(p.get()).expect("validated probability");
        Self {
            p,
            seed,
            stream,
            coin,
            rng: stream_rng(seed, stream),
        }
    }

    pub fn p(&self) -> Probability {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    #[inline]
    pub fn draw(&mut self) -> bool {
        self.coin.sample(&mut self.rng)
    }

    pub fn rng_mut(&mut self) -> &mut StreamRng {
        &mut self.rng
    }
}

/// One move of the random game. Indicators are drawn in pile order.
///
/// Within a run of equal piles the survivors keep their size and the hit piles
/// drop by one; emitting survivors before hit piles run by run keeps the output
/// sorted without a full sort.
pub fn qp_move(s: &Partition, field: &mut BernoulliField) -> Partition {
    let piles = s.piles();
    let mut out = Vec::with_capacity(piles.len() + 1);
    let mut removed = 0u64;
    let mut i = 0;
    while i < piles.len() {
        let v = piles[i];
        let mut end = i + 1;
        while end < piles.len() && piles[end] == v {
            end += 1;
        }
        let mut hits = 0usize;
        for _ in i..end {
            hits += usize::from(field.draw());
        }
        out.extend(std::iter::repeat_n(v, end - i - hits));
        if v > 1 {
            out.extend(std::iter::repeat_n(v - 1, hits));
        }
        removed += hits as u64;
        i = end;
    }
    if removed > 0 {
        let at = out.partition_point(|&k| k >= removed);
        out.insert(at, removed);
    }
    Partition::from_sorted(out)
}

/// Exact one-step law of the random game from `s`.
///
/// Patterns that only differ by which piles of equal size were hit lead to the
/// same partition, so the enumeration runs over hit counts per run of equal
/// piles, weighted by the binomial coefficient.
pub fn qp_transition_distribution(
    s: &Partition,
    p: Probability,
) -> Result<BTreeMap<Partition, f64>> {
    if s.len() > MAX_KERNEL_PILES {
        return Err(Error::GuardExceeded {
            what: "pile count",
            limit: MAX_KERNEL_PILES as u64,
            got: s.len() as u64,
        });
    }
    let runs = runs(s.piles());
    let p = p.get();
    let mut law = BTreeMap::new();
    let mut hits = vec![0usize; runs.len()];
    loop {
        let mut weight = 1.0;
        let mut sizes = Vec::with_capacity(s.len() + 1);
        let mut removed = 0u64;
        for (&(v, len), &c) in runs.iter().zip(&hits) {
            weight *= binomial(len, c) * p.powi(c as i32) * (1.0 - p).powi((len - c) as i32);
            sizes.extend(std::iter::repeat_n(v, len - c));
            sizes.extend(std::iter::repeat_n(v - 1, c));
            removed += c as u64;
        }
        sizes.push(removed);
        if weight > 0.0 {
            *law.entry(Partition::ord(sizes)).or_insert(0.0) += weight;
        }
        // odometer over the per-run hit counts
        let mut r = 0;
        loop {
            if r == runs.len() {
                return Ok(law);
            }
            if hits[r] < runs[r].1 {
                hits[r] += 1;
                break;
            }
            hits[r] = 0;
            r += 1;
        }
    }
}

fn runs(piles: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &v in piles {
        match out.last_mut() {
            Some((w, len)) if *w == v => *len += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
