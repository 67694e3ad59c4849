use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{q1_move, triangle_side, triangular_number, Partition};

/// Outcome of following a deterministic orbit until it repeats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub start: Partition,
    /// Moves made before the orbit first enters its cycle.
    pub transient_length: u64,
    pub cycle_length: u64,
    /// The cycle, starting from the first state the orbit reaches on it.
    pub cycle_states: Vec<Partition>,
    /// Whether the cycle is the fixed staircase `(k, ..., 1)`.
    pub reached_stable: bool,
}

/// Brent's cycle finder for the orbit of `f` from `start`; returns
/// `(transient, period)`. Counts every application of `f` against `budget`.
pub fn brent<T, F>(start: &T, f: F, budget: u64) -> Result<(u64, u64)>
where
    T: Clone + PartialEq,
    F: Fn(&T) -> T,
{
    let mut used = 1u64;
    let mut power = 1u64;
    let mut period = 1u64;
    let mut tortoise = start.clone();
    let mut hare = f(start);
    while tortoise != hare {
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = f(&hare);
        period += 1;
        used += 1;
        if used > budget {
            return Err(Error::BudgetExhausted(budget));
        }
    }

    let mut tortoise = start.clone();
    let mut hare = start.clone();
    for _ in 0..period {
        hare = f(&hare);
    }
    let mut transient = 0u64;
    while tortoise != hare {
        tortoise = f(&tortoise);
        hare = f(&hare);
        transient += 1;
    }
    Ok((transient, period))
}

/// Transient and cycle of the deterministic orbit from `s0`.
pub fn detect_cycle(s0: &Partition, max_moves: u64) -> Result<CycleReport> {
    if s0.is_empty() {
        return Err(Error::Precondition(
            "the deck must hold at least one card".into(),
        ));
    }
    let (transient, period) = brent(s0, q1_move, max_moves)?;
    let mut entry = s0.clone();
    for _ in 0..transient {
        entry = q1_move(&entry);
    }
    let mut cycle_states = Vec::with_capacity(period as usize);
    let mut s = entry;
    for _ in 0..period {
        let next = q1_move(&s);
        cycle_states.push(s);
        s = next;
    }
    let reached_stable = period == 1 && cycle_states[0].is_staircase();
    Ok(CycleReport {
        start: s0.clone(),
        transient_length: transient,
        cycle_length: period,
        cycle_states,
        reached_stable,
    })
}

/// Whether `s` can be built from `(k, ..., 1)`, `k = k(|s|)`, by adding at most one
/// card to each pile and possibly one more pile of size 1.
pub fn within_staircase_envelope(s: &Partition) -> bool {
    let k = triangle_side(s.total()) as usize;
    if s.len() < k || s.len() > k + 1 {
        return false;
    }
    let base_ok = (1..=k).all(|i| {
        let base = (k + 1 - i) as u64;
        let v = s.pile(i);
        v == base || v == base + 1
    });
    base_ok && (s.len() == k || s.pile(k + 1) == 1)
}

/// `(k-1, k-1, k-2, ..., 2, 1, 1)`: the staircase with one card moved from the
/// biggest pile to a new pile. It needs the most moves to reach the staircase.
pub fn worst_case_config(k: u64) -> Result<Partition> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "side length {k} must be at least 2"
        )));
    }
    let mut piles: Vec<u64> = (1..=k).rev().collect();
    piles[0] -= 1;
    piles.push(1);
    let s = Partition::ord(piles);
    debug_assert_eq!(s.total(), triangular_number(k));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, triangular_number};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn brent_on_modular_map() {
        // x -> x^2 + 1 mod 255 from 3: compare with brute force first-repeat search
        let f = |x: &u64| (x * x + 1) % 255;
        let mut seen = std::collections::HashMap::new();
        let mut x = 3u64;
        let mut t = 0u64;
        while !seen.contains_key(&x) {
            seen.insert(x, t);
            x = f(&x);
            t += 1;
        }
        let mu = seen[&x];
        assert_eq!(brent(&3, f, 10_000).unwrap(), (mu, t - mu));
    }

    #[test]
    fn worst_case_small() {
        let r = detect_cycle(&part("2,2,1,1"), 1_000).unwrap();
        assert_eq!(r.transient_length, 6);
        assert_eq!(r.cycle_length, 1);
        assert_eq!(r.cycle_states, vec![part("3,2,1")]);
        assert!(r.reached_stable);
    }

    #[test]
    fn stable_start() {
        let r = detect_cycle(&part("3,2,1"), 10).unwrap();
        assert_eq!((r.transient_length, r.cycle_length), (0, 1));
        assert!(r.reached_stable);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            detect_cycle(&worst_case_config(10).unwrap(), 20),
            Err(Error::BudgetExhausted(20))
        );
        assert!(detect_cycle(&Partition::empty(), 10).is_err());
    }

    #[test]
    fn worst_case_shapes() {
        assert_eq!(worst_case_config(3).unwrap(), part("2,2,1,1"));
        assert_eq!(worst_case_config(4).unwrap(), part("3,3,2,1,1"));
        assert!(worst_case_config(1).is_err());
        for k in 2..=100 {
            assert_eq!(worst_case_config(k).unwrap().total(), triangular_number(k));
        }
    }

    #[test]
    fn eight_cards_cycle_near_staircase() {
        for s in enumerate_partitions(8).unwrap() {
            let r = detect_cycle(&s, 10_000).unwrap();
            assert!(!r.reached_stable);
            assert!(r.cycle_states.iter().all(within_staircase_envelope), "{s}");
        }
    }

    #[test]
    fn envelope_predicate() {
        assert!(within_staircase_envelope(&part("4,3,1")));
        assert!(within_staircase_envelope(&part("3,2,1,1")));
        assert!(within_staircase_envelope(&part("4,3,2,1")));
        assert!(!within_staircase_envelope(&part("5,2,1")));
        assert!(!within_staircase_envelope(&part("3,2,1,1,1")));
        assert!(within_staircase_envelope(&part("3,3,2")));
        assert!(!within_staircase_envelope(&part("4,4")));
    }
}
