use super::Partition;
use crate::error::{Error, Result};

/// Largest deck for which the full state space is enumerated.
pub const MAX_ENUMERATION_CARDS: u64 = 40;

/// Every partition of `n` exactly once, in reverse lexicographic order
/// (`(n)` first, `(1, ..., 1)` last).
pub fn enumerate_partitions(n: u64) -> Result<Vec<Partition>> {
    if n > MAX_ENUMERATION_CARDS {
        return Err(Error::GuardExceeded {
            what: "card count",
            limit: MAX_ENUMERATION_CARDS,
            got: n,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend(n, n, &mut prefix, &mut out);
    Ok(out)
}

fn extend(left: u64, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
    if left == 0 {
        out.push(Partition::from_sorted(prefix.clone()));
        return;
    }
    for k in (1..=cap.min(left)).rev() {
        prefix.push(k);
        extend(left - k, k, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Partition numbers from the coin-change recurrence.
    fn partition_count(n: usize) -> u64 {
        let mut ways = vec![0u64; n + 1];
        ways[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                ways[total] += ways[total - part];
            }
        }
        ways[n]
    }

    #[test]
    fn small_cases() {
        let three: Vec<String> = enumerate_partitions(3)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(three, ["3", "2,1", "1,1,1"]);
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(6).unwrap().len(), 11);
        assert_eq!(enumerate_partitions(20).unwrap().len(), 627);
    }

    #[test]
    fn counts_and_uniqueness() {
        for n in 0..=25u64 {
            let all = enumerate_partitions(n).unwrap();
            assert_eq!(all.len() as u64, partition_count(n as usize));
            assert!(all.iter().all(|p| p.total() == n));
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.windows(2).all(|w| w[0] > w[1]), "canonical order");
        }
    }

    #[test]
    fn guard() {
        assert!(enumerate_partitions(MAX_ENUMERATION_CARDS).is_ok());
        assert!(enumerate_partitions(MAX_ENUMERATION_CARDS + 1).is_err());
    }
}
