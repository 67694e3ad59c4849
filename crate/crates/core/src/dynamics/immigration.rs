use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{qp_move, snapped_ceil, BernoulliField, Partition, Probability};

/// `ceil(N^(delta0 + 1/4))` cards added per move.
pub fn immigration_size(n: u64, delta0: f64) -> u64 {
    snapped_ceil((n as f64).powf(delta0 + 0.25)) as u64
}

fn snapped_floor(x: f64) -> f64 {
    -snapped_ceil(-x)
}

/// `N_p = floor(N / p)`.
pub fn floor_over_p(n: u64, p: Probability) -> u64 {
    snapped_floor(n as f64 / p.get()) as u64
}

fn random_p(p: Probability) -> Result<()> {
    if p.is_one() {
        Err(Error::InvalidProbability(p.get(), "(0, 1)"))
    } else {
        Ok(())
    }
}

/// Rescaling `n_i -> ceil(n_i / p) - z_i`, where the first `d` piles get `z_i = 1`
/// and `d` is chosen so that the result holds exactly `N_p` cards.
pub fn d_map(s: &Partition, p: Probability) -> Result<Partition> {
    random_p(p)?;
    let ceils: Vec<u64> = s
        .piles()
        .iter()
        .map(|&k| snapped_ceil(k as f64 / p.get()) as u64)
        .collect();
    let sum: u64 = ceils.iter().sum();
    let target = floor_over_p(s.total(), p);
    let d = sum
        .checked_sub(target)
        .filter(|&d| d as usize <= s.len())
        .unwrap_or_else(|| panic!("rescaling offset out of range for {s} at p = {}", p.get()))
        as usize;
    Ok(Partition::ord(
        ceils
            .into_iter()
            .enumerate()
            .map(|(i, c)| c - u64::from(i < d)),
    ))
}

/// [`d_map`] with `kappa` added to every pile.
pub fn d_tilde_map(s: &Partition, p: Probability, kappa: u64) -> Result<Partition> {
    let d = d_map(s, p)?;
    Ok(Partition::ord(d.piles().iter().map(|&k| k + kappa)))
}

/// Deterministic game with `kappa` extra cards dropped on every new pile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImmigrationProcess {
    pub kappa: u64,
    pub state: Partition,
    /// Exponent the immigration size came from, when derived from a deck size.
    pub delta0: Option<f64>,
}

impl ImmigrationProcess {
    pub fn new(state: Partition, kappa: u64) -> Self {
        Self {
            kappa,
            state,
            delta0: None,
        }
    }

    /// Immigration size `ceil(n^(delta0 + 1/4))` for a deck of `n` cards.
    pub fn for_deck(state: Partition, n: u64, delta0: f64) -> Self {
        Self {
            kappa: immigration_size(n, delta0),
            state,
            delta0: Some(delta0),
        }
    }

    pub fn step(&mut self) {
        let s = &self.state;
        let fresh = s.len() as u64 + self.kappa;
        self.state = Partition::ord(
            s.piles()
                .iter()
                .map(|&k| k - 1)
                .chain(std::iter::once(fresh)),
        );
    }

    pub fn q_tilde_move(&self) -> Self {
        let mut next = self.clone();
        next.step();
        next
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationConfig {
    pub start: Partition,
    pub p: Probability,
    pub delta0: f64,
    pub horizon: u64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationOutcome {
    pub kappa: u64,
    pub trials: u64,
    pub successes: u64,
    pub fraction: f64,
    /// First move at which domination failed, for each failing trial in trial order.
    pub first_failures: Vec<u64>,
}

/// Runs independent random chains from `start` next to the immigration chain
/// started at `D~(start)` and counts the trials where the rescaled random state
/// stays dominated at every move up to the horizon.
pub fn domination_experiment(cfg: &DominationConfig) -> Result<DominationOutcome> {
    random_p(cfg.p)?;
    if cfg.delta0.is_nan() || cfg.delta0 >= 0.25 {
        return Err(Error::Precondition(format!(
            "delta0 = {} must be below 1/4",
            cfg.delta0
        )));
    }
    if cfg.trials == 0 || cfg.start.is_empty() {
        return Err(Error::Precondition(
            "need at least one trial and one card".into(),
        ));
    }
    let kappa = immigration_size(cfg.start.total(), cfg.delta0);
    let mut upper = ImmigrationProcess::for_deck(
        d_tilde_map(&cfg.start, cfg.p, kappa)?,
        cfg.start.total(),
        cfg.delta0,
    );
    let mut bounds = Vec::with_capacity(cfg.horizon as usize + 1);
    bounds.push(upper.state.clone());
    for _ in 0..cfg.horizon {
        upper.step();
        bounds.push(upper.state.clone());
    }

    let failures: Vec<Option<u64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut field = BernoulliField::with_stream(cfg.p, cfg.seed, trial);
            let mut s = cfg.start.clone();
            for (n, bound) in bounds.iter().enumerate() {
                if n > 0 {
                    s = qp_move(&s, &mut field);
                }
                let scaled = d_map(&s, cfg.p).expect("p checked");
                if !scaled.leq(bound) {
                    return Some(n as u64);
                }
            }
            None
        })
        .collect();
    let first_failures: Vec<u64> = failures.iter().flatten().copied().collect();
    let successes = cfg.trials - first_failures.len() as u64;
    Ok(DominationOutcome {
        kappa,
        trials: cfg.trials,
        successes,
        fraction: successes as f64 / cfg.trials as f64,
        first_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{q1_move, t0_config};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn prob(p: f64) -> Probability {
        Probability::new(p).unwrap()
    }

    #[test]
    fn rescaling_examples() {
        assert_eq!(d_map(&part("3,2"), prob(0.5)).unwrap(), part("6,4"));
        assert_eq!(floor_over_p(5, prob(0.5)), 10);
        assert_eq!(d_map(&part("2,1"), prob(0.4)).unwrap(), part("4,3"));
        assert_eq!(floor_over_p(3, prob(0.4)), 7);
        assert_eq!(
            d_tilde_map(&part("3,2"), prob(0.5), 2).unwrap(),
            part("8,6")
        );
        assert!(d_map(&part("3,2"), Probability::ONE).is_err());
    }

    #[test]
    fn rescaled_total_is_floor() {
        for p in [0.1, 0.3, 0.4, 0.5, 0.7, 0.9] {
            for s in crate::partitions::enumerate_partitions(12).unwrap() {
                assert_eq!(
                    d_map(&s, prob(p)).unwrap().total(),
                    floor_over_p(12, prob(p))
                );
            }
        }
    }

    #[test]
    fn immigration_examples() {
        assert_eq!(immigration_size(2000, 0.1), 15);
        let proc = ImmigrationProcess::new(part("3,2"), 2);
        assert_eq!(proc.q_tilde_move().state, part("4,2,1"));
        let s = part("5,5,3,1,1");
        assert_eq!(
            ImmigrationProcess::new(s.clone(), 0).q_tilde_move().state,
            q1_move(&s)
        );
    }

    #[test]
    fn zero_horizon_always_dominates() {
        let cfg = DominationConfig {
            start: t0_config(300),
            p: prob(0.5),
            delta0: 0.1,
            horizon: 0,
            trials: 16,
            seed: 1,
        };
        let out = domination_experiment(&cfg).unwrap();
        assert_eq!(out.fraction, 1.0);
        let bad = DominationConfig {
            p: Probability::ONE,
            ..cfg.clone()
        };
        assert!(domination_experiment(&bad).is_err());
        let bad = DominationConfig { delta0: 0.3, ..cfg };
        assert!(domination_experiment(&bad).is_err());
    }
}
