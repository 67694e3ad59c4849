use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{Method, StationaryEstimate};
use crate::dynamics::{in_v, in_v_hat, worst_case_config};
use crate::error::{Error, Result};
use crate::partitions::{
    in_g, qp_move, scaled_radius, t0_config, triangle_side, triangular_number, triangular_target,
    BernoulliField, Partition, Probability,
};

/// Which configurations are counted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum PredicateSpec {
    /// Within `eps sqrt(N)` of the triangular profile for `p`.
    RoughTriangle {
        eps: f64,
        p: Probability,
    },
    G {
        alpha: f64,
        beta: f64,
    },
    V {
        eps: f64,
    },
    VHat {
        eps: f64,
    },
    Equals {
        state: Partition,
    },
    Always,
}

type Predicate = Box<dyn Fn(&Partition) -> bool + Send + Sync>;

impl PredicateSpec {
    /// Evaluator for decks of `n` cards, with the reference profile precomputed.
    pub fn compile(&self, n: u64) -> Predicate {
        match self.clone() {
            PredicateSpec::RoughTriangle { eps, p } => {
                let target = triangular_target(p, n).profile;
                let radius = scaled_radius(eps, n);
                Box::new(move |s| s.rho(&target) as f64 <= radius)
            }
            PredicateSpec::G { alpha, beta } => Box::new(move |s| in_g(s, alpha, beta)),
            PredicateSpec::V { eps } => Box::new(move |s| in_v(s, eps)),
            PredicateSpec::VHat { eps } => Box::new(move |s| in_v_hat(s, eps)),
            PredicateSpec::Equals { state } => Box::new(move |s| *s == state),
            PredicateSpec::Always => Box::new(|_| true),
        }
    }
}

/// Where every chain starts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Start {
    /// The near-triangular configuration of `N` cards.
    #[default]
    T0,
    SinglePile,
    /// `(k-1, k-1, k-2, ..., 1, 1)`; only for triangular `N`.
    WorstCase,
    Custom(Partition),
}

impl Start {
    pub fn resolve(&self, n: u64) -> Result<Partition> {
        match self {
            Start::T0 => Ok(t0_config(n)),
            Start::SinglePile => Ok(Partition::single_pile(n)),
            Start::WorstCase => {
                let k = triangle_side(n);
                if triangular_number(k) != n {
                    return Err(Error::Precondition(format!(
                        "worst-case start needs triangular N, got {n}"
                    )));
                }
                worst_case_config(k)
            }
            Start::Custom(s) if s.total() == n => Ok(s.clone()),
            Start::Custom(s) => Err(Error::Precondition(format!(
                "start {s} does not hold {n} cards"
            ))),
        }
    }
}

/// Monte Carlo run parameters. `moves` counts every move of a chain, burn-in
/// included; a chain is sampled after moves `burn_in + stride`,
/// `burn_in + 2 stride`, and so on up to `moves`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub n: u64,
    pub p: Probability,
    pub predicate: PredicateSpec,
    pub chains: u64,
    pub moves: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub stride: u64,
    pub start: Start,
}

impl EstimateConfig {
    /// Burn-in `20 N`, stride `ceil(sqrt N)`, 8 chains of `10^4` samples each
    /// after burn-in, started from `T_0`.
    pub fn new(n: u64, p: Probability, predicate: PredicateSpec) -> Self {
        let burn_in = 20 * n;
        let stride = ((n as f64).sqrt().ceil() as u64).max(1);
        Self {
            n,
            p,
            predicate,
            chains: 8,
            moves: burn_in + 10_000 * stride,
            burn_in,
            seed: 0,
            stride,
            start: Start::T0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_one() {
            return Err(Error::InvalidProbability(self.p.get(), "(0, 1)"));
        }
        if self.n == 0 {
            return Err(Error::Precondition(
                "the deck must hold at least one card".into(),
            ));
        }
        if self.chains == 0 || self.stride == 0 {
            return Err(Error::Precondition(
                "chains and stride must be positive".into(),
            ));
        }
        if self.burn_in >= self.moves {
            return Err(Error::Precondition(format!(
                "burn-in {} must be below the move count {}",
                self.burn_in, self.moves
            )));
        }
        self.start.resolve(self.n).map(|_| ())
    }

    pub fn samples_per_chain(&self) -> u64 {
        (self.moves - self.burn_in) / self.stride
    }

    pub fn total_samples(&self) -> u64 {
        self.samples_per_chain() * self.chains
    }
}

/// Runs every chain, feeding each sampled state to `visit` on that chain's own
/// accumulator. Results are in chain order, so the reduction is deterministic.
pub fn run_chains<T, I, V>(cfg: &EstimateConfig, init: I, visit: V) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &Partition) + Sync,
{
    cfg.validate()?;
    let start = cfg.start.resolve(cfg.n)?;
    Ok((0..cfg.chains)
        .into_par_iter()
        .map(|chain| {
            let mut field = BernoulliField::with_stream(cfg.p, cfg.seed, chain);
            let mut acc = init();
            let mut s = start.clone();
            for _ in 0..cfg.burn_in {
                s = qp_move(&s, &mut field);
            }
            for _ in 0..cfg.samples_per_chain() {
                for _ in 0..cfg.stride {
                    s = qp_move(&s, &mut field);
                }
                visit(&mut acc, &s);
            }
            acc
        })
        .collect())
}

/// Two-sided 95% t-interval for the mean of `xs`, clamped to `[0, 1]`.
fn t_interval(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (0.0, 1.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    if var == 0.0 {
        return (mean, mean);
    }
    let t = StudentsT::new(0.0, 1.0, k - 1.0)
        .expect("positive dof")
        .inverse_cdf(0.975);
    let half = t * (var / k).sqrt();
    ((mean - half).max(0.0), (mean + half).min(1.0))
}

/// Stationary mass of an arbitrary predicate.
pub fn mc_estimate_with<F>(cfg: &EstimateConfig, pred: F) -> Result<StationaryEstimate>
where
    F: Fn(&Partition) -> bool + Sync,
{
    let hits = run_chains(cfg, || 0u64, |h, s| *h += u64::from(pred(s)))?;
    let per_chain = cfg.samples_per_chain();
    let means: Vec<f64> = hits
        .iter()
        .map(|&h| h as f64 / per_chain.max(1) as f64)
        .collect();
    let total = per_chain * cfg.chains;
    let value = if total == 0 {
        0.0
    } else {
        hits.iter().sum::<u64>() as f64 / total as f64
    };
    let (lo, hi) = if total == 0 {
        (0.0, 1.0)
    } else {
        t_interval(&means)
    };
    Ok(StationaryEstimate {
        value,
        method: Method::MonteCarlo,
        n_samples: Some(total),
        burn_in: Some(cfg.burn_in),
        chains: Some(cfg.chains),
        seed: Some(cfg.seed),
        ci_low: Some(lo.min(value)),
        ci_high: Some(hi.max(value)),
        residual: None,
    })
}

pub fn mc_estimate(cfg: &EstimateConfig) -> Result<StationaryEstimate> {
    let pred = cfg.predicate.compile(cfg.n);
    mc_estimate_with(cfg, pred)
}

/// `(5/p, 5/p + 3/2)`.
pub fn default_reasonable_bounds(p: Probability) -> (f64, f64) {
    (5.0 / p.get(), 5.0 / p.get() + 1.5)
}

/// Mass of `G(alpha, beta)`; `cfg.predicate` is replaced.
pub fn reasonableness_mass(
    alpha: f64,
    beta: f64,
    cfg: &EstimateConfig,
) -> Result<StationaryEstimate> {
    let cfg = EstimateConfig {
        predicate: PredicateSpec::G { alpha, beta },
        ..cfg.clone()
    };
    mc_estimate(&cfg)
}

/// Visit counts per state, kept separately for every chain.
#[derive(Clone, Debug, PartialEq)]
pub struct StateHistogram {
    pub samples_per_chain: u64,
    pub counts: BTreeMap<Partition, Vec<u64>>,
}

impl StateHistogram {
    pub fn chains(&self) -> usize {
        self.counts.values().next().map_or(0, Vec::len)
    }

    pub fn frequency(&self, s: &Partition) -> f64 {
        let total = self.samples_per_chain * self.chains() as u64;
        self.counts
            .get(s)
            .map_or(0.0, |c| c.iter().sum::<u64>() as f64 / total as f64)
    }

    /// Standard error of [`Self::frequency`] from the spread of per-chain frequencies.
    pub fn standard_error(&self, s: &Partition) -> f64 {
        let Some(c) = self.counts.get(s) else {
            return 0.0;
        };
        let k = c.len() as f64;
        let per = self.samples_per_chain as f64;
        let mean = c.iter().sum::<u64>() as f64 / per / k;
        let var = c
            .iter()
            .map(|&x| (x as f64 / per - mean).powi(2))
            .sum::<f64>()
            / (k - 1.0);
        (var / k).sqrt()
    }
}

pub fn state_histogram(cfg: &EstimateConfig) -> Result<StateHistogram> {
    let chains = cfg.chains as usize;
    let per_chain = run_chains(cfg, BTreeMap::<Partition, u64>::new, |m, s| {
        *m.entry(s.clone()).or_default() += 1;
    })?;
    let mut counts: BTreeMap<Partition, Vec<u64>> = BTreeMap::new();
    for (c, m) in per_chain.into_iter().enumerate() {
        for (s, k) in m {
            counts.entry(s).or_insert_with(|| vec![0; chains])[c] = k;
        }
    }
    Ok(StateHistogram {
        samples_per_chain: cfg.samples_per_chain(),
        counts,
    })
}

/// Summary of the distance `rho(S, T(p, N))` over stationary samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationProfile {
    pub n: u64,
    pub p: Probability,
    pub samples: u64,
    pub mean: f64,
    pub median: f64,
    /// `(q, value)` pairs, lower nearest-rank quantiles.
    pub quantiles: Vec<(f64, u64)>,
    pub min: u64,
    pub max: u64,
}

pub const PROFILE_QUANTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

pub fn deviation_profile(cfg: &EstimateConfig) -> Result<DeviationProfile> {
    let target = triangular_target(cfg.p, cfg.n).profile;
    let chains = run_chains(cfg, Vec::new, |v: &mut Vec<u64>, s| v.push(s.rho(&target)))?;
    let mut all: Vec<u64> = chains.into_iter().flatten().collect();
    if all.is_empty() {
        return Err(Error::Precondition("no samples after burn-in".into()));
    }
    let mean = all.iter().sum::<u64>() as f64 / all.len() as f64;
    all.sort_unstable();
    let m = all.len();
    let median = if m % 2 == 1 {
        all[m / 2] as f64
    } else {
        (all[m / 2 - 1] + all[m / 2]) as f64 / 2.0
    };
    let quantile = |q: f64| all[(((q * m as f64).ceil() as usize).max(1) - 1).min(m - 1)];
    Ok(DeviationProfile {
        n: cfg.n,
        p: cfg.p,
        samples: m as u64,
        mean,
        median,
        quantiles: PROFILE_QUANTILES
            .iter()
            .map(|&q| (q, quantile(q)))
            .collect(),
        min: all[0],
        max: all[m - 1],
    })
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Needs at least three points.
    pub slope_se: Option<f64>,
    pub points: usize,
}

/// Fits `ln y = a + b ln x` over the points with both coordinates positive.
pub fn loglog_fit(points: &[(f64, f64)]) -> Option<LogLogFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = (logs.len() > 2).then(|| {
        let rss: f64 = logs
            .iter()
            .map(|p| (p.1 - intercept - slope * p.0).powi(2))
            .sum();
        (rss / (k - 2.0) / sxx).sqrt()
    });
    Some(LogLogFit {
        slope,
        intercept,
        slope_se,
        points: logs.len(),
    })
}
