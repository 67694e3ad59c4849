//! The stationary law of the random game: exact for small decks, Monte Carlo
//! for large ones.

mod exact;
mod monte_carlo;

pub use exact::{exact_stationary, ExactStationary, MAX_EXACT_CARDS};
pub use monte_carlo::{
    default_reasonable_bounds, deviation_profile, loglog_fit, mc_estimate, mc_estimate_with,
    reasonableness_mass, run_chains, state_histogram, DeviationProfile, EstimateConfig, LogLogFit,
    PredicateSpec, Start, StateHistogram,
};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// Estimate of the stationary mass of a set of configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryEstimate {
    pub value: f64,
    pub method: Method,
    pub n_samples: Option<u64>,
    pub burn_in: Option<u64>,
    pub chains: Option<u64>,
    pub seed: Option<u64>,
    /// 95% interval, Monte Carlo only.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Largest entry of `|pi P - pi|`, exact only.
    pub residual: Option<f64>,
}

impl StationaryEstimate {
    pub fn contains(&self, x: f64) -> bool {
        match (self.ci_low, self.ci_high) {
            (Some(lo), Some(hi)) => lo <= x && x <= hi,
            _ => x == self.value,
        }
    }
}
