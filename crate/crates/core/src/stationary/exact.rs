use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};

use super::{Method, StationaryEstimate};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, qp_transition_distribution, Partition, Probability};

/// Largest deck solved exactly; 627 states.
pub const MAX_EXACT_CARDS: u64 = 20;

/// Stationary law of the random game on all partitions of `n`, with the kernel
/// it was solved from.
#[derive(Clone, Debug)]
pub struct ExactStationary {
    pub n: u64,
    pub p: Probability,
    states: Vec<Partition>,
    index: HashMap<Partition, usize>,
    kernel: DMatrix<f64>,
    pi: Vec<f64>,
    residual: f64,
}

impl ExactStationary {
    /// States in reverse lexicographic order, starting with the single pile.
    pub fn states(&self) -> &[Partition] {
        &self.states
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.pi
    }

    pub fn prob(&self, s: &Partition) -> f64 {
        self.index.get(s).map_or(0.0, |&i| self.pi[i])
    }

    /// One-step transition probability `P(x, y)`.
    pub fn transition(&self, x: &Partition, y: &Partition) -> f64 {
        match (self.index.get(x), self.index.get(y)) {
            (Some(&i), Some(&j)) => self.kernel[(i, j)],
            _ => 0.0,
        }
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    /// Largest entry of `|pi P - pi|`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn mass<F: Fn(&Partition) -> bool>(&self, pred: F) -> f64 {
        self.states
            .iter()
            .zip(&self.pi)
            .filter(|(s, _)| pred(s))
            .map(|(_, &w)| w)
            .sum()
    }

    /// Stationary probability flow out of and into the set `{pred}` in one move.
    pub fn boundary_flows<F: Fn(&Partition) -> bool>(&self, pred: F) -> (f64, f64) {
        let inside: Vec<bool> = self.states.iter().map(pred).collect();
        let (mut out, mut back) = (0.0, 0.0);
        for x in 0..self.states.len() {
            for y in 0..self.states.len() {
                if inside[x] && !inside[y] {
                    out += self.pi[x] * self.kernel[(x, y)];
                    back += self.pi[y] * self.kernel[(y, x)];
                }
            }
        }
        (out, back)
    }

    pub fn estimate<F: Fn(&Partition) -> bool>(&self, pred: F) -> StationaryEstimate {
        StationaryEstimate {
            value: self.mass(pred).clamp(0.0, 1.0),
            method: Method::Exact,
            n_samples: None,
            burn_in: None,
            chains: None,
            seed: None,
            ci_low: None,
            ci_high: None,
            residual: Some(self.residual),
        }
    }

    pub fn to_map(&self) -> BTreeMap<Partition, f64> {
        self.states
            .iter()
            .cloned()
            .zip(self.pi.iter().copied())
            .collect()
    }
}

/// Solves `pi P = pi`, `sum pi = 1` by LU on the balance equations with one of
/// them replaced by the normalisation.
pub fn exact_stationary(n: u64, p: Probability) -> Result<ExactStationary> {
    if n == 0 {
        return Err(Error::Precondition(
            "the deck must hold at least one card".into(),
        ));
    }
    if n > MAX_EXACT_CARDS {
        return Err(Error::GuardExceeded {
            what: "N",
            limit: MAX_EXACT_CARDS,
            got: n,
        });
    }
    if p.is_one() {
        return Err(Error::InvalidProbability(p.get(), "(0, 1)"));
    }
    let states = enumerate_partitions(n)?;
    let index: HashMap<Partition, usize> = states
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let m = states.len();
    let mut kernel = DMatrix::<f64>::zeros(m, m);
    for (i, s) in states.iter().enumerate() {
        for (t, w) in qp_transition_distribution(s, p)? {
            kernel[(i, index[&t])] += w;
        }
    }

    let mut a = kernel.transpose() - DMatrix::<f64>::identity(m, m);
    a.row_mut(m - 1).fill(1.0);
    let mut b = DVector::<f64>::zeros(m);
    b[m - 1] = 1.0;
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular(format!("balance system for N = {n}, p = {}", p.get())))?;
    let pi: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();

    let row = DVector::from_column_slice(&pi);
    let moved = kernel.transpose() * &row;
    let residual = (moved - row).amax();
    Ok(ExactStationary {
        n,
        p,
        states,
        index,
        kernel,
        pi,
        residual,
    })
}
