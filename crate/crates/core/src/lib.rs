//! Deterministic and random Bulgarian solitaire on integer partitions.
//!
//! The crate is organised around four layers:
//!
//! * [`partitions`]: the [`Partition`] state, both move operators, reference
//!   triangular profiles and the distance/order predicates used to talk about
//!   "roughly triangular" configurations.
//! * [`etienne`]: the Etienne-diagram view of a configuration, where a move is
//!   a cyclic row shift followed by gravity, together with the energy and
//!   shape functionals built on it.
//! * [`dynamics`]: deterministic orbit analysis (cycles, hitting times,
//!   energy decay) and the immigration process that dominates the random game.
//! * [`stationary`]: the exact stationary law for small decks and a seeded,
//!   parallel Monte Carlo estimator for large ones.

pub mod dynamics;
pub mod error;
pub mod etienne;
pub mod partitions;
pub mod rng;
pub mod sampling;
pub mod stationary;

pub use error::{Error, Result};
pub use etienne::{EtienneDiagram, ShapeStats};
pub use partitions::{BernoulliField, Partition, Probability};
pub use stationary::StationaryEstimate;
