//! Metropolis-Hastings random walk sampling of trending topics.
//!
//! The crate is organised around the data flow of a sampling run:
//!
//! * [`source`] acquires per-country trend lists (synthetic world, replay
//!   file, or any backend speaking the JSON wire contract) and builds the
//!   trend/follower graph.
//! * [`trendgraph`] holds that graph and its GML representation.
//! * [`randgen`] provides the three candidate generators (Brownian, Illusion
//!   spiral, Reservoir) plus the classical Metropolis-Hastings kernel.
//! * [`mhrw`] walks the trend list, accepting candidates by graph membership.
//! * [`diagnostics`] turns walks into run reports, campaign summaries and
//!   Geweke convergence traces.

pub mod api;
pub mod diagnostics;
pub mod error;
pub mod mhrw;
pub mod randgen;
pub mod rng;
pub mod run;
pub mod source;
pub mod trendgraph;

pub use error::{Error, Result};
pub use rng::Seed;
