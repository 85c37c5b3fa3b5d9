//! Candidate generators q(y|x) and the classical Metropolis-Hastings kernel.
//!
//! Each generator turns its internal state into a [`CandidateIndex`] into
//! the current trend list. All three are deterministic under a [`Seed`].

mod brownian;
mod illusion;
mod metropolis;
mod reservoir;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use brownian::BrownianState;
pub use illusion::{IllusionState, ILLUSION_A, ILLUSION_B, ILLUSION_MIN_NORM, ILLUSION_Z0};
pub use metropolis::{mh_acceptance, mh_step, Proposal, Transition};
pub use reservoir::{reservoir_sample, reservoir_sample_with, ReservoirState};

use crate::error::{Error, Result};
use crate::rng::Seed;

/// Position in the trend list a candidate was drawn against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateIndex(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Brownian,
    Illusion,
    Reservoir,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 3] = [
        GeneratorKind::Brownian,
        GeneratorKind::Illusion,
        GeneratorKind::Reservoir,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Brownian => "brownian",
            GeneratorKind::Illusion => "illusion",
            GeneratorKind::Reservoir => "reservoir",
        }
    }

    /// Stable numeric code, used to derive per-generator seeds.
    pub fn code(self) -> u64 {
        match self {
            GeneratorKind::Brownian => 0,
            GeneratorKind::Illusion => 1,
            GeneratorKind::Reservoir => 2,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "brownian" => Ok(GeneratorKind::Brownian),
            "illusion" => Ok(GeneratorKind::Illusion),
            "reservoir" => Ok(GeneratorKind::Reservoir),
            other => Err(Error::invalid(format!("unknown generator {other:?}"))),
        }
    }
}

pub trait CandidateGenerator {
    /// Draws the next candidate in `0..list_len` and advances the state.
    fn next_index(&mut self, list_len: usize) -> Result<CandidateIndex>;
}

/// Any of the three generators, selected at run time.
#[derive(Debug, Clone)]
pub enum GeneratorState {
    Brownian(BrownianState),
    Illusion(IllusionState),
    Reservoir(ReservoirState),
}

impl GeneratorState {
    pub fn new(kind: GeneratorKind, seed: Seed) -> Self {
        match kind {
            GeneratorKind::Brownian => GeneratorState::Brownian(BrownianState::new(seed)),
            GeneratorKind::Illusion => GeneratorState::Illusion(IllusionState::new()),
            GeneratorKind::Reservoir => GeneratorState::Reservoir(ReservoirState::new(seed)),
        }
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            GeneratorState::Brownian(_) => GeneratorKind::Brownian,
            GeneratorState::Illusion(_) => GeneratorKind::Illusion,
            GeneratorState::Reservoir(_) => GeneratorKind::Reservoir,
        }
    }
}

impl CandidateGenerator for GeneratorState {
    fn next_index(&mut self, list_len: usize) -> Result<CandidateIndex> {
        match self {
            GeneratorState::Brownian(g) => g.next_index(list_len),
            GeneratorState::Illusion(g) => g.next_index(list_len),
            GeneratorState::Reservoir(g) => g.next_index(list_len),
        }
    }
}

fn check_len(list_len: usize) -> Result<()> {
    if list_len == 0 {
        Err(Error::invalid("candidate list is empty"))
    } else {
        Ok(())
    }
}
