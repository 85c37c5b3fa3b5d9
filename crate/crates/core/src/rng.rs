//! Seeding.
//!
//! Every random stream in the crate is ChaCha20 (RFC 7539 block function,
//! as implemented by `rand_chacha`). A [`Seed`] is expanded into a 256-bit
//! key with `rand_core`'s documented `seed_from_u64`; derived seeds select
//! a ChaCha stream, so children of one seed never share a keystream.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed(value)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    /// Child seed for an independent sub-stream identified by `label`.
    pub fn derive(self, label: u64) -> Seed {
        let mut rng = self.rng();
        rng.set_stream(label);
        Seed(rng.next_u64())
    }

    /// Child seed keyed by a pair of labels, e.g. (generator, run index).
    pub fn derive2(self, a: u64, b: u64) -> Seed {
        self.derive(a).derive(b)
    }
}

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed(value)
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
