use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::{check_len, CandidateGenerator, CandidateIndex};
use crate::error::{Error, Result};
use crate::rng::Seed;

/// Reservoir draw used as a candidate generator: `j = random(1, i)` with
/// the replacement step dropped. `j` is folded into the list with
/// `(j - 1) mod len`.
#[derive(Debug, Clone)]
pub struct ReservoirState {
    i: u64,
    rng: ChaCha20Rng,
}

impl ReservoirState {
    pub fn new(seed: Seed) -> Self {
        ReservoirState {
            i: 1,
            rng: seed.rng(),
        }
    }

    /// Counter value used by the next draw.
    pub fn step(&self) -> u64 {
        self.i
    }

    /// Draws `j` uniformly from `1..=i` and increments `i`.
    pub fn next_j(&mut self) -> u64 {
        let j = self.rng.random_range(1..=self.i);
        self.i += 1;
        j
    }
}

impl CandidateGenerator for ReservoirState {
    fn next_index(&mut self, list_len: usize) -> Result<CandidateIndex> {
        check_len(list_len)?;
        let j = self.next_j();
        Ok(CandidateIndex(((j - 1) % list_len as u64) as usize))
    }
}

/// Classic reservoir sampling of `k` items, including the conditional
/// replacement step. Each item ends up in the result with probability k/N.
pub fn reservoir_sample<T: Clone>(source: &[T], k: usize, seed: Seed) -> Result<Vec<T>> {
    let mut rng = seed.rng();
    reservoir_sample_with(source, k, |i| rng.random_range(1..=i))
}

/// [`reservoir_sample`] with an explicit draw: `draw(i)` must return an
/// integer in `1..=i`. Lets callers enumerate every possible draw sequence.
pub fn reservoir_sample_with<T, F>(source: &[T], k: usize, mut draw: F) -> Result<Vec<T>>
where
    T: Clone,
    F: FnMut(usize) -> usize,
{
    if k == 0 {
        return Err(Error::invalid("reservoir size must be positive"));
    }
    if source.len() < k {
        return Err(Error::invalid(format!(
            "source has {} items, fewer than k = {k}",
            source.len()
        )));
    }
    let mut reservoir: Vec<T> = source[..k].to_vec();
    // 1-based positions k+1..=N
    for i in (k + 1)..=source.len() {
        let j = draw(i);
        debug_assert!((1..=i).contains(&j));
        if j <= k {
            reservoir[j - 1] = source[i - 1].clone();
        }
    }
    Ok(reservoir)
}
