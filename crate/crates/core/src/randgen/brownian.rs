use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::{check_len, CandidateGenerator, CandidateIndex};
use crate::error::Result;
use crate::rng::Seed;

/// Discretised Brownian walker: a uniform pick `floor(u * len)`, u in [0, 1).
#[derive(Debug, Clone)]
pub struct BrownianState {
    rng: ChaCha20Rng,
}

impl BrownianState {
    pub fn new(seed: Seed) -> Self {
        BrownianState { rng: seed.rng() }
    }

    /// Next uniform draw in [0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl CandidateGenerator for BrownianState {
    fn next_index(&mut self, list_len: usize) -> Result<CandidateIndex> {
        check_len(list_len)?;
        let u = self.next_uniform();
        // u < 1 so the product is < len, but guard the float edge anyway
        let idx = ((u * list_len as f64) as usize).min(list_len - 1);
        Ok(CandidateIndex(idx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_list_always_zero() {
        let mut g = BrownianState::new(Seed(3));
        for _ in 0..100 {
            assert_eq!(g.next_index(1).unwrap(), CandidateIndex(0));
        }
    }

    #[test]
    fn uniforms_in_unit_interval() {
        let mut g = BrownianState::new(Seed(11));
        for _ in 0..10_000 {
            let u = g.next_uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn frequencies_within_three_sigma() {
        // binomial oracle: n = 1e5 draws, p = 1/10
        let (n, bins) = (100_000usize, 10usize);
        let mut g = BrownianState::new(Seed(42));
        let mut counts = vec![0usize; bins];
        for _ in 0..n {
            counts[g.next_index(bins).unwrap().0] += 1;
        }
        let p = 1.0 / bins as f64;
        let mean = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - mean).abs() <= 3.0 * sigma,
                "bin {i}: {c} vs {mean} ± {}",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn chi_square_uniformity() {
        // 10 bins, 9 dof; upper 0.001 critical value of chi2(9) is 27.877
        let (n, bins) = (100_000usize, 10usize);
        let mut g = BrownianState::new(Seed(7));
        let mut counts = vec![0usize; bins];
        for _ in 0..n {
            counts[g.next_index(bins).unwrap().0] += 1;
        }
        let expected = n as f64 / bins as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 27.877, "chi2 = {chi2}");
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = BrownianState::new(Seed(5));
        let mut b = BrownianState::new(Seed(5));
        let xs: Vec<_> = (0..50).map(|_| a.next_index(17).unwrap()).collect();
        let ys: Vec<_> = (0..50).map(|_| b.next_index(17).unwrap()).collect();
        assert_eq!(xs, ys);
    }
}
