use num_complex::Complex64;

use super::{check_len, CandidateGenerator, CandidateIndex};
use crate::error::Result;

/// Rotation term; |a| = 1.
pub const ILLUSION_A: Complex64 = Complex64::new(0.6, 0.8);
/// Unit-direction term; |b| ≈ 0.999974.
pub const ILLUSION_B: Complex64 = Complex64::new(0.65, 0.7599);
pub const ILLUSION_Z0: Complex64 = Complex64::new(1.0, 0.0);
/// Below this magnitude the update is undefined in practice; the spiral
/// restarts from `ILLUSION_Z0`.
pub const ILLUSION_MIN_NORM: f64 = 1e-12;

/// Illusion spiral `z <- a z + b z / |z|`. The candidate is
/// `floor(|Re z|) mod len`. The spiral has no random input, so every
/// instance walks the same sequence.
#[derive(Debug, Clone)]
pub struct IllusionState {
    z: Complex64,
    degenerate_steps: u64,
}

impl Default for IllusionState {
    fn default() -> Self {
        Self::new()
    }
}

impl IllusionState {
    pub fn new() -> Self {
        IllusionState {
            z: ILLUSION_Z0,
            degenerate_steps: 0,
        }
    }

    /// Starts from an arbitrary non-zero point; zero falls back to `ILLUSION_Z0`.
    pub fn with_start(z: Complex64) -> Self {
        if z.norm() < ILLUSION_MIN_NORM {
            IllusionState {
                z: ILLUSION_Z0,
                degenerate_steps: 1,
            }
        } else {
            IllusionState {
                z,
                degenerate_steps: 0,
            }
        }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// Number of times the spiral collapsed and was restarted.
    pub fn degenerate_steps(&self) -> u64 {
        self.degenerate_steps
    }

    /// Applies one spiral update and returns the new point.
    pub fn advance(&mut self) -> Complex64 {
        let next = ILLUSION_A * self.z + ILLUSION_B * self.z / self.z.norm();
        if next.norm() < ILLUSION_MIN_NORM || !next.re.is_finite() || !next.im.is_finite() {
            self.degenerate_steps += 1;
            self.z = ILLUSION_Z0;
        } else {
            self.z = next;
        }
        self.z
    }
}

impl CandidateGenerator for IllusionState {
    fn next_index(&mut self, list_len: usize) -> Result<CandidateIndex> {
        check_len(list_len)?;
        let z = self.advance();
        let folded = z.re.abs().floor() as u64 % list_len as u64;
        Ok(CandidateIndex(folded as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_iterate_from_unit_start() {
        let mut s = IllusionState::new();
        let z1 = s.advance();
        // |z0| = 1 so z1 = a + b
        assert!((z1.re - 1.25).abs() <= 1e-12);
        assert!((z1.im - 1.5599).abs() <= 1e-12);
    }

    #[test]
    fn constants() {
        assert_eq!(0.6f64 * 0.6 + 0.8 * 0.8, 1.0);
        assert!((ILLUSION_A.norm() - 1.0).abs() <= 1e-15);
        assert!((ILLUSION_B.norm() - 0.999974).abs() < 5e-7);
    }

    #[test]
    fn magnitude_grows_from_unit_start() {
        let mut s = IllusionState::new();
        let mut prev = s.z().norm();
        for _ in 0..10_000 {
            let next = s.advance().norm();
            assert!(next > prev);
            assert!(next >= prev - ILLUSION_B.norm());
            prev = next;
        }
        assert!(prev > 5_000.0, "|z| after 1e4 steps = {prev}");
        assert_eq!(s.degenerate_steps(), 0);
    }

    #[test]
    fn tiny_start_does_not_collapse() {
        // a + b/r never vanishes because b is not antiparallel to a, so a
        // tiny start is pushed back out to |z| ≈ |b|.
        let mut s = IllusionState::with_start(Complex64::new(1e-9, -1e-9));
        let z = s.advance();
        assert!((z.norm() - ILLUSION_B.norm()).abs() < 1e-6);
        assert_eq!(s.degenerate_steps(), 0);
    }

    #[test]
    fn zero_start_is_guarded() {
        let s = IllusionState::with_start(Complex64::new(0.0, 0.0));
        assert_eq!(s.z(), ILLUSION_Z0);
        assert_eq!(s.degenerate_steps(), 1);
    }

    #[test]
    fn index_folds_real_part() {
        let mut s = IllusionState::new();
        // z1.re = 1.25 -> floor 1
        assert_eq!(s.next_index(10).unwrap(), CandidateIndex(1));
        assert_eq!(
            IllusionState::new().next_index(1).unwrap(),
            CandidateIndex(0)
        );
    }
}
