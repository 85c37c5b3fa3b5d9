//! Geweke convergence diagnostic.
//!
//! After discarding a burn-in, the mean of an early window A (first 10% of
//! the draws by default) is compared with the mean of a late window B (last
//! 50%) via `Z = (mean_A − mean_B) / sqrt(s²_A/n_A + s²_B/n_B)`. A chain is
//! reported converged when |Z| <= 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GEWEKE_DRAWS: usize = 1100;
pub const GEWEKE_BURN_IN: usize = 100;
pub const GEWEKE_FIRST_FRAC: f64 = 0.10;
pub const GEWEKE_LAST_FRAC: f64 = 0.50;
pub const GEWEKE_TRACE_POINTS: usize = 30;
pub const GEWEKE_BAND: f64 = 1.0;
/// Shortest post-burn-in chain accepted.
pub const GEWEKE_MIN_LEN: usize = 20;

/// How the variance of each window mean is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum VarianceEstimator {
    /// Sample variance over n; assumes independent draws.
    Iid,
    /// Variance of `batches` batch means over `batches`; tolerates
    /// autocorrelation.
    BatchMeans { batches: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GewekeConfig {
    pub burn_in: usize,
    pub first_frac: f64,
    pub last_frac: f64,
    pub estimator: VarianceEstimator,
}

impl Default for GewekeConfig {
    fn default() -> Self {
        GewekeConfig {
            burn_in: GEWEKE_BURN_IN,
            first_frac: GEWEKE_FIRST_FRAC,
            last_frac: GEWEKE_LAST_FRAC,
            estimator: VarianceEstimator::Iid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GewekePoint {
    /// Chain length (burn-in included) at which Z was evaluated.
    pub iteration: usize,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GewekeResult {
    pub z_scores: Vec<GewekePoint>,
    pub converged: bool,
}

impl GewekeResult {
    pub fn z(&self) -> f64 {
        self.z_scores.last().map_or(0.0, |p| p.z)
    }
}

fn window_len(frac: f64, n: usize) -> usize {
    // guard against 0.1 * n landing just below an integer
    (frac * n as f64 + 1e-9).floor() as usize
}

/// Mean with one refinement pass, so a large common offset does not leak
/// rounding error into Z.
fn mean(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let rough = xs.iter().sum::<f64>() / n;
    rough + xs.iter().map(|x| x - rough).sum::<f64>() / n
}

/// Estimated variance of the mean of `xs`.
fn mean_variance(xs: &[f64], estimator: VarianceEstimator) -> Result<f64> {
    match estimator {
        VarianceEstimator::Iid => {
            let m = mean(xs);
            let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
            Ok(ss / (xs.len() - 1) as f64 / xs.len() as f64)
        }
        VarianceEstimator::BatchMeans { batches } => {
            if batches < 2 {
                return Err(Error::invalid("batch-means needs at least 2 batches"));
            }
            let size = xs.len() / batches;
            if size < 2 {
                return Err(Error::invalid(format!(
                    "window of {} draws is too short for {batches} batches",
                    xs.len()
                )));
            }
            let means: Vec<f64> = xs.chunks_exact(size).take(batches).map(mean).collect();
            let m = mean(&means);
            let ss: f64 = means.iter().map(|x| (x - m) * (x - m)).sum();
            Ok(ss / (batches - 1) as f64 / batches as f64)
        }
    }
}

/// Z-score comparing the means of two windows.
///
/// Swapping the windows negates the result exactly. Two constant windows
/// with equal means give 0; with different means there is no finite Z and
/// the call fails.
pub fn two_window_z(a: &[f64], b: &[f64], estimator: VarianceEstimator) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::invalid("each Geweke window needs at least 2 draws"));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::invalid("chain contains non-finite values"));
    }
    // Work on deviations from a pivot shared by both windows so a large
    // common offset costs no precision. The pivot is symmetric in (a, b).
    let pivot = 0.5 * a[0] + 0.5 * b[0];
    let a: Vec<f64> = a.iter().map(|x| x - pivot).collect();
    let b: Vec<f64> = b.iter().map(|x| x - pivot).collect();
    let diff = mean(&a) - mean(&b);
    let se = (mean_variance(&a, estimator)? + mean_variance(&b, estimator)?).sqrt();
    if se == 0.0 {
        if diff == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::invalid(
            "both Geweke windows are constant with different means",
        ));
    }
    Ok(diff / se)
}

fn check_fracs(cfg: &GewekeConfig) -> Result<()> {
    let ok = |f: f64| f > 0.0 && f < 1.0;
    if !ok(cfg.first_frac) || !ok(cfg.last_frac) {
        return Err(Error::invalid("window fractions must lie in (0, 1)"));
    }
    if cfg.first_frac + cfg.last_frac > 1.0 {
        return Err(Error::invalid("Geweke windows overlap"));
    }
    Ok(())
}

/// Z over a post-burn-in chain.
fn z_post_burn_in(kept: &[f64], cfg: &GewekeConfig) -> Result<f64> {
    let n = kept.len();
    if n < GEWEKE_MIN_LEN {
        return Err(Error::invalid(format!(
            "{n} draws after burn-in; at least {GEWEKE_MIN_LEN} required"
        )));
    }
    let n_a = window_len(cfg.first_frac, n);
    let n_b = window_len(cfg.last_frac, n);
    if n_a + n_b > n {
        return Err(Error::invalid("Geweke windows overlap"));
    }
    two_window_z(&kept[..n_a], &kept[n - n_b..], cfg.estimator)
}

/// Geweke Z for the whole chain.
pub fn geweke_z(chain: &[f64], cfg: &GewekeConfig) -> Result<GewekeResult> {
    check_fracs(cfg)?;
    let kept = chain.get(cfg.burn_in..).unwrap_or(&[]);
    let z = z_post_burn_in(kept, cfg)?;
    Ok(GewekeResult {
        z_scores: vec![GewekePoint {
            iteration: chain.len(),
            z,
        }],
        converged: z.abs() <= GEWEKE_BAND,
    })
}

/// Z re-evaluated on `points` growing prefixes of the chain.
///
/// With n post-burn-in draws the k-th prefix (k = 1..=points) keeps
/// `20 + (n − 20)·k / points` of them, so the last point is the full chain.
pub fn geweke_trace(chain: &[f64], cfg: &GewekeConfig, points: usize) -> Result<Vec<GewekePoint>> {
    if points == 0 {
        return Err(Error::invalid("trace needs at least one point"));
    }
    check_fracs(cfg)?;
    let kept = chain.get(cfg.burn_in..).unwrap_or(&[]);
    let n = kept.len();
    if n < GEWEKE_MIN_LEN {
        return Err(Error::invalid(format!(
            "{n} draws after burn-in; at least {GEWEKE_MIN_LEN} required"
        )));
    }
    (1..=points)
        .map(|k| {
            let m = GEWEKE_MIN_LEN + (n - GEWEKE_MIN_LEN) * k / points;
            z_post_burn_in(&kept[..m], cfg).map(|z| GewekePoint {
                iteration: cfg.burn_in + m,
                z,
            })
        })
        .collect()
}

/// Share of trace points with |Z| <= `band`.
pub fn fraction_within_band(points: &[GewekePoint], band: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    points.iter().filter(|p| p.z.abs() <= band).count() as f64 / points.len() as f64
}
