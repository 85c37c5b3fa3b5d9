use serde::{Deserialize, Serialize};

use super::report::RunReport;
use crate::error::{Error, Result};
use crate::randgen::GeneratorKind;

/// Total, mean and sample standard deviation of one metric across runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary<T> {
    pub total: T,
    pub avg: f64,
    /// n − 1 denominator; 0 when only one run exists.
    pub std: f64,
}

/// Per-generator campaign statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub generator: GeneratorKind,
    pub runs: usize,
    /// False when `runs == 1` and the standard deviations are placeholders.
    pub std_defined: bool,
    pub collected: MetricSummary<u64>,
    pub filtered: MetricSummary<u64>,
    pub sampled: MetricSummary<u64>,
    pub duplicated: MetricSummary<u64>,
    pub followers: MetricSummary<u64>,
    pub iterations: MetricSummary<u64>,
    pub memory_mb: MetricSummary<f64>,
    /// Cumulative sampled trends over cumulative iterations, in percent.
    pub pct_sampled: f64,
    /// Cumulative duplicates over cumulative iterations, in percent.
    pub pct_duplicated: f64,
}

/// Running mean/variance (Welford).
#[derive(Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn std(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).sqrt()
        }
    }
}

fn counts(reports: &[RunReport], get: impl Fn(&RunReport) -> u64) -> MetricSummary<u64> {
    let mut m = Moments::default();
    let mut total = 0u64;
    for r in reports {
        let v = get(r);
        total += v;
        m.push(v as f64);
    }
    MetricSummary {
        total,
        avg: total as f64 / reports.len() as f64,
        std: m.std(),
    }
}

fn reals(reports: &[RunReport], get: impl Fn(&RunReport) -> f64) -> MetricSummary<f64> {
    let mut m = Moments::default();
    let mut total = 0.0;
    for r in reports {
        let v = get(r);
        total += v;
        m.push(v);
    }
    MetricSummary {
        total,
        avg: total / reports.len() as f64,
        std: m.std(),
    }
}

/// Summarises the runs of one generator.
pub fn summarize(reports: &[RunReport]) -> Result<CampaignSummary> {
    let first = reports
        .first()
        .ok_or_else(|| Error::invalid("no run reports to summarise"))?;
    if let Some(other) = reports.iter().find(|r| r.generator != first.generator) {
        return Err(Error::invalid(format!(
            "mixed generators: {} and {}",
            first.generator, other.generator
        )));
    }
    let iterations = counts(reports, |r| r.iterations);
    let sampled = counts(reports, |r| r.sampled);
    let duplicated = counts(reports, |r| r.duplicated);
    let pct = |n: u64| {
        if iterations.total == 0 {
            0.0
        } else {
            100.0 * n as f64 / iterations.total as f64
        }
    };
    Ok(CampaignSummary {
        generator: first.generator,
        runs: reports.len(),
        std_defined: reports.len() > 1,
        collected: counts(reports, |r| r.collected),
        filtered: counts(reports, |r| r.filtered),
        pct_sampled: pct(sampled.total),
        pct_duplicated: pct(duplicated.total),
        sampled,
        duplicated,
        followers: counts(reports, |r| r.followers),
        iterations,
        memory_mb: reals(reports, |r| r.memory_mb_estimate),
    })
}
