//! Request and response bodies of the HTTP service.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    CampaignSummary, GewekeConfig, GewekePoint, GewekeResult, RunReport, VarianceEstimator,
    GEWEKE_BAND, GEWEKE_BURN_IN, GEWEKE_FIRST_FRAC, GEWEKE_LAST_FRAC, GEWEKE_TRACE_POINTS,
};
use crate::mhrw::{TraceCounts, WalkConfig};
use crate::randgen::GeneratorKind;
use crate::rng::Seed;
use crate::run::RunOutcome;
use crate::source::{CountryRef, RawCounts};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkRequest {
    pub generator: GeneratorKind,
    #[serde(default)]
    pub seed: Seed,
    #[serde(default = "default_countries")]
    pub countries: usize,
    #[serde(default = "default_min_followers")]
    pub min_followers: usize,
}

fn default_countries() -> usize {
    15
}

fn default_min_followers() -> usize {
    10
}

impl From<&WalkRequest> for WalkConfig {
    fn from(r: &WalkRequest) -> Self {
        WalkConfig {
            generator: r.generator,
            countries: r.countries,
            min_followers: r.min_followers,
            seed: r.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkResponse {
    pub report: RunReport,
    pub raw: RawCounts,
    pub counts: TraceCounts,
    pub countries: Vec<CountryRef>,
    pub sampled_trends: Vec<String>,
    pub node_degrees: Vec<u64>,
    pub geweke: Vec<GewekePoint>,
}

impl From<RunOutcome> for WalkResponse {
    fn from(o: RunOutcome) -> Self {
        WalkResponse {
            counts: o.counts(),
            report: o.report,
            raw: o.raw,
            countries: o.countries,
            sampled_trends: o.sampled_trends,
            node_degrees: o.node_degrees,
            geweke: o.geweke,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GewekeRequest {
    pub chain: Vec<f64>,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_first")]
    pub first_frac: f64,
    #[serde(default = "default_last")]
    pub last_frac: f64,
    #[serde(default = "default_estimator")]
    pub estimator: VarianceEstimator,
    /// Trace points; only used by the trace endpoint.
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_burn_in() -> usize {
    GEWEKE_BURN_IN
}
fn default_first() -> f64 {
    GEWEKE_FIRST_FRAC
}
fn default_last() -> f64 {
    GEWEKE_LAST_FRAC
}
fn default_estimator() -> VarianceEstimator {
    VarianceEstimator::Iid
}
fn default_points() -> usize {
    GEWEKE_TRACE_POINTS
}

impl GewekeRequest {
    pub fn new(chain: Vec<f64>) -> Self {
        GewekeRequest {
            chain,
            burn_in: GEWEKE_BURN_IN,
            first_frac: GEWEKE_FIRST_FRAC,
            last_frac: GEWEKE_LAST_FRAC,
            estimator: VarianceEstimator::Iid,
            points: GEWEKE_TRACE_POINTS,
        }
    }

    pub fn config(&self) -> GewekeConfig {
        GewekeConfig {
            burn_in: self.burn_in,
            first_frac: self.first_frac,
            last_frac: self.last_frac,
            estimator: self.estimator,
        }
    }
}

pub type GewekeResponse = GewekeResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GewekeTraceResponse {
    pub points: Vec<GewekePoint>,
    /// Share of points with |Z| <= 1.
    pub fraction_within_band: f64,
}

impl GewekeTraceResponse {
    pub fn new(points: Vec<GewekePoint>) -> Self {
        let fraction_within_band = crate::diagnostics::fraction_within_band(&points, GEWEKE_BAND);
        GewekeTraceResponse {
            points,
            fraction_within_band,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummarizeRequest {
    pub reports: Vec<RunReport>,
}

pub type SummarizeResponse = CampaignSummary;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}
