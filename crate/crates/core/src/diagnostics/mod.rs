//! Run reports, campaign summaries and convergence diagnostics.

mod geweke;
mod report;
mod summary;

pub use geweke::{
    fraction_within_band, geweke_trace, geweke_z, two_window_z, GewekeConfig, GewekePoint,
    GewekeResult, VarianceEstimator, GEWEKE_BAND, GEWEKE_BURN_IN, GEWEKE_DRAWS, GEWEKE_FIRST_FRAC,
    GEWEKE_LAST_FRAC, GEWEKE_MIN_LEN, GEWEKE_TRACE_POINTS,
};
pub use report::{degree_chain, memory_estimate_mb, RunReport};
pub use summary::{summarize, CampaignSummary, MetricSummary};
