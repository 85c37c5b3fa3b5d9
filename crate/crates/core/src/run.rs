//! One complete sampling run: acquire, build, walk, diagnose.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    degree_chain, geweke_trace, GewekeConfig, GewekePoint, RunReport, GEWEKE_DRAWS,
    GEWEKE_TRACE_POINTS,
};
use crate::error::Result;
use crate::mhrw::{run_walk, run_walk_for, SampleTrace, TraceCounts, TrendList, WalkConfig};
use crate::source::{acquire, CountryRef, RawCounts, TrendSource};
use crate::trendgraph::TrendGraph;

/// Knobs of a run beyond the walk itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Length of the diagnostic walk whose degree chain feeds Geweke.
    pub geweke_draws: u64,
    pub geweke: GewekeConfig,
    pub trace_points: usize,
    /// Measure wall-clock time. Off by default so outputs are reproducible.
    pub record_timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            geweke_draws: GEWEKE_DRAWS as u64,
            geweke: GewekeConfig::default(),
            trace_points: GEWEKE_TRACE_POINTS,
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub countries: Vec<CountryRef>,
    pub raw: RawCounts,
    pub graph: TrendGraph,
    pub list: TrendList,
    pub trace: SampleTrace,
    /// Labels of accepted picks in the order chosen, duplicates included.
    pub sampled_trends: Vec<String>,
    /// Degree of each entry of `sampled_trends`.
    pub node_degrees: Vec<u64>,
    pub geweke: Vec<GewekePoint>,
}

impl RunOutcome {
    pub fn counts(&self) -> TraceCounts {
        self.trace.counts()
    }
}

/// Runs the whole pipeline for one walk configuration.
///
/// The walk and the longer diagnostic walk share the generator and seed, so
/// the sampling trace is a prefix of the diagnostic one.
pub fn execute_run(
    source: &dyn TrendSource,
    config: &WalkConfig,
    options: &RunOptions,
) -> Result<RunOutcome> {
    config.validate()?;
    let started = Instant::now();
    let acq = acquire(source, config.countries, config.min_followers, config.seed)?;
    let build = acq.build;
    let trace = run_walk(&build.graph, &build.list, config)?;
    let elapsed_ms = if options.record_timing {
        started.elapsed().as_millis() as u64
    } else {
        0
    };

    let diag = run_walk_for(
        &build.graph,
        &build.list,
        config.generator,
        config.seed,
        options.geweke_draws,
    )?;
    let chain = degree_chain(&diag, &build.graph)?;
    let geweke = geweke_trace(&chain, &options.geweke, options.trace_points)?;

    let mut sampled_trends = Vec::new();
    let mut node_degrees = Vec::new();
    for pick in trace.accepted() {
        let trend = build
            .graph
            .trend(pick.candidate)
            .expect("accepted picks are trend nodes");
        sampled_trends.push(trend.label.clone());
        node_degrees.push(trend.follower_count);
    }

    let report = RunReport::from_walk(&build.counts, &build.graph, &build.list, &trace, elapsed_ms);
    Ok(RunOutcome {
        report,
        countries: acq.countries,
        raw: build.counts,
        graph: build.graph,
        list: build.list,
        trace,
        sampled_trends,
        node_degrees,
        geweke,
    })
}
