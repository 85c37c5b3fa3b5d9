use std::mem::size_of;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mhrw::{Pick, SampleTrace, TrendList};
use crate::randgen::GeneratorKind;
use crate::source::RawCounts;
use crate::trendgraph::{NodeId, TrendGraph};

/// Statistics of one walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub generator: GeneratorKind,
    /// Trends retrieved from the source.
    pub collected: u64,
    /// Unique eligible trends (the walk's list length).
    pub filtered: u64,
    /// Distinct trends sampled by the walk.
    pub sampled: u64,
    /// Picks of already-sampled trends.
    pub duplicated: u64,
    /// Unique followers in the graph.
    pub followers: u64,
    pub iterations: u64,
    pub elapsed_ms: u64,
    pub memory_mb_estimate: f64,
}

impl RunReport {
    pub fn from_walk(
        counts: &RawCounts,
        graph: &TrendGraph,
        list: &TrendList,
        trace: &SampleTrace,
        elapsed_ms: u64,
    ) -> Self {
        let tc = trace.counts();
        RunReport {
            generator: trace.generator,
            collected: counts.collected,
            filtered: counts.filtered,
            sampled: tc.fresh,
            duplicated: tc.duplicate,
            followers: graph.user_count() as u64,
            iterations: trace.iterations(),
            elapsed_ms,
            memory_mb_estimate: memory_estimate_mb(graph, list, trace),
        }
    }

    pub fn rejected(&self) -> u64 {
        self.iterations
            .saturating_sub(self.sampled + self.duplicated)
    }

    fn pct(&self, n: u64) -> f64 {
        if self.iterations == 0 {
            0.0
        } else {
            100.0 * n as f64 / self.iterations as f64
        }
    }

    pub fn pct_sampled(&self) -> f64 {
        self.pct(self.sampled)
    }

    pub fn pct_duplicated(&self) -> f64 {
        self.pct(self.duplicated)
    }

    pub fn pct_rejected(&self) -> f64 {
        self.pct(self.rejected())
    }

    /// `sampled + duplicated <= iterations`.
    pub fn check(&self) -> Result<()> {
        if self.sampled + self.duplicated > self.iterations {
            return Err(Error::invalid(format!(
                "sampled {} + duplicated {} exceeds iterations {}",
                self.sampled, self.duplicated, self.iterations
            )));
        }
        if self.sampled > self.filtered {
            return Err(Error::invalid(format!(
                "sampled {} exceeds filtered {}",
                self.sampled, self.filtered
            )));
        }
        Ok(())
    }
}

/// Estimated footprint of the graph, list and trace in MiB, from element
/// counts and in-memory sizes. Independent of the allocator and process.
pub fn memory_estimate_mb(graph: &TrendGraph, list: &TrendList, trace: &SampleTrace) -> f64 {
    let bytes = graph.approx_bytes()
        + list.len() * size_of::<NodeId>()
        + trace.picks.len() * size_of::<Pick>();
    bytes as f64 / (1024.0 * 1024.0)
}

/// Node degree of every accepted pick, in order.
pub fn degree_chain(trace: &SampleTrace, graph: &TrendGraph) -> Result<Vec<f64>> {
    trace
        .accepted()
        .map(|p| graph.node_degree(p.candidate).map(|d| d as f64))
        .collect()
}
