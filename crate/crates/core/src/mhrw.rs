//! The membership-accept Metropolis-Hastings random walk.
//!
//! At every iteration a candidate index is drawn from the configured
//! generator and resolved against the trend list. The candidate is accepted
//! iff it belongs to the graph; otherwise the walk stays put. Accepted
//! picks are recorded in the order chosen, duplicates included.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randgen::{CandidateGenerator, CandidateIndex, GeneratorKind, GeneratorState};
use crate::rng::Seed;
use crate::source::TOP_TRENDS;
use crate::trendgraph::{NodeId, TrendGraph};

/// Ordered trend nodes available for candidate selection.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrendList(Vec<NodeId>);

impl TrendList {
    pub fn new(entries: Vec<NodeId>) -> Self {
        TrendList(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, idx: CandidateIndex) -> Option<NodeId> {
        self.0.get(idx.0).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }
}

impl From<Vec<NodeId>> for TrendList {
    fn from(v: Vec<NodeId>) -> Self {
        TrendList(v)
    }
}

/// "node ∈ G".
pub trait Membership {
    fn contains_node(&self, id: NodeId) -> bool;
}

impl Membership for TrendGraph {
    fn contains_node(&self, id: NodeId) -> bool {
        self.contains(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PickOutcome {
    Fresh,
    Duplicate,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pick {
    pub iteration: u64,
    pub candidate: NodeId,
    /// Walk position after this iteration; equals `candidate` unless rejected.
    pub position: NodeId,
    pub outcome: PickOutcome,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCounts {
    pub fresh: u64,
    pub duplicate: u64,
    pub rejected: u64,
}

impl TraceCounts {
    pub fn total(&self) -> u64 {
        self.fresh + self.duplicate + self.rejected
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleTrace {
    pub generator: GeneratorKind,
    pub start: NodeId,
    pub picks: Vec<Pick>,
}

impl SampleTrace {
    pub fn iterations(&self) -> u64 {
        self.picks.len() as u64
    }

    /// Accepted picks in the order chosen.
    pub fn accepted(&self) -> impl Iterator<Item = &Pick> + '_ {
        self.picks
            .iter()
            .filter(|p| p.outcome != PickOutcome::Rejected)
    }

    pub fn counts(&self) -> TraceCounts {
        let mut c = TraceCounts::default();
        for p in &self.picks {
            match p.outcome {
                PickOutcome::Fresh => c.fresh += 1,
                PickOutcome::Duplicate => c.duplicate += 1,
                PickOutcome::Rejected => c.rejected += 1,
            }
        }
        c
    }

    /// The first `n` iterations of this trace.
    pub fn truncated(&self, n: usize) -> SampleTrace {
        SampleTrace {
            generator: self.generator,
            start: self.start,
            picks: self.picks.iter().take(n).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub generator: GeneratorKind,
    pub countries: usize,
    pub min_followers: usize,
    pub seed: Seed,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            generator: GeneratorKind::Brownian,
            countries: 15,
            min_followers: 10,
            seed: Seed(0),
        }
    }
}

impl WalkConfig {
    /// Iteration budget: one draw per available trend slot.
    pub fn iterations(&self) -> u64 {
        (self.countries * TOP_TRENDS) as u64
    }

    pub fn validate(&self) -> Result<()> {
        if self.countries == 0 {
            return Err(Error::invalid("countries must be at least 1"));
        }
        if self.min_followers == 0 {
            return Err(Error::invalid("min_followers must be at least 1"));
        }
        Ok(())
    }
}

pub fn run_walk<G: Membership + ?Sized>(
    graph: &G,
    list: &TrendList,
    config: &WalkConfig,
) -> Result<SampleTrace> {
    config.validate()?;
    run_walk_for(
        graph,
        list,
        config.generator,
        config.seed,
        config.iterations(),
    )
}

/// Walk with an explicit iteration budget.
pub fn run_walk_for<G: Membership + ?Sized>(
    graph: &G,
    list: &TrendList,
    generator: GeneratorKind,
    seed: Seed,
    iterations: u64,
) -> Result<SampleTrace> {
    let start = list
        .get(CandidateIndex(0))
        .ok_or_else(|| Error::invalid("trend list is empty"))?;
    let mut state = GeneratorState::new(generator, seed);
    let mut accepted: HashSet<NodeId> = HashSet::new();
    let mut position = start;
    let mut picks = Vec::with_capacity(iterations as usize);
    for iteration in 0..iterations {
        let idx = state.next_index(list.len())?;
        let candidate = list.get(idx).ok_or_else(|| {
            Error::invalid(format!("generator produced index {} out of range", idx.0))
        })?;
        let outcome = if graph.contains_node(candidate) {
            position = candidate;
            if accepted.insert(candidate) {
                PickOutcome::Fresh
            } else {
                PickOutcome::Duplicate
            }
        } else {
            PickOutcome::Rejected
        };
        picks.push(Pick {
            iteration,
            candidate,
            position,
            outcome,
        });
    }
    Ok(SampleTrace {
        generator,
        start,
        picks,
    })
}

/// Distinct nodes sampled by the walk.
pub fn unique_trends(trace: &SampleTrace) -> BTreeSet<NodeId> {
    trace
        .picks
        .iter()
        .filter(|p| p.outcome == PickOutcome::Fresh)
        .map(|p| p.candidate)
        .collect()
}

pub fn duplicate_count(trace: &SampleTrace) -> u64 {
    trace
        .picks
        .iter()
        .filter(|p| p.outcome == PickOutcome::Duplicate)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_with(n: usize) -> (TrendGraph, TrendList) {
        let mut g = TrendGraph::new();
        let ids = (0..n)
            .map(|i| {
                let t = g.add_trend(&format!("#t{i}"), None).unwrap();
                g.add_follower_edge(t, &format!("u{i}")).unwrap();
                t
            })
            .collect();
        (g, TrendList::new(ids))
    }

    /// Only nodes below `limit` belong to this partial graph.
    struct Partial {
        limit: u32,
    }

    impl Membership for Partial {
        fn contains_node(&self, id: NodeId) -> bool {
            id.0 < self.limit
        }
    }

    #[test]
    fn single_trend_list() {
        let (g, list) = graph_with(1);
        for generator in GeneratorKind::ALL {
            let cfg = WalkConfig {
                generator,
                countries: 1,
                ..WalkConfig::default()
            };
            let trace = run_walk(&g, &list, &cfg).unwrap();
            let c = trace.counts();
            assert_eq!((c.fresh, c.duplicate, c.rejected), (1, 9, 0));
            assert_eq!(duplicate_count(&trace), 9);
        }
    }

    #[test]
    fn default_budget_is_150() {
        let (g, list) = graph_with(150);
        let trace = run_walk(&g, &list, &WalkConfig::default()).unwrap();
        assert_eq!(trace.iterations(), 150);
        let iters: Vec<u64> = trace.picks.iter().map(|p| p.iteration).collect();
        assert_eq!(iters, (0..150).collect::<Vec<_>>());
    }

    #[test]
    fn empty_list_rejected() {
        let (g, _) = graph_with(0);
        assert!(matches!(
            run_walk(&g, &TrendList::default(), &WalkConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn start_is_first_list_entry() {
        let (g, list) = graph_with(5);
        let trace = run_walk(&g, &list, &WalkConfig::default()).unwrap();
        assert_eq!(trace.start, list.as_slice()[0]);
    }

    #[test]
    fn unique_and_duplicates() {
        let a = NodeId(0);
        let b = NodeId(1);
        let pick = |iteration, node, outcome| Pick {
            iteration,
            candidate: node,
            position: node,
            outcome,
        };
        let trace = SampleTrace {
            generator: GeneratorKind::Brownian,
            start: a,
            picks: vec![
                pick(0, a, PickOutcome::Fresh),
                pick(1, a, PickOutcome::Duplicate),
                pick(2, b, PickOutcome::Fresh),
            ],
        };
        assert_eq!(unique_trends(&trace), [a, b].into_iter().collect());
        assert_eq!(duplicate_count(&trace), 1);

        let empty = SampleTrace {
            picks: vec![],
            ..trace
        };
        assert!(unique_trends(&empty).is_empty());
    }

    #[test]
    fn rejection_stays_put() {
        // list entries 0..10 but only 0..5 are members
        let (_, list) = graph_with(10);
        let partial = Partial { limit: 5 };
        let trace = run_walk_for(&partial, &list, GeneratorKind::Brownian, Seed(3), 200).unwrap();
        let c = trace.counts();
        assert!(c.rejected > 0);
        assert_eq!(c.total(), 200);
        let mut prev = trace.start;
        for p in &trace.picks {
            if p.outcome == PickOutcome::Rejected {
                assert_eq!(p.position, prev);
                assert!(!partial.contains_node(p.candidate));
            } else {
                assert_eq!(p.position, p.candidate);
                assert!(partial.contains_node(p.candidate));
            }
            prev = p.position;
        }
    }

    #[test]
    fn fresh_iff_first_acceptance() {
        let (g, list) = graph_with(20);
        let trace = run_walk_for(&g, &list, GeneratorKind::Reservoir, Seed(8), 300).unwrap();
        let mut seen = HashSet::new();
        for p in trace.accepted() {
            let first = seen.insert(p.candidate);
            assert_eq!(first, p.outcome == PickOutcome::Fresh);
        }
        assert_eq!(unique_trends(&trace).len() as u64, trace.counts().fresh);
    }

    #[test]
    fn prefix_of_longer_walk() {
        let (g, list) = graph_with(30);
        let long = run_walk_for(&g, &list, GeneratorKind::Brownian, Seed(2), 1100).unwrap();
        let short = run_walk_for(&g, &list, GeneratorKind::Brownian, Seed(2), 150).unwrap();
        assert_eq!(long.truncated(150), short);
    }

    #[test]
    fn invalid_config() {
        let (g, list) = graph_with(3);
        let cfg = WalkConfig {
            countries: 0,
            ..WalkConfig::default()
        };
        assert!(run_walk(&g, &list, &cfg).is_err());
    }
}
