use serde::{Deserialize, Serialize};

use super::country::{scan_woeids, select_countries, CountryRef, WOEID_RANGE};
use super::{TrendRecord, TrendSource, TOP_TRENDS};
use crate::error::{Error, Result};
use crate::mhrw::TrendList;
use crate::rng::Seed;
use crate::trendgraph::TrendGraph;

/// Record counts before and after filtering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCounts {
    /// Records retrieved from the source.
    pub collected: u64,
    /// Records dropped for having fewer than `min_followers` followers.
    pub ineligible: u64,
    /// Eligible records whose label was already in the graph.
    pub duplicates_removed: u64,
    /// Unique trends that made it into the graph.
    pub filtered: u64,
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub graph: TrendGraph,
    pub list: TrendList,
    pub counts: RawCounts,
}

/// Builds the trend graph from retrieved records.
///
/// Records with fewer than `min_followers` distinct followers are dropped.
/// A record whose label is already present is counted as a duplicate and
/// skipped entirely. Every kept trend is linked to each of its followers;
/// the trend list keeps first-insertion order.
pub fn build_graph(records: &[TrendRecord], min_followers: usize) -> Result<BuildOutput> {
    if min_followers == 0 {
        return Err(Error::invalid("min_followers must be positive"));
    }
    let mut graph = TrendGraph::new();
    let mut list = Vec::new();
    let mut counts = RawCounts {
        collected: records.len() as u64,
        ..RawCounts::default()
    };
    for rec in records {
        if rec.label.is_empty() || rec.distinct_followers() < min_followers {
            counts.ineligible += 1;
            continue;
        }
        if graph.trend_id(&rec.label).is_some() {
            // records the duplicate-trend event
            graph.add_trend(&rec.label, Some(rec.country.clone()))?;
            counts.duplicates_removed += 1;
            continue;
        }
        let id = graph.add_trend(&rec.label, Some(rec.country.clone()))?;
        list.push(id);
        for handle in &rec.followers {
            graph.add_follower_edge(id, handle)?;
        }
    }
    counts.filtered = list.len() as u64;
    Ok(BuildOutput {
        graph,
        list: TrendList::new(list),
        counts,
    })
}

/// Everything retrieved for one run.
#[derive(Debug, Clone)]
pub struct Acquisition {
    pub countries: Vec<CountryRef>,
    pub records: Vec<TrendRecord>,
    pub build: BuildOutput,
}

/// Scans the source's countries, picks `countries` of them at random,
/// fetches their top trends and builds the graph.
pub fn acquire(
    source: &dyn TrendSource,
    countries: usize,
    min_followers: usize,
    seed: Seed,
) -> Result<Acquisition> {
    let available = scan_woeids(&source.countries()?, WOEID_RANGE);
    let chosen = select_countries(&available, countries, seed)?;
    let mut records = Vec::with_capacity(chosen.len() * TOP_TRENDS);
    for country in &chosen {
        let mut recs = source.fetch_trends(country)?;
        recs.truncate(TOP_TRENDS);
        records.extend(recs);
    }
    let build = build_graph(&records, min_followers)?;
    Ok(Acquisition {
        countries: chosen,
        records,
        build,
    })
}
