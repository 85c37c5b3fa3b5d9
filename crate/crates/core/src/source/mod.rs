//! Trend-stream acquisition and graph construction.
//!
//! A [`TrendSource`] answers two questions: which countries have trends,
//! and what are the top trends (with their followers) for one country.
//! [`SyntheticWorld`] and [`ReplaySource`] implement it in-process; the
//! [`wire`] module defines the JSON request/response contract remote
//! backends speak.

mod country;
mod pipeline;
mod replay;
mod synthetic;
pub mod wire;

use serde::{Deserialize, Serialize};

pub use country::{
    country_directory, scan_woeids, select_countries, CountryRef, WoeidRange, WOEID_RANGE,
};
pub use pipeline::{acquire, build_graph, Acquisition, BuildOutput, RawCounts};
pub use replay::{write_replay, ReplaySource};
pub use synthetic::{SyntheticWorld, WorldSpec};

use crate::error::Result;

/// Top trends fetched per country.
pub const TOP_TRENDS: usize = 10;

/// One trending topic as retrieved for one country.
///
/// Serialised flat: `{woeid, name, label, followers}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendRecord {
    #[serde(flatten)]
    pub country: CountryRef,
    pub label: String,
    pub followers: Vec<String>,
}

impl TrendRecord {
    /// Number of distinct handles in `followers`.
    pub fn distinct_followers(&self) -> usize {
        let mut seen: Vec<&str> = self.followers.iter().map(String::as_str).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

pub trait TrendSource: Send + Sync {
    /// Countries with publicly available trends.
    fn countries(&self) -> Result<Vec<CountryRef>>;

    /// At most [`TOP_TRENDS`] records for `country`.
    fn fetch_trends(&self, country: &CountryRef) -> Result<Vec<TrendRecord>>;
}

impl<T: TrendSource + ?Sized> TrendSource for Box<T> {
    fn countries(&self) -> Result<Vec<CountryRef>> {
        (**self).countries()
    }

    fn fetch_trends(&self, country: &CountryRef) -> Result<Vec<TrendRecord>> {
        (**self).fetch_trends(country)
    }
}

impl<T: TrendSource + ?Sized> TrendSource for std::sync::Arc<T> {
    fn countries(&self) -> Result<Vec<CountryRef>> {
        (**self).countries()
    }

    fn fetch_trends(&self, country: &CountryRef) -> Result<Vec<TrendRecord>> {
        (**self).fetch_trends(country)
    }
}
