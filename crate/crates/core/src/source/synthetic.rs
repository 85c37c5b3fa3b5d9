use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};

use super::country::{country_directory, CountryRef, WOEID_RANGE};
use super::{TrendRecord, TrendSource, TOP_TRENDS};
use crate::error::{Error, Result};
use crate::rng::Seed;

/// Parameters of a synthetic trend world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorldSpec {
    pub country_count: usize,
    pub trends_per_country: usize,
    /// Zipf exponent of the per-trend follower count.
    pub zipf_exponent: f64,
    pub max_followers: usize,
    /// Probability that a trend slot carries a label shared by all countries.
    pub overlap_prob: f64,
    /// Number of distinct handles followers are drawn from.
    pub user_pool: usize,
    pub seed: Seed,
}

impl Default for WorldSpec {
    fn default() -> Self {
        WorldSpec {
            country_count: 42,
            trends_per_country: TOP_TRENDS,
            zipf_exponent: 0.8,
            max_followers: 500,
            overlap_prob: 0.05,
            user_pool: 200_000,
            seed: Seed(2014),
        }
    }
}

impl WorldSpec {
    pub fn validate(&self) -> Result<()> {
        let span = (WOEID_RANGE.end - WOEID_RANGE.start + 1) as usize;
        if self.country_count == 0 || self.country_count > span {
            return Err(Error::invalid(format!(
                "country_count must be in 1..={span}, got {}",
                self.country_count
            )));
        }
        if !(1..=TOP_TRENDS).contains(&self.trends_per_country) {
            return Err(Error::invalid(format!(
                "trends_per_country must be in 1..={TOP_TRENDS}"
            )));
        }
        if !(self.zipf_exponent > 0.0 && self.zipf_exponent.is_finite()) {
            return Err(Error::invalid("zipf_exponent must be positive"));
        }
        if self.max_followers == 0 || self.user_pool == 0 {
            return Err(Error::invalid(
                "max_followers and user_pool must be positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.overlap_prob) {
            return Err(Error::invalid("overlap_prob must be in [0, 1]"));
        }
        Ok(())
    }
}

/// Deterministic stand-in for a live trend service.
///
/// Each country's records are a pure function of `(spec.seed, woeid)`, so
/// fetches can run in any order or concurrently.
#[derive(Debug, Clone)]
pub struct SyntheticWorld {
    spec: WorldSpec,
    countries: Vec<CountryRef>,
    follower_count: Zipf<f64>,
}

impl SyntheticWorld {
    pub fn new(spec: WorldSpec) -> Result<Self> {
        spec.validate()?;
        let mut countries: Vec<CountryRef> = country_directory()
            .into_iter()
            .take(spec.country_count)
            .collect();
        let taken: HashSet<u32> = countries.iter().map(|c| c.woeid).collect();
        let mut woeid = WOEID_RANGE.start;
        while countries.len() < spec.country_count {
            if !taken.contains(&woeid) {
                countries.push(CountryRef::new(woeid, format!("Synthetic {woeid}")));
            }
            woeid += 1;
        }
        countries.sort();
        let follower_count = Zipf::new(spec.max_followers as f64, spec.zipf_exponent)
            .map_err(|e| Error::invalid(format!("follower distribution: {e}")))?;
        Ok(SyntheticWorld {
            spec,
            countries,
            follower_count,
        })
    }

    pub fn spec(&self) -> &WorldSpec {
        &self.spec
    }

    fn generate(&self, country: &CountryRef) -> Vec<TrendRecord> {
        let mut rng = self.spec.seed.derive(u64::from(country.woeid)).rng();
        let tag: String = country
            .name
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect();
        (0..self.spec.trends_per_country)
            .map(|slot| {
                let shared = rng.random::<f64>() < self.spec.overlap_prob;
                let label = if shared {
                    format!("#Global{slot}")
                } else {
                    format!("#{tag}Trend{slot}")
                };
                let wanted =
                    (self.follower_count.sample(&mut rng) as usize).min(self.spec.user_pool);
                let mut seen = HashSet::with_capacity(wanted);
                let mut followers = Vec::with_capacity(wanted);
                while followers.len() < wanted {
                    let n = rng.random_range(0..self.spec.user_pool);
                    if seen.insert(n) {
                        followers.push(format!("u{n:06}"));
                    }
                }
                TrendRecord {
                    country: country.clone(),
                    label,
                    followers,
                }
            })
            .collect()
    }
}

impl TrendSource for SyntheticWorld {
    fn countries(&self) -> Result<Vec<CountryRef>> {
        Ok(self.countries.clone())
    }

    fn fetch_trends(&self, country: &CountryRef) -> Result<Vec<TrendRecord>> {
        let known = self
            .countries
            .binary_search_by_key(&country.woeid, |c| c.woeid)
            .map_err(|_| Error::not_found(format!("woeid {}", country.woeid)))?;
        Ok(self.generate(&self.countries[known]))
    }
}
