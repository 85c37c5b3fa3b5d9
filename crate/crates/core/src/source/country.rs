use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Seed;

/// A country identified by its "Where on Earth ID".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountryRef {
    pub woeid: u32,
    pub name: String,
}

impl CountryRef {
    pub fn new(woeid: u32, name: impl Into<String>) -> Self {
        CountryRef {
            woeid,
            name: name.into(),
        }
    }
}

/// Inclusive WOEID interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WoeidRange {
    pub start: u32,
    pub end: u32,
}

impl WoeidRange {
    pub fn new(start: u32, end: u32) -> Result<Self> {
        if start > end {
            return Err(Error::invalid(format!("empty WOEID range {start}..={end}")));
        }
        Ok(WoeidRange { start, end })
    }

    pub fn contains(&self, woeid: u32) -> bool {
        (self.start..=self.end).contains(&woeid)
    }
}

/// Country-level WOEIDs live in this block.
pub const WOEID_RANGE: WoeidRange = WoeidRange {
    start: 23_424_000,
    end: 23_425_000,
};

const DIRECTORY: [(u32, &str); 42] = [
    (23424747, "Argentina"),
    (23424748, "Australia"),
    (23424757, "Belgium"),
    (23424768, "Brazil"),
    (23424775, "Canada"),
    (23424782, "Chile"),
    (23424787, "Colombia"),
    (23424800, "Dominican Republic"),
    (23424801, "Ecuador"),
    (23424819, "France"),
    (23424829, "Germany"),
    (23424833, "Greece"),
    (23424834, "Guatemala"),
    (23424848, "India"),
    (23424846, "Indonesia"),
    (23424803, "Ireland"),
    (23424853, "Italy"),
    (23424856, "Japan"),
    (23424863, "Kenya"),
    (23424868, "Korea"),
    (23424901, "Malaysia"),
    (23424900, "Mexico"),
    (23424909, "Netherlands"),
    (23424916, "New Zealand"),
    (23424908, "Nigeria"),
    (23424910, "Norway"),
    (23424922, "Pakistan"),
    (23424919, "Peru"),
    (23424934, "Philippines"),
    (23424923, "Poland"),
    (23424925, "Portugal"),
    (23424936, "Russia"),
    (23424948, "Singapore"),
    (23424942, "South Africa"),
    (23424950, "Spain"),
    (23424954, "Sweden"),
    (23424738, "United Arab Emirates"),
    (23424969, "Turkey"),
    (23424976, "Ukraine"),
    (23424975, "United Kingdom"),
    (23424977, "United States"),
    (23424982, "Venezuela"),
];

/// The 42 countries observed with trend activity, in ascending WOEID order.
pub fn country_directory() -> Vec<CountryRef> {
    let mut v: Vec<CountryRef> = DIRECTORY
        .iter()
        .map(|&(woeid, name)| CountryRef::new(woeid, name))
        .collect();
    v.sort();
    v
}

/// Countries whose WOEID lies in `range`, ascending by WOEID.
pub fn scan_woeids(directory: &[CountryRef], range: WoeidRange) -> Vec<CountryRef> {
    let mut out: Vec<CountryRef> = directory
        .iter()
        .filter(|c| range.contains(c.woeid))
        .cloned()
        .collect();
    out.sort_by_key(|c| c.woeid);
    out
}

/// `w` distinct countries drawn uniformly without replacement.
///
/// The chosen countries keep their relative order from `countries`.
pub fn select_countries(countries: &[CountryRef], w: usize, seed: Seed) -> Result<Vec<CountryRef>> {
    if w == 0 {
        return Err(Error::invalid("must select at least one country"));
    }
    if countries.len() < w {
        return Err(Error::invalid(format!(
            "cannot select {w} countries from {}",
            countries.len()
        )));
    }
    let mut rng = seed.rng();
    let mut picked = index::sample(&mut rng, countries.len(), w).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| countries[i].clone()).collect())
}
