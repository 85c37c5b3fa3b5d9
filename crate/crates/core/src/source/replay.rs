use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::country::CountryRef;
use super::{TrendRecord, TrendSource, TOP_TRENDS};
use crate::error::{Error, Result};

/// Replays trends recorded as JSON Lines, one [`TrendRecord`] per line.
#[derive(Debug, Clone, Default)]
pub struct ReplaySource {
    records: Vec<TrendRecord>,
}

impl ReplaySource {
    pub fn new(records: Vec<TrendRecord>) -> Self {
        ReplaySource { records }
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(File::open(path)?)
    }

    /// Parses JSON Lines; blank lines are skipped.
    pub fn from_reader<R: Read>(input: R) -> Result<Self> {
        let mut records = Vec::new();
        for (n, line) in BufReader::new(input).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: TrendRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: n + 1,
                message: e.to_string(),
            })?;
            records.push(rec);
        }
        Ok(ReplaySource { records })
    }

    pub fn records(&self) -> &[TrendRecord] {
        &self.records
    }
}

impl TrendSource for ReplaySource {
    fn countries(&self) -> Result<Vec<CountryRef>> {
        let mut out: Vec<CountryRef> = self.records.iter().map(|r| r.country.clone()).collect();
        out.sort_by_key(|c| c.woeid);
        out.dedup_by_key(|c| c.woeid);
        Ok(out)
    }

    fn fetch_trends(&self, country: &CountryRef) -> Result<Vec<TrendRecord>> {
        let out: Vec<TrendRecord> = self
            .records
            .iter()
            .filter(|r| r.country.woeid == country.woeid)
            .take(TOP_TRENDS)
            .cloned()
            .collect();
        if out.is_empty() {
            return Err(Error::not_found(format!(
                "woeid {} not in replay",
                country.woeid
            )));
        }
        Ok(out)
    }
}

/// Writes records as JSON Lines.
pub fn write_replay<'a, W, I>(records: I, mut out: W) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a TrendRecord>,
{
    for rec in records {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
