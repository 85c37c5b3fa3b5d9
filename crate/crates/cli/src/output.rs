//! On-disk layout of a campaign directory.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use trendwalk::diagnostics::{CampaignSummary, GewekePoint, MetricSummary, RunReport};
use trendwalk::mhrw::TraceCounts;
use trendwalk::randgen::GeneratorKind;
use trendwalk::source::{CountryRef, RawCounts};
use trendwalk::{Error, Result, Seed};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: &str = "generator,metric,total,avg,std";
pub const GEWEKE_HEADER: &str = "iteration,z";

/// Identifies one walk of a campaign. Runs are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunId {
    pub generator: GeneratorKind,
    pub run: usize,
}

impl RunId {
    pub fn stem(&self) -> String {
        format!("{}_{}", self.generator, self.run)
    }

    pub fn dat_name(&self) -> String {
        format!("{}.dat", self.stem())
    }

    pub fn gml_name(&self) -> String {
        format!("{}.gml", self.stem())
    }

    pub fn geweke_name(&self) -> String {
        format!("geweke_{}.csv", self.stem())
    }

    /// Parses `<gen>_<run>`.
    pub fn from_stem(stem: &str) -> Option<RunId> {
        let (g, r) = stem.rsplit_once('_')?;
        let generator = g.parse().ok()?;
        let run: usize = r.parse().ok()?;
        if run == 0 || r.starts_with('0') {
            return None;
        }
        Some(RunId { generator, run })
    }

    pub fn seed(&self, campaign: Seed) -> Seed {
        campaign.derive2(self.generator.code(), self.run as u64)
    }
}

/// Shape and digest of the graph written next to a `.dat` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphShape {
    pub nodes: u64,
    pub trends: u64,
    pub users: u64,
    pub edges: u64,
    pub gml_sha256: String,
}

/// Contents of `<gen>_<run>.dat`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatFile {
    pub generator: GeneratorKind,
    pub run: usize,
    pub seed: Seed,
    pub countries: Vec<CountryRef>,
    pub raw: RawCounts,
    pub report: RunReport,
    pub counts: TraceCounts,
    pub graph: GraphShape,
    pub sampled_trends: Vec<String>,
    pub node_degrees: Vec<u64>,
}

impl DatFile {
    pub fn id(&self) -> RunId {
        RunId {
            generator: self.generator,
            run: self.run,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dat file serialises");
        s.push('\n');
        s
    }

    /// Internal consistency of one run record.
    pub fn check(&self) -> Result<()> {
        let r = &self.report;
        let c = &self.counts;
        r.check()?;
        if r.generator != self.generator {
            return Err(Error::InvalidInput(format!(
                "report generator {} differs from {}",
                r.generator, self.generator
            )));
        }
        if c.fresh != r.sampled || c.duplicate != r.duplicated {
            return Err(Error::InvalidInput(
                "trace counts disagree with report".into(),
            ));
        }
        if c.total() != r.iterations {
            return Err(Error::InvalidInput(format!(
                "fresh {} + duplicate {} + rejected {} != iterations {}",
                c.fresh, c.duplicate, c.rejected, r.iterations
            )));
        }
        let picks = (r.sampled + r.duplicated) as usize;
        if self.sampled_trends.len() != picks || self.node_degrees.len() != picks {
            return Err(Error::InvalidInput(format!(
                "{} sampled labels and {} degrees for {picks} accepted picks",
                self.sampled_trends.len(),
                self.node_degrees.len()
            )));
        }
        let mut distinct: Vec<&str> = self.sampled_trends.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() as u64 != r.sampled {
            return Err(Error::InvalidInput(format!(
                "{} distinct sampled labels but report says {}",
                distinct.len(),
                r.sampled
            )));
        }
        if r.iterations > 0 {
            let total = r.pct_sampled() + r.pct_duplicated() + r.pct_rejected();
            if (total - 100.0).abs() > 0.01 {
                return Err(Error::InvalidInput(format!("percentages sum to {total}")));
            }
        }
        if r.followers != self.graph.users || r.filtered > self.graph.trends {
            return Err(Error::InvalidInput(
                "report disagrees with graph shape".into(),
            ));
        }
        if self.graph.nodes != self.graph.trends + self.graph.users {
            return Err(Error::InvalidInput(
                "node count is not trends + users".into(),
            ));
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn render_geweke(points: &[GewekePoint]) -> String {
    let mut s = String::from(GEWEKE_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(s, "{},{}", p.iteration, p.z);
    }
    s
}

pub fn parse_geweke(text: &str) -> Result<Vec<GewekePoint>> {
    let mut lines = text.lines();
    if lines.next() != Some(GEWEKE_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {GEWEKE_HEADER:?}"),
        });
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = |message: String| Error::Parse {
            line: i + 2,
            message,
        };
        let (it, z) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("expected two columns in {line:?}")))?;
        let iteration = it.parse().map_err(|e| bad(format!("iteration: {e}")))?;
        let z: f64 = z.parse().map_err(|e| bad(format!("z: {e}")))?;
        if !z.is_finite() {
            return Err(bad(format!("non-finite z {z}")));
        }
        if points
            .last()
            .is_some_and(|p: &GewekePoint| p.iteration >= iteration)
        {
            return Err(bad("iterations must increase".into()));
        }
        points.push(GewekePoint { iteration, z });
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("geweke trace has no rows".into()));
    }
    Ok(points)
}

fn count_row(s: &mut String, g: GeneratorKind, name: &str, m: &MetricSummary<u64>, std: bool) {
    let _ = write!(s, "{g},{name},{},{:.4},", m.total, m.avg);
    if std {
        let _ = write!(s, "{:.4}", m.std);
    }
    s.push('\n');
}

/// `summary.csv` for the given per-generator summaries.
///
/// Percentage rows carry the cumulative percentage in `total` and leave the
/// other columns empty; `std` is empty when only one run exists.
pub fn render_summary(summaries: &[CampaignSummary]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for c in summaries {
        let g = c.generator;
        let sd = c.std_defined;
        count_row(&mut s, g, "collected", &c.collected, sd);
        count_row(&mut s, g, "filtered", &c.filtered, sd);
        count_row(&mut s, g, "sampled", &c.sampled, sd);
        count_row(&mut s, g, "duplicated", &c.duplicated, sd);
        count_row(&mut s, g, "followers", &c.followers, sd);
        count_row(&mut s, g, "iterations", &c.iterations, sd);
        let m = &c.memory_mb;
        let _ = write!(s, "{g},memory_mb,{:.4},{:.4},", m.total, m.avg);
        if sd {
            let _ = write!(s, "{:.4}", m.std);
        }
        s.push('\n');
        let _ = writeln!(s, "{g},pct_sampled,{:.2},,", c.pct_sampled);
        let _ = writeln!(s, "{g},pct_duplicated,{:.2},,", c.pct_duplicated);
    }
    s
}

/// Summaries in canonical generator order, one per generator present.
pub fn summaries_of<'a, I>(reports: I) -> Result<Vec<CampaignSummary>>
where
    I: IntoIterator<Item = &'a RunReport>,
{
    let reports: Vec<&RunReport> = reports.into_iter().collect();
    let mut out = Vec::new();
    for g in GeneratorKind::ALL {
        let mine: Vec<RunReport> = reports
            .iter()
            .filter(|r| r.generator == g)
            .map(|r| (*r).clone())
            .collect();
        if !mine.is_empty() {
            out.push(trendwalk::diagnostics::summarize(&mine)?);
        }
    }
    Ok(out)
}
