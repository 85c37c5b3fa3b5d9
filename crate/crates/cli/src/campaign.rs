//! Runs every generator × run of a campaign and writes its output tree.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use trendwalk::diagnostics::CampaignSummary;
use trendwalk::mhrw::WalkConfig;
use trendwalk::run::{execute_run, RunOptions};
use trendwalk::source::{ReplaySource, SyntheticWorld, TrendSource};
use trendwalk::trendgraph::write_gml_string;
use trendwalk_client::LiveSource;

use crate::config::{CampaignConfig, WorldChoice};
use crate::output::{
    render_geweke, render_summary, sha256_hex, summaries_of, DatFile, GraphShape, RunId,
    SUMMARY_FILE,
};

#[derive(Debug)]
pub enum CampaignError {
    Config(trendwalk::Error),
    OutDir {
        path: PathBuf,
        source: io::Error,
    },
    Source(trendwalk::Error),
    Run {
        run: String,
        source: trendwalk::Error,
    },
}

impl CampaignError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CampaignError::OutDir { .. } => 2,
            CampaignError::Source(_) => 3,
            CampaignError::Config(_) | CampaignError::Run { .. } => 1,
        }
    }
}

impl std::fmt::Display for CampaignError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CampaignError::Config(e) => write!(f, "invalid configuration: {e}"),
            CampaignError::OutDir { path, source } => {
                write!(
                    f,
                    "output directory {} is not writable: {source}",
                    path.display()
                )
            }
            CampaignError::Source(e) => write!(f, "trend source failed: {e}"),
            CampaignError::Run { run, source } => write!(f, "run {run} failed: {source}"),
        }
    }
}

impl std::error::Error for CampaignError {}

#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    pub runs: Vec<DatFile>,
    pub summaries: Vec<CampaignSummary>,
    /// Every file written, relative to the output directory.
    pub files: Vec<String>,
}

pub fn open_source(world: &WorldChoice) -> trendwalk::Result<Box<dyn TrendSource>> {
    Ok(match world {
        WorldChoice::Synthetic(spec) => Box::new(SyntheticWorld::new(spec.clone())?),
        WorldChoice::Replay(path) => Box::new(ReplaySource::open(path)?),
        WorldChoice::Live(url) => Box::new(LiveSource::new(url)?),
    })
}

fn is_source_failure(e: &trendwalk::Error) -> bool {
    use trendwalk::Error::*;
    matches!(
        e,
        Source { .. } | Io(_) | NotFound(_) | Parse { .. } | Json(_)
    )
}

fn prepare_out_dir(dir: &Path) -> Result<(), CampaignError> {
    let fail = |source| CampaignError::OutDir {
        path: dir.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".trendwalk-write-probe");
    fs::write(&probe, b"").map_err(fail)?;
    fs::remove_file(&probe).map_err(fail)
}

/// The runs of a campaign in execution order.
pub fn run_ids(cfg: &CampaignConfig) -> Vec<RunId> {
    cfg.generators
        .iter()
        .flat_map(|&generator| {
            (1..=cfg.runs_per_generator).map(move |run| RunId { generator, run })
        })
        .collect()
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome, CampaignError> {
    cfg.validate().map_err(CampaignError::Config)?;
    prepare_out_dir(&cfg.out_dir)?;
    let source = open_source(&cfg.world).map_err(|e| {
        if is_source_failure(&e) {
            CampaignError::Source(e)
        } else {
            CampaignError::Config(e)
        }
    })?;
    let options = RunOptions {
        record_timing: cfg.record_timing,
        ..RunOptions::default()
    };

    let ids = run_ids(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CampaignError::Config(trendwalk::Error::InvalidInput(e.to_string())))?;
    let results: Vec<Result<DatFile, CampaignError>> = pool.install(|| {
        ids.par_iter()
            .map(|id| run_one(source.as_ref(), cfg, &options, *id))
            .collect()
    });

    let mut runs = Vec::with_capacity(results.len());
    let mut files = Vec::new();
    for r in results {
        let dat = r?;
        let id = dat.id();
        files.extend([id.dat_name(), id.gml_name(), id.geweke_name()]);
        runs.push(dat);
    }

    let summaries = summaries_of(runs.iter().map(|d| &d.report)).map_err(CampaignError::Config)?;
    write(
        &cfg.out_dir,
        SUMMARY_FILE,
        render_summary(&summaries).as_bytes(),
    )?;
    files.push(SUMMARY_FILE.to_string());
    tracing::info!(runs = runs.len(), dir = %cfg.out_dir.display(), "campaign finished");
    Ok(CampaignOutcome {
        runs,
        summaries,
        files,
    })
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CampaignError> {
    fs::write(dir.join(name), bytes).map_err(|source| CampaignError::OutDir {
        path: dir.to_path_buf(),
        source,
    })
}

fn run_one(
    source: &dyn TrendSource,
    cfg: &CampaignConfig,
    options: &RunOptions,
    id: RunId,
) -> Result<DatFile, CampaignError> {
    let seed = id.seed(cfg.seed);
    let walk = WalkConfig {
        generator: id.generator,
        countries: cfg.countries,
        min_followers: cfg.min_followers,
        seed,
    };
    let outcome = execute_run(source, &walk, options).map_err(|e| {
        if is_source_failure(&e) {
            CampaignError::Source(e)
        } else {
            CampaignError::Run {
                run: id.stem(),
                source: e,
            }
        }
    })?;
    tracing::debug!(run = %id.stem(), sampled = outcome.report.sampled, "run complete");

    let gml = write_gml_string(&outcome.graph);
    let g = &outcome.graph;
    let dat = DatFile {
        generator: id.generator,
        run: id.run,
        seed,
        countries: outcome.countries.clone(),
        raw: outcome.raw,
        counts: outcome.counts(),
        report: outcome.report.clone(),
        graph: GraphShape {
            nodes: g.node_count() as u64,
            trends: g.trend_count() as u64,
            users: g.user_count() as u64,
            edges: g.edge_count() as u64,
            gml_sha256: sha256_hex(gml.as_bytes()),
        },
        sampled_trends: outcome.sampled_trends.clone(),
        node_degrees: outcome.node_degrees.clone(),
    };
    write(&cfg.out_dir, &id.gml_name(), gml.as_bytes())?;
    write(&cfg.out_dir, &id.dat_name(), dat.to_json().as_bytes())?;
    write(
        &cfg.out_dir,
        &id.geweke_name(),
        render_geweke(&outcome.geweke).as_bytes(),
    )?;
    Ok(dat)
}
