//! Command-line surface. `main` only parses and forwards here.

use std::fs::File;
use std::io::BufWriter;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use trendwalk::randgen::GeneratorKind;
use trendwalk::source::{acquire, write_replay};
use trendwalk::Seed;

use crate::campaign::{open_source, run_campaign};
use crate::config::{CampaignConfig, ConfigFile, WorldChoice};
use crate::validate::validate_outputs;

#[derive(Debug, Parser)]
#[command(
    name = "trendwalk",
    version,
    about = "Sample trending topics with Metropolis-Hastings walks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a sampling campaign and write its output tree.
    Run(RunArgs),
    /// Re-check every file of a campaign directory.
    Validate { dir: PathBuf },
    /// Serve a trend world over HTTP.
    Serve(ServeArgs),
    /// Dump the trends of a world to a replay file.
    Record(RecordArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Config file, JSON or `key = value` lines. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Generators to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub generator: Vec<GeneratorKind>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub countries: Option<usize>,
    #[arg(long)]
    pub min_followers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// synthetic, replay:<path> or live:<endpoint>
    #[arg(long)]
    pub world: Option<WorldChoice>,
    /// Record wall-clock time per run (makes outputs non-reproducible).
    #[arg(long)]
    pub record_timing: bool,
    /// Worker threads; 0 uses one per core.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl RunArgs {
    pub fn to_config(&self) -> trendwalk::Result<CampaignConfig> {
        let mut cfg = CampaignConfig::default();
        if let Some(path) = &self.config {
            cfg.apply(ConfigFile::load(path)?)?;
        }
        if !self.generator.is_empty() {
            cfg.generators = self.generator.clone();
        }
        if let Some(n) = self.runs {
            cfg.runs_per_generator = n;
        }
        if let Some(n) = self.countries {
            cfg.countries = n;
        }
        if let Some(n) = self.min_followers {
            cfg.min_followers = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = Seed(s);
        }
        if let Some(p) = &self.out {
            cfg.out_dir = p.clone();
        }
        if let Some(w) = &self.world {
            cfg.world = w.clone();
        }
        if self.record_timing {
            cfg.record_timing = true;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    #[arg(long, default_value = "synthetic")]
    pub world: WorldChoice,
}

#[derive(Debug, Args)]
pub struct RecordArgs {
    #[arg(long, default_value = "synthetic")]
    pub world: WorldChoice,
    /// Countries to fetch; defaults to all of them.
    #[arg(long)]
    pub countries: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Run(args) => run(&args),
        Command::Validate { dir } => match validate_outputs(&dir) {
            Ok(report) => {
                println!("{report}");
                if report.passed() {
                    0
                } else {
                    1
                }
            }
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", dir.display());
                1
            }
        },
        Command::Serve(args) => serve(args),
        Command::Record(args) => record(&args),
    }
}

fn run(args: &RunArgs) -> i32 {
    let cfg = match args.to_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match run_campaign(&cfg) {
        Ok(out) => {
            for s in &out.summaries {
                println!(
                    "{:<10} runs {:>3}  sampled {:>6.2}%  duplicated {:>6.2}%",
                    s.generator, s.runs, s.pct_sampled, s.pct_duplicated
                );
            }
            println!(
                "wrote {} files to {}",
                out.files.len(),
                cfg.out_dir.display()
            );
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn serve(args: ServeArgs) -> i32 {
    let source = match open_source(&args.world) {
        Ok(s) => Arc::from(s),
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let result = rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(args.addr).await?;
        println!(
            "serving {} on http://{}",
            args.world,
            listener.local_addr()?
        );
        trendwalk_service::serve(listener, source, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn record(args: &RecordArgs) -> i32 {
    let result = (|| -> trendwalk::Result<usize> {
        let source = open_source(&args.world)?;
        let n = match args.countries {
            Some(n) => n,
            None => source.countries()?.len(),
        };
        let acq = acquire(source.as_ref(), n, 1, Seed(args.seed))?;
        let out = BufWriter::new(File::create(&args.out)?);
        write_replay(&acq.records, out)?;
        Ok(acq.records.len())
    })();
    match result {
        Ok(n) => {
            println!("wrote {n} trend records to {}", args.out.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}
