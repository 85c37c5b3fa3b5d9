use clap::Parser;
use tracing_subscriber::EnvFilter;

use trendwalk_cli::cli::{execute, Cli};

fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_env("TRENDWALK_LOG").unwrap_or_else(|_| EnvFilter::new("warn")),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    std::process::exit(execute(cli));
}
