//! Campaign runner for trendwalk: configuration, output tree and validator.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod output;
pub mod validate;

pub use campaign::{run_campaign, CampaignError, CampaignOutcome};
pub use config::{CampaignConfig, ConfigFile, WorldChoice};
pub use validate::{validate_outputs, ValidationReport};
