//! Campaign configuration: defaults, config files and world selection.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use serde_json::{Map, Value};

use trendwalk::randgen::GeneratorKind;
use trendwalk::source::WorldSpec;
use trendwalk::{Error, Result, Seed};

pub const DEFAULT_RUNS: usize = 10;
pub const DEFAULT_COUNTRIES: usize = 15;
pub const DEFAULT_MIN_FOLLOWERS: usize = 10;

/// Where trend lists come from.
#[derive(Debug, Clone, PartialEq)]
pub enum WorldChoice {
    Synthetic(WorldSpec),
    Replay(PathBuf),
    /// Base URL of a service speaking the source wire contract.
    Live(String),
}

impl Default for WorldChoice {
    fn default() -> Self {
        WorldChoice::Synthetic(WorldSpec::default())
    }
}

impl FromStr for WorldChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "synthetic" {
            return Ok(WorldChoice::default());
        }
        if let Some(path) = s.strip_prefix("replay:") {
            if path.is_empty() {
                return Err(Error::InvalidInput("replay world needs a path".into()));
            }
            return Ok(WorldChoice::Replay(PathBuf::from(path)));
        }
        if let Some(url) = s.strip_prefix("live:") {
            if url.is_empty() {
                return Err(Error::InvalidInput("live world needs an endpoint".into()));
            }
            return Ok(WorldChoice::Live(url.to_string()));
        }
        Err(Error::InvalidInput(format!(
            "unknown world {s:?}; expected synthetic, replay:<path> or live:<endpoint>"
        )))
    }
}

impl fmt::Display for WorldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldChoice::Synthetic(_) => f.write_str("synthetic"),
            WorldChoice::Replay(p) => write!(f, "replay:{}", p.display()),
            WorldChoice::Live(u) => write!(f, "live:{u}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub generators: Vec<GeneratorKind>,
    pub runs_per_generator: usize,
    pub countries: usize,
    pub min_followers: usize,
    pub world: WorldChoice,
    pub seed: Seed,
    pub out_dir: PathBuf,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub record_timing: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            generators: GeneratorKind::ALL.to_vec(),
            runs_per_generator: DEFAULT_RUNS,
            countries: DEFAULT_COUNTRIES,
            min_followers: DEFAULT_MIN_FOLLOWERS,
            world: WorldChoice::default(),
            seed: Seed(0),
            out_dir: PathBuf::from("out"),
            jobs: 0,
            record_timing: false,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidInput("no generators selected".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(g) {
                return Err(Error::InvalidInput(format!("generator {g} listed twice")));
            }
        }
        if self.runs_per_generator == 0 {
            return Err(Error::InvalidInput(
                "runs_per_generator must be >= 1".into(),
            ));
        }
        if self.countries == 0 {
            return Err(Error::InvalidInput("countries must be >= 1".into()));
        }
        if self.min_followers == 0 {
            return Err(Error::InvalidInput("min_followers must be >= 1".into()));
        }
        if let WorldChoice::Synthetic(spec) = &self.world {
            spec.validate()?;
        }
        Ok(())
    }

    /// Total number of walks.
    pub fn run_count(&self) -> usize {
        self.generators.len() * self.runs_per_generator
    }

    pub fn apply(&mut self, file: ConfigFile) -> Result<()> {
        if let Some(g) = file.generators {
            self.generators = g;
        }
        if let Some(n) = file.runs_per_generator {
            self.runs_per_generator = n;
        }
        if let Some(n) = file.countries {
            self.countries = n;
        }
        if let Some(n) = file.min_followers {
            self.min_followers = n;
        }
        if let Some(w) = file.world {
            self.world = w.parse()?;
        }
        if let Some(spec) = file.world_spec {
            match self.world {
                WorldChoice::Synthetic(_) => self.world = WorldChoice::Synthetic(spec),
                _ => {
                    return Err(Error::InvalidInput(
                        "world_spec only applies to the synthetic world".into(),
                    ))
                }
            }
        }
        if let Some(s) = file.seed {
            self.seed = Seed(s);
        }
        if let Some(p) = file.out_dir {
            self.out_dir = p;
        }
        if let Some(j) = file.jobs {
            self.jobs = j;
        }
        if let Some(t) = file.record_timing {
            self.record_timing = t;
        }
        Ok(())
    }
}

/// Contents of a config file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(alias = "generator")]
    pub generators: Option<Vec<GeneratorKind>>,
    #[serde(alias = "runs")]
    pub runs_per_generator: Option<usize>,
    pub countries: Option<usize>,
    pub min_followers: Option<usize>,
    pub world: Option<String>,
    pub world_spec: Option<WorldSpec>,
    pub seed: Option<u64>,
    #[serde(alias = "out")]
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub record_timing: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// JSON when the text starts with `{`, otherwise `key = value` lines.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Ok(serde_json::from_str(text)?);
        }
        let value = key_values(text)?;
        serde_json::from_value(value).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }
}

// Lines look like `countries = 15`, `generators = brownian, reservoir` or
// `world_spec.zipf_exponent = 1.1`. Blank lines and `#` comments are skipped.
fn key_values(text: &str) -> Result<Value> {
    let mut root = Map::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: n + 1,
                message: format!("expected key = value, got {line:?}"),
            });
        };
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        if let Some((outer, inner)) = key.split_once('.') {
            let slot = root
                .entry(outer.to_string())
                .or_insert_with(|| Value::Object(Map::new()));
            let Value::Object(obj) = slot else {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("{outer} is not a table"),
                });
            };
            obj.insert(inner.to_string(), scalar(value));
        } else if key == "generators" || key == "generator" {
            let list = value
                .split(',')
                .map(|g| Value::String(g.trim().to_string()))
                .collect();
            root.insert(key, Value::Array(list));
        } else {
            root.insert(key, scalar(value));
        }
    }
    Ok(Value::Object(root))
}

fn scalar(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn world_choice_parsing() {
        assert_eq!(
            "synthetic".parse::<WorldChoice>().unwrap(),
            WorldChoice::default()
        );
        assert_eq!(
            "replay:data/dec.jsonl".parse::<WorldChoice>().unwrap(),
            WorldChoice::Replay("data/dec.jsonl".into())
        );
        assert_eq!(
            "live:http://localhost:8080".parse::<WorldChoice>().unwrap(),
            WorldChoice::Live("http://localhost:8080".into())
        );
        assert!("replay:".parse::<WorldChoice>().is_err());
        assert!("twitter".parse::<WorldChoice>().is_err());
        for w in ["synthetic", "replay:x.jsonl", "live:http://h:1"] {
            assert_eq!(w.parse::<WorldChoice>().unwrap().to_string(), w);
        }
    }

    #[test]
    fn key_value_file() {
        let text = "
            # campaign
            generators = brownian, reservoir
            runs = 3
            out = results
            seed = 99
            world_spec.zipf_exponent = 1.2
            record-timing = true
        ";
        let mut cfg = CampaignConfig::default();
        cfg.apply(ConfigFile::parse(text).unwrap()).unwrap();
        assert_eq!(
            cfg.generators,
            vec![GeneratorKind::Brownian, GeneratorKind::Reservoir]
        );
        assert_eq!(cfg.runs_per_generator, 3);
        assert_eq!(cfg.out_dir, PathBuf::from("results"));
        assert_eq!(cfg.seed, Seed(99));
        assert!(cfg.record_timing);
        let WorldChoice::Synthetic(spec) = &cfg.world else {
            panic!("expected synthetic world");
        };
        assert_eq!(spec.zipf_exponent, 1.2);
        assert_eq!(spec.country_count, WorldSpec::default().country_count);
        cfg.validate().unwrap();
    }

    #[test]
    fn json_file_matches_key_value() {
        let kv = ConfigFile::parse("countries = 5\nworld = replay:a.jsonl\n").unwrap();
        let js = ConfigFile::parse(r#"{"countries": 5, "world": "replay:a.jsonl"}"#).unwrap();
        assert_eq!(kv, js);
    }

    #[test]
    fn bad_files_are_rejected() {
        assert!(matches!(
            ConfigFile::parse("countries 5"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ConfigFile::parse("colour = blue").is_err());
        assert!(ConfigFile::parse("generators = brownian, spiral").is_err());
        let mut cfg = CampaignConfig::default();
        let f = ConfigFile::parse("world = live:http://x\nworld_spec.seed = 3").unwrap();
        assert!(cfg.apply(f).is_err());
    }

    #[test]
    fn validation() {
        let ok = CampaignConfig::default();
        ok.validate().unwrap();
        assert_eq!(ok.run_count(), 30);
        for bad in [
            CampaignConfig {
                generators: vec![],
                ..ok.clone()
            },
            CampaignConfig {
                runs_per_generator: 0,
                ..ok.clone()
            },
            CampaignConfig {
                countries: 0,
                ..ok.clone()
            },
            CampaignConfig {
                min_followers: 0,
                ..ok.clone()
            },
            CampaignConfig {
                generators: vec![GeneratorKind::Illusion, GeneratorKind::Illusion],
                ..ok.clone()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
