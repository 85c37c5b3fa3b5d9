//! Re-checks a campaign directory file by file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use trendwalk::trendgraph::{read_gml, write_gml_string};

use crate::output::{
    parse_geweke, render_summary, sha256_hex, summaries_of, DatFile, RunId, SUMMARY_FILE,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileCheck {
    pub file: String,
    /// `None` when the file passed.
    pub failure: Option<String>,
}

impl FileCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for FileCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {}", self.file),
            Some(why) => write!(f, "FAIL {}: {why}", self.file),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<FileCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(FileCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FileCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    fn record(&mut self, file: impl Into<String>, result: Result<(), String>) {
        self.checks.push(FileCheck {
            file: file.into(),
            failure: result.err(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} files, {failed} failed", self.checks.len())
    }
}

fn read(dir: &Path, name: &str) -> Result<Vec<u8>, String> {
    fs::read(dir.join(name)).map_err(|e| format!("cannot read: {e}"))
}

fn check_dat(dir: &Path, name: &str, id: RunId) -> Result<DatFile, String> {
    let bytes = read(dir, name)?;
    let dat: DatFile = serde_json::from_slice(&bytes).map_err(|e| format!("bad JSON: {e}"))?;
    if dat.id() != id {
        return Err(format!(
            "records run {} but is named {name}",
            dat.id().stem()
        ));
    }
    dat.check().map_err(|e| e.to_string())?;
    Ok(dat)
}

fn check_gml(dir: &Path, name: &str, dat: Option<&DatFile>) -> Result<(), String> {
    let bytes = read(dir, name)?;
    let graph = read_gml(bytes.as_slice()).map_err(|e| e.to_string())?;
    graph.check_invariants().map_err(|e| e.to_string())?;
    if write_gml_string(&graph).as_bytes() != bytes.as_slice() {
        return Err("write(read(file)) differs from file".into());
    }
    let dat = dat.ok_or("no valid matching .dat")?;
    let shape = &dat.graph;
    let counts = [
        ("nodes", graph.node_count() as u64, shape.nodes),
        ("trends", graph.trend_count() as u64, shape.trends),
        ("users", graph.user_count() as u64, shape.users),
        ("edges", graph.edge_count() as u64, shape.edges),
    ];
    for (what, got, want) in counts {
        if got != want {
            return Err(format!("{got} {what}, .dat records {want}"));
        }
    }
    if sha256_hex(&bytes) != shape.gml_sha256 {
        return Err("digest differs from .dat".into());
    }
    for label in &dat.sampled_trends {
        if graph.trend_id(label).is_none() {
            return Err(format!("sampled trend {label:?} missing from graph"));
        }
    }
    Ok(())
}

fn check_geweke(dir: &Path, name: &str) -> Result<(), String> {
    let bytes = read(dir, name)?;
    let text = String::from_utf8(bytes).map_err(|_| "not UTF-8".to_string())?;
    parse_geweke(&text).map(|_| ()).map_err(|e| e.to_string())
}

/// Checks every campaign file in `dir`; missing companions are failures.
pub fn validate_outputs(dir: &Path) -> io::Result<ValidationReport> {
    let mut names = BTreeSet::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            names.insert(entry.file_name().to_string_lossy().into_owned());
        }
    }

    let mut report = ValidationReport::default();
    let mut runs: BTreeMap<RunId, Option<DatFile>> = BTreeMap::new();
    let mut gmls = BTreeSet::new();
    let mut gewekes = BTreeSet::new();

    for name in &names {
        if name == SUMMARY_FILE {
            continue;
        }
        let (stem, kind) = if let Some(s) = name.strip_suffix(".dat") {
            (s, "dat")
        } else if let Some(s) = name.strip_suffix(".gml") {
            (s, "gml")
        } else if let Some(s) = name
            .strip_prefix("geweke_")
            .and_then(|s| s.strip_suffix(".csv"))
        {
            (s, "geweke")
        } else {
            continue;
        };
        let Some(id) = RunId::from_stem(stem) else {
            report.record(name.as_str(), Err("name is not <generator>_<run>".into()));
            continue;
        };
        match kind {
            "dat" => {
                let dat = check_dat(dir, name, id);
                report.record(
                    name.as_str(),
                    dat.as_ref().map(|_| ()).map_err(Clone::clone),
                );
                runs.insert(id, dat.ok());
            }
            "gml" => {
                gmls.insert(id);
            }
            _ => {
                gewekes.insert(id);
            }
        }
    }

    let ids: BTreeSet<RunId> = runs.keys().chain(&gmls).chain(&gewekes).copied().collect();
    for id in &ids {
        if !runs.contains_key(id) {
            report.record(id.dat_name(), Err("missing".into()));
        }
        let gml = id.gml_name();
        if gmls.contains(id) {
            let dat = runs.get(id).and_then(Option::as_ref);
            report.record(gml.as_str(), check_gml(dir, &gml, dat));
        } else {
            report.record(gml, Err("missing".into()));
        }
        let gw = id.geweke_name();
        if gewekes.contains(id) {
            report.record(gw.as_str(), check_geweke(dir, &gw));
        } else {
            report.record(gw, Err("missing".into()));
        }
    }

    let summary = if !names.contains(SUMMARY_FILE) {
        Err("missing".to_string())
    } else if ids.is_empty() {
        Err("no runs to summarise".to_string())
    } else if runs.len() != ids.len() || runs.values().any(Option::is_none) {
        Err("cannot recompute: some .dat files are missing or invalid".to_string())
    } else {
        check_summary(dir, runs.values().flatten())
    };
    report.record(SUMMARY_FILE, summary);
    Ok(report)
}

fn check_summary<'a>(dir: &Path, dats: impl Iterator<Item = &'a DatFile>) -> Result<(), String> {
    let written = read(dir, SUMMARY_FILE)?;
    let sums = summaries_of(dats.map(|d| &d.report)).map_err(|e| e.to_string())?;
    let expected = render_summary(&sums);
    if expected.as_bytes() == written.as_slice() {
        return Ok(());
    }
    let written = String::from_utf8_lossy(&written);
    let line = expected
        .lines()
        .zip(written.lines())
        .position(|(a, b)| a != b)
        .map(|i| i + 1)
        .unwrap_or_else(|| expected.lines().count().min(written.lines().count()) + 1);
    Err(format!("differs from recomputed summary at line {line}"))
}
