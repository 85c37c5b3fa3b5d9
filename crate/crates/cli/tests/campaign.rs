use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

use trendwalk::randgen::GeneratorKind;
use trendwalk::source::{SyntheticWorld, WorldSpec};
use trendwalk::Seed;
use trendwalk_cli::{run_campaign, validate_outputs, CampaignConfig, WorldChoice};

fn config(dir: &Path) -> CampaignConfig {
    CampaignConfig {
        out_dir: dir.to_path_buf(),
        seed: Seed(17),
        ..CampaignConfig::default()
    }
}

// Oracle: digest over sorted (name, bytes) pairs.
fn tree_hash(dir: &Path) -> String {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    let mut h = Sha256::new();
    for p in entries {
        h.update(p.file_name().unwrap().to_string_lossy().as_bytes());
        h.update([0]);
        let bytes = fs::read(&p).unwrap();
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    hex::encode(h.finalize())
}

fn count_ext(dir: &Path, ext: &str) -> usize {
    fs::read_dir(dir)
        .unwrap()
        .filter(|e| {
            let name = e.as_ref().unwrap().file_name();
            let name = name.to_string_lossy();
            name.ends_with(ext) && !name.starts_with("geweke_")
        })
        .count()
}

#[test]
fn default_campaign_writes_thirty_runs() {
    let tmp = TempDir::new().unwrap();
    let out = run_campaign(&config(tmp.path())).unwrap();
    assert_eq!(out.runs.len(), 30);
    assert_eq!(count_ext(tmp.path(), ".dat"), 30);
    assert_eq!(count_ext(tmp.path(), ".gml"), 30);
    assert_eq!(count_ext(tmp.path(), "summary.csv"), 1);
    assert!(tmp.path().join("geweke_illusion_10.csv").exists());
    for d in &out.runs {
        assert_eq!(d.report.iterations, 150);
    }
}

#[test]
fn single_run_writes_one_pair() {
    let tmp = TempDir::new().unwrap();
    let cfg = CampaignConfig {
        generators: vec![GeneratorKind::Reservoir],
        runs_per_generator: 1,
        ..config(tmp.path())
    };
    run_campaign(&cfg).unwrap();
    assert_eq!(count_ext(tmp.path(), ".dat"), 1);
    assert_eq!(count_ext(tmp.path(), ".gml"), 1);
    assert!(tmp.path().join("reservoir_1.dat").exists());
    let report = validate_outputs(tmp.path()).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn same_seed_same_tree() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let c = TempDir::new().unwrap();
    run_campaign(&config(a.path())).unwrap();
    run_campaign(&CampaignConfig {
        jobs: 1,
        ..config(b.path())
    })
    .unwrap();
    run_campaign(&CampaignConfig {
        seed: Seed(18),
        ..config(c.path())
    })
    .unwrap();
    assert_eq!(tree_hash(a.path()), tree_hash(b.path()));
    assert_ne!(tree_hash(a.path()), tree_hash(c.path()));
}

fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

#[test]
fn summary_matches_independent_aggregation() {
    let tmp = TempDir::new().unwrap();
    let cfg = CampaignConfig {
        runs_per_generator: 4,
        ..config(tmp.path())
    };
    run_campaign(&cfg).unwrap();

    // Oracle reads .dat files as untyped JSON.
    let mut by_gen: BTreeMap<String, Vec<Value>> = BTreeMap::new();
    for e in fs::read_dir(tmp.path()).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "dat") {
            let v: Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
            by_gen
                .entry(v["generator"].as_str().unwrap().to_string())
                .or_default()
                .push(v["report"].clone());
        }
    }

    let csv = fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("generator,metric,total,avg,std"));
    let mut seen = 0;
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 5, "{row}");
        let reports = &by_gen[cols[0]];
        let field = |name: &str| -> Vec<f64> {
            reports.iter().map(|r| r[name].as_f64().unwrap()).collect()
        };
        let total: f64 = cols[2].parse().unwrap();
        match cols[1] {
            "pct_sampled" | "pct_duplicated" => {
                let num: f64 = field(if cols[1] == "pct_sampled" {
                    "sampled"
                } else {
                    "duplicated"
                })
                .iter()
                .sum();
                let den: f64 = field("iterations").iter().sum();
                assert!((total - 100.0 * num / den).abs() <= 0.005 + 1e-9, "{row}");
            }
            metric => {
                let name = if metric == "memory_mb" {
                    "memory_mb_estimate"
                } else {
                    metric
                };
                let xs = field(name);
                let avg: f64 = cols[3].parse().unwrap();
                let std: f64 = cols[4].parse().unwrap();
                let want_total: f64 = xs.iter().sum();
                assert!(
                    (total - want_total).abs() <= 5e-5 * want_total.max(1.0),
                    "{row}"
                );
                assert!(
                    (avg - want_total / xs.len() as f64).abs() <= 5e-5 + 1e-9,
                    "{row}"
                );
                assert!((std - sample_std(&xs)).abs() <= 5e-5 + 1e-9, "{row}");
            }
        }
        seen += 1;
    }
    assert_eq!(seen, 3 * 9);
}

#[test]
fn untouched_directory_validates() {
    let tmp = TempDir::new().unwrap();
    run_campaign(&CampaignConfig {
        runs_per_generator: 2,
        ..config(tmp.path())
    })
    .unwrap();
    let report = validate_outputs(tmp.path()).unwrap();
    assert!(report.passed(), "{report}");
    assert_eq!(report.checks.len(), 3 * 2 * 3 + 1);
}

#[test]
fn any_corrupt_gml_byte_is_caught() {
    let tmp = TempDir::new().unwrap();
    run_campaign(&CampaignConfig {
        generators: vec![GeneratorKind::Brownian],
        runs_per_generator: 2,
        ..config(tmp.path())
    })
    .unwrap();
    let path = tmp.path().join("brownian_2.gml");
    let pristine = fs::read(&path).unwrap();
    let len = pristine.len();
    for k in 0..25 {
        let pos = (k * 7919 + 13) % len;
        let mut bytes = pristine.clone();
        bytes[pos] = if bytes[pos] == b'x' { b'y' } else { b'x' };
        fs::write(&path, &bytes).unwrap();
        let report = validate_outputs(tmp.path()).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.file.clone()).collect();
        assert_eq!(failed, vec!["brownian_2.gml".to_string()], "byte {pos}");
    }
    fs::write(&path, &pristine).unwrap();
    assert!(validate_outputs(tmp.path()).unwrap().passed());
}

#[test]
fn tampering_and_missing_files_fail() {
    let tmp = TempDir::new().unwrap();
    run_campaign(&CampaignConfig {
        generators: vec![GeneratorKind::Illusion],
        runs_per_generator: 2,
        ..config(tmp.path())
    })
    .unwrap();
    let summary = tmp.path().join("summary.csv");
    let text = fs::read_to_string(&summary).unwrap();
    fs::write(
        &summary,
        text.replacen("illusion,sampled,", "illusion,sampled,1", 1),
    )
    .unwrap();
    let failed: Vec<_> = validate_outputs(tmp.path())
        .unwrap()
        .failures()
        .map(|c| c.file.clone())
        .collect();
    assert_eq!(failed, vec!["summary.csv"]);
    fs::write(&summary, text).unwrap();

    fs::remove_file(tmp.path().join("geweke_illusion_1.csv")).unwrap();
    let report = validate_outputs(tmp.path()).unwrap();
    let failed: Vec<_> = report.failures().map(|c| c.to_string()).collect();
    assert_eq!(failed, vec!["FAIL geweke_illusion_1.csv: missing"]);

    // Breaking the accounting identity in a .dat also invalidates the summary.
    let dat = tmp.path().join("illusion_2.dat");
    let mut v: Value = serde_json::from_slice(&fs::read(&dat).unwrap()).unwrap();
    let rejected = v["counts"]["rejected"].as_u64().unwrap();
    v["counts"]["rejected"] = Value::from(rejected + 1);
    fs::write(&dat, serde_json::to_vec_pretty(&v).unwrap()).unwrap();
    let report = validate_outputs(tmp.path()).unwrap();
    let failed: Vec<_> = report.failures().map(|c| c.file.clone()).collect();
    assert!(failed.contains(&"illusion_2.dat".to_string()), "{report}");
    assert!(failed.contains(&"summary.csv".to_string()));
}

#[test]
fn empty_directory_fails_validation() {
    let tmp = TempDir::new().unwrap();
    let report = validate_outputs(tmp.path()).unwrap();
    assert!(!report.passed());
}

#[test]
fn replay_and_live_worlds_reproduce_the_synthetic_tree() {
    let bin = env!("CARGO_BIN_EXE_trendwalk");
    let tmp = TempDir::new().unwrap();
    let replay = tmp.path().join("world.jsonl");
    let status = Command::new(bin)
        .args(["record", "--out"])
        .arg(&replay)
        .status()
        .unwrap();
    assert!(status.success());

    let small = |out: &Path, world: WorldChoice| CampaignConfig {
        runs_per_generator: 2,
        world,
        ..config(out)
    };
    let synth = tmp.path().join("synthetic");
    let replayed = tmp.path().join("replay");
    let live = tmp.path().join("live");
    run_campaign(&small(&synth, WorldChoice::default())).unwrap();
    run_campaign(&small(&replayed, WorldChoice::Replay(replay.clone()))).unwrap();

    let world = Arc::new(SyntheticWorld::new(WorldSpec::default()).unwrap());
    let (addr_tx, addr_rx) = std::sync::mpsc::channel();
    let (stop_tx, stop_rx) = tokio::sync::oneshot::channel::<()>();
    let server = std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            addr_tx.send(listener.local_addr().unwrap()).unwrap();
            trendwalk_service::serve(listener, world, async {
                let _ = stop_rx.await;
            })
            .await
            .unwrap();
        });
    });
    let addr = addr_rx.recv().unwrap();
    run_campaign(&small(&live, WorldChoice::Live(format!("http://{addr}")))).unwrap();
    stop_tx.send(()).unwrap();
    server.join().unwrap();

    let h = tree_hash(&synth);
    assert_eq!(tree_hash(&replayed), h);
    assert_eq!(tree_hash(&live), h);
}

fn trendwalk(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_trendwalk"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let unwritable = blocker.join("out");
    let out = trendwalk(&["run", "--runs", "1", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("not writable"));

    let dir = tmp.path().join("c");
    let d = dir.to_str().unwrap();
    let out = trendwalk(&[
        "run",
        "--runs",
        "1",
        "--out",
        d,
        "--world",
        "replay:/nonexistent/x.jsonl",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let world = format!("live:http://127.0.0.1:{port}");
    let out = trendwalk(&["run", "--runs", "1", "--out", d, "--world", &world]);
    assert_eq!(out.status.code(), Some(3));

    let out = trendwalk(&["run", "--runs", "0", "--out", d]);
    assert_eq!(out.status.code(), Some(1));

    let out = trendwalk(&[
        "run",
        "--runs",
        "1",
        "--generator",
        "brownian,reservoir",
        "--out",
        d,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = trendwalk(&["validate", d]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS brownian_1.gml"));
    assert!(stdout.contains("PASS reservoir_1.dat"));

    fs::remove_file(dir.join("reservoir_1.gml")).unwrap();
    let out = trendwalk(&["validate", d]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL reservoir_1.gml: missing"));
}

#[test]
fn config_file_with_flag_overrides() {
    let tmp = TempDir::new().unwrap();
    let cfg_path = tmp.path().join("campaign.conf");
    let out = tmp.path().join("o");
    fs::write(
        &cfg_path,
        format!("generators = illusion\nruns = 3\nout = {}\n", out.display()),
    )
    .unwrap();
    let o = trendwalk(&["run", "--config", cfg_path.to_str().unwrap(), "--runs", "2"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(count_ext(&out, ".dat"), 2);
    assert!(out.join("illusion_2.dat").exists());
}
