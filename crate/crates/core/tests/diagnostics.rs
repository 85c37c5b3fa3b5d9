use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use trendwalk::diagnostics::{
    fraction_within_band, geweke_trace, geweke_z, summarize, two_window_z, GewekeConfig, RunReport,
    VarianceEstimator, GEWEKE_BAND, GEWEKE_DRAWS, GEWEKE_TRACE_POINTS,
};
use trendwalk::randgen::GeneratorKind;
use trendwalk::Seed;

fn report(sampled: u64, duplicated: u64, followers: u64, memory: f64) -> RunReport {
    RunReport {
        generator: GeneratorKind::Brownian,
        collected: 150,
        filtered: sampled + 10,
        sampled,
        duplicated,
        followers,
        iterations: 150,
        elapsed_ms: 0,
        memory_mb_estimate: memory,
    }
}

/// Two-pass mean and sample standard deviation.
fn oracle(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[test]
fn reproduces_brownian_sampled_row() {
    // ten runs totalling 316 sampled trends
    let sampled = [25u64, 41, 23, 31, 30, 36, 31, 37, 29, 33];
    let reports: Vec<_> = sampled.iter().map(|&s| report(s, 10, 100, 1.0)).collect();
    let s = summarize(&reports).unwrap();
    assert_eq!(s.sampled.total, 316);
    assert_eq!(format!("{:.2}", s.sampled.avg), "31.60");
    assert_eq!(format!("{:.2}", s.sampled.std), "5.44");
}

proptest! {
    #[test]
    fn summary_matches_two_pass_oracle(
        rows in prop::collection::vec((0u64..150, 0u64..150, 0u64..100_000, 0.0f64..50.0), 2..20)
    ) {
        let reports: Vec<_> = rows.iter().map(|&(s, d, f, m)| report(s, d, f, m)).collect();
        let s = summarize(&reports).unwrap();
        prop_assert_eq!(s.sampled.total, rows.iter().map(|r| r.0).sum::<u64>());
        prop_assert_eq!(s.followers.total, rows.iter().map(|r| r.2).sum::<u64>());
        let check = |got: (f64, f64), xs: Vec<f64>| {
            let (m, sd) = oracle(&xs);
            (got.0 - m).abs() <= 1e-9 * m.abs().max(1.0) && (got.1 - sd).abs() <= 1e-9 * sd.max(1.0)
        };
        prop_assert!(check((s.sampled.avg, s.sampled.std), rows.iter().map(|r| r.0 as f64).collect()));
        prop_assert!(check((s.duplicated.avg, s.duplicated.std), rows.iter().map(|r| r.1 as f64).collect()));
        prop_assert!(check((s.followers.avg, s.followers.std), rows.iter().map(|r| r.2 as f64).collect()));
        prop_assert!(check((s.memory_mb.avg, s.memory_mb.std), rows.iter().map(|r| r.3).collect()));
        prop_assert!((s.sampled.avg - s.sampled.total as f64 / rows.len() as f64).abs() < 1e-12);
    }

    #[test]
    fn report_percentages_sum_to_100(sampled in 0u64..150, dup_frac in 0.0f64..1.0) {
        let duplicated = ((150 - sampled) as f64 * dup_frac) as u64;
        let r = report(sampled, duplicated, 0, 0.0);
        let total = r.pct_sampled() + r.pct_duplicated() + r.pct_rejected();
        prop_assert!((total - 100.0).abs() <= 0.01);
    }
}

fn normal_chain(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = Seed(seed).rng();
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

#[test]
fn iid_normal_calibration() {
    let cfg = GewekeConfig::default();
    let inside = (0..200)
        .filter(|&s| {
            geweke_z(&normal_chain(s, GEWEKE_DRAWS), &cfg)
                .unwrap()
                .z()
                .abs()
                <= 1.96
        })
        .count();
    assert!(inside as f64 / 200.0 >= 0.93, "{inside}/200 within 1.96");
}

#[test]
fn iid_normal_traces_mostly_in_band() {
    // prefix Z-scores of one chain are strongly correlated, so pool 100
    // chains; under the null about 68% of points fall in [-1, 1]
    let cfg = GewekeConfig::default();
    let mut inside = 0.0;
    for seed in 0..100 {
        let trace = geweke_trace(
            &normal_chain(1000 + seed, GEWEKE_DRAWS),
            &cfg,
            GEWEKE_TRACE_POINTS,
        )
        .unwrap();
        assert_eq!(trace.len(), 30);
        inside += fraction_within_band(&trace, GEWEKE_BAND);
    }
    let frac = inside / 100.0;
    assert!(frac > 0.5, "{frac}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn location_invariance(seed in any::<u64>(), shift in -100.0f64..100.0) {
        let chain = normal_chain(seed, GEWEKE_DRAWS);
        let shifted: Vec<f64> = chain.iter().map(|x| x + shift).collect();
        let cfg = GewekeConfig::default();
        let a = geweke_z(&chain, &cfg).unwrap().z();
        let b = geweke_z(&shifted, &cfg).unwrap().z();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn scale_equivariance(seed in any::<u64>(), c in 1e-3f64..1e3) {
        let chain = normal_chain(seed, GEWEKE_DRAWS);
        let scaled: Vec<f64> = chain.iter().map(|x| x * c).collect();
        let cfg = GewekeConfig::default();
        let a = geweke_z(&chain, &cfg).unwrap().z();
        let b = geweke_z(&scaled, &cfg).unwrap().z();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn swapping_windows_negates(seed in any::<u64>(), split in 2usize..50) {
        let xs = normal_chain(seed, 100);
        let (a, b) = xs.split_at(split);
        let z1 = two_window_z(a, b, VarianceEstimator::Iid).unwrap();
        let z2 = two_window_z(b, a, VarianceEstimator::Iid).unwrap();
        prop_assert_eq!(z1, -z2);
    }
}
