use std::process::Command;

use clustered_bandits::harness::{
    run_experiment, ExperimentConfig, ExperimentReport, Format, InstanceSpec, PolicySpec, SeedSpec,
    CSV_HEADER,
};
use clustered_bandits::instances::StrongDominanceSpec;
use clustered_bandits::Error;

fn separation_config(seeds: usize, horizon: usize) -> ExperimentConfig {
    ExperimentConfig {
        name: "sep".into(),
        instance: InstanceSpec::StrongDominance(StrongDominanceSpec {
            n_arms: 100,
            n_suboptimal_clusters: 10,
            optimal_cluster_size: 10,
            optimal_width: 0.1,
            separation: 0.1,
        }),
        policies: vec![PolicySpec::new("ts"), PolicySpec::new("tsc")],
        horizon,
        seeds: SeedSpec::Range {
            base: 0,
            count: seeds,
        },
        output: None,
        stride: None,
        bounds: false,
        sweep: None,
    }
}

#[test]
fn fifty_seeds_two_policies_give_a_hundred_traces() {
    let r = run_experiment(&separation_config(50, 200)).unwrap();
    assert_eq!(r.runs.len(), 100);
    assert_eq!(r.variants.len(), 1);
    assert_eq!(r.variants[0].summaries.len(), 2);
    for (p, label) in ["ts", "tsc"].iter().enumerate() {
        let finals: Vec<f64> = r.runs_for(0, p).map(|run| run.final_regret()).collect();
        assert_eq!(finals.len(), 50);
        let mean = finals.iter().sum::<f64>() / 50.0;
        let s = r.summary(0, label).unwrap();
        assert!((s.final_mean - mean).abs() < 1e-9);
        assert_eq!(s.runs, 50);
    }
}

#[test]
fn identical_configs_give_byte_identical_csv() {
    let c = separation_config(4, 300);
    let a = run_experiment(&c).unwrap().csv_string().unwrap();
    let b = run_experiment(&c).unwrap().csv_string().unwrap();
    assert_eq!(a, b);
}

#[test]
fn adding_a_policy_leaves_other_traces_untouched() {
    let base = run_experiment(&separation_config(3, 150)).unwrap();
    let mut c = separation_config(3, 150);
    c.policies.push(PolicySpec::new("ucb1"));
    let more = run_experiment(&c).unwrap();
    for p in 0..2 {
        let a: Vec<_> = base.runs_for(0, p).collect();
        let b: Vec<_> = more.runs_for(0, p).collect();
        assert_eq!(a, b);
    }
}

#[test]
fn empty_policy_list_is_a_config_error() {
    let mut c = separation_config(2, 10);
    c.policies.clear();
    assert!(matches!(run_experiment(&c), Err(Error::Config { .. })));
}

#[test]
fn unknown_policy_key_is_a_config_error() {
    let mut c = separation_config(2, 10);
    c.policies.push(PolicySpec::new("egreedy"));
    assert!(matches!(c.validate(), Err(Error::Config { .. })));
}

#[test]
fn short_horizon_logs_every_round() {
    let mut c = separation_config(1, 10);
    c.policies.truncate(1);
    c.stride = Some(1);
    let csv = run_experiment(&c).unwrap().csv_string().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert!(lines[1].starts_with("sep,ts,0,1,"));
    assert!(lines[10].starts_with("sep,ts,0,10,"));
}

#[test]
fn json_report_round_trips() {
    let mut c = separation_config(3, 100);
    c.bounds = true;
    let report = run_experiment(&c).unwrap().report();
    let text = report.to_json().unwrap();
    assert_eq!(ExperimentReport::from_json(&text).unwrap(), report);
    assert!(report.variants[0].bounds.is_some());
}

#[test]
fn svg_has_a_band_and_mean_line_per_policy() {
    let r = run_experiment(&separation_config(3, 100)).unwrap();
    let svg = r.svg(0);
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("class=\"band\"").count(), 2);
    assert_eq!(svg.matches("class=\"mean\"").count(), 2);
}

#[test]
fn export_writes_requested_files() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_experiment(&separation_config(2, 50)).unwrap();
    let files = r
        .export(&[Format::Csv, Format::Json, Format::Svg], dir.path())
        .unwrap();
    assert_eq!(files.len(), 3);
    for f in files {
        assert!(f.exists(), "{}", f.display());
    }
}

#[test]
fn config_parses_from_json() {
    let text = r#"{
        "name": "tiny",
        "instance": {"kind": "uniform", "n_arms": 12, "n_clusters": 3},
        "policies": [{"key": "ts"}, {"key": "tsmax", "params": {"statistic": "empirical_mean"}}],
        "horizon": 40,
        "seeds": [1, 2, 3]
    }"#;
    let c = ExperimentConfig::from_json(text).unwrap();
    let r = run_experiment(&c).unwrap();
    assert_eq!(r.runs.len(), 6);
    assert_eq!(r.runs[0].regret.len(), 40);
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clusterbandit"))
}

#[test]
fn cli_lists_presets() {
    let out = cli().arg("list-presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fig-d-sweep"));
    assert!(text.contains("kmeans-large"));
}

#[test]
fn cli_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    let mut c = separation_config(2, 60);
    c.name = "cli".into();
    std::fs::write(&config, serde_json::to_string(&c).unwrap()).unwrap();
    let status = cli()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .args(["--format", "csv", "--format", "json"])
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(dir.path().join("cli.csv").exists());
    assert!(dir.path().join("cli.json").exists());
}

#[test]
fn cli_generate_then_audit() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let gen = cli()
        .args([
            "generate",
            "--preset",
            "fig-d-sweep",
            "--seed",
            "3",
            "--out",
        ])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(gen.status.success());
    let audit = cli()
        .args(["audit", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(audit.status.success());
    assert!(!audit.stdout.is_empty());
}

#[test]
fn cli_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"instance": {"kind": "uniform", "n_arms": 5, "n_clusters": 2}, "policies": [], "horizon": 10, "seeds": [0]}"#).unwrap();
    let out = cli()
        .args(["run", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
