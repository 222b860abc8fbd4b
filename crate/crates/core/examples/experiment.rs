//! Runs a small configured experiment with a parameter sweep and writes CSV,
//! JSON and SVG output.
//!
//! cargo run --release --example experiment -- [output-dir]

use clustered_bandits::harness::{run_experiment, ExperimentConfig, Format};

const CONFIG: &str = r#"{
    "name": "separation",
    "instance": {
        "kind": "strong_dominance",
        "n_arms": 60,
        "n_suboptimal_clusters": 6,
        "optimal_cluster_size": 6,
        "optimal_width": 0.1,
        "separation": 0.1
    },
    "policies": [{"key": "ts"}, {"key": "tsc"}, {"key": "ucbc"}],
    "horizon": 2000,
    "seeds": {"base": 0, "count": 10},
    "bounds": true,
    "sweep": {"parameter": "separation", "values": [0.05, 0.2]}
}"#;

fn main() -> clustered_bandits::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "experiment-output".into());
    std::fs::create_dir_all(&dir)?;
    let config = ExperimentConfig::from_json(CONFIG)?;
    let result = run_experiment(&config)?;
    for (i, v) in result.variants.iter().enumerate() {
        for label in result.policy_labels() {
            let s = result.summary(i, &label).expect("summary");
            println!(
                "{:<28} {label:>5}: {:7.1} ± {:5.1}",
                v.id, s.final_mean, s.final_std
            );
        }
    }
    for path in result.export(&[Format::Csv, Format::Json, Format::Svg], dir.as_ref())? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
