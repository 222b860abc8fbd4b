//! TSC and baselines on a k-means clustering of a rugged 1-D reward function,
//! where strong dominance generally does not hold.
//!
//! cargo run --release --example kmeans_benchmark

use clustered_bandits::harness::{preset, run_experiment, SeedSpec};
use clustered_bandits::instances::verify_strong_dominance;

fn main() -> clustered_bandits::Result<()> {
    let mut config = preset("kmeans-small")?;
    config.seeds = SeedSpec::Range { base: 0, count: 20 };

    let generated = config.instance.generate(0)?;
    let report = verify_strong_dominance(generated.bandit().expect("bandit"))?;
    println!(
        "seed 0: strong dominance holds = {}, {} violating arm pairs",
        report.holds, report.violation_count
    );

    let result = run_experiment(&config)?;
    for label in result.policy_labels() {
        let s = result.summary(0, &label).expect("summary");
        println!("{label:>6}: {:7.1} ± {:5.1}", s.final_mean, s.final_std);
    }
    Ok(())
}
