//! TS versus TSC on a clustered instance where the optimal cluster dominates.
//!
//! cargo run --release --example strong_dominance

use clustered_bandits::analysis::{aggregate_traces, cluster_stats};
use clustered_bandits::instances::{gen_strong_dominance, StrongDominanceSpec};
use clustered_bandits::policy::{Ts, Tsc};
use clustered_bandits::rng::SeedStreams;
use clustered_bandits::sim::simulate;

fn main() -> clustered_bandits::Result<()> {
    let spec = StrongDominanceSpec {
        n_arms: 100,
        n_suboptimal_clusters: 10,
        optimal_cluster_size: 10,
        optimal_width: 0.1,
        separation: 0.1,
    };
    let horizon = 3000;
    let (mut ts, mut tsc) = (Vec::new(), Vec::new());
    for seed in 0..20 {
        let instance = gen_strong_dominance(&spec, &mut SeedStreams::new(seed).instance())?;
        let clustering = instance.clustering().expect("clustered").clone();
        ts.push(simulate(
            &instance,
            &mut Ts::new(instance.n_arms()),
            horizon,
            seed,
        )?);
        tsc.push(simulate(
            &instance,
            &mut Tsc::new(clustering),
            horizon,
            seed,
        )?);
        if seed == 0 {
            let stats = cluster_stats(&instance)?;
            println!(
                "instance 0: w* = {:.3}, A* = {}, K = {}, gamma = {:?}",
                stats.optimal_width, stats.optimal_size, stats.n_suboptimal, stats.gamma
            );
        }
    }
    for (name, traces) in [("TS", &ts), ("TSC", &tsc)] {
        let s = aggregate_traces(traces)?;
        println!(
            "{name:>3}: regret at T={horizon}: {:.1} ± {:.1}",
            s.final_mean, s.final_std
        );
    }
    Ok(())
}
