//! HTS at increasing tree depth on a sorted binary tree.
//!
//! cargo run --release --example hierarchical

use clustered_bandits::analysis::{aggregate_traces, audit_hierarchical_dominance};
use clustered_bandits::instances::gen_sorted_binary_tree;
use clustered_bandits::policy::Hts;
use clustered_bandits::rng::SeedStreams;
use clustered_bandits::sim::simulate;

fn main() -> clustered_bandits::Result<()> {
    let n_arms = 256;
    let horizon = 3000;
    let seeds = 0..20;
    let instances = seeds
        .clone()
        .map(|s| gen_sorted_binary_tree(n_arms, &mut SeedStreams::new(s).instance()))
        .collect::<Result<Vec<_>, _>>()?;

    let audit = audit_hierarchical_dominance(&instances[0])?;
    println!(
        "hierarchical dominance holds on instance 0: {}",
        audit.holds
    );

    for levels in [0, 1, 2, 4, 8] {
        let mut traces = Vec::new();
        for (seed, inst) in seeds.clone().zip(&instances) {
            let tree = inst.tree().expect("tree").truncate(levels);
            traces.push(simulate(inst, &mut Hts::new(tree), horizon, seed)?);
        }
        let s = aggregate_traces(&traces)?;
        println!(
            "L = {levels}: regret {:7.1} ± {:5.1}",
            s.final_mean, s.final_std
        );
    }
    Ok(())
}
