//! Cluster statistics, dominance audits and regret-bound values for a
//! hand-written instance.
//!
//! cargo run --example bounds

use clustered_bandits::analysis::BoundValue;
use clustered_bandits::analysis::{
    cluster_stats, lai_robbins_lower, minimax_lower_reference, tsc_instance_bound,
    tsc_instance_bound_pinsker, tsc_minimax_bound,
};
use clustered_bandits::instances::verify_strong_dominance;
use clustered_bandits::model::{ArmStructure, BanditInstance, DisjointClustering};

fn show(v: BoundValue) -> String {
    v.value().map_or("unbounded".into(), |x| format!("{x:.1}"))
}

fn main() -> clustered_bandits::Result<()> {
    let clustering =
        DisjointClustering::from_members(vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7]])?;
    let means = [0.6, 0.55, 0.5, 0.4, 0.35, 0.3, 0.25, 0.2];
    let instance = BanditInstance::from_means(&means, ArmStructure::Clustered(clustering))?;

    let stats = cluster_stats(&instance)?;
    for c in &stats.clusters {
        println!(
            "cluster {}: size {}, [{:.2}, {:.2}], d = {:.2}, gap = {:.2}, gamma_c = {:.3}",
            c.cluster,
            c.size,
            c.mu_under,
            c.mu_bar,
            c.distance,
            c.gap,
            c.gamma_c.unwrap_or(f64::NAN)
        );
    }
    println!("gamma = {:?}", stats.gamma);
    println!(
        "strong dominance: {}",
        verify_strong_dominance(&instance)?.holds
    );

    for t in [1e3, 1e4, 1e5] {
        let kl = tsc_instance_bound(&stats, t, 0.1)?;
        let pinsker = tsc_instance_bound_pinsker(&stats, t, 0.1)?;
        println!(
            "T = {t:>6}: TSC {}, Pinsker form {}, minimax shape {}, minimax floor {:.1}, Lai-Robbins {:.1}",
            show(kl.leading),
            show(pinsker.leading),
            show(tsc_minimax_bound(&stats, t)?),
            minimax_lower_reference(&stats, t)?,
            lai_robbins_lower(&stats, t)?.value
        );
    }
    Ok(())
}
