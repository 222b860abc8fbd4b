//! Linear contextual bandits with clustered arms: LinTS, LinTSC, LinUCB, LinUCBC.
//!
//! cargo run --release --example contextual

use clustered_bandits::analysis::aggregate_traces;
use clustered_bandits::contextual::{ContextualPolicy, LinTs, LinTsc, LinUcb, LinUcbc};
use clustered_bandits::instances::{gen_contextual, ContextDistribution, ContextualSpec};
use clustered_bandits::rng::SeedStreams;
use clustered_bandits::sim::simulate_contextual;

fn main() -> clustered_bandits::Result<()> {
    let spec = ContextualSpec {
        n_arms: 100,
        n_clusters: 10,
        dim: 5,
        epsilon: 0.5,
        horizon: None,
        context: ContextDistribution::Uniform,
    };
    let horizon = 1000;
    let names = ["LinTS", "LinTSC", "LinUCB", "LinUCBC"];
    let mut traces = vec![Vec::new(); names.len()];
    for seed in 0..10 {
        let inst = gen_contextual(&spec, &mut SeedStreams::new(seed).instance())?;
        let (n, d, c) = (inst.n_arms(), inst.dim(), inst.clustering.clone());
        let mut policies: Vec<Box<dyn ContextualPolicy>> = vec![
            Box::new(LinTs::new(n, d, 1.0)?),
            Box::new(LinTsc::new(c.clone(), d, 1.0)?),
            Box::new(LinUcb::new(n, d, 2.0)?),
            Box::new(LinUcbc::new(c, d, 2.0)?),
        ];
        for (i, p) in policies.iter_mut().enumerate() {
            traces[i].push(simulate_contextual(&inst, p.as_mut(), horizon, seed)?);
        }
    }
    for (name, t) in names.iter().zip(&traces) {
        let s = aggregate_traces(t)?;
        println!("{name:>7}: {:7.1} ± {:5.1}", s.final_mean, s.final_std);
    }
    Ok(())
}
