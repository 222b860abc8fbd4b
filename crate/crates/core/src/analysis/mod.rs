//! KL divergence, cluster statistics, regret bounds and run aggregation.

mod aggregate;
mod bounds;
mod kl;
mod stats;

pub use aggregate::{aggregate_curves, aggregate_traces, mean_std, pooled_std, RegretSummary};
pub use bounds::{
    audit_hierarchical_dominance, hts_instance_bound, lai_robbins_lower, minimax_lower_reference,
    tsc_instance_bound, tsc_instance_bound_pinsker, tsc_minimax_bound, BoundValue,
    DominanceViolation, HierarchyAudit, InstanceBound, LowerBound,
};
pub use kl::kl_bernoulli;
pub use stats::{cluster_stats, cluster_stats_of, ClusterStats, ClusterSummary};
