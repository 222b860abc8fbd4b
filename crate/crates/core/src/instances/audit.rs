use serde::{Deserialize, Serialize};

use crate::analysis::{cluster_stats_of, ClusterStats};
use crate::error::{Error, Result};
use crate::model::{ArmId, BanditInstance, ClusterId};

/// Violating pairs beyond this many are counted but not listed.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

/// An optimal-cluster arm that does not beat an arm of another cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmPairViolation {
    pub optimal_arm: ArmId,
    pub other_arm: ArmId,
    pub other_cluster: ClusterId,
    pub optimal_mean: f64,
    pub other_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub holds: bool,
    pub violation_count: usize,
    pub violations: Vec<ArmPairViolation>,
    pub stats: ClusterStats,
}

/// Checks that every arm of the optimal cluster has a strictly higher mean
/// than every arm outside it.
pub fn verify_strong_dominance(instance: &BanditInstance) -> Result<DominanceReport> {
    let clustering = instance
        .clustering()
        .ok_or_else(|| Error::domain("strong dominance needs a disjoint clustering"))?;
    let means = instance.means();
    let stats = cluster_stats_of(&means, clustering)?;
    let opt = stats.optimal_cluster;
    let mut violations = Vec::new();
    let mut count = 0;
    for &a in clustering.members(opt) {
        for (b, &c) in clustering.assignment().iter().enumerate() {
            if c != opt && means[a] <= means[b] {
                count += 1;
                if violations.len() < MAX_LISTED_VIOLATIONS {
                    violations.push(ArmPairViolation {
                        optimal_arm: a,
                        other_arm: b,
                        other_cluster: c,
                        optimal_mean: means[a],
                        other_mean: means[b],
                    });
                }
            }
        }
    }
    Ok(DominanceReport {
        holds: count == 0,
        violation_count: count,
        violations,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArmStructure, DisjointClustering};

    #[test]
    fn overlapping_pair_is_reported() {
        let c = DisjointClustering::new(vec![0, 0, 1, 1], 2).unwrap();
        let inst =
            BanditInstance::from_means(&[0.9, 0.3, 0.5, 0.1], ArmStructure::Clustered(c)).unwrap();
        let r = verify_strong_dominance(&inst).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violation_count, 1);
        assert_eq!(
            (r.violations[0].optimal_arm, r.violations[0].other_arm),
            (1, 2)
        );
    }

    #[test]
    fn single_cluster_holds_vacuously() {
        let inst = BanditInstance::from_means(
            &[0.9, 0.3],
            ArmStructure::Clustered(DisjointClustering::single(2)),
        )
        .unwrap();
        assert!(verify_strong_dominance(&inst).unwrap().holds);
    }
}
