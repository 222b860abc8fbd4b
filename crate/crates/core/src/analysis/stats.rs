use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ArmId, BanditInstance, ClusterId, DisjointClustering};

/// Per-cluster quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub cluster: ClusterId,
    pub size: usize,
    /// Best mean in the cluster.
    pub mu_bar: f64,
    /// Worst mean in the cluster.
    pub mu_under: f64,
    pub width: f64,
    /// min over the optimal cluster minus max over this one; 0 for the optimal cluster.
    pub distance: f64,
    /// μ* − mu_bar.
    pub gap: f64,
    /// w* / distance; `None` when the distance is not positive.
    pub gamma_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub optimal_cluster: ClusterId,
    pub best_mean: f64,
    /// Width w* of the optimal cluster.
    pub optimal_width: f64,
    /// Number K of sub-optimal clusters.
    pub n_suboptimal: usize,
    /// Size A* of the optimal cluster.
    pub optimal_size: usize,
    /// Σ γ_C / K (0 when K = 0); `None` when some sub-optimal cluster overlaps C*.
    pub gamma: Option<f64>,
    pub clusters: Vec<ClusterSummary>,
    /// Δ_a = μ* − μ_a for every arm.
    pub arm_gaps: Vec<f64>,
    /// Means of the optimal cluster's arms.
    pub optimal_means: Vec<f64>,
}

impl ClusterStats {
    pub fn suboptimal(&self) -> impl Iterator<Item = &ClusterSummary> {
        self.clusters
            .iter()
            .filter(move |c| c.cluster != self.optimal_cluster)
    }

    pub fn optimal(&self) -> &ClusterSummary {
        &self.clusters[self.optimal_cluster]
    }

    /// Strong dominance: every sub-optimal cluster lies strictly below C*.
    pub fn dominance_holds(&self) -> bool {
        self.suboptimal().all(|c| c.distance > 0.0)
    }
}

/// Cluster statistics of `means` under `clustering`. C* is the cluster of
/// the lowest-index best arm.
pub fn cluster_stats_of(means: &[f64], clustering: &DisjointClustering) -> Result<ClusterStats> {
    if means.len() != clustering.n_arms() || means.is_empty() {
        return Err(Error::domain(
            "means and clustering disagree on the arm count",
        ));
    }
    let best = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best_arm: ArmId = means.iter().position(|&m| m == best).expect("non-empty");
    let opt = clustering.cluster_of(best_arm);
    let extent = |c: ClusterId| {
        clustering
            .members(c)
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| {
                (lo.min(means[a]), hi.max(means[a]))
            })
    };
    let (opt_lo, _) = extent(opt);
    let w_star = best - opt_lo;
    let mut clusters = Vec::with_capacity(clustering.cluster_count());
    for c in 0..clustering.cluster_count() {
        let (lo, hi) = extent(c);
        let distance = if c == opt { 0.0 } else { opt_lo - hi };
        let gamma_c = if c == opt {
            Some(0.0)
        } else if distance > 0.0 {
            Some(w_star / distance)
        } else {
            None
        };
        clusters.push(ClusterSummary {
            cluster: c,
            size: clustering.members(c).len(),
            mu_bar: hi,
            mu_under: lo,
            width: hi - lo,
            distance,
            gap: best - hi,
            gamma_c,
        });
    }
    let k = clustering.cluster_count() - 1;
    let gamma = clusters
        .iter()
        .map(|c| c.gamma_c)
        .sum::<Option<f64>>()
        .map(|s| if k == 0 { 0.0 } else { s / k as f64 });
    Ok(ClusterStats {
        optimal_cluster: opt,
        best_mean: best,
        optimal_width: w_star,
        n_suboptimal: k,
        optimal_size: clustering.members(opt).len(),
        gamma,
        clusters,
        arm_gaps: means.iter().map(|m| best - m).collect(),
        optimal_means: clustering.members(opt).iter().map(|&a| means[a]).collect(),
    })
}

/// [`cluster_stats_of`] for an instance with a disjoint clustering (a tree
/// contributes its top-level partition).
pub fn cluster_stats(instance: &BanditInstance) -> Result<ClusterStats> {
    let clustering = instance
        .clustering()
        .cloned()
        .or_else(|| instance.tree().map(|t| t.top_level_partition()))
        .ok_or_else(|| Error::domain("instance has no clustering"))?;
    cluster_stats_of(&instance.means(), &clustering)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ArmStructure;

    fn inst(means: &[f64], assignment: Vec<usize>, k: usize) -> BanditInstance {
        let c = DisjointClustering::new(assignment, k).unwrap();
        BanditInstance::from_means(means, ArmStructure::Clustered(c)).unwrap()
    }

    #[test]
    fn hand_computed_instance() {
        // C0 = {0.6, 0.5}, C1 = {0.4, 0.3}, C2 = {0.45}.
        let s = cluster_stats(&inst(&[0.3, 0.6, 0.45, 0.5, 0.4], vec![1, 0, 2, 0, 1], 3)).unwrap();
        assert_eq!(s.optimal_cluster, 0);
        assert!((s.optimal_width - 0.1).abs() < 1e-15);
        assert_eq!(s.n_suboptimal, 2);
        assert_eq!(s.optimal_size, 2);
        let c1 = &s.clusters[1];
        assert!((c1.distance - 0.1).abs() < 1e-15);
        assert!((c1.gap - 0.2).abs() < 1e-15);
        assert!((c1.width - 0.1).abs() < 1e-15);
        let c2 = &s.clusters[2];
        assert!((c2.distance - 0.05).abs() < 1e-15);
        let g = (0.1 / 0.1 + 0.1 / 0.05) / 2.0;
        assert!((s.gamma.unwrap() - g).abs() < 1e-12);
        assert_eq!(s.optimal().gap, 0.0);
        assert!(s.dominance_holds());
    }

    #[test]
    fn zero_width_and_singleton_optimal_give_zero_gamma() {
        let s = cluster_stats(&inst(&[0.6, 0.6, 0.4], vec![0, 0, 1], 2)).unwrap();
        assert_eq!(s.gamma, Some(0.0));
        let s = cluster_stats(&inst(&[0.6, 0.5, 0.4], vec![0, 1, 1], 2)).unwrap();
        assert_eq!(s.optimal_width, 0.0);
        assert_eq!(s.gamma, Some(0.0));
    }

    #[test]
    fn overlap_leaves_gamma_undefined() {
        let s = cluster_stats(&inst(&[0.6, 0.3, 0.5], vec![0, 0, 1], 2)).unwrap();
        assert!(!s.dominance_holds());
        assert_eq!(s.gamma, None);
    }

    #[test]
    fn flat_instance_is_an_error() {
        let flat = BanditInstance::from_means(&[0.1, 0.2], ArmStructure::Flat).unwrap();
        assert!(cluster_stats(&flat).is_err());
    }
}
