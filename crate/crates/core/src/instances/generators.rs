//! Synthetic bandit instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::agglomerative::{gen_agglomerative_tree, Linkage};
use super::kmeans::kmeans;
use super::reward_fn::RewardFn;
use crate::error::{Error, Result};
use crate::model::{
    ArmId, ArmStructure, BanditInstance, ClusterTree, DisjointClustering, TreeShape,
};

/// Mean of the best arm in strong-dominance instances.
pub const BEST_MEAN: f64 = 0.6;
/// Width of every sub-optimal cluster in strong-dominance instances.
pub const SUBOPTIMAL_WIDTH: f64 = 0.1;

/// Parameters of a clustered instance where the optimal cluster dominates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongDominanceSpec {
    pub n_arms: usize,
    pub n_suboptimal_clusters: usize,
    pub optimal_cluster_size: usize,
    pub optimal_width: f64,
    pub separation: f64,
}

impl StrongDominanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.optimal_cluster_size < 2 {
            return Err(Error::domain("optimal cluster needs at least 2 arms"));
        }
        if self.n_arms < self.optimal_cluster_size + self.n_suboptimal_clusters {
            return Err(Error::domain(format!(
                "{} arms cannot fill an optimal cluster of {} and {} sub-optimal clusters",
                self.n_arms, self.optimal_cluster_size, self.n_suboptimal_clusters
            )));
        }
        if self.n_suboptimal_clusters == 0 && self.n_arms != self.optimal_cluster_size {
            return Err(Error::domain(
                "arms outside the optimal cluster need a sub-optimal cluster",
            ));
        }
        if !(0.0..1.0).contains(&self.optimal_width) {
            return Err(Error::domain(format!(
                "optimal width {} not in [0, 1)",
                self.optimal_width
            )));
        }
        if !(self.separation > 0.0) {
            return Err(Error::domain(format!(
                "separation {} must be positive",
                self.separation
            )));
        }
        if BEST_MEAN - SUBOPTIMAL_WIDTH - self.optimal_width - self.separation < 0.0 {
            return Err(Error::domain(format!(
                "w* + d = {} pushes sub-optimal means below 0",
                self.optimal_width + self.separation
            )));
        }
        Ok(())
    }
}

fn uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Means for a cluster of `size` arms: best `hi`, worst `lo`, rest uniform between.
fn cluster_means<R: Rng + ?Sized>(size: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let mut m = vec![hi, lo];
            m.extend((2..size).map(|_| uniform(lo, hi, rng)));
            m
        }
    }
}

/// Optimal cluster with best mean 0.6 and width w*; every sub-optimal
/// cluster has best mean 0.6 − w* − d and width 0.1. Arm ids and cluster
/// labels are shuffled.
pub fn gen_strong_dominance<R: Rng + ?Sized>(
    spec: &StrongDominanceSpec,
    rng: &mut R,
) -> Result<BanditInstance> {
    spec.validate()?;
    let k = spec.n_suboptimal_clusters;
    let a_star = spec.optimal_cluster_size;
    let mut sizes = vec![1usize; k];
    for _ in 0..spec.n_arms - a_star - k {
        sizes[rng.gen_range(0..k)] += 1;
    }
    let opt_lo = BEST_MEAN - spec.optimal_width;
    let sub_hi = opt_lo - spec.separation;
    let sub_lo = sub_hi - SUBOPTIMAL_WIDTH;
    let mut groups = vec![cluster_means(a_star, opt_lo, BEST_MEAN, rng)];
    groups.extend(sizes.iter().map(|&s| cluster_means(s, sub_lo, sub_hi, rng)));

    let mut labels: Vec<usize> = (0..=k).collect();
    labels.shuffle(rng);
    let mut arm_ids: Vec<ArmId> = (0..spec.n_arms).collect();
    arm_ids.shuffle(rng);
    let mut means = vec![0.0; spec.n_arms];
    let mut assignment = vec![0; spec.n_arms];
    let mut next = 0;
    for (g, group) in groups.iter().enumerate() {
        for &m in group {
            let a = arm_ids[next];
            next += 1;
            means[a] = m;
            assignment[a] = labels[g];
        }
    }
    let clustering = DisjointClustering::new(assignment, k + 1)?;
    BanditInstance::from_means(&means, ArmStructure::Clustered(clustering))
}

/// Balanced binary tree over arms sorted by mean: each node splits its
/// ordered arms at `len / 2`, lower means to the left.
pub fn sorted_binary_tree(means: &[f64]) -> Result<ClusterTree> {
    fn build(order: &[ArmId]) -> TreeShape {
        if order.len() == 1 {
            return TreeShape::Leaf(order[0]);
        }
        let (l, r) = order.split_at(order.len() / 2);
        TreeShape::Node(vec![build(l), build(r)])
    }
    if means.is_empty() {
        return Err(Error::domain("tree needs at least one arm"));
    }
    let mut order: Vec<ArmId> = (0..means.len()).collect();
    order.sort_by(|&a, &b| means[a].total_cmp(&means[b]).then(a.cmp(&b)));
    ClusterTree::from_shape(&build(&order))
}

/// Means U(0.1, 0.8) (duplicates redrawn) arranged in a [`sorted_binary_tree`].
pub fn gen_sorted_binary_tree<R: Rng + ?Sized>(
    n_arms: usize,
    rng: &mut R,
) -> Result<BanditInstance> {
    if n_arms < 2 {
        return Err(Error::domain("sorted binary tree needs at least 2 arms"));
    }
    let mut means: Vec<f64> = Vec::with_capacity(n_arms);
    while means.len() < n_arms {
        let m = uniform(0.1, 0.8, rng);
        if !means.contains(&m) {
            means.push(m);
        }
    }
    let tree = sorted_binary_tree(&means)?;
    BanditInstance::from_means(&means, ArmStructure::Tree(tree))
}

/// Features x_i ~ U([0,1]^dim) for the given reward function.
pub fn draw_features<R: Rng + ?Sized>(
    n_arms: usize,
    reward_fn: RewardFn,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let dim = reward_fn.feature_dim();
    (0..n_arms)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

fn clustering_from_groups(groups: Vec<Vec<usize>>) -> Result<DisjointClustering> {
    DisjointClustering::from_members(groups)
}

/// Arms at random features, clustered by k-means on the features, with
/// means given by `reward_fn`.
pub fn gen_kmeans_instance<R: Rng + ?Sized>(
    n_arms: usize,
    n_clusters: usize,
    reward_fn: RewardFn,
    rng: &mut R,
) -> Result<BanditInstance> {
    Ok(gen_feature_instance(n_arms, n_clusters, reward_fn, None, rng)?.instance)
}

/// A k-means clustered instance together with the features it came from
/// and, optionally, an agglomerative tree over the same features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureInstance {
    pub instance: BanditInstance,
    pub features: Vec<Vec<f64>>,
    pub tree: Option<ClusterTree>,
}

pub fn gen_feature_instance<R: Rng + ?Sized>(
    n_arms: usize,
    n_clusters: usize,
    reward_fn: RewardFn,
    linkage: Option<Linkage>,
    rng: &mut R,
) -> Result<FeatureInstance> {
    if n_clusters > n_arms {
        return Err(Error::domain(format!(
            "k = {n_clusters} exceeds N = {n_arms}"
        )));
    }
    let features = draw_features(n_arms, reward_fn, rng);
    let km = kmeans(&features, n_clusters, rng)?;
    let means: Vec<f64> = features.iter().map(|x| reward_fn.eval(x)).collect();
    let clustering = clustering_from_groups(km.groups())?;
    let instance = BanditInstance::from_means(&means, ArmStructure::Clustered(clustering))?;
    let tree = linkage
        .map(|l| gen_agglomerative_tree(&features, l))
        .transpose()?;
    Ok(FeatureInstance {
        instance,
        features,
        tree,
    })
}

/// Recursive k-means: the root splits into `branching` clusters, each of
/// which splits again until `depth` levels exist. A group with at most
/// `branching` arms gets its arms as direct children.
pub fn gen_kmeans_tree<R: Rng + ?Sized>(
    n_arms: usize,
    branching: usize,
    depth: usize,
    reward_fn: RewardFn,
    rng: &mut R,
) -> Result<BanditInstance> {
    fn split<R: Rng + ?Sized>(
        arms: &[ArmId],
        features: &[Vec<f64>],
        branching: usize,
        levels: usize,
        rng: &mut R,
    ) -> Result<TreeShape> {
        if arms.len() == 1 {
            return Ok(TreeShape::Leaf(arms[0]));
        }
        if levels == 0 || arms.len() <= branching {
            return Ok(TreeShape::Node(
                arms.iter().map(|&a| TreeShape::Leaf(a)).collect(),
            ));
        }
        let points: Vec<Vec<f64>> = arms.iter().map(|&a| features[a].clone()).collect();
        let km = kmeans(&points, branching, rng)?;
        let children = km
            .groups()
            .into_iter()
            .map(|g| {
                let sub: Vec<ArmId> = g.into_iter().map(|i| arms[i]).collect();
                split(&sub, features, branching, levels - 1, rng)
            })
            .collect::<Result<_>>()?;
        Ok(TreeShape::Node(children))
    }
    if branching < 2 {
        return Err(Error::domain("branching factor must be at least 2"));
    }
    if depth < 1 {
        return Err(Error::domain("k-means tree depth must be at least 1"));
    }
    if n_arms < 2 {
        return Err(Error::domain("k-means tree needs at least 2 arms"));
    }
    let features = draw_features(n_arms, reward_fn, rng);
    let arms: Vec<ArmId> = (0..n_arms).collect();
    let shape = split(&arms, &features, branching, depth, rng)?;
    let means: Vec<f64> = features.iter().map(|x| reward_fn.eval(x)).collect();
    BanditInstance::from_means(&means, ArmStructure::Tree(ClusterTree::from_shape(&shape)?))
}

/// Uniform random assignment of `n_arms` arms to `n_clusters` non-empty
/// clusters. Assignments with an empty cluster are redrawn; after many
/// rejections one arm per cluster is seeded first.
pub fn random_clustering<R: Rng + ?Sized>(
    n_arms: usize,
    n_clusters: usize,
    rng: &mut R,
) -> Result<DisjointClustering> {
    if n_clusters == 0 || n_clusters > n_arms {
        return Err(Error::domain(format!(
            "cannot split {n_arms} arms into {n_clusters} non-empty clusters"
        )));
    }
    for _ in 0..1000 {
        let assignment: Vec<usize> = (0..n_arms).map(|_| rng.gen_range(0..n_clusters)).collect();
        let mut seen = vec![false; n_clusters];
        assignment.iter().for_each(|&c| seen[c] = true);
        if seen.iter().all(|&s| s) {
            return DisjointClustering::new(assignment, n_clusters);
        }
    }
    let mut order: Vec<ArmId> = (0..n_arms).collect();
    order.shuffle(rng);
    let mut assignment = vec![0; n_arms];
    for (i, &a) in order.iter().enumerate() {
        assignment[a] = if i < n_clusters {
            i
        } else {
            rng.gen_range(0..n_clusters)
        };
    }
    DisjointClustering::new(assignment, n_clusters)
}

/// Means U(0,1) with a random clustering unrelated to the means.
pub fn gen_uniform_instance<R: Rng + ?Sized>(
    n_arms: usize,
    n_clusters: usize,
    rng: &mut R,
) -> Result<BanditInstance> {
    let means: Vec<f64> = (0..n_arms).map(|_| rng.gen::<f64>()).collect();
    let clustering = random_clustering(n_arms, n_clusters, rng)?;
    BanditInstance::from_means(&means, ArmStructure::Clustered(clustering))
}
