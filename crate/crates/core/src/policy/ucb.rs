//! UCB-family baselines: UCB1, the two-level UCBC and tree-UCB (UCT).
//!
//! All three use the UCB1 index `mean + sqrt(2 ln n / pulls)` and play every
//! unvisited entity once (lowest index first) before comparing indices.

use super::{Policy, Selection};
use crate::error::{Error, Result};
use crate::model::{ClusterTree, DisjointClustering, NodeId};
use crate::rng::{argmax_random_tie, SimRng};

/// Pull count and reward sum of one arm, cluster or tree node.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UcbStat {
    pulls: u64,
    reward_sum: f64,
}

impl UcbStat {
    /// A statistic that has seen `pulls` rewards averaging `mean`.
    pub fn new(pulls: u64, mean: f64) -> Self {
        Self {
            pulls,
            reward_sum: mean * pulls as f64,
        }
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn mean(&self) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            self.reward_sum / self.pulls as f64
        }
    }

    pub fn record(&mut self, reward: f64) {
        self.pulls += 1;
        self.reward_sum += reward;
    }

    /// UCB1 index given ln of the reference count.
    pub fn index(&self, ln_total: f64) -> f64 {
        self.mean() + (2.0 * ln_total / self.pulls as f64).sqrt()
    }
}

/// Lowest-indexed unvisited candidate, else the UCB1 argmax with random tie-break.
fn ucb_choose(stats: &[UcbStat], candidates: &[usize], ln_total: f64, rng: &mut SimRng) -> usize {
    if let Some(&fresh) = candidates.iter().find(|&&c| stats[c].pulls == 0) {
        return fresh;
    }
    let scores = candidates.iter().map(|&c| (c, stats[c].index(ln_total)));
    argmax_random_tie(scores, rng).expect("at least one candidate")
}

fn check_reward(reward: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&reward) {
        return Err(Error::domain(format!("reward {reward} outside [0, 1]")));
    }
    Ok(())
}

/// UCB1 over all arms.
#[derive(Debug, Clone)]
pub struct Ucb1 {
    arms: Vec<UcbStat>,
    ids: Vec<usize>,
}

impl Ucb1 {
    pub fn new(n_arms: usize) -> Self {
        Self::from_stats(vec![UcbStat::default(); n_arms])
    }

    pub fn from_stats(arms: Vec<UcbStat>) -> Self {
        let ids = (0..arms.len()).collect();
        Self { arms, ids }
    }

    pub fn stats(&self) -> &[UcbStat] {
        &self.arms
    }

    /// Arm for round `t >= 1`.
    pub fn choose(&self, t: u64, rng: &mut SimRng) -> usize {
        ucb_choose(&self.arms, &self.ids, (t.max(1) as f64).ln(), rng)
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &str {
        "ucb1"
    }

    fn select(&mut self, t: u64, rng: &mut SimRng) -> Selection {
        Selection::flat(self.choose(t, rng))
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        check_reward(reward)?;
        self.arms
            .get_mut(selection.arm)
            .ok_or_else(|| Error::domain(format!("unknown arm {}", selection.arm)))?
            .record(reward);
        Ok(())
    }
}

/// Two-level UCB: UCB1 over clusters (aggregating every reward observed from
/// a cluster), then UCB1 over the chosen cluster's arms. Both levels use the
/// global round in the exploration term.
#[derive(Debug, Clone)]
pub struct Ucbc {
    clustering: DisjointClustering,
    clusters: Vec<UcbStat>,
    arms: Vec<UcbStat>,
    cluster_ids: Vec<usize>,
}

impl Ucbc {
    pub fn new(clustering: DisjointClustering) -> Self {
        let clusters = vec![UcbStat::default(); clustering.cluster_count()];
        let arms = vec![UcbStat::default(); clustering.n_arms()];
        Self::from_stats(clustering, clusters, arms)
    }

    pub fn from_stats(
        clustering: DisjointClustering,
        clusters: Vec<UcbStat>,
        arms: Vec<UcbStat>,
    ) -> Self {
        let cluster_ids = (0..clusters.len()).collect();
        Self {
            clustering,
            clusters,
            arms,
            cluster_ids,
        }
    }

    pub fn cluster_stats(&self) -> &[UcbStat] {
        &self.clusters
    }

    pub fn arm_stats(&self) -> &[UcbStat] {
        &self.arms
    }

    pub fn choose(&self, t: u64, rng: &mut SimRng) -> (usize, usize) {
        let ln_t = (t.max(1) as f64).ln();
        let cluster = ucb_choose(&self.clusters, &self.cluster_ids, ln_t, rng);
        let arm = ucb_choose(&self.arms, self.clustering.members(cluster), ln_t, rng);
        (cluster, arm)
    }
}

impl Policy for Ucbc {
    fn name(&self) -> &str {
        "ucbc"
    }

    fn select(&mut self, t: u64, rng: &mut SimRng) -> Selection {
        let (cluster, arm) = self.choose(t, rng);
        Selection {
            arm,
            path: vec![cluster],
        }
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        check_reward(reward)?;
        let arm = selection.arm;
        if arm >= self.arms.len() {
            return Err(Error::domain(format!("unknown arm {arm}")));
        }
        let cluster = self.clustering.cluster_of(arm);
        if selection.path.first().is_some_and(|&c| c != cluster) {
            return Err(Error::contract(format!(
                "arm {arm} is not a member of cluster {:?}",
                selection.path
            )));
        }
        self.arms[arm].record(reward);
        self.clusters[cluster].record(reward);
        Ok(())
    }
}

/// Tree-UCB: at each internal node descend to the child maximizing
/// `mean + sqrt(2 ln N_parent / N_child)`, trying unvisited children first.
#[derive(Debug, Clone)]
pub struct Uct {
    tree: ClusterTree,
    nodes: Vec<UcbStat>,
}

impl Uct {
    pub fn new(tree: ClusterTree) -> Self {
        let nodes = vec![UcbStat::default(); tree.len()];
        Self { tree, nodes }
    }

    pub fn from_stats(tree: ClusterTree, nodes: Vec<UcbStat>) -> Self {
        Self { tree, nodes }
    }

    pub fn node_stats(&self) -> &[UcbStat] {
        &self.nodes
    }

    pub fn tree(&self) -> &ClusterTree {
        &self.tree
    }

    pub fn choose(&self, rng: &mut SimRng) -> (Vec<NodeId>, usize) {
        let mut node = self.tree.root();
        let mut path = vec![node];
        while !self.tree.is_leaf(node) {
            let ln_parent = (self.nodes[node].pulls.max(1) as f64).ln();
            node = ucb_choose(&self.nodes, self.tree.children(node), ln_parent, rng);
            path.push(node);
        }
        let arm = self
            .tree
            .arm_at(node)
            .expect("validated trees have an arm on every leaf");
        (path, arm)
    }
}

impl Policy for Uct {
    fn name(&self) -> &str {
        "uct"
    }

    fn select(&mut self, _t: u64, rng: &mut SimRng) -> Selection {
        let (path, arm) = self.choose(rng);
        Selection { arm, path }
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        check_reward(reward)?;
        if !self.tree.is_root_to_leaf_path(&selection.path)
            || self.tree.arm_at(*selection.path.last().unwrap()) != Some(selection.arm)
        {
            return Err(Error::contract(
                "selection path does not lead to the played arm",
            ));
        }
        for &v in &selection.path {
            self.nodes[v].record(reward);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TreeShape;
    use crate::rng::SeedStreams;

    fn rng() -> SimRng {
        SeedStreams::new(0).policy()
    }

    #[test]
    fn ucb1_initialization_order() {
        let mut p = Ucb1::new(3);
        let mut r = rng();
        for (t, expected) in [(1, 0), (2, 1), (3, 2)] {
            let sel = p.select(t, &mut r);
            assert_eq!(sel.arm, expected);
            p.update(&sel, 0.0).unwrap();
        }
    }

    #[test]
    fn ucb1_index_comparison() {
        // Index oracle: 0.9 + sqrt(2 ln 100 / 10) = 1.8597 vs 0.1 + 0.9597 = 1.0597.
        let p = Ucb1::from_stats(vec![UcbStat::new(10, 0.9), UcbStat::new(10, 0.1)]);
        let ln100 = 100f64.ln();
        assert!((p.stats()[0].index(ln100) - (0.9 + (2.0 * ln100 / 10.0).sqrt())).abs() < 1e-12);
        assert_eq!(p.choose(100, &mut rng()), 0);
    }

    #[test]
    fn ucb1_tie_break_is_uniform() {
        let p = Ucb1::from_stats(vec![UcbStat::new(5, 0.5), UcbStat::new(5, 0.5)]);
        let mut r = rng();
        let zeros = (0..10_000).filter(|_| p.choose(20, &mut r) == 0).count();
        assert!((zeros as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn ucbc_singletons_reduce_to_ucb1() {
        let stats: Vec<UcbStat> = [(4, 0.2), (6, 0.7), (3, 0.5), (8, 0.6)]
            .iter()
            .map(|&(n, m)| UcbStat::new(n, m))
            .collect();
        let ucbc = Ucbc::from_stats(
            DisjointClustering::singletons(4),
            stats.clone(),
            stats.clone(),
        );
        let ucb1 = Ucb1::from_stats(stats);
        for t in [21, 50, 500] {
            let (c, a) = ucbc.choose(t, &mut rng());
            assert_eq!(c, a);
            assert_eq!(a, ucb1.choose(t, &mut rng()));
        }
    }

    #[test]
    fn ucbc_prefers_strong_cluster() {
        let clustering = DisjointClustering::new(vec![0, 0, 1, 1, 2, 2], 3).unwrap();
        let clusters = vec![
            UcbStat::new(100, 0.1),
            UcbStat::new(100, 0.9),
            UcbStat::new(100, 0.1),
        ];
        let arms = vec![UcbStat::new(50, 0.1); 6];
        let p = Ucbc::from_stats(clustering, clusters, arms);
        let (c, a) = p.choose(1000, &mut rng());
        assert_eq!(c, 1);
        assert!(a == 2 || a == 3);
    }

    #[test]
    fn ucbc_initialization_round_robin() {
        let clustering = DisjointClustering::new(vec![2, 0, 1, 0, 2], 3).unwrap();
        let mut p = Ucbc::new(clustering.clone());
        let mut r = rng();
        let firsts: Vec<usize> = (1..=3)
            .map(|t| {
                let sel = p.select(t, &mut r);
                assert_eq!(clustering.cluster_of(sel.arm), sel.path[0]);
                p.update(&sel, 1.0).unwrap();
                sel.path[0]
            })
            .collect();
        assert_eq!(firsts, vec![0, 1, 2]);
    }

    #[test]
    fn uct_root_leaf() {
        let tree = ClusterTree::from_shape(&TreeShape::Leaf(0)).unwrap();
        let mut p = Uct::new(tree);
        let sel = p.select(1, &mut rng());
        assert_eq!(sel.arm, 0);
        p.update(&sel, 1.0).unwrap();
    }

    #[test]
    fn uct_index_and_initialization() {
        let tree = ClusterTree::from_shape(&TreeShape::Node(vec![
            TreeShape::Node(vec![TreeShape::Leaf(0), TreeShape::Leaf(1)]),
            TreeShape::Node(vec![TreeShape::Leaf(2), TreeShape::Leaf(3)]),
        ]))
        .unwrap();
        let (l, rgt) = (tree.children(0)[0], tree.children(0)[1]);

        let mut fresh = Uct::new(tree.clone());
        let mut r = rng();
        let s1 = fresh.select(1, &mut r);
        assert_eq!(s1.path[1], l);
        fresh.update(&s1, 1.0).unwrap();
        let s2 = fresh.select(2, &mut r);
        assert_eq!(s2.path[1], rgt, "unvisited sibling goes first");

        let mut stats = vec![UcbStat::default(); tree.len()];
        stats[0] = UcbStat::new(100, 0.5);
        stats[l] = UcbStat::new(50, 0.8);
        stats[rgt] = UcbStat::new(50, 0.2);
        for &leaf in tree.children(l).iter().chain(tree.children(rgt)) {
            stats[leaf] = UcbStat::new(25, 0.5);
        }
        let p = Uct::from_stats(tree, stats);
        let (path, arm) = p.choose(&mut rng());
        assert_eq!(path[1], l);
        assert!(arm <= 1);
    }
}
