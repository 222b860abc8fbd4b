use super::{sample_argmax, Policy, Selection};
use crate::beta::BetaBelief;
use crate::error::{Error, Result};
use crate::model::{ArmId, ClusterTree, NodeId};
use crate::rng::SimRng;

/// One Beta belief per tree node.
#[derive(Debug, Clone, PartialEq)]
pub struct HtsState {
    node_beliefs: Vec<BetaBelief>,
}

impl HtsState {
    pub fn new(tree: &ClusterTree) -> Self {
        Self {
            node_beliefs: vec![BetaBelief::default(); tree.len()],
        }
    }

    pub fn from_beliefs(node_beliefs: Vec<BetaBelief>) -> Self {
        Self { node_beliefs }
    }

    pub fn node_beliefs(&self) -> &[BetaBelief] {
        &self.node_beliefs
    }

    /// Descends from the root, at each node moving to the child whose belief
    /// sample is largest, and returns the visited nodes and the leaf's arm.
    ///
    /// Trees are validated when built, so every leaf reached carries an arm.
    pub fn select(&self, tree: &ClusterTree, rng: &mut SimRng) -> (Vec<NodeId>, ArmId) {
        let mut node = tree.root();
        let mut path = vec![node];
        while !tree.is_leaf(node) {
            node = sample_argmax(&self.node_beliefs, tree.children(node), rng);
            path.push(node);
        }
        let arm = tree
            .arm_at(node)
            .expect("validated trees have an arm on every leaf");
        (path, arm)
    }

    /// Applies the reward to every node on a root-to-leaf path.
    pub fn update(&mut self, tree: &ClusterTree, path: &[NodeId], reward: f64) -> Result<()> {
        if !tree.is_root_to_leaf_path(path) {
            return Err(Error::contract(format!(
                "{path:?} is not a root-to-leaf path"
            )));
        }
        let updated = path
            .iter()
            .map(|&v| self.node_beliefs[v].updated(reward))
            .collect::<Result<Vec<_>>>()?;
        for (&v, b) in path.iter().zip(updated) {
            self.node_beliefs[v] = b;
        }
        Ok(())
    }
}

/// Hierarchical Thompson sampling: Thompson sampling applied recursively at
/// every level of a cluster tree.
#[derive(Debug, Clone)]
pub struct Hts {
    tree: ClusterTree,
    state: HtsState,
}

impl Hts {
    pub fn new(tree: ClusterTree) -> Self {
        let state = HtsState::new(&tree);
        Self { tree, state }
    }

    pub fn tree(&self) -> &ClusterTree {
        &self.tree
    }

    pub fn state(&self) -> &HtsState {
        &self.state
    }
}

impl Policy for Hts {
    fn name(&self) -> &str {
        "hts"
    }

    fn select(&mut self, _t: u64, rng: &mut SimRng) -> Selection {
        let (path, arm) = self.state.select(&self.tree, rng);
        Selection { arm, path }
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        if self.tree.path_to(selection.arm) != selection.path {
            return Err(Error::contract(
                "selection path does not end at the played arm",
            ));
        }
        self.state.update(&self.tree, &selection.path, reward)
    }
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;
    use crate::model::{DisjointClustering, TreeShape};
    use crate::policy::TscState;
    use crate::rng::SeedStreams;

    fn binary4() -> ClusterTree {
        ClusterTree::from_shape(&TreeShape::Node(vec![
            TreeShape::Node(vec![TreeShape::Leaf(0), TreeShape::Leaf(1)]),
            TreeShape::Node(vec![TreeShape::Leaf(2), TreeShape::Leaf(3)]),
        ]))
        .unwrap()
    }

    #[test]
    fn root_leaf_tree() {
        let tree = ClusterTree::from_shape(&TreeShape::Leaf(0)).unwrap();
        let state = HtsState::new(&tree);
        let (path, arm) = state.select(&tree, &mut SeedStreams::new(0).policy());
        assert_eq!(arm, 0);
        assert_eq!(path, vec![0]);
    }

    #[test]
    fn update_increments_whole_path_only() {
        let tree = binary4();
        let mut state = HtsState::new(&tree);
        let path = tree.path_to(2);
        assert_eq!(path.len(), 3);
        state.update(&tree, &path, 1.0).unwrap();
        let bumped: Vec<usize> = (0..tree.len())
            .filter(|&v| state.node_beliefs()[v].successes() == 2.0)
            .collect();
        assert_eq!(bumped, path);

        let mut state = HtsState::new(&tree);
        state.update(&tree, &path, 0.0).unwrap();
        for v in 0..tree.len() {
            let expected = if path.contains(&v) { 2.0 } else { 1.0 };
            assert_eq!(state.node_beliefs()[v].failures(), expected);
            assert_eq!(state.node_beliefs()[v].successes(), 1.0);
        }
        assert!(matches!(
            state.update(&tree, &[0, 1], 1.0),
            Err(Error::Contract(_))
        ));
        assert!(state.update(&tree, &[1, 3], 1.0).is_err());
    }

    #[test]
    fn concentrated_subtree_entered() {
        let tree = binary4();
        let mut beliefs = vec![BetaBelief::default(); tree.len()];
        let right = tree.children(0)[1];
        beliefs[right] = BetaBelief::new(1e6, 1.0).unwrap();
        let state = HtsState::from_beliefs(beliefs);
        let mut rng = SeedStreams::new(1).policy();
        let hits = (0..10_000)
            .filter(|_| state.select(&tree, &mut rng).0[1] == right)
            .count();
        assert!(hits as f64 / 10_000.0 >= 0.99);
    }

    #[test]
    fn depth_one_singleton_tree_matches_tsc_law() {
        let clustering = DisjointClustering::singletons(4);
        let flat = ClusterTree::from_clustering(&clustering);
        // Singleton cluster nodes each carry one leaf, so HTS descends two levels.
        let mut node_beliefs = vec![BetaBelief::default(); flat.len()];
        let mut cluster_beliefs = vec![BetaBelief::default(); 4];
        for (c, &node) in flat.children(0).iter().enumerate() {
            let b = BetaBelief::new(1.0 + c as f64, 2.0).unwrap();
            node_beliefs[node] = b;
            cluster_beliefs[c] = b;
        }
        let hts = HtsState::from_beliefs(node_beliefs);
        let tsc = TscState::from_beliefs(cluster_beliefs, vec![BetaBelief::default(); 4]);
        let (mut r1, mut r2) = (SeedStreams::new(2).policy(), SeedStreams::new(3).policy());
        let (mut a, mut b) = ([0usize; 4], [0usize; 4]);
        let trials = 20_000;
        for _ in 0..trials {
            a[hts.select(&flat, &mut r1).1] += 1;
            b[tsc.select(&clustering, &mut r2).1] += 1;
        }
        for i in 0..4 {
            let (x, y) = (a[i] as f64 / trials as f64, b[i] as f64 / trials as f64);
            assert!((x - y).abs() < 0.02, "{x} vs {y}");
        }
    }

    #[test]
    fn parent_counts_equal_child_sums_after_run() {
        let tree = binary4();
        let mut policy = Hts::new(tree.clone());
        let mut rng = SeedStreams::new(4).policy();
        let mut env = SeedStreams::new(4).environment();
        for t in 1..=1000 {
            let sel = policy.select(t, &mut rng);
            let r = if env.gen::<f64>() < 0.3 + 0.1 * sel.arm as f64 {
                1.0
            } else {
                0.0
            };
            policy.update(&sel, r).unwrap();
        }
        let b = policy.state().node_beliefs();
        for v in 0..tree.len() {
            if tree.is_leaf(v) {
                continue;
            }
            let s: f64 = tree
                .children(v)
                .iter()
                .map(|&c| b[c].successes() - 1.0)
                .sum();
            let f: f64 = tree
                .children(v)
                .iter()
                .map(|&c| b[c].failures() - 1.0)
                .sum();
            assert_eq!(b[v].successes() - 1.0, s);
            assert_eq!(b[v].failures() - 1.0, f);
        }
    }
}
