//! Bandit instances: Bernoulli arms plus an optional disjoint clustering or
//! cluster tree.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ArmId = usize;
pub type ClusterId = usize;
pub type NodeId = usize;

/// A Bernoulli reward source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliArm {
    pub id: ArmId,
    pub mean: f64,
}

impl BernoulliArm {
    pub fn new(id: ArmId, mean: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::domain(format!(
                "arm {id}: mean {mean} outside [0, 1]"
            )));
        }
        Ok(Self { id, mean })
    }
}

/// A partition of the arms into non-empty clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClustering", into = "RawClustering")]
pub struct DisjointClustering {
    assignment: Vec<ClusterId>,
    members: Vec<Vec<ArmId>>,
}

#[derive(Serialize, Deserialize)]
struct RawClustering {
    assignment: Vec<ClusterId>,
    cluster_count: usize,
}

impl TryFrom<RawClustering> for DisjointClustering {
    type Error = Error;

    fn try_from(raw: RawClustering) -> Result<Self> {
        Self::new(raw.assignment, raw.cluster_count)
    }
}

impl From<DisjointClustering> for RawClustering {
    fn from(c: DisjointClustering) -> Self {
        RawClustering {
            cluster_count: c.members.len(),
            assignment: c.assignment,
        }
    }
}

impl DisjointClustering {
    /// Builds a clustering from the cluster label of every arm.
    pub fn new(assignment: Vec<ClusterId>, cluster_count: usize) -> Result<Self> {
        let mut members = vec![Vec::new(); cluster_count];
        for (arm, &c) in assignment.iter().enumerate() {
            if c >= cluster_count {
                return Err(Error::domain(format!(
                    "arm {arm} assigned to cluster {c}, but only {cluster_count} clusters exist"
                )));
            }
            members[c].push(arm);
        }
        if let Some(empty) = members.iter().position(Vec::is_empty) {
            return Err(Error::domain(format!("cluster {empty} is empty")));
        }
        Ok(Self {
            assignment,
            members,
        })
    }

    /// Builds a clustering from explicit member lists.
    pub fn from_members(members: Vec<Vec<ArmId>>) -> Result<Self> {
        let n: usize = members.iter().map(Vec::len).sum();
        let mut assignment = vec![usize::MAX; n];
        for (c, group) in members.iter().enumerate() {
            for &a in group {
                if a >= n || assignment[a] != usize::MAX {
                    return Err(Error::domain(format!("arm {a} is missing or duplicated")));
                }
                assignment[a] = c;
            }
        }
        Self::new(assignment, members.len())
    }

    /// Every arm in its own cluster.
    pub fn singletons(n_arms: usize) -> Self {
        Self {
            assignment: (0..n_arms).collect(),
            members: (0..n_arms).map(|a| vec![a]).collect(),
        }
    }

    /// One cluster holding every arm.
    pub fn single(n_arms: usize) -> Self {
        Self {
            assignment: vec![0; n_arms],
            members: vec![(0..n_arms).collect()],
        }
    }

    pub fn cluster_count(&self) -> usize {
        self.members.len()
    }

    pub fn n_arms(&self) -> usize {
        self.assignment.len()
    }

    pub fn cluster_of(&self, arm: ArmId) -> ClusterId {
        self.assignment[arm]
    }

    pub fn members(&self, cluster: ClusterId) -> &[ArmId] {
        &self.members[cluster]
    }

    pub fn assignment(&self) -> &[ClusterId] {
        &self.assignment
    }

    pub fn clusters(&self) -> impl Iterator<Item = &[ArmId]> {
        self.members.iter().map(Vec::as_slice)
    }
}

/// One node of a [`ClusterTree`]. Leaves carry an arm, internal nodes do not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm: Option<ArmId>,
}

/// Nested description used to build trees.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeShape {
    Leaf(ArmId),
    Node(Vec<TreeShape>),
}

/// A rooted tree whose leaves are exactly the arms. The root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTree", into = "RawTree")]
pub struct ClusterTree {
    nodes: Vec<TreeNode>,
    node_depth: Vec<usize>,
    leaf_of_arm: Vec<NodeId>,
    depth: usize,
}

#[derive(Serialize, Deserialize)]
struct RawTree {
    nodes: Vec<TreeNode>,
}

impl TryFrom<RawTree> for ClusterTree {
    type Error = Error;

    fn try_from(raw: RawTree) -> Result<Self> {
        Self::from_nodes(raw.nodes)
    }
}

impl From<ClusterTree> for RawTree {
    fn from(t: ClusterTree) -> Self {
        RawTree { nodes: t.nodes }
    }
}

impl ClusterTree {
    /// Validates an adjacency list rooted at node 0.
    pub fn from_nodes(nodes: Vec<TreeNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("tree has no nodes"));
        }
        if nodes[0].parent.is_some() {
            return Err(Error::domain("root (node 0) must not have a parent"));
        }
        let mut node_depth = vec![usize::MAX; nodes.len()];
        node_depth[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut leaves = Vec::new();
        while let Some(v) = queue.pop_front() {
            let node = &nodes[v];
            if node.children.is_empty() {
                let arm = node
                    .arm
                    .ok_or_else(|| Error::domain(format!("leaf node {v} has no arm")))?;
                leaves.push((arm, v));
            } else if node.arm.is_some() {
                return Err(Error::domain(format!("internal node {v} carries an arm")));
            }
            for &c in &node.children {
                if c >= nodes.len() {
                    return Err(Error::domain(format!("node {v} has unknown child {c}")));
                }
                if node_depth[c] != usize::MAX || nodes[c].parent != Some(v) {
                    return Err(Error::domain(format!(
                        "node {c} is reached twice or has an inconsistent parent"
                    )));
                }
                node_depth[c] = node_depth[v] + 1;
                queue.push_back(c);
            }
        }
        if let Some(orphan) = node_depth.iter().position(|&d| d == usize::MAX) {
            return Err(Error::domain(format!(
                "node {orphan} is not reachable from the root"
            )));
        }
        let n_arms = leaves.len();
        let mut leaf_of_arm = vec![usize::MAX; n_arms];
        for (arm, leaf) in leaves {
            if arm >= n_arms || leaf_of_arm[arm] != usize::MAX {
                return Err(Error::domain(format!(
                    "arm {arm} is out of range or appears on several leaves"
                )));
            }
            leaf_of_arm[arm] = leaf;
        }
        let depth = leaf_of_arm
            .iter()
            .map(|&l| node_depth[l])
            .max()
            .unwrap_or(0);
        Ok(Self {
            nodes,
            node_depth,
            leaf_of_arm,
            depth,
        })
    }

    /// Builds a tree from a nested shape, numbering nodes breadth-first.
    pub fn from_shape(shape: &TreeShape) -> Result<Self> {
        let mut nodes = vec![TreeNode {
            parent: None,
            children: Vec::new(),
            arm: None,
        }];
        let mut queue = VecDeque::from([(0usize, shape)]);
        while let Some((id, s)) = queue.pop_front() {
            match s {
                TreeShape::Leaf(arm) => nodes[id].arm = Some(*arm),
                TreeShape::Node(children) => {
                    if children.is_empty() {
                        return Err(Error::domain("internal tree node without children"));
                    }
                    for child in children {
                        let cid = nodes.len();
                        nodes.push(TreeNode {
                            parent: Some(id),
                            children: Vec::new(),
                            arm: None,
                        });
                        nodes[id].children.push(cid);
                        queue.push_back((cid, child));
                    }
                }
            }
        }
        Self::from_nodes(nodes)
    }

    /// Depth-one tree: root, one node per cluster, arms as leaves.
    pub fn from_clustering(clustering: &DisjointClustering) -> Self {
        let shape = TreeShape::Node(
            clustering
                .clusters()
                .map(|members| {
                    TreeShape::Node(members.iter().map(|&a| TreeShape::Leaf(a)).collect())
                })
                .collect(),
        );
        Self::from_shape(&shape).expect("a valid clustering yields a valid tree")
    }

    /// The nested shape of the subtree rooted at `node`.
    pub fn shape(&self, node: NodeId) -> TreeShape {
        match self.nodes[node].arm {
            Some(arm) => TreeShape::Leaf(arm),
            None => TreeShape::Node(
                self.nodes[node]
                    .children
                    .iter()
                    .map(|&c| self.shape(c))
                    .collect(),
            ),
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_arms(&self) -> usize {
        self.leaf_of_arm.len()
    }

    /// Number of edges from the root to the deepest leaf.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn arm_at(&self, id: NodeId) -> Option<ArmId> {
        self.nodes[id].arm
    }

    pub fn node_depth(&self, id: NodeId) -> usize {
        self.node_depth[id]
    }

    pub fn leaf_of(&self, arm: ArmId) -> NodeId {
        self.leaf_of_arm[arm]
    }

    /// Arms in the subtree rooted at `id`, in depth-first order.
    pub fn leaves_under(&self, id: NodeId) -> Vec<ArmId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(v) = stack.pop() {
            match self.nodes[v].arm {
                Some(a) => out.push(a),
                None => stack.extend(self.nodes[v].children.iter().rev()),
            }
        }
        out
    }

    /// Root-to-leaf node sequence ending at `arm`'s leaf.
    pub fn path_to(&self, arm: ArmId) -> Vec<NodeId> {
        let mut path = vec![self.leaf_of_arm[arm]];
        while let Some(p) = self.nodes[*path.last().unwrap()].parent {
            path.push(p);
        }
        path.reverse();
        path
    }

    /// Whether `path` starts at the root, follows parent-child edges and ends at a leaf.
    pub fn is_root_to_leaf_path(&self, path: &[NodeId]) -> bool {
        if path.first() != Some(&0) {
            return false;
        }
        let linked = path
            .windows(2)
            .all(|w| w[1] < self.nodes.len() && self.nodes[w[1]].parent == Some(w[0]));
        linked
            && path
                .last()
                .is_some_and(|&l| l < self.nodes.len() && self.is_leaf(l))
    }

    /// The partition induced by the root's children.
    pub fn top_level_partition(&self) -> DisjointClustering {
        if self.is_leaf(0) {
            return DisjointClustering::single(self.n_arms());
        }
        let members = self
            .children(0)
            .iter()
            .map(|&c| self.leaves_under(c))
            .collect();
        DisjointClustering::from_members(members).expect("tree leaves partition the arms")
    }

    /// Keeps the top `levels` levels of internal nodes. Every node at depth
    /// `levels` that still spans several arms gets all of its arms as direct
    /// leaf children, so `levels = 0` is a flat tree and `levels >= depth()`
    /// leaves the tree unchanged.
    pub fn truncate(&self, levels: usize) -> ClusterTree {
        fn build(tree: &ClusterTree, v: NodeId, remaining: usize) -> TreeShape {
            if let Some(a) = tree.arm_at(v) {
                return TreeShape::Leaf(a);
            }
            if remaining == 0 {
                let mut arms = tree.leaves_under(v);
                arms.sort_unstable();
                return TreeShape::Node(arms.into_iter().map(TreeShape::Leaf).collect());
            }
            TreeShape::Node(
                tree.children(v)
                    .iter()
                    .map(|&c| build(tree, c, remaining - 1))
                    .collect(),
            )
        }
        Self::from_shape(&build(self, 0, levels)).expect("truncation preserves validity")
    }
}

/// How the arms of an instance are organized.
#[derive(Debug, Clone, PartialEq)]
pub enum ArmStructure {
    Flat,
    Clustered(DisjointClustering),
    Tree(ClusterTree),
}

/// Result of checking for a unique best arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumAudit {
    pub best_mean: f64,
    pub optimal_arms: Vec<ArmId>,
    pub unique: bool,
}

/// A stochastic bandit problem with Bernoulli arms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct BanditInstance {
    arms: Vec<BernoulliArm>,
    structure: ArmStructure,
    best_mean: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    arms: Vec<BernoulliArm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clustering: Option<DisjointClustering>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tree: Option<ClusterTree>,
}

impl TryFrom<RawInstance> for BanditInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let structure = match (raw.clustering, raw.tree) {
            (None, None) => ArmStructure::Flat,
            (Some(c), None) => ArmStructure::Clustered(c),
            (None, Some(t)) => ArmStructure::Tree(t),
            (Some(_), Some(_)) => {
                return Err(Error::domain(
                    "an instance carries a clustering or a tree, not both",
                ))
            }
        };
        Self::new(raw.arms, structure)
    }
}

impl From<BanditInstance> for RawInstance {
    fn from(inst: BanditInstance) -> Self {
        let (clustering, tree) = match inst.structure {
            ArmStructure::Flat => (None, None),
            ArmStructure::Clustered(c) => (Some(c), None),
            ArmStructure::Tree(t) => (None, Some(t)),
        };
        RawInstance {
            arms: inst.arms,
            clustering,
            tree,
        }
    }
}

impl BanditInstance {
    pub fn new(arms: Vec<BernoulliArm>, structure: ArmStructure) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::domain("instance needs at least one arm"));
        }
        for (i, arm) in arms.iter().enumerate() {
            if arm.id != i {
                return Err(Error::domain(format!(
                    "arm at position {i} has id {}",
                    arm.id
                )));
            }
            BernoulliArm::new(arm.id, arm.mean)?;
        }
        let covered = match &structure {
            ArmStructure::Flat => arms.len(),
            ArmStructure::Clustered(c) => c.n_arms(),
            ArmStructure::Tree(t) => t.n_arms(),
        };
        if covered != arms.len() {
            return Err(Error::domain(format!(
                "structure covers {covered} arms but the instance has {}",
                arms.len()
            )));
        }
        let best_mean = arms
            .iter()
            .map(|a| a.mean)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            arms,
            structure,
            best_mean,
        })
    }

    /// Instance from raw means.
    pub fn from_means(means: &[f64], structure: ArmStructure) -> Result<Self> {
        let arms = means
            .iter()
            .enumerate()
            .map(|(id, &mean)| BernoulliArm::new(id, mean))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arms, structure)
    }

    pub fn arms(&self) -> &[BernoulliArm] {
        &self.arms
    }

    pub fn n_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn mean(&self, arm: ArmId) -> f64 {
        self.arms[arm].mean
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.mean).collect()
    }

    pub fn structure(&self) -> &ArmStructure {
        &self.structure
    }

    pub fn clustering(&self) -> Option<&DisjointClustering> {
        match &self.structure {
            ArmStructure::Clustered(c) => Some(c),
            _ => None,
        }
    }

    pub fn tree(&self) -> Option<&ClusterTree> {
        match &self.structure {
            ArmStructure::Tree(t) => Some(t),
            _ => None,
        }
    }

    /// Same arms, different structure.
    pub fn with_structure(&self, structure: ArmStructure) -> Result<Self> {
        Self::new(self.arms.clone(), structure)
    }

    /// Largest mean, μ*.
    pub fn best_mean(&self) -> f64 {
        self.best_mean
    }

    /// Lowest-indexed arm attaining the largest mean.
    pub fn optimal_arm(&self) -> ArmId {
        self.arms
            .iter()
            .position(|a| a.mean == self.best_mean)
            .expect("non-empty instance")
    }

    pub fn optimum_audit(&self) -> OptimumAudit {
        let optimal_arms: Vec<ArmId> = self
            .arms
            .iter()
            .filter(|a| a.mean == self.best_mean)
            .map(|a| a.id)
            .collect();
        OptimumAudit {
            best_mean: self.best_mean,
            unique: optimal_arms.len() == 1,
            optimal_arms,
        }
    }

    /// Per-pull regret of `arm`: μ* − μ_arm, measured against the maximum
    /// even when several arms tie for it.
    pub fn regret_of(&self, arm: ArmId) -> f64 {
        self.best_mean - self.arms[arm].mean
    }

    /// One Bernoulli reward from `arm`.
    pub fn draw_reward<R: Rng + ?Sized>(&self, arm: ArmId, rng: &mut R) -> Result<f64> {
        let mean = self
            .arms
            .get(arm)
            .ok_or_else(|| Error::domain(format!("unknown arm {arm}")))?
            .mean;
        Ok(if rng.gen::<f64>() < mean { 1.0 } else { 0.0 })
    }
}
