//! Bottom-up agglomerative clustering into a binary [`ClusterTree`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ClusterTree, TreeShape};

/// Inter-cluster dissimilarity used when merging.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    #[default]
    Single,
    Complete,
    Average,
    Ward,
}

impl Linkage {
    fn method(self) -> kodama::Method {
        match self {
            Linkage::Single => kodama::Method::Single,
            Linkage::Complete => kodama::Method::Complete,
            Linkage::Average => kodama::Method::Average,
            Linkage::Ward => kodama::Method::Ward,
        }
    }
}

/// One merge: two cluster labels joined at `distance`. Labels below `n`
/// are points; label `n + i` is the cluster formed by merge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
}

/// Agglomerative merge sequence of `features` (Euclidean distances).
pub fn agglomerate(features: &[Vec<f64>], linkage: Linkage) -> Result<Vec<Merge>> {
    let n = features.len();
    if n < 2 {
        return Err(Error::domain(
            "agglomerative clustering needs at least 2 points",
        ));
    }
    let mut condensed = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n - 1 {
        for j in i + 1..n {
            let d2: f64 = features[i]
                .iter()
                .zip(&features[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            condensed.push(d2.sqrt());
        }
    }
    let dendrogram = kodama::linkage(&mut condensed, n, linkage.method());
    Ok(dendrogram
        .steps()
        .iter()
        .map(|s| Merge {
            left: s.cluster1,
            right: s.cluster2,
            distance: s.dissimilarity,
        })
        .collect())
}

/// Binary tree whose leaf `i` is arm `i` and whose root is the last merge.
pub fn gen_agglomerative_tree(features: &[Vec<f64>], linkage: Linkage) -> Result<ClusterTree> {
    let n = features.len();
    let merges = agglomerate(features, linkage)?;
    let mut shapes: Vec<Option<TreeShape>> = (0..n).map(|a| Some(TreeShape::Leaf(a))).collect();
    for m in &merges {
        let l = shapes[m.left].take().expect("each label merges once");
        let r = shapes[m.right].take().expect("each label merges once");
        shapes.push(Some(TreeShape::Node(vec![l, r])));
    }
    let root = shapes.pop().flatten().expect("n - 1 merges leave one root");
    ClusterTree::from_shape(&root)
}
