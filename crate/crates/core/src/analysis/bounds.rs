//! Closed-form regret bound curves. All upper bounds report the leading
//! `ln T` term; asymptotic remainders are not included.

use serde::{Deserialize, Serialize};

use super::kl::kl_bernoulli;
use super::stats::ClusterStats;
use crate::error::{Error, Result};
use crate::model::{ArmId, BanditInstance, ClusterTree, NodeId};

/// A bound that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundRepr", into = "BoundRepr")]
pub enum BoundValue {
    Finite(f64),
    Unbounded,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<BoundRepr> for BoundValue {
    type Error = String;

    fn try_from(r: BoundRepr) -> Result<Self, String> {
        match r {
            BoundRepr::Number(v) => Ok(BoundValue::Finite(v)),
            BoundRepr::Text(s) if s == "unbounded" => Ok(BoundValue::Unbounded),
            BoundRepr::Text(s) => Err(format!("expected a number or \"unbounded\", got {s:?}")),
        }
    }
}

impl From<BoundValue> for BoundRepr {
    fn from(v: BoundValue) -> Self {
        match v {
            BoundValue::Finite(x) => BoundRepr::Number(x),
            BoundValue::Unbounded => BoundRepr::Text("unbounded".into()),
        }
    }
}

impl BoundValue {
    fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            BoundValue::Finite(v)
        } else {
            BoundValue::Unbounded
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            BoundValue::Finite(v) => Some(v),
            BoundValue::Unbounded => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, BoundValue::Finite(_))
    }

    fn scale(self, k: f64) -> Self {
        match self {
            BoundValue::Finite(v) => BoundValue::Finite(v * k),
            BoundValue::Unbounded => BoundValue::Unbounded,
        }
    }
}

/// An upper bound split into its `ln T` coefficient and evaluated terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceBound {
    /// Coefficient multiplying ln T, including the (1 + eps) factor.
    pub coefficient: BoundValue,
    /// coefficient · ln T.
    pub leading: BoundValue,
    /// coefficient · ln ln T, the lower-order term of the per-cluster analysis.
    pub lower_order: BoundValue,
    /// Whether the dominance assumption behind the bound holds.
    pub assumption_holds: bool,
    pub warnings: Vec<String>,
}

fn check_horizon(t: f64) -> Result<()> {
    if !(t >= 2.0 && t.is_finite()) {
        return Err(Error::domain(format!("horizon T = {t} must be at least 2")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps = {eps} must be positive")));
    }
    Ok(())
}

/// Δ / D with Δ = 0 contributing nothing.
fn ratio(gap: f64, divergence: f64) -> f64 {
    if gap == 0.0 {
        0.0
    } else {
        gap / divergence
    }
}

fn finish(
    coefficient: f64,
    t: f64,
    assumption_holds: bool,
    warnings: Vec<String>,
) -> InstanceBound {
    let coefficient = BoundValue::from_f64(coefficient);
    InstanceBound {
        coefficient,
        leading: coefficient.scale(t.ln()),
        lower_order: coefficient.scale(t.ln().ln()),
        assumption_holds,
        warnings,
    }
}

/// Instance-dependent bound for TSC under strong dominance:
/// (1+eps)[Σ_C Δ_C / D(μ̄_C, μ̲_{C*}) + Σ_{a∈C*} Δ_a / D(μ_a, μ*)] ln T.
pub fn tsc_instance_bound(stats: &ClusterStats, t: f64, eps: f64) -> Result<InstanceBound> {
    check_horizon(t)?;
    check_eps(eps)?;
    let mu_star = stats.best_mean;
    let opt_under = stats.optimal().mu_under;
    let mut warnings = Vec::new();
    let mut sum = 0.0;
    for c in stats.suboptimal() {
        let d = kl_bernoulli(c.mu_bar, opt_under)?;
        let term = ratio(c.gap, d);
        if !term.is_finite() {
            warnings.push(format!(
                "cluster {}: D(mu_bar, mu_under*) = 0, term unbounded",
                c.cluster
            ));
        }
        sum += term;
    }
    for &m in &stats.optimal_means {
        sum += ratio(mu_star - m, kl_bernoulli(m, mu_star)?);
    }
    let holds = stats.dominance_holds();
    if !holds {
        warnings.push("strong dominance does not hold".into());
    }
    Ok(finish((1.0 + eps) * sum, t, holds, warnings))
}

/// Same as [`tsc_instance_bound`] with every D(p, q) replaced by its
/// Pinsker lower bound 2(p − q)².
pub fn tsc_instance_bound_pinsker(stats: &ClusterStats, t: f64, eps: f64) -> Result<InstanceBound> {
    check_horizon(t)?;
    check_eps(eps)?;
    let pinsker = |p: f64, q: f64| 2.0 * (p - q) * (p - q);
    let opt_under = stats.optimal().mu_under;
    let mut sum = 0.0;
    for c in stats.suboptimal() {
        sum += ratio(c.gap, pinsker(c.mu_bar, opt_under));
    }
    for &m in &stats.optimal_means {
        sum += ratio(stats.best_mean - m, pinsker(m, stats.best_mean));
    }
    Ok(finish(
        (1.0 + eps) * sum,
        t,
        stats.dominance_holds(),
        Vec::new(),
    ))
}

/// Minimax shape √((A* + K(1+γ)) T ln T); unbounded when γ is undefined.
pub fn tsc_minimax_bound(stats: &ClusterStats, t: f64) -> Result<BoundValue> {
    check_horizon(t)?;
    Ok(match stats.gamma {
        Some(g) => {
            let weight = stats.optimal_size as f64 + stats.n_suboptimal as f64 * (1.0 + g);
            BoundValue::from_f64((weight * t * t.ln()).sqrt())
        }
        None => BoundValue::Unbounded,
    })
}

/// Minimax lower reference √((A* + K) T).
pub fn minimax_lower_reference(stats: &ClusterStats, t: f64) -> Result<f64> {
    check_horizon(t)?;
    Ok(((stats.optimal_size + stats.n_suboptimal) as f64 * t).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub coefficient: f64,
    pub value: f64,
    pub warnings: Vec<String>,
}

/// Asymptotic lower bound
/// [Σ_{a∈C*} Δ_a/D(μ_a, μ*) + Σ_C Δ_C/D(μ̲_C, μ*)] ln T.
/// Terms with infinite divergence are dropped and reported.
pub fn lai_robbins_lower(stats: &ClusterStats, t: f64) -> Result<LowerBound> {
    check_horizon(t)?;
    let mu_star = stats.best_mean;
    let mut warnings = Vec::new();
    let mut sum = 0.0;
    let mut add = |gap: f64, d: f64, what: String| {
        if gap == 0.0 {
            return;
        }
        if d.is_infinite() {
            warnings.push(format!("{what}: infinite divergence, term dropped"));
            return;
        }
        sum += gap / d;
    };
    for (i, &m) in stats.optimal_means.iter().enumerate() {
        add(
            mu_star - m,
            kl_bernoulli(m, mu_star)?,
            format!("optimal-cluster arm #{i}"),
        );
    }
    for c in stats.suboptimal() {
        add(
            c.gap,
            kl_bernoulli(c.mu_under, mu_star)?,
            format!("cluster {}", c.cluster),
        );
    }
    Ok(LowerBound {
        coefficient: sum,
        value: sum * t.ln(),
        warnings,
    })
}

/// One failed comparison along the optimal path of a cluster tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceViolation {
    pub parent: NodeId,
    pub optimal_child: NodeId,
    pub sibling: NodeId,
    /// Worst arm of the optimal subtree.
    pub optimal_arm: ArmId,
    /// Best arm of the sibling subtree.
    pub sibling_arm: ArmId,
    /// min over the optimal subtree minus max over the sibling (≤ 0).
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyAudit {
    pub holds: bool,
    pub violations: Vec<DominanceViolation>,
}

struct PathComparison {
    parent: NodeId,
    optimal_child: NodeId,
    sibling: NodeId,
    min_arm: ArmId,
    max_arm: ArmId,
    gap: f64,
    distance: f64,
}

fn extreme_arm(tree: &ClusterTree, node: NodeId, means: &[f64], max: bool) -> ArmId {
    tree.leaves_under(node)
        .into_iter()
        .reduce(|a, b| {
            let better = if max {
                means[b] > means[a]
            } else {
                means[b] < means[a]
            };
            if better {
                b
            } else {
                a
            }
        })
        .expect("subtrees are non-empty")
}

/// Every (optimal child, sibling) pair along the path to the optimal arm.
fn optimal_path_comparisons(instance: &BanditInstance, tree: &ClusterTree) -> Vec<PathComparison> {
    let means = instance.means();
    let mu_star = instance.best_mean();
    let path = tree.path_to(instance.optimal_arm());
    let mut out = Vec::new();
    for w in path.windows(2) {
        let (parent, opt) = (w[0], w[1]);
        let min_arm = extreme_arm(tree, opt, &means, false);
        for &sib in tree.children(parent) {
            if sib == opt {
                continue;
            }
            let max_arm = extreme_arm(tree, sib, &means, true);
            out.push(PathComparison {
                parent,
                optimal_child: opt,
                sibling: sib,
                min_arm,
                max_arm,
                gap: mu_star - means[max_arm],
                distance: means[min_arm] - means[max_arm],
            });
        }
    }
    out
}

fn instance_tree(instance: &BanditInstance) -> Result<&ClusterTree> {
    instance
        .tree()
        .ok_or_else(|| Error::domain("instance has no cluster tree"))
}

/// Checks that at every level the optimal subtree lies strictly above each
/// of its siblings.
pub fn audit_hierarchical_dominance(instance: &BanditInstance) -> Result<HierarchyAudit> {
    let tree = instance_tree(instance)?;
    let violations: Vec<DominanceViolation> = optimal_path_comparisons(instance, tree)
        .into_iter()
        .filter(|c| c.distance <= 0.0)
        .map(|c| DominanceViolation {
            parent: c.parent,
            optimal_child: c.optimal_child,
            sibling: c.sibling,
            optimal_arm: c.min_arm,
            sibling_arm: c.max_arm,
            distance: c.distance,
        })
        .collect();
    Ok(HierarchyAudit {
        holds: violations.is_empty(),
        violations,
    })
}

/// Instance bound for HTS: (1+eps) Σ Δ/d² ln T over every sibling of the
/// optimal path, where at the bottom level d = Δ and the term is 1/Δ.
/// Siblings with d ≤ 0 are skipped and reported.
pub fn hts_instance_bound(instance: &BanditInstance, t: f64, eps: f64) -> Result<InstanceBound> {
    check_horizon(t)?;
    check_eps(eps)?;
    let tree = instance_tree(instance)?;
    let mut sum = 0.0;
    let mut warnings = Vec::new();
    let mut holds = true;
    for c in optimal_path_comparisons(instance, tree) {
        if c.distance <= 0.0 {
            holds = false;
            warnings.push(format!(
                "node {} vs sibling {}: d = {} is not positive, term skipped",
                c.optimal_child, c.sibling, c.distance
            ));
            continue;
        }
        sum += c.gap / (c.distance * c.distance);
    }
    Ok(finish((1.0 + eps) * sum, t, holds, warnings))
}
