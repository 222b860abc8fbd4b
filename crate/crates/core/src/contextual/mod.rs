//! Linear contextual policies: LinTS, the clustered LinTSC, LinUCB and LinUCBC.

mod belief;

pub use belief::{ContextVector, LinearBelief, RESOLVE_PERIOD};

use crate::error::{Error, Result};
use crate::model::{ArmId, ClusterId, DisjointClustering};
use crate::policy::Selection;
use crate::rng::{argmax_random_tie, SimRng};

/// Default sampling scale for the Thompson variants.
pub const DEFAULT_SCALE: f64 = 1.0;
/// Default exploration weight for the UCB variants.
pub const DEFAULT_ALPHA: f64 = 2.0;

/// A policy that sees a context before each choice.
pub trait ContextualPolicy: Send {
    fn name(&self) -> &str;

    fn select(&mut self, x: &ContextVector, rng: &mut SimRng) -> Result<Selection>;

    fn update(&mut self, selection: &Selection, x: &ContextVector, reward: f64) -> Result<()>;
}

fn fresh_beliefs(count: usize, dim: usize, scale: f64) -> Result<Vec<LinearBelief>> {
    let proto = LinearBelief::new(dim, scale)?;
    Ok(vec![proto; count])
}

fn argmax_by<F>(candidates: &[usize], rng: &mut SimRng, mut score: F) -> Result<usize>
where
    F: FnMut(usize, &mut SimRng) -> Result<f64>,
{
    let mut scored = Vec::with_capacity(candidates.len());
    for &c in candidates {
        scored.push((c, score(c, rng)?));
    }
    argmax_random_tie(scored, rng).ok_or_else(|| Error::domain("no candidates to choose from"))
}

/// Samples a cluster from the cluster-level beliefs, then an arm from the
/// beliefs of that cluster's members.
pub fn lintsc_select(
    cluster_beliefs: &[LinearBelief],
    arm_beliefs: &[LinearBelief],
    clustering: &DisjointClustering,
    x: &ContextVector,
    rng: &mut SimRng,
) -> Result<(ClusterId, ArmId)> {
    let ids: Vec<usize> = (0..cluster_beliefs.len()).collect();
    let cluster = argmax_by(&ids, rng, |c, r| cluster_beliefs[c].sample(x, r))?;
    let arm = argmax_by(clustering.members(cluster), rng, |a, r| {
        arm_beliefs[a].sample(x, r)
    })?;
    Ok((cluster, arm))
}

/// Feeds `(x, reward)` to the chosen cluster's belief and the chosen arm's belief.
pub fn lintsc_update(
    cluster_beliefs: &mut [LinearBelief],
    arm_beliefs: &mut [LinearBelief],
    clustering: &DisjointClustering,
    cluster: ClusterId,
    arm: ArmId,
    x: &ContextVector,
    reward: f64,
) -> Result<()> {
    if cluster >= cluster_beliefs.len() || arm >= arm_beliefs.len() {
        return Err(Error::contract(format!(
            "unknown cluster {cluster} or arm {arm}"
        )));
    }
    if clustering.cluster_of(arm) != cluster {
        return Err(Error::contract(format!(
            "arm {arm} is not a member of cluster {cluster}"
        )));
    }
    let mut next_cluster = cluster_beliefs[cluster].clone();
    next_cluster.update(x, reward)?;
    arm_beliefs[arm].update(x, reward)?;
    cluster_beliefs[cluster] = next_cluster;
    Ok(())
}

/// Two-level UCB choice with index mu·x + alpha·sqrt(xᵀB⁻¹x) at both levels.
pub fn linucbc_select(
    cluster_beliefs: &[LinearBelief],
    arm_beliefs: &[LinearBelief],
    clustering: &DisjointClustering,
    x: &ContextVector,
    alpha: f64,
    rng: &mut SimRng,
) -> Result<(ClusterId, ArmId)> {
    let ids: Vec<usize> = (0..cluster_beliefs.len()).collect();
    let cluster = argmax_by(&ids, rng, |c, _| cluster_beliefs[c].ucb_index(x, alpha))?;
    let arm = argmax_by(clustering.members(cluster), rng, |a, _| {
        arm_beliefs[a].ucb_index(x, alpha)
    })?;
    Ok((cluster, arm))
}

/// Single-level UCB choice over `beliefs`.
pub fn linucb_select(
    beliefs: &[LinearBelief],
    x: &ContextVector,
    alpha: f64,
    rng: &mut SimRng,
) -> Result<ArmId> {
    let ids: Vec<usize> = (0..beliefs.len()).collect();
    argmax_by(&ids, rng, |a, _| beliefs[a].ucb_index(x, alpha))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    Ok(())
}

fn arm_belief_mut(beliefs: &mut [LinearBelief], arm: ArmId) -> Result<&mut LinearBelief> {
    beliefs
        .get_mut(arm)
        .ok_or_else(|| Error::domain(format!("unknown arm {arm}")))
}

/// Linear Thompson sampling, one belief per arm.
#[derive(Debug, Clone)]
pub struct LinTs {
    beliefs: Vec<LinearBelief>,
}

impl LinTs {
    pub fn new(n_arms: usize, dim: usize, scale: f64) -> Result<Self> {
        Ok(Self {
            beliefs: fresh_beliefs(n_arms, dim, scale)?,
        })
    }

    pub fn from_beliefs(beliefs: Vec<LinearBelief>) -> Self {
        Self { beliefs }
    }

    pub fn beliefs(&self) -> &[LinearBelief] {
        &self.beliefs
    }
}

impl ContextualPolicy for LinTs {
    fn name(&self) -> &str {
        "lints"
    }

    fn select(&mut self, x: &ContextVector, rng: &mut SimRng) -> Result<Selection> {
        let ids: Vec<usize> = (0..self.beliefs.len()).collect();
        let beliefs = &self.beliefs;
        let arm = argmax_by(&ids, rng, |a, r| beliefs[a].sample(x, r))?;
        Ok(Selection::flat(arm))
    }

    fn update(&mut self, selection: &Selection, x: &ContextVector, reward: f64) -> Result<()> {
        arm_belief_mut(&mut self.beliefs, selection.arm)?.update(x, reward)
    }
}

/// Clustered linear Thompson sampling.
#[derive(Debug, Clone)]
pub struct LinTsc {
    clustering: DisjointClustering,
    cluster_beliefs: Vec<LinearBelief>,
    arm_beliefs: Vec<LinearBelief>,
}

impl LinTsc {
    pub fn new(clustering: DisjointClustering, dim: usize, scale: f64) -> Result<Self> {
        let cluster_beliefs = fresh_beliefs(clustering.cluster_count(), dim, scale)?;
        let arm_beliefs = fresh_beliefs(clustering.n_arms(), dim, scale)?;
        Ok(Self {
            clustering,
            cluster_beliefs,
            arm_beliefs,
        })
    }

    pub fn from_beliefs(
        clustering: DisjointClustering,
        cluster_beliefs: Vec<LinearBelief>,
        arm_beliefs: Vec<LinearBelief>,
    ) -> Self {
        Self {
            clustering,
            cluster_beliefs,
            arm_beliefs,
        }
    }

    pub fn cluster_beliefs(&self) -> &[LinearBelief] {
        &self.cluster_beliefs
    }

    pub fn arm_beliefs(&self) -> &[LinearBelief] {
        &self.arm_beliefs
    }
}

impl ContextualPolicy for LinTsc {
    fn name(&self) -> &str {
        "lintsc"
    }

    fn select(&mut self, x: &ContextVector, rng: &mut SimRng) -> Result<Selection> {
        let (cluster, arm) = lintsc_select(
            &self.cluster_beliefs,
            &self.arm_beliefs,
            &self.clustering,
            x,
            rng,
        )?;
        Ok(Selection {
            arm,
            path: vec![cluster],
        })
    }

    fn update(&mut self, selection: &Selection, x: &ContextVector, reward: f64) -> Result<()> {
        let cluster = *selection
            .path
            .first()
            .ok_or_else(|| Error::contract("lintsc selection without a cluster"))?;
        lintsc_update(
            &mut self.cluster_beliefs,
            &mut self.arm_beliefs,
            &self.clustering,
            cluster,
            selection.arm,
            x,
            reward,
        )
    }
}

/// LinUCB with ridge beliefs per arm.
#[derive(Debug, Clone)]
pub struct LinUcb {
    beliefs: Vec<LinearBelief>,
    alpha: f64,
}

impl LinUcb {
    pub fn new(n_arms: usize, dim: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            beliefs: fresh_beliefs(n_arms, dim, DEFAULT_SCALE)?,
            alpha,
        })
    }

    pub fn from_beliefs(beliefs: Vec<LinearBelief>, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { beliefs, alpha })
    }
}

impl ContextualPolicy for LinUcb {
    fn name(&self) -> &str {
        "linucb"
    }

    fn select(&mut self, x: &ContextVector, rng: &mut SimRng) -> Result<Selection> {
        Ok(Selection::flat(linucb_select(
            &self.beliefs,
            x,
            self.alpha,
            rng,
        )?))
    }

    fn update(&mut self, selection: &Selection, x: &ContextVector, reward: f64) -> Result<()> {
        arm_belief_mut(&mut self.beliefs, selection.arm)?.update(x, reward)
    }
}

/// Two-level LinUCB over a clustering.
#[derive(Debug, Clone)]
pub struct LinUcbc {
    clustering: DisjointClustering,
    cluster_beliefs: Vec<LinearBelief>,
    arm_beliefs: Vec<LinearBelief>,
    alpha: f64,
}

impl LinUcbc {
    pub fn new(clustering: DisjointClustering, dim: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let cluster_beliefs = fresh_beliefs(clustering.cluster_count(), dim, DEFAULT_SCALE)?;
        let arm_beliefs = fresh_beliefs(clustering.n_arms(), dim, DEFAULT_SCALE)?;
        Ok(Self {
            clustering,
            cluster_beliefs,
            arm_beliefs,
            alpha,
        })
    }
}

impl ContextualPolicy for LinUcbc {
    fn name(&self) -> &str {
        "linucbc"
    }

    fn select(&mut self, x: &ContextVector, rng: &mut SimRng) -> Result<Selection> {
        let (cluster, arm) = linucbc_select(
            &self.cluster_beliefs,
            &self.arm_beliefs,
            &self.clustering,
            x,
            self.alpha,
            rng,
        )?;
        Ok(Selection {
            arm,
            path: vec![cluster],
        })
    }

    fn update(&mut self, selection: &Selection, x: &ContextVector, reward: f64) -> Result<()> {
        let cluster = *selection
            .path
            .first()
            .ok_or_else(|| Error::contract("linucbc selection without a cluster"))?;
        lintsc_update(
            &mut self.cluster_beliefs,
            &mut self.arm_beliefs,
            &self.clustering,
            cluster,
            selection.arm,
            x,
            reward,
        )
    }
}
