use serde::{Deserialize, Serialize};

use super::{Policy, Selection};
use crate::beta::BetaBelief;
use crate::error::{Error, Result};
use crate::model::{ArmId, ClusterId, DisjointClustering};
use crate::rng::{argmax_random_tie, SimRng};

/// Samples every candidate's belief and returns the candidate with the largest draw.
pub fn sample_argmax(beliefs: &[BetaBelief], candidates: &[usize], rng: &mut SimRng) -> usize {
    let draws: Vec<(usize, f64)> = candidates
        .iter()
        .map(|&i| (i, beliefs[i].sample(rng)))
        .collect();
    argmax_random_tie(draws, rng).expect("at least one candidate")
}

/// Per-arm Beta beliefs for standard Thompson sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct TsState {
    beliefs: Vec<BetaBelief>,
    arms: Vec<ArmId>,
}

impl TsState {
    pub fn new(n_arms: usize) -> Self {
        Self::from_beliefs(vec![BetaBelief::default(); n_arms])
    }

    pub fn from_beliefs(beliefs: Vec<BetaBelief>) -> Self {
        let arms = (0..beliefs.len()).collect();
        Self { beliefs, arms }
    }

    pub fn beliefs(&self) -> &[BetaBelief] {
        &self.beliefs
    }

    pub fn select(&self, rng: &mut SimRng) -> ArmId {
        sample_argmax(&self.beliefs, &self.arms, rng)
    }

    pub fn update(&mut self, arm: ArmId, reward: f64) -> Result<()> {
        self.beliefs
            .get_mut(arm)
            .ok_or_else(|| Error::domain(format!("unknown arm {arm}")))?
            .update(reward)
    }
}

/// Thompson sampling over all arms, ignoring any clustering.
#[derive(Debug, Clone)]
pub struct Ts {
    state: TsState,
}

impl Ts {
    pub fn new(n_arms: usize) -> Self {
        Self {
            state: TsState::new(n_arms),
        }
    }

    pub fn state(&self) -> &TsState {
        &self.state
    }
}

impl Policy for Ts {
    fn name(&self) -> &str {
        "ts"
    }

    fn select(&mut self, _t: u64, rng: &mut SimRng) -> Selection {
        Selection::flat(self.state.select(rng))
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        self.state.update(selection.arm, reward)
    }
}

/// Cluster-level and arm-level beliefs of two-level Thompson sampling.
///
/// Both levels absorb the same rewards, so each cluster's counts (minus the
/// prior) equal the sum of its members' counts (minus their priors).
#[derive(Debug, Clone, PartialEq)]
pub struct TscState {
    cluster_beliefs: Vec<BetaBelief>,
    arm_beliefs: Vec<BetaBelief>,
    cluster_ids: Vec<ClusterId>,
}

impl TscState {
    pub fn new(clustering: &DisjointClustering) -> Self {
        Self::from_beliefs(
            vec![BetaBelief::default(); clustering.cluster_count()],
            vec![BetaBelief::default(); clustering.n_arms()],
        )
    }

    pub fn from_beliefs(cluster_beliefs: Vec<BetaBelief>, arm_beliefs: Vec<BetaBelief>) -> Self {
        let cluster_ids = (0..cluster_beliefs.len()).collect();
        Self {
            cluster_beliefs,
            arm_beliefs,
            cluster_ids,
        }
    }

    pub fn cluster_beliefs(&self) -> &[BetaBelief] {
        &self.cluster_beliefs
    }

    pub fn arm_beliefs(&self) -> &[BetaBelief] {
        &self.arm_beliefs
    }

    /// Samples a cluster from the cluster beliefs, then an arm from the
    /// beliefs of that cluster's members only.
    pub fn select(&self, clustering: &DisjointClustering, rng: &mut SimRng) -> (ClusterId, ArmId) {
        let cluster = sample_argmax(&self.cluster_beliefs, &self.cluster_ids, rng);
        let arm = sample_argmax(&self.arm_beliefs, clustering.members(cluster), rng);
        (cluster, arm)
    }

    /// Applies the reward to the played arm and its cluster, nothing else.
    pub fn update(
        &mut self,
        clustering: &DisjointClustering,
        cluster: ClusterId,
        arm: ArmId,
        reward: f64,
    ) -> Result<()> {
        if cluster >= self.cluster_beliefs.len() || arm >= self.arm_beliefs.len() {
            return Err(Error::contract(format!(
                "unknown cluster {cluster} or arm {arm}"
            )));
        }
        if clustering.cluster_of(arm) != cluster {
            return Err(Error::contract(format!(
                "arm {arm} is not a member of cluster {cluster}"
            )));
        }
        let arm_next = self.arm_beliefs[arm].updated(reward)?;
        let cluster_next = self.cluster_beliefs[cluster].updated(reward)?;
        self.arm_beliefs[arm] = arm_next;
        self.cluster_beliefs[cluster] = cluster_next;
        Ok(())
    }
}

/// Two-level Thompson sampling over a disjoint clustering.
#[derive(Debug, Clone)]
pub struct Tsc {
    clustering: DisjointClustering,
    state: TscState,
}

impl Tsc {
    pub fn new(clustering: DisjointClustering) -> Self {
        let state = TscState::new(&clustering);
        Self { clustering, state }
    }

    pub fn state(&self) -> &TscState {
        &self.state
    }

    pub fn clustering(&self) -> &DisjointClustering {
        &self.clustering
    }
}

impl Policy for Tsc {
    fn name(&self) -> &str {
        "tsc"
    }

    fn select(&mut self, _t: u64, rng: &mut SimRng) -> Selection {
        let (cluster, arm) = self.state.select(&self.clustering, rng);
        Selection {
            arm,
            path: vec![cluster],
        }
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        let cluster = *selection
            .path
            .first()
            .ok_or_else(|| Error::contract("tsc selection without a cluster"))?;
        self.state
            .update(&self.clustering, cluster, selection.arm, reward)
    }
}

/// How TSMax ranks the members of a cluster to pick its representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TsMaxStatistic {
    /// Posterior mean s / (s + f).
    #[default]
    PosteriorMean,
    /// Observed success rate; unplayed arms count as 1/2.
    EmpiricalMean,
}

impl TsMaxStatistic {
    fn score(self, b: &BetaBelief) -> f64 {
        match self {
            TsMaxStatistic::PosteriorMean => b.mean(),
            TsMaxStatistic::EmpiricalMean => {
                let n = b.observations();
                if n > 0.0 {
                    (b.successes() - 1.0) / n
                } else {
                    0.5
                }
            }
        }
    }
}

/// Two-level Thompson sampling where a cluster is represented by the belief
/// of its best-looking member arm.
#[derive(Debug, Clone)]
pub struct TsMax {
    clustering: DisjointClustering,
    arm_beliefs: Vec<BetaBelief>,
    statistic: TsMaxStatistic,
}

impl TsMax {
    pub fn new(clustering: DisjointClustering, statistic: TsMaxStatistic) -> Self {
        let arm_beliefs = vec![BetaBelief::default(); clustering.n_arms()];
        Self {
            clustering,
            arm_beliefs,
            statistic,
        }
    }

    pub fn with_beliefs(clustering: DisjointClustering, arm_beliefs: Vec<BetaBelief>) -> Self {
        Self {
            clustering,
            arm_beliefs,
            statistic: TsMaxStatistic::default(),
        }
    }

    /// Member with the highest statistic; ties go to the lowest arm index.
    pub fn representative(&self, cluster: ClusterId) -> ArmId {
        let mut best = None::<(ArmId, f64)>;
        for &a in self.clustering.members(cluster) {
            let score = self.statistic.score(&self.arm_beliefs[a]);
            match best {
                Some((b, s)) if score < s || (score == s && b < a) => {}
                _ => best = Some((a, score)),
            }
        }
        best.expect("clusters are non-empty").0
    }

    pub fn select_pair(&self, rng: &mut SimRng) -> (ClusterId, ArmId) {
        let draws: Vec<(usize, f64)> = (0..self.clustering.cluster_count())
            .map(|c| (c, self.arm_beliefs[self.representative(c)].sample(rng)))
            .collect();
        let cluster = argmax_random_tie(draws, rng).expect("at least one cluster");
        let arm = sample_argmax(&self.arm_beliefs, self.clustering.members(cluster), rng);
        (cluster, arm)
    }
}

impl Policy for TsMax {
    fn name(&self) -> &str {
        "tsmax"
    }

    fn select(&mut self, _t: u64, rng: &mut SimRng) -> Selection {
        let (cluster, arm) = self.select_pair(rng);
        Selection {
            arm,
            path: vec![cluster],
        }
    }

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()> {
        if let Some(&c) = selection.path.first() {
            if self.clustering.cluster_of(selection.arm) != c {
                return Err(Error::contract(format!(
                    "arm {} is not a member of cluster {c}",
                    selection.arm
                )));
            }
        }
        self.arm_beliefs
            .get_mut(selection.arm)
            .ok_or_else(|| Error::domain(format!("unknown arm {}", selection.arm)))?
            .update(reward)
    }
}
