//! Running a policy against an instance and recording what happened.

use serde::{Deserialize, Serialize};

use crate::contextual::ContextualPolicy;
use crate::error::Result;
use crate::instances::ContextualInstance;
use crate::model::{ArmId, BanditInstance};
use crate::policy::Policy;
use crate::rng::SeedStreams;

/// One round of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Round index, starting at 1.
    pub t: u64,
    pub arm: ArmId,
    /// Cluster ids or tree nodes visited to reach `arm`.
    pub path: Vec<usize>,
    pub reward: f64,
    /// Expected regret of this round's choice.
    pub regret: f64,
    pub cumulative_regret: f64,
}

/// Everything a single seeded run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub seed: u64,
    pub steps: Vec<TraceStep>,
}

impl SimulationTrace {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn final_regret(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.cumulative_regret)
    }

    /// Cumulative regret after round `t` (1-based); 0 before the first round.
    pub fn regret_at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.steps[t - 1].cumulative_regret
        }
    }

    pub fn regret_curve(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.cumulative_regret).collect()
    }

    /// Play counts per arm.
    pub fn arm_counts(&self, n_arms: usize) -> Vec<u64> {
        let mut counts = vec![0; n_arms];
        for s in &self.steps {
            counts[s.arm] += 1;
        }
        counts
    }

    /// Number of rounds whose first path entry (the top-level cluster) equals `cluster`.
    pub fn cluster_plays(&self, cluster: usize) -> u64 {
        self.steps
            .iter()
            .filter(|s| s.path.first() == Some(&cluster))
            .count() as u64
    }
}

/// Plays `policy` on `instance` for `horizon` rounds.
///
/// Rewards come from the environment stream and the policy consumes the
/// policy stream, both derived from `seed`.
pub fn simulate(
    instance: &BanditInstance,
    policy: &mut dyn Policy,
    horizon: usize,
    seed: u64,
) -> Result<SimulationTrace> {
    let streams = SeedStreams::new(seed);
    let mut policy_rng = streams.policy();
    let mut env_rng = streams.environment();
    let mut steps = Vec::with_capacity(horizon);
    let mut cumulative = 0.0;
    for t in 1..=horizon as u64 {
        let selection = policy.select(t, &mut policy_rng);
        let reward = instance.draw_reward(selection.arm, &mut env_rng)?;
        policy.update(&selection, reward)?;
        let regret = instance.regret_of(selection.arm);
        cumulative += regret;
        steps.push(TraceStep {
            t,
            arm: selection.arm,
            path: selection.path,
            reward,
            regret,
            cumulative_regret: cumulative,
        });
    }
    Ok(SimulationTrace { seed, steps })
}

/// Contextual counterpart of [`simulate`]: each round draws a context,
/// lets the policy choose, and charges the gap between the best expected
/// reward under that context and the chosen arm's.
pub fn simulate_contextual(
    instance: &ContextualInstance,
    policy: &mut dyn ContextualPolicy,
    horizon: usize,
    seed: u64,
) -> Result<SimulationTrace> {
    let streams = SeedStreams::new(seed);
    let mut policy_rng = streams.policy();
    let mut env_rng = streams.environment();
    let mut ctx_rng = streams.context();
    let mut steps = Vec::with_capacity(horizon);
    let mut cumulative = 0.0;
    for t in 1..=horizon as u64 {
        let x = instance.draw_context(&mut ctx_rng);
        let selection = policy.select(&x, &mut policy_rng)?;
        let reward = instance.draw_reward(selection.arm, &x, &mut env_rng)?;
        policy.update(&selection, &x, reward)?;
        let regret = instance.regret_of(selection.arm, &x);
        cumulative += regret;
        steps.push(TraceStep {
            t,
            arm: selection.arm,
            path: selection.path,
            reward,
            regret,
            cumulative_regret: cumulative,
        });
    }
    Ok(SimulationTrace { seed, steps })
}
