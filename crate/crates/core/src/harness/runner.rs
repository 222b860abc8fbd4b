use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, Generated, Variant};
use super::factory::{build_policy, BuiltPolicy};
use crate::analysis::{
    aggregate_curves, cluster_stats, hts_instance_bound, lai_robbins_lower, tsc_instance_bound,
    BoundValue, RegretSummary,
};
use crate::error::{Error, Result};
use crate::sim::{simulate, simulate_contextual};

/// Cumulative regret of one (variant, policy, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub variant: usize,
    pub policy: usize,
    pub seed: u64,
    pub regret: Vec<f64>,
}

impl RunRecord {
    pub fn final_regret(&self) -> f64 {
        self.regret.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: String,
    pub summary: RegretSummary,
}

/// A named bound curve averaged over the seeds' instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub name: String,
    pub values: Vec<BoundValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurves {
    pub t: Vec<u64>,
    pub curves: Vec<BoundCurve>,
    pub caveat: String,
}

pub const BOUND_CAVEAT: &str =
    "leading ln T terms only; asymptotic lower-order remainders are not included and minimax curves use a unit constant";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantResult {
    pub id: String,
    pub sweep_value: Option<Value>,
    pub summaries: Vec<PolicySummary>,
    pub bounds: Option<BoundCurves>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub variants: Vec<VariantResult>,
    /// Sorted by (variant, policy, seed).
    pub runs: Vec<RunRecord>,
}

impl ExperimentResult {
    pub fn policy_labels(&self) -> Vec<String> {
        self.config.policies.iter().map(|p| p.label()).collect()
    }

    pub fn runs_for(&self, variant: usize, policy: usize) -> impl Iterator<Item = &RunRecord> {
        self.runs
            .iter()
            .filter(move |r| r.variant == variant && r.policy == policy)
    }

    pub fn summary(&self, variant: usize, policy: &str) -> Option<&RegretSummary> {
        self.variants[variant]
            .summaries
            .iter()
            .find(|s| s.policy == policy)
            .map(|s| &s.summary)
    }
}

/// Logged rounds: every `stride`-th round plus the last.
pub fn logged_rounds(horizon: usize, stride: usize) -> Vec<u64> {
    let mut ts: Vec<u64> = (stride..=horizon)
        .step_by(stride.max(1))
        .map(|t| t as u64)
        .collect();
    if ts.last() != Some(&(horizon as u64)) {
        ts.push(horizon as u64);
    }
    ts
}

fn run_one(
    config: &ExperimentConfig,
    generated: &Generated,
    policy: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let spec = &config.policies[policy];
    let trace = match (build_policy(spec, generated)?, generated) {
        (BuiltPolicy::Bandit(mut p), Generated::Bandit { instance, .. }) => {
            simulate(instance, p.as_mut(), config.horizon, seed)?
        }
        (BuiltPolicy::Contextual(mut p), Generated::Contextual { instance }) => {
            simulate_contextual(instance, p.as_mut(), config.horizon, seed)?
        }
        _ => unreachable!("build_policy matches the instance kind"),
    };
    Ok(trace.regret_curve())
}

/// Plays every policy on every seed's instance of every variant in
/// parallel. Each seed's instance is generated once and shared, so
/// policies are compared on identical instances.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let variants: Vec<Variant> = config.variants()?;
    let seeds = config.seeds.seeds();
    let instance_jobs: Vec<(usize, u64)> = (0..variants.len())
        .flat_map(|v| seeds.iter().map(move |&s| (v, s)))
        .collect();
    let instances: Vec<Generated> = instance_jobs
        .par_iter()
        .map(|&(v, s)| {
            variants[v]
                .instance
                .generate(s)
                .map_err(|e| Error::config(format!("instance ({})", variants[v].id), e.to_string()))
        })
        .collect::<Result<_>>()?;
    let n_policies = config.policies.len();
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..n_policies).map(move |p| (i, p)))
        .collect();
    let mut runs: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(i, p)| {
            let (variant, seed) = instance_jobs[i];
            Ok(RunRecord {
                variant,
                policy: p,
                seed,
                regret: run_one(config, &instances[i], p, seed)?,
            })
        })
        .collect::<Result<_>>()?;
    runs.sort_by_key(|r| (r.variant, r.policy, r.seed));

    let labels: Vec<String> = config.policies.iter().map(|p| p.label()).collect();
    let mut results = Vec::with_capacity(variants.len());
    for (v, variant) in variants.iter().enumerate() {
        let mut summaries = Vec::with_capacity(n_policies);
        for (p, label) in labels.iter().enumerate() {
            let curves: Vec<Vec<f64>> = runs
                .iter()
                .filter(|r| r.variant == v && r.policy == p)
                .map(|r| r.regret.clone())
                .collect();
            summaries.push(PolicySummary {
                policy: label.clone(),
                summary: aggregate_curves(&curves)?,
            });
        }
        let bounds = if config.bounds {
            let mine: Vec<&Generated> = instance_jobs
                .iter()
                .zip(&instances)
                .filter(|((vi, _), _)| *vi == v)
                .map(|(_, g)| g)
                .collect();
            bound_curves(&mine, &logged_rounds(config.horizon, config.stride()))?
        } else {
            None
        };
        results.push(VariantResult {
            id: variant.id.clone(),
            sweep_value: variant.sweep_value.clone(),
            summaries,
            bounds,
        });
    }
    Ok(ExperimentResult {
        config: config.clone(),
        variants: results,
        runs,
    })
}

const BOUND_EPS: f64 = 0.1;

/// How a bound scales with T given its per-instance constant.
#[derive(Clone, Copy)]
enum Growth {
    /// c · ln T
    Log,
    /// √(c · T · ln T)
    SqrtTLogT,
    /// √(c · T)
    SqrtT,
}

impl Growth {
    fn at(self, c: f64, t: f64) -> f64 {
        match self {
            Growth::Log => c * t.ln(),
            Growth::SqrtTLogT => (c * t * t.ln()).sqrt(),
            Growth::SqrtT => (c * t).sqrt(),
        }
    }
}

/// Bound curves at rounds `ts` (rounds below 2 are skipped), averaged over
/// the given instances. `None` for contextual instances.
pub fn bound_curves(instances: &[&Generated], ts: &[u64]) -> Result<Option<BoundCurves>> {
    let bandits: Vec<_> = instances.iter().filter_map(|g| g.bandit()).collect();
    if bandits.is_empty() {
        return Ok(None);
    }
    let ts: Vec<u64> = ts.iter().copied().filter(|&t| t >= 2).collect();
    // Per-instance constants; None marks an unbounded value.
    let mut kinds: Vec<(&str, Growth, Vec<Option<f64>>)> = Vec::new();
    let stats: Option<Vec<_>> = bandits.iter().map(|b| cluster_stats(b).ok()).collect();
    if let Some(stats) = stats {
        let mut tsc = Vec::new();
        let mut minimax = Vec::new();
        let mut lower = Vec::new();
        let mut lai = Vec::new();
        for s in &stats {
            tsc.push(tsc_instance_bound(s, 2.0, BOUND_EPS)?.coefficient.value());
            minimax.push(
                s.gamma
                    .map(|g| s.optimal_size as f64 + s.n_suboptimal as f64 * (1.0 + g)),
            );
            lower.push(Some((s.optimal_size + s.n_suboptimal) as f64));
            lai.push(Some(lai_robbins_lower(s, 2.0)?.coefficient));
        }
        kinds.push(("tsc_instance (leading term)", Growth::Log, tsc));
        kinds.push(("tsc_minimax (shape)", Growth::SqrtTLogT, minimax));
        kinds.push(("minimax_lower (reference)", Growth::SqrtT, lower));
        kinds.push(("lai_robbins_lower", Growth::Log, lai));
    }
    if bandits.iter().all(|b| b.tree().is_some()) {
        let hts = bandits
            .iter()
            .map(|b| Ok(hts_instance_bound(b, 2.0, BOUND_EPS)?.coefficient.value()))
            .collect::<Result<_>>()?;
        kinds.push(("hts_instance (leading term)", Growth::Log, hts));
    }
    let curves = kinds
        .into_iter()
        .map(|(name, growth, consts)| {
            let all: Option<Vec<f64>> = consts.into_iter().collect();
            let values = ts
                .iter()
                .map(|&t| match &all {
                    Some(cs) => BoundValue::Finite(
                        cs.iter().map(|&c| growth.at(c, t as f64)).sum::<f64>() / cs.len() as f64,
                    ),
                    None => BoundValue::Unbounded,
                })
                .collect();
            BoundCurve {
                name: name.into(),
                values,
            }
        })
        .collect();
    Ok(Some(BoundCurves {
        t: ts,
        curves,
        caveat: BOUND_CAVEAT.into(),
    }))
}
