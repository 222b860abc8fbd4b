use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::{
    gen_contextual, gen_feature_instance, gen_kmeans_tree, gen_sorted_binary_tree,
    gen_strong_dominance, gen_uniform_instance, ContextualInstance, ContextualSpec, Linkage,
    RewardFn, StrongDominanceSpec,
};
use crate::model::{BanditInstance, ClusterTree};
use crate::rng::SeedStreams;

/// Which instance family to generate for every seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    StrongDominance(StrongDominanceSpec),
    SortedBinaryTree {
        n_arms: usize,
    },
    /// k-means clustering of random features; `linkage` adds an
    /// agglomerative tree over the same features for tree policies.
    Kmeans {
        n_arms: usize,
        n_clusters: usize,
        reward_fn: RewardFn,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        linkage: Option<Linkage>,
    },
    KmeansTree {
        n_arms: usize,
        branching: usize,
        depth: usize,
        reward_fn: RewardFn,
    },
    Uniform {
        n_arms: usize,
        n_clusters: usize,
    },
    Contextual(ContextualSpec),
    /// A fixed, serialized instance used for every seed.
    Fixed {
        instance: BanditInstance,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aux_tree: Option<ClusterTree>,
    },
    FixedContextual {
        instance: ContextualInstance,
    },
}

/// A generated instance, ready to be played.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generated {
    Bandit {
        instance: BanditInstance,
        /// A tree for tree policies when the instance itself is clustered.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aux_tree: Option<ClusterTree>,
    },
    Contextual {
        instance: ContextualInstance,
    },
}

impl Generated {
    pub fn n_arms(&self) -> usize {
        match self {
            Generated::Bandit { instance, .. } => instance.n_arms(),
            Generated::Contextual { instance } => instance.n_arms(),
        }
    }

    pub fn bandit(&self) -> Option<&BanditInstance> {
        match self {
            Generated::Bandit { instance, .. } => Some(instance),
            Generated::Contextual { .. } => None,
        }
    }
}

impl InstanceSpec {
    pub fn is_contextual(&self) -> bool {
        matches!(
            self,
            InstanceSpec::Contextual(_) | InstanceSpec::FixedContextual { .. }
        )
    }

    /// Builds the instance for `seed` from the seed's instance stream only,
    /// so every policy run under that seed sees the same instance.
    pub fn generate(&self, seed: u64) -> Result<Generated> {
        let mut rng = SeedStreams::new(seed).instance();
        let bandit = |instance| Generated::Bandit {
            instance,
            aux_tree: None,
        };
        Ok(match self {
            InstanceSpec::StrongDominance(spec) => bandit(gen_strong_dominance(spec, &mut rng)?),
            InstanceSpec::SortedBinaryTree { n_arms } => {
                bandit(gen_sorted_binary_tree(*n_arms, &mut rng)?)
            }
            InstanceSpec::Kmeans {
                n_arms,
                n_clusters,
                reward_fn,
                linkage,
            } => {
                let fi =
                    gen_feature_instance(*n_arms, *n_clusters, *reward_fn, *linkage, &mut rng)?;
                Generated::Bandit {
                    instance: fi.instance,
                    aux_tree: fi.tree,
                }
            }
            InstanceSpec::KmeansTree {
                n_arms,
                branching,
                depth,
                reward_fn,
            } => bandit(gen_kmeans_tree(
                *n_arms, *branching, *depth, *reward_fn, &mut rng,
            )?),
            InstanceSpec::Uniform { n_arms, n_clusters } => {
                bandit(gen_uniform_instance(*n_arms, *n_clusters, &mut rng)?)
            }
            InstanceSpec::Contextual(spec) => Generated::Contextual {
                instance: gen_contextual(spec, &mut rng)?,
            },
            InstanceSpec::Fixed { instance, aux_tree } => Generated::Bandit {
                instance: instance.clone(),
                aux_tree: aux_tree.clone(),
            },
            InstanceSpec::FixedContextual { instance } => Generated::Contextual {
                instance: instance.clone(),
            },
        })
    }
}

/// A policy key with its parameters, e.g. `{"key": "hts", "params": {"levels": 2}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub key: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PolicySpec {
    pub fn new(key: &str) -> Self {
        Self {
            key: key.into(),
            params: BTreeMap::new(),
            label: None,
        }
    }

    pub fn with_param(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.params.insert(name.into(), value.into());
        self
    }

    /// Display name: the explicit label, else `key(p=v,...)`.
    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        if self.params.is_empty() {
            return self.key.clone();
        }
        let ps: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}({})", self.key, ps.join(","))
    }
}

/// Seeds as an explicit list or as `count` consecutive seeds from `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Range { base: u64, count: usize },
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Range { base, count } => (0..*count as u64).map(|i| base + i).collect(),
        }
    }
}

/// Runs the experiment once per value, each time overriding instance-spec
/// fields. A scalar value sets `parameter`; an object value sets each of
/// its fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub instance: InstanceSpec,
    pub policies: Vec<PolicySpec>,
    pub horizon: usize,
    pub seeds: SeedSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Logging stride for exported curves; see [`default_stride`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    /// Compute bound curves for every variant.
    #[serde(default)]
    pub bounds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

fn default_name() -> String {
    "experiment".into()
}

/// One logged step per round up to T = 10^4, every 10th round beyond.
pub fn default_stride(horizon: usize) -> usize {
    if horizon <= 10_000 {
        1
    } else {
        10
    }
}

/// One instance configuration of a (possibly swept) experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<Value>,
    pub instance: InstanceSpec,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn stride(&self) -> usize {
        self.stride.unwrap_or_else(|| default_stride(self.horizon))
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "at least one policy is required"));
        }
        if self.seeds.seeds().is_empty() {
            return Err(Error::config("seeds", "at least one seed is required"));
        }
        if self.stride == Some(0) {
            return Err(Error::config("stride", "must be at least 1"));
        }
        let contextual = self.instance.is_contextual();
        for (i, p) in self.policies.iter().enumerate() {
            match super::factory::policy_kind(&p.key) {
                None => {
                    return Err(Error::config(
                        format!("policies[{i}].key"),
                        format!(
                            "unknown policy `{}`; known: {}",
                            p.key,
                            super::factory::POLICY_KEYS.join(", ")
                        ),
                    ))
                }
                Some(is_ctx) if is_ctx != contextual => {
                    return Err(Error::config(
                        format!("policies[{i}].key"),
                        format!(
                            "policy `{}` is {}contextual but the instance is {}",
                            p.key,
                            if is_ctx { "" } else { "not " },
                            if contextual {
                                "contextual"
                            } else {
                                "not contextual"
                            }
                        ),
                    ))
                }
                _ => {}
            }
        }
        let mut labels: Vec<String> = self.policies.iter().map(PolicySpec::label).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("policies", "policy labels must be distinct"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::config(
                    "sweep.values",
                    "sweep needs at least one value",
                ));
            }
        }
        self.variants().map(|_| ())
    }

    /// The instance spec of every sweep value (or the single spec).
    pub fn variants(&self) -> Result<Vec<Variant>> {
        let Some(sweep) = &self.sweep else {
            return Ok(vec![Variant {
                id: self.name.clone(),
                sweep_value: None,
                instance: self.instance.clone(),
            }]);
        };
        let base = serde_json::to_value(&self.instance)?;
        sweep
            .values
            .iter()
            .map(|v| {
                let mut doc = base.clone();
                let obj = doc
                    .as_object_mut()
                    .expect("instance specs serialize to objects");
                let suffix = match (v, &sweep.parameter) {
                    (Value::Object(fields), _) => {
                        for (k, x) in fields {
                            obj.insert(k.clone(), x.clone());
                        }
                        fields
                            .iter()
                            .map(|(k, x)| format!("{k}={x}"))
                            .collect::<Vec<_>>()
                            .join(",")
                    }
                    (_, Some(p)) => {
                        obj.insert(p.clone(), v.clone());
                        format!("{p}={v}")
                    }
                    (_, None) => {
                        return Err(Error::config(
                            "sweep.parameter",
                            "scalar sweep values need a parameter name",
                        ))
                    }
                };
                let instance: InstanceSpec = serde_json::from_value(doc).map_err(|e| {
                    Error::config(
                        "sweep.values",
                        format!("value {v} does not fit the instance: {e}"),
                    )
                })?;
                Ok(Variant {
                    id: format!("{}[{suffix}]", self.name),
                    sweep_value: Some(v.clone()),
                    instance,
                })
            })
            .collect()
    }
}
