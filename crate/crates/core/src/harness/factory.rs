//! Turns policy keys and parameter maps into policies.

use serde_json::Value;

use super::config::{Generated, PolicySpec};
use crate::contextual::{
    ContextualPolicy, LinTs, LinTsc, LinUcb, LinUcbc, DEFAULT_ALPHA, DEFAULT_SCALE,
};
use crate::error::{Error, Result};
use crate::model::{BanditInstance, ClusterTree, DisjointClustering};
use crate::policy::{Hts, Policy, Ts, TsMax, TsMaxStatistic, Tsc, Ucb1, Ucbc, Uct};

pub const POLICY_KEYS: [&str; 11] = [
    "ts", "tsc", "hts", "ucb1", "ucbc", "tsmax", "uct", "lints", "lintsc", "linucb", "linucbc",
];

/// `Some(true)` for contextual keys, `Some(false)` for the others, `None` if unknown.
pub fn policy_kind(key: &str) -> Option<bool> {
    match key {
        "ts" | "tsc" | "hts" | "ucb1" | "ucbc" | "tsmax" | "uct" => Some(false),
        "lints" | "lintsc" | "linucb" | "linucbc" => Some(true),
        _ => None,
    }
}

pub enum BuiltPolicy {
    Bandit(Box<dyn Policy>),
    Contextual(Box<dyn ContextualPolicy>),
}

struct Params<'a> {
    spec: &'a PolicySpec,
}

impl Params<'_> {
    fn field(&self, name: &str) -> String {
        format!("policies.{}.params.{name}", self.spec.key)
    }

    fn check_known(&self, allowed: &[&str]) -> Result<()> {
        match self
            .spec
            .params
            .keys()
            .find(|k| !allowed.contains(&k.as_str()))
        {
            Some(k) => Err(Error::config(
                self.field(k),
                format!(
                    "unknown parameter for `{}`; allowed: [{}]",
                    self.spec.key,
                    allowed.join(", ")
                ),
            )),
            None => Ok(()),
        }
    }

    fn f64_or(&self, name: &str, default: f64) -> Result<f64> {
        match self.spec.params.get(name) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .filter(|x| *x > 0.0 && x.is_finite())
                .ok_or_else(|| {
                    Error::config(
                        self.field(name),
                        format!("expected a positive number, got {v}"),
                    )
                }),
        }
    }

    fn usize_opt(&self, name: &str) -> Result<Option<usize>> {
        match self.spec.params.get(name) {
            None => Ok(None),
            Some(v) => v.as_u64().map(|x| Some(x as usize)).ok_or_else(|| {
                Error::config(
                    self.field(name),
                    format!("expected a non-negative integer, got {v}"),
                )
            }),
        }
    }

    fn statistic(&self) -> Result<TsMaxStatistic> {
        match self.spec.params.get("statistic") {
            None => Ok(TsMaxStatistic::default()),
            Some(v) => serde_json::from_value(v.clone()).map_err(|_| {
                Error::config(
                    self.field("statistic"),
                    format!("expected \"posterior_mean\" or \"empirical_mean\", got {v}"),
                )
            }),
        }
    }
}

fn clustering_for(instance: &BanditInstance, key: &str) -> Result<DisjointClustering> {
    instance
        .clustering()
        .cloned()
        .or_else(|| instance.tree().map(ClusterTree::top_level_partition))
        .ok_or_else(|| {
            Error::config(
                "instance",
                format!("policy `{key}` needs a clustered or tree instance"),
            )
        })
}

fn tree_for(
    instance: &BanditInstance,
    aux: Option<&ClusterTree>,
    key: &str,
    levels: Option<usize>,
) -> Result<ClusterTree> {
    let tree = aux
        .cloned()
        .or_else(|| instance.tree().cloned())
        .or_else(|| instance.clustering().map(ClusterTree::from_clustering))
        .ok_or_else(|| {
            Error::config(
                "instance",
                format!("policy `{key}` needs a clustered or tree instance"),
            )
        })?;
    Ok(match levels {
        Some(l) => tree.truncate(l),
        None => tree,
    })
}

/// Builds a fresh policy for one run on `generated`.
pub fn build_policy(spec: &PolicySpec, generated: &Generated) -> Result<BuiltPolicy> {
    let p = Params { spec };
    let key = spec.key.as_str();
    match generated {
        Generated::Bandit { instance, aux_tree } => {
            let n = instance.n_arms();
            let policy: Box<dyn Policy> = match key {
                "ts" | "ucb1" => {
                    p.check_known(&[])?;
                    if key == "ts" {
                        Box::new(Ts::new(n))
                    } else {
                        Box::new(Ucb1::new(n))
                    }
                }
                "tsc" | "ucbc" => {
                    p.check_known(&[])?;
                    let c = clustering_for(instance, key)?;
                    if key == "tsc" {
                        Box::new(Tsc::new(c))
                    } else {
                        Box::new(Ucbc::new(c))
                    }
                }
                "tsmax" => {
                    p.check_known(&["statistic"])?;
                    Box::new(TsMax::new(clustering_for(instance, key)?, p.statistic()?))
                }
                "hts" | "uct" => {
                    p.check_known(&["levels"])?;
                    let tree = tree_for(instance, aux_tree.as_ref(), key, p.usize_opt("levels")?)?;
                    if key == "hts" {
                        Box::new(Hts::new(tree))
                    } else {
                        Box::new(Uct::new(tree))
                    }
                }
                _ => return Err(mismatch(spec, "a Bernoulli")),
            };
            Ok(BuiltPolicy::Bandit(policy))
        }
        Generated::Contextual { instance } => {
            let n = instance.n_arms();
            let dim = instance.dim();
            if let Some(d) = p.usize_opt("d")? {
                if d != dim {
                    return Err(Error::config(
                        p.field("d"),
                        format!("instance has dimension {dim}, not {d}"),
                    ));
                }
            }
            let c = instance.clustering.clone();
            let policy: Box<dyn ContextualPolicy> = match key {
                "lints" | "lintsc" => {
                    p.check_known(&["v", "d"])?;
                    let v = p.f64_or("v", DEFAULT_SCALE)?;
                    if key == "lints" {
                        Box::new(LinTs::new(n, dim, v)?)
                    } else {
                        Box::new(LinTsc::new(c, dim, v)?)
                    }
                }
                "linucb" | "linucbc" => {
                    p.check_known(&["alpha", "d"])?;
                    let a = p.f64_or("alpha", DEFAULT_ALPHA)?;
                    if key == "linucb" {
                        Box::new(LinUcb::new(n, dim, a)?)
                    } else {
                        Box::new(LinUcbc::new(c, dim, a)?)
                    }
                }
                _ => return Err(mismatch(spec, "a contextual")),
            };
            Ok(BuiltPolicy::Contextual(policy))
        }
    }
}

fn mismatch(spec: &PolicySpec, kind: &str) -> Error {
    let known = policy_kind(&spec.key).is_some();
    let msg = if known {
        format!("policy `{}` cannot run on {kind} instance", spec.key)
    } else {
        format!(
            "unknown policy `{}`; known: {}",
            spec.key,
            POLICY_KEYS.join(", ")
        )
    };
    Error::config("policies.key", msg)
}

/// Convenience for presets: `hts` restricted to `levels`, labelled `hts(L=levels)`.
pub(crate) fn leveled(key: &str, levels: usize) -> PolicySpec {
    let mut p = PolicySpec::new(key).with_param("levels", Value::from(levels));
    p.label = Some(format!("{key}(L={levels})"));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{sorted_binary_tree, ContextDistribution, ContextualInstance};
    use crate::model::ArmStructure;

    fn clustered() -> Generated {
        let c = DisjointClustering::new(vec![0, 0, 1, 1], 2).unwrap();
        Generated::Bandit {
            instance: BanditInstance::from_means(&[0.6, 0.5, 0.4, 0.3], ArmStructure::Clustered(c))
                .unwrap(),
            aux_tree: None,
        }
    }

    #[test]
    fn builds_every_bandit_key() {
        let g = clustered();
        for key in ["ts", "tsc", "hts", "ucb1", "ucbc", "tsmax", "uct"] {
            match build_policy(&PolicySpec::new(key), &g).unwrap() {
                BuiltPolicy::Bandit(p) => assert_eq!(p.name(), key),
                BuiltPolicy::Contextual(_) => panic!("{key} built as contextual"),
            }
        }
    }

    #[test]
    fn tree_instance_feeds_tsc_its_top_level() {
        let means = [0.2, 0.7, 0.3, 0.5];
        let g = Generated::Bandit {
            instance: BanditInstance::from_means(
                &means,
                ArmStructure::Tree(sorted_binary_tree(&means).unwrap()),
            )
            .unwrap(),
            aux_tree: None,
        };
        assert!(build_policy(&PolicySpec::new("tsc"), &g).is_ok());
        assert!(build_policy(&leveled("hts", 1), &g).is_ok());
    }

    #[test]
    fn contextual_keys_and_mismatches() {
        let inst = ContextualInstance::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            DisjointClustering::single(2),
            ContextDistribution::Uniform,
        )
        .unwrap();
        let g = Generated::Contextual { instance: inst };
        for key in ["lints", "lintsc", "linucb", "linucbc"] {
            assert!(matches!(
                build_policy(&PolicySpec::new(key), &g).unwrap(),
                BuiltPolicy::Contextual(_)
            ));
        }
        assert!(build_policy(&PolicySpec::new("ts"), &g).is_err());
        assert!(build_policy(&PolicySpec::new("lints"), &clustered()).is_err());
        let err = build_policy(&PolicySpec::new("lints").with_param("d", 3), &g)
            .err()
            .unwrap();
        assert!(err.to_string().contains("params.d"), "{err}");
        let err = build_policy(&PolicySpec::new("linucb").with_param("alpha", -1.0), &g)
            .err()
            .unwrap();
        assert!(err.to_string().contains("alpha"));
        let err = build_policy(&PolicySpec::new("ts").with_param("bogus", 1), &clustered())
            .err()
            .unwrap();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn flat_instance_rejects_cluster_policies() {
        let g = Generated::Bandit {
            instance: BanditInstance::from_means(&[0.1, 0.2], ArmStructure::Flat).unwrap(),
            aux_tree: None,
        };
        assert!(build_policy(&PolicySpec::new("tsc"), &g).is_err());
        assert!(build_policy(&PolicySpec::new("ts"), &g).is_ok());
    }
}
