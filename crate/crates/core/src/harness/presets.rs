//! Named experiment suites: sweeps over instance parameters, benchmarks and negative controls.

use serde_json::{json, Value};

use super::config::{ExperimentConfig, InstanceSpec, PolicySpec, SeedSpec, Sweep};
use super::factory::leveled;
use crate::error::{Error, Result};
use crate::instances::{
    ContextDistribution, ContextualSpec, Linkage, RewardFn, StrongDominanceSpec,
};

pub const PRESET_NAMES: [&str; 15] = [
    "fig-d-sweep",
    "fig-w-sweep",
    "fig-n-sweep",
    "fig-k-sweep",
    "fig-a-sweep",
    "fig-depth",
    "kmeans-small",
    "kmeans-large",
    "hts-uct",
    "ctx-small",
    "ctx-large-eps05",
    "ctx-large-eps01",
    "appendix-2d",
    "appendix-gaussian",
    "appendix-uniform",
];

/// One-line description of each preset.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig-d-sweep" => {
            "TS vs TSC on strong-dominance instances, separation d in {0.05, 0.1, 0.2, 0.3}"
        }
        "fig-w-sweep" => {
            "TS vs TSC on strong-dominance instances, optimal width w* in {0, 0.1, 0.2, 0.3}"
        }
        "fig-n-sweep" => {
            "TS vs TSC, w* = d = 0.1, A* = K = floor(sqrt(N)), N in {25, 100, 400, 1600}"
        }
        "fig-k-sweep" => "TS vs TSC, w* = d = 0.1, N = 100, A* = 10, varying K",
        "fig-a-sweep" => "TS vs TSC, w* = d = 0.1, N = 100, K = 10, varying A*",
        "fig-depth" => "HTS at depths L on sorted binary trees, N in {16, 64, 256, 1024}",
        "kmeans-small" => "TSC vs TS, UCB1, UCBC, TSMax on a k-means instance, N = 100, K = 10",
        "kmeans-large" => "TSC vs TS, UCB1, UCBC, TSMax on a k-means instance, N = 1000, K = 32",
        "hts-uct" => "TSC, HTS and UCT on a recursive k-means tree, N = 5000, branching 15",
        "ctx-small" => "LinTSC vs LinTS, LinUCB, LinUCBC, k = 20, n = 400, eps = 0.5",
        "ctx-large-eps05" => "LinTSC vs LinTS, LinUCB, LinUCBC, k = 30, n = 900, eps = 0.5",
        "ctx-large-eps01" => "LinTSC vs LinTS, LinUCB, LinUCBC, k = 30, n = 900, eps = 0.1",
        "appendix-2d" => "TSC vs HTS and UCT on the 2-D bump function, N = 500, K = 20",
        "appendix-gaussian" => "TSC vs HTS and UCT on the smooth Gaussian mix, N = 50, K = 5",
        "appendix-uniform" => {
            "TS vs TSC with a clustering unrelated to the rewards, N = 50, K = 10"
        }
        _ => return None,
    })
}

fn policies(keys: &[&str]) -> Vec<PolicySpec> {
    keys.iter().map(|k| PolicySpec::new(k)).collect()
}

fn config(
    name: &str,
    instance: InstanceSpec,
    policies: Vec<PolicySpec>,
    horizon: usize,
    seeds: usize,
) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        instance,
        policies,
        horizon,
        seeds: SeedSpec::Range {
            base: 0,
            count: seeds,
        },
        output: None,
        stride: None,
        bounds: false,
        sweep: None,
    }
}

fn strong(n: usize, k: usize, a: usize, w: f64, d: f64) -> InstanceSpec {
    InstanceSpec::StrongDominance(StrongDominanceSpec {
        n_arms: n,
        n_suboptimal_clusters: k,
        optimal_cluster_size: a,
        optimal_width: w,
        separation: d,
    })
}

fn sweep(parameter: Option<&str>, values: Vec<Value>) -> Option<Sweep> {
    Some(Sweep {
        parameter: parameter.map(str::to_string),
        values,
    })
}

fn contextual(name: &str, k: usize, n: usize, eps: f64) -> ExperimentConfig {
    let spec = ContextualSpec {
        n_arms: n,
        n_clusters: k,
        dim: 5,
        epsilon: eps,
        horizon: Some(2000),
        context: ContextDistribution::Uniform,
    };
    config(
        name,
        InstanceSpec::Contextual(spec),
        policies(&["lints", "lintsc", "linucb", "linucbc"]),
        2000,
        25,
    )
}

fn kmeans(n: usize, k: usize, reward_fn: RewardFn, linkage: Option<Linkage>) -> InstanceSpec {
    InstanceSpec::Kmeans {
        n_arms: n,
        n_clusters: k,
        reward_fn,
        linkage,
    }
}

/// The configuration of a named preset.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let ts_tsc = || policies(&["ts", "tsc"]);
    let mut c = match name {
        "fig-d-sweep" => {
            let mut c = config(name, strong(100, 10, 10, 0.1, 0.1), ts_tsc(), 3000, 50);
            c.sweep = sweep(
                Some("separation"),
                vec![json!(0.05), json!(0.1), json!(0.2), json!(0.3)],
            );
            c
        }
        "fig-w-sweep" => {
            let mut c = config(name, strong(100, 10, 10, 0.1, 0.1), ts_tsc(), 3000, 50);
            c.sweep = sweep(
                Some("optimal_width"),
                vec![json!(0.0), json!(0.1), json!(0.2), json!(0.3)],
            );
            c
        }
        "fig-n-sweep" => {
            let mut c = config(name, strong(100, 10, 10, 0.1, 0.1), ts_tsc(), 3000, 50);
            let values = [25usize, 100, 400, 1600]
                .iter()
                .map(|&n| {
                    let r = (n as f64).sqrt().floor() as usize;
                    json!({"n_arms": n, "n_suboptimal_clusters": r, "optimal_cluster_size": r})
                })
                .collect();
            c.sweep = sweep(None, values);
            c
        }
        "fig-k-sweep" => {
            let mut c = config(name, strong(100, 10, 10, 0.1, 0.1), ts_tsc(), 3000, 50);
            let ks = [2, 5, 10, 20, 45, 90];
            c.sweep = sweep(
                Some("n_suboptimal_clusters"),
                ks.iter().map(|&k| json!(k)).collect(),
            );
            c
        }
        "fig-a-sweep" => {
            let mut c = config(name, strong(100, 10, 10, 0.1, 0.1), ts_tsc(), 3000, 50);
            let a_stars = [2, 5, 10, 20, 45, 90];
            c.sweep = sweep(
                Some("optimal_cluster_size"),
                a_stars.iter().map(|&a| json!(a)).collect(),
            );
            c
        }
        "fig-depth" => {
            let ps = [0, 1, 2, 4, 6, 8, 10]
                .iter()
                .map(|&l| leveled("hts", l))
                .collect();
            let mut c = config(
                name,
                InstanceSpec::SortedBinaryTree { n_arms: 256 },
                ps,
                3000,
                50,
            );
            c.sweep = sweep(
                Some("n_arms"),
                [16, 64, 256, 1024].iter().map(|&n| json!(n)).collect(),
            );
            c
        }
        "kmeans-small" | "kmeans-large" => {
            let (n, k) = if name == "kmeans-small" {
                (100, 10)
            } else {
                (1000, 32)
            };
            config(
                name,
                kmeans(n, k, RewardFn::SinProduct, None),
                policies(&["tsc", "ts", "ucb1", "ucbc", "tsmax"]),
                3000,
                100,
            )
        }
        "hts-uct" => {
            let instance = InstanceSpec::KmeansTree {
                n_arms: 5000,
                branching: 15,
                depth: 3,
                reward_fn: RewardFn::SinProduct,
            };
            let mut ps = vec![PolicySpec::new("tsc")];
            for l in [1, 2, 3] {
                ps.push(leveled("hts", l));
            }
            for l in [1, 2, 3] {
                ps.push(leveled("uct", l));
            }
            config(name, instance, ps, 3000, 100)
        }
        "ctx-small" => contextual(name, 20, 400, 0.5),
        "ctx-large-eps05" => contextual(name, 30, 900, 0.5),
        "ctx-large-eps01" => contextual(name, 30, 900, 0.1),
        "appendix-2d" => config(
            name,
            kmeans(500, 20, RewardFn::Bump2d, Some(Linkage::Single)),
            policies(&["tsc", "hts", "uct", "ts"]),
            20_000,
            25,
        ),
        "appendix-gaussian" => config(
            name,
            kmeans(50, 5, RewardFn::GaussianMix1d, Some(Linkage::Single)),
            policies(&["tsc", "hts", "uct", "ts"]),
            25_000,
            25,
        ),
        "appendix-uniform" => config(
            name,
            InstanceSpec::Uniform {
                n_arms: 50,
                n_clusters: 10,
            },
            ts_tsc(),
            3000,
            25,
        ),
        _ => {
            return Err(Error::config(
                "preset",
                format!(
                    "unknown preset `{name}`; valid presets: {}",
                    PRESET_NAMES.join(", ")
                ),
            ))
        }
    };
    c.validate()?;
    c.name = name.into();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid_and_described() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            assert_eq!(c.name, name);
            assert!(describe(name).is_some());
            assert!(!c.variants().unwrap().is_empty());
        }
    }

    #[test]
    fn unknown_preset_lists_names() {
        let err = preset("fig-zzz").unwrap_err().to_string();
        assert!(err.contains("kmeans-large") && err.contains("appendix-uniform"));
    }

    #[test]
    fn preset_parameters() {
        let c = preset("kmeans-large").unwrap();
        assert_eq!(c.seeds.seeds().len(), 100);
        assert!(matches!(
            c.instance,
            InstanceSpec::Kmeans {
                n_arms: 1000,
                n_clusters: 32,
                ..
            }
        ));
        let c = preset("kmeans-small").unwrap();
        assert_eq!((c.horizon, c.seeds.seeds().len()), (3000, 100));
        let c = preset("ctx-small").unwrap();
        assert_eq!(c.seeds.seeds().len(), 25);
        match &c.instance {
            InstanceSpec::Contextual(s) => {
                assert_eq!((s.n_clusters, s.n_arms, s.epsilon), (20, 400, 0.5))
            }
            other => panic!("{other:?}"),
        }
        let c = preset("fig-depth").unwrap();
        assert_eq!((c.horizon, c.seeds.seeds().len()), (3000, 50));
        assert!(c.policies.iter().all(|p| p.key == "hts"));
        let c = preset("hts-uct").unwrap();
        let keys: std::collections::BTreeSet<&str> =
            c.policies.iter().map(|p| p.key.as_str()).collect();
        assert_eq!(
            keys.into_iter().collect::<Vec<_>>(),
            vec!["hts", "tsc", "uct"]
        );
        assert!(matches!(
            c.instance,
            InstanceSpec::KmeansTree {
                n_arms: 5000,
                branching: 15,
                depth: 3,
                ..
            }
        ));
    }

    #[test]
    fn n_sweep_sets_three_fields() {
        let v = preset("fig-n-sweep").unwrap().variants().unwrap();
        match &v[2].instance {
            InstanceSpec::StrongDominance(s) => {
                assert_eq!(
                    (s.n_arms, s.n_suboptimal_clusters, s.optimal_cluster_size),
                    (400, 20, 20)
                )
            }
            other => panic!("{other:?}"),
        }
    }
}
