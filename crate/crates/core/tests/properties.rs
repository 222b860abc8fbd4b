use proptest::prelude::*;
use rand::SeedableRng;

use clustered_bandits::analysis::{
    audit_hierarchical_dominance, cluster_stats, cluster_stats_of, kl_bernoulli, mean_std,
};
use clustered_bandits::contextual::{ContextVector, LinearBelief};
use clustered_bandits::instances::{
    gen_sorted_binary_tree, gen_strong_dominance, verify_strong_dominance, RewardFn,
    StrongDominanceSpec,
};
use clustered_bandits::model::{ArmStructure, BanditInstance, DisjointClustering};
use clustered_bandits::policy::{Hts, Ts, Tsc};
use clustered_bandits::rng::SimRng;
use clustered_bandits::sim::simulate;

fn clustered() -> impl Strategy<Value = (Vec<f64>, Vec<usize>, usize)> {
    (2usize..10).prop_flat_map(|n| {
        (1..=n).prop_flat_map(move |k| {
            (
                prop::collection::vec(0.0f64..1.0, n),
                prop::collection::vec(0..k, n - k),
                Just(k),
            )
                .prop_map(|(means, rest, k)| {
                    let mut assignment: Vec<usize> = (0..k).collect();
                    assignment.extend(rest);
                    (means, assignment, k)
                })
        })
    })
}

fn instance(means: &[f64], assignment: Vec<usize>, k: usize) -> BanditInstance {
    let c = DisjointClustering::new(assignment, k).unwrap();
    BanditInstance::from_means(means, ArmStructure::Clustered(c)).unwrap()
}

/// γ recomputed directly from the arm means, without ClusterStats.
fn brute_gamma(means: &[f64], assignment: &[usize], k: usize) -> Option<f64> {
    let best = means.iter().cloned().fold(f64::MIN, f64::max);
    let star = assignment[means.iter().position(|&m| m == best).unwrap()];
    let of = |c: usize| {
        means
            .iter()
            .zip(assignment)
            .filter(move |(_, &a)| a == c)
            .map(|(m, _)| *m)
    };
    let under_star = of(star).fold(f64::MAX, f64::min);
    let w_star = best - under_star;
    if k == 1 {
        return Some(0.0);
    }
    let mut total = 0.0;
    for c in (0..k).filter(|&c| c != star) {
        let top = of(c).fold(f64::MIN, f64::max);
        let d = under_star - top;
        if d <= 0.0 {
            return None;
        }
        total += w_star / d;
    }
    Some(total / (k - 1) as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pinsker_lower_bounds_kl(p in 0.0f64..=1.0, q in 1e-9f64..1.0 - 1e-9) {
        let d = kl_bernoulli(p, q).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(d >= 2.0 * (p - q).powi(2) - 1e-15);
    }

    #[test]
    fn kl_vanishes_only_on_equal_arguments(p in 0.01f64..0.99) {
        prop_assert!(kl_bernoulli(p, p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn tsc_cluster_counts_match_arm_counts((means, assignment, k) in clustered(), seed in any::<u64>()) {
        let inst = instance(&means, assignment, k);
        let c = inst.clustering().unwrap().clone();
        let mut p = Tsc::new(c.clone());
        let trace = simulate(&inst, &mut p, 80, seed).unwrap();
        let st = p.state();
        for cluster in 0..k {
            let arms: f64 = c.members(cluster).iter().map(|&a| st.arm_beliefs()[a].observations()).sum();
            prop_assert!((st.cluster_beliefs()[cluster].observations() - arms).abs() < 1e-9);
            prop_assert_eq!(st.cluster_beliefs()[cluster].observations() as u64, trace.cluster_plays(cluster));
        }
    }

    #[test]
    fn hts_parent_counts_match_children(n in 2usize..48, seed in any::<u64>()) {
        let mut rng = SimRng::seed_from_u64(seed);
        let inst = gen_sorted_binary_tree(n, &mut rng).unwrap();
        let tree = inst.tree().unwrap().clone();
        let mut p = Hts::new(tree.clone());
        simulate(&inst, &mut p, 80, seed).unwrap();
        let b = p.state().node_beliefs();
        prop_assert!((b[tree.root()].observations() - 80.0).abs() < 1e-9);
        for v in (0..tree.len()).filter(|&v| !tree.is_leaf(v)) {
            let kids: f64 = tree.children(v).iter().map(|&c| b[c].observations()).sum();
            prop_assert!((b[v].observations() - kids).abs() < 1e-9);
        }
    }

    #[test]
    fn replays_are_byte_identical((means, assignment, k) in clustered(), seed in any::<u64>()) {
        let inst = instance(&means, assignment, k);
        let a = serde_json::to_string(&simulate(&inst, &mut Ts::new(inst.n_arms()), 50, seed).unwrap()).unwrap();
        let b = serde_json::to_string(&simulate(&inst, &mut Ts::new(inst.n_arms()), 50, seed).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn regret_curves_are_non_decreasing((means, assignment, k) in clustered(), seed in any::<u64>()) {
        let inst = instance(&means, assignment, k);
        let c = inst.clustering().unwrap().clone();
        let curve = simulate(&inst, &mut Tsc::new(c), 60, seed).unwrap().regret_curve();
        prop_assert!(curve.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn gamma_matches_brute_force((means, assignment, k) in clustered()) {
        // Skip instances whose optimum is tied across clusters.
        let best = means.iter().cloned().fold(f64::MIN, f64::max);
        prop_assume!(means.iter().filter(|&&m| m == best).count() == 1);
        let c = DisjointClustering::new(assignment.clone(), k).unwrap();
        let stats = cluster_stats_of(&means, &c).unwrap();
        match (stats.gamma, brute_gamma(&means, &assignment, k)) {
            (Some(g), Some(b)) => prop_assert!((g - b).abs() <= 1e-12 * b.abs().max(1.0)),
            (None, None) => {}
            (g, b) => prop_assert!(false, "gamma {:?} vs brute force {:?}", g, b),
        }
    }

    #[test]
    fn strong_dominance_generator_hits_its_targets(
        a_star in 2usize..12,
        k in 1usize..12,
        extra in 0usize..30,
        w in 0.0f64..0.25,
        d in 0.01f64..0.25,
        seed in any::<u64>(),
    ) {
        let spec = StrongDominanceSpec {
            n_arms: a_star + k + extra,
            n_suboptimal_clusters: k,
            optimal_cluster_size: a_star,
            optimal_width: w,
            separation: d,
        };
        let inst = gen_strong_dominance(&spec, &mut SimRng::seed_from_u64(seed)).unwrap();
        let report = verify_strong_dominance(&inst).unwrap();
        prop_assert!(report.holds);
        prop_assert_eq!(report.violation_count, 0);
        let stats = cluster_stats(&inst).unwrap();
        prop_assert!((stats.optimal_width - w).abs() < 1e-12);
        prop_assert_eq!(stats.optimal_size, a_star);
        prop_assert_eq!(stats.n_suboptimal, k);
        for c in stats.suboptimal() {
            prop_assert!((c.distance - d).abs() < 1e-12);
        }
    }

    #[test]
    fn sorted_trees_satisfy_hierarchical_dominance(n in 2usize..80, seed in any::<u64>()) {
        let inst = gen_sorted_binary_tree(n, &mut SimRng::seed_from_u64(seed)).unwrap();
        let audit = audit_hierarchical_dominance(&inst).unwrap();
        prop_assert!(audit.holds);
        prop_assert!(audit.violations.is_empty());
    }

    #[test]
    fn sherman_morrison_tracks_dense_inverse(
        dim in 1usize..=20,
        xs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 20), 1..200),
        rewards in prop::collection::vec(0.0f64..1.0, 200),
    ) {
        let mut b = LinearBelief::new(dim, 1.0).unwrap();
        for (x, r) in xs.iter().zip(&rewards) {
            b.update(&ContextVector::new(x[..dim].to_vec()).unwrap(), *r).unwrap();
        }
        let dense = b.precision().clone().try_inverse().unwrap();
        prop_assert!((b.precision_inverse() - &dense).amax() < 1e-8);
        let mean = &dense * b.response();
        prop_assert!((b.mean() - mean).amax() < 1e-8);
    }

    #[test]
    fn reward_functions_match_closed_forms(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        // sin a · sin b = (cos(a − b) − cos(a + b)) / 2
        let sin = 0.5 * (0.5 * ((14.0 * x).cos() - (40.0 * x).cos()) + 1.0);
        prop_assert!((RewardFn::SinProduct.eval(&[x]) - sin).abs() < 1e-12);
        let gauss = 0.5 * ((-20.0 * (x - 0.1) * (x - 0.1)).exp() + (-1.25 * (x - 0.9) * (x - 0.9)).exp());
        prop_assert!((RewardFn::GaussianMix1d.eval(&[x]) - gauss).abs() < 1e-12);
        let bump = |c: f64, v: f64| (-100.0 * (v - c) * (v - c)).exp();
        let b2 = 0.5 * bump(0.2, x) + 0.2 * bump(0.7, x) + 0.2 * bump(0.7, y);
        prop_assert!((RewardFn::Bump2d.eval(&[x, y]) - b2).abs() < 1e-12);
    }

    #[test]
    fn summaries_are_order_invariant(mut values in prop::collection::vec(-1e3f64..1e3, 2..60), seed in any::<u64>()) {
        let before = mean_std(&values);
        use rand::seq::SliceRandom;
        values.shuffle(&mut SimRng::seed_from_u64(seed));
        prop_assert_eq!(before, mean_std(&values));
    }
}
