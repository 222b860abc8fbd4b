//! Instance generators, clustering routines and instance audits.

mod agglomerative;
mod audit;
mod contextual;
mod generators;
mod kmeans;
mod reward_fn;

pub use agglomerative::{agglomerate, gen_agglomerative_tree, Linkage, Merge};
pub use audit::{
    verify_strong_dominance, ArmPairViolation, DominanceReport, MAX_LISTED_VIOLATIONS,
};
pub use contextual::{
    gen_context, gen_contextual, ContextDistribution, ContextualInstance, ContextualSpec,
};
pub use generators::{
    draw_features, gen_feature_instance, gen_kmeans_instance, gen_kmeans_tree,
    gen_sorted_binary_tree, gen_strong_dominance, gen_uniform_instance, random_clustering,
    sorted_binary_tree, FeatureInstance, StrongDominanceSpec, BEST_MEAN, SUBOPTIMAL_WIDTH,
};
pub use kmeans::{kmeans, KMeans, MAX_ITERATIONS};
pub use reward_fn::RewardFn;
