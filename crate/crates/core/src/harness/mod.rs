//! Experiment configuration, parallel runs, presets and export.

mod config;
mod export;
mod factory;
mod presets;
mod runner;

pub use config::{
    default_stride, ExperimentConfig, Generated, InstanceSpec, PolicySpec, SeedSpec, Sweep, Variant,
};
pub use export::{
    render_svg, ExperimentReport, ExportedSummary, Format, VariantReport, CSV_HEADER,
};
pub use factory::{build_policy, policy_kind, BuiltPolicy, POLICY_KEYS};
pub use presets::{describe, preset, PRESET_NAMES};
pub use runner::{
    bound_curves, logged_rounds, run_experiment, BoundCurve, BoundCurves, ExperimentResult,
    PolicySummary, RunRecord, VariantResult, BOUND_CAVEAT,
};
