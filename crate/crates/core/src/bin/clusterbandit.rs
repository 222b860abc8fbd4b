//! Command-line front end: generate instances, run experiments, audit
//! instances and print bound curves.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use clustered_bandits::analysis::{
    audit_hierarchical_dominance, cluster_stats, hts_instance_bound, lai_robbins_lower,
    minimax_lower_reference, tsc_instance_bound, tsc_minimax_bound,
};
use clustered_bandits::harness::{
    describe, preset, run_experiment, ExperimentConfig, Format, Generated, InstanceSpec, SeedSpec,
    PRESET_NAMES,
};
use clustered_bandits::instances::verify_strong_dominance;
use clustered_bandits::{Error, Result};

/// `println!` that ignores a closed stdout (e.g. piping into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "clusterbandit",
    version,
    about = "Thompson sampling for bandits with clustered arms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and print it as JSON.
    Generate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment from a preset or a config file.
    Run(RunArgs),
    /// Check dominance assumptions and print cluster statistics.
    Audit {
        #[command(flatten)]
        source: Source,
    },
    /// Print bound curves for an instance.
    Bounds {
        #[command(flatten)]
        source: Source,
        /// Largest horizon to evaluate.
        #[arg(long, default_value_t = 3000)]
        horizon: usize,
        /// Number of evaluation points (log-spaced).
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// List the built-in experiment presets.
    ListPresets,
}

#[derive(Args)]
struct Source {
    /// A serialized instance (JSON).
    #[arg(long, conflicts_with_all = ["spec", "preset", "config"])]
    instance: Option<PathBuf>,
    /// An instance spec (JSON).
    #[arg(long, conflicts_with_all = ["preset", "config"])]
    spec: Option<PathBuf>,
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed used to generate from a spec.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sweep variant index for presets and configs.
    #[arg(long, default_value_t = 0)]
    variant: usize,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of seeds (overrides the config).
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; repeat for several.
    #[arg(long, value_parser = ["csv", "json", "svg"])]
    format: Vec<String>,
    /// Log every k-th round.
    #[arg(long)]
    stride: Option<usize>,
    /// Log every round regardless of the horizon.
    #[arg(long, conflicts_with = "stride")]
    full_resolution: bool,
    /// Compute bound curves.
    #[arg(long)]
    bounds: bool,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config {
        field: what.into(),
        message: format!("{}: {e}", path.display()),
    })
}

fn load_config(preset_name: Option<&str>, config: Option<&Path>) -> Result<ExperimentConfig> {
    match (preset_name, config) {
        (Some(name), _) => preset(name),
        (None, Some(path)) => ExperimentConfig::load(path),
        (None, None) => Err(Error::Config {
            field: "source".into(),
            message: "pass --preset NAME or --config PATH".into(),
        }),
    }
}

impl Source {
    fn generated(&self) -> Result<Generated> {
        if let Some(path) = &self.instance {
            let text = std::fs::read_to_string(path)?;
            if let Ok(g) = serde_json::from_str::<Generated>(&text) {
                return Ok(g);
            }
            let spec: InstanceSpec = serde_json::from_str::<serde_json::Value>(&text)
                .and_then(|v| serde_json::from_value(json!({"kind": "fixed", "instance": v})))
                .map_err(|e| Error::Config {
                    field: "instance".into(),
                    message: format!("{}: {e}", path.display()),
                })?;
            return spec.generate(self.seed);
        }
        if let Some(path) = &self.spec {
            let spec: InstanceSpec = read_json(path, "spec")?;
            return spec.generate(self.seed);
        }
        let config = load_config(self.preset.as_deref(), self.config.as_deref())?;
        let variants = config.variants()?;
        let v = variants.get(self.variant).ok_or_else(|| Error::Config {
            field: "variant".into(),
            message: format!(
                "index {} out of range (0..{})",
                self.variant,
                variants.len()
            ),
        })?;
        v.instance.generate(self.seed)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => say!("{text}"),
    }
    Ok(())
}

fn audit(g: &Generated) -> Result<serde_json::Value> {
    let Generated::Bandit { instance, aux_tree } = g else {
        return Err(Error::Config {
            field: "instance".into(),
            message: "audits apply to Bernoulli instances".into(),
        });
    };
    let mut report = serde_json::Map::new();
    let optimum = instance.optimum_audit();
    report.insert("optimum".into(), serde_json::to_value(optimum)?);
    if instance.clustering().is_some() {
        report.insert(
            "strong_dominance".into(),
            serde_json::to_value(verify_strong_dominance(instance)?)?,
        );
    }
    let tree_instance = match (instance.tree(), aux_tree) {
        (Some(_), _) => Some(instance.clone()),
        (None, Some(t)) => {
            Some(instance.with_structure(clustered_bandits::model::ArmStructure::Tree(t.clone()))?)
        }
        _ => None,
    };
    if let Some(ti) = &tree_instance {
        report.insert(
            "hierarchical_dominance".into(),
            serde_json::to_value(audit_hierarchical_dominance(ti)?)?,
        );
        if instance.clustering().is_none() {
            report.insert(
                "cluster_stats".into(),
                serde_json::to_value(cluster_stats(ti)?)?,
            );
        }
    }
    Ok(serde_json::Value::Object(report))
}

fn bounds(g: &Generated, horizon: usize, points: usize, eps: f64) -> Result<serde_json::Value> {
    let Generated::Bandit { instance, aux_tree } = g else {
        return Err(Error::Config {
            field: "instance".into(),
            message: "bounds apply to Bernoulli instances".into(),
        });
    };
    let points = points.max(2);
    let hi = (horizon.max(2) as f64).ln();
    let lo = 2f64.ln();
    let mut ts: Vec<f64> = (0..points)
        .map(|i| {
            (lo + (hi - lo) * i as f64 / (points - 1) as f64)
                .exp()
                .round()
        })
        .collect();
    ts.dedup();
    let tree_instance = match (instance.tree(), aux_tree) {
        (Some(_), _) => Some(instance.clone()),
        (None, Some(t)) => {
            Some(instance.with_structure(clustered_bandits::model::ArmStructure::Tree(t.clone()))?)
        }
        _ => None,
    };
    let stats = cluster_stats(instance).ok();
    let mut rows = Vec::new();
    for &t in &ts {
        let mut row = serde_json::Map::new();
        row.insert("t".into(), json!(t as u64));
        if let Some(s) = &stats {
            row.insert(
                "tsc_instance".into(),
                serde_json::to_value(tsc_instance_bound(s, t, eps)?)?,
            );
            row.insert(
                "tsc_minimax".into(),
                serde_json::to_value(tsc_minimax_bound(s, t)?)?,
            );
            row.insert(
                "minimax_lower_reference".into(),
                json!(minimax_lower_reference(s, t)?),
            );
            row.insert(
                "lai_robbins_lower".into(),
                serde_json::to_value(lai_robbins_lower(s, t)?)?,
            );
        }
        if let Some(ti) = &tree_instance {
            row.insert(
                "hts_instance".into(),
                serde_json::to_value(hts_instance_bound(ti, t, eps)?)?,
            );
        }
        rows.push(serde_json::Value::Object(row));
    }
    Ok(json!({
        "note": "upper bounds report the leading ln T term only; minimax curves use a unit constant",
        "eps": eps,
        "cluster_stats": stats,
        "rows": rows,
    }))
}

fn run(args: &RunArgs) -> Result<()> {
    let mut config = load_config(args.preset.as_deref(), args.config.as_deref())?;
    if args.seeds.is_some() || args.base_seed.is_some() {
        let current = config.seeds.seeds();
        let base = args.base_seed.unwrap_or_else(|| match &config.seeds {
            SeedSpec::Range { base, .. } => *base,
            SeedSpec::List(v) => v.first().copied().unwrap_or(0),
        });
        config.seeds = SeedSpec::Range {
            base,
            count: args.seeds.unwrap_or(current.len()),
        };
    }
    if let Some(h) = args.horizon {
        config.horizon = h;
    }
    if args.full_resolution {
        config.stride = Some(1);
    } else if let Some(s) = args.stride {
        config.stride = Some(s);
    }
    if args.bounds {
        config.bounds = true;
    }
    if let Some(out) = &args.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    let result = run_experiment(&config)?;
    for v in &result.variants {
        say!("{}", v.id);
        for s in &v.summaries {
            say!(
                "  {:<16} final regret {:>10.2} ± {:<8.2} ({} runs)",
                s.policy,
                s.summary.final_mean,
                s.summary.final_std,
                s.summary.runs
            );
        }
    }
    let mut formats: Vec<Format> = args
        .format
        .iter()
        .map(|f| f.parse())
        .collect::<Result<_>>()?;
    if formats.is_empty() {
        formats.push(Format::Csv);
    }
    if let Some(dir) = &config.output {
        for p in result.export(&formats, dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate { source, out } => source
            .generated()
            .and_then(|g| Ok(serde_json::to_string_pretty(&g)?))
            .and_then(|text| emit(&text, out.as_deref())),
        Command::Run(args) => run(args),
        Command::Audit { source } => source
            .generated()
            .and_then(|g| audit(&g))
            .and_then(|v| Ok(say!("{}", serde_json::to_string_pretty(&v)?))),
        Command::Bounds {
            source,
            horizon,
            points,
            eps,
        } => source
            .generated()
            .and_then(|g| bounds(&g, *horizon, *points, *eps))
            .and_then(|v| Ok(say!("{}", serde_json::to_string_pretty(&v)?))),
        Command::ListPresets => {
            for name in PRESET_NAMES {
                say!("{name:<20} {}", describe(name).unwrap_or(""));
            }
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
