//! CSV, JSON and SVG output of experiment results.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::ExperimentConfig;
use super::runner::{logged_rounds, BoundCurves, ExperimentResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::config(
                "format",
                format!("unknown format `{s}`; use csv, json or svg"),
            )),
        }
    }
}

pub const CSV_HEADER: [&str; 5] = ["experiment_id", "policy", "seed", "t", "cumulative_regret"];

/// Mean/std curves of one policy at the logged rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedSummary {
    pub policy: String,
    pub runs: usize,
    pub final_mean: f64,
    pub final_std: f64,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<Value>,
    pub t: Vec<u64>,
    pub summaries: Vec<ExportedSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundCurves>,
}

/// The JSON document: configuration plus per-variant summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub variants: Vec<VariantReport>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl ExperimentResult {
    pub fn logged_rounds(&self) -> Vec<u64> {
        logged_rounds(self.config.horizon, self.config.stride())
    }

    pub fn report(&self) -> ExperimentReport {
        let ts = self.logged_rounds();
        let pick = |curve: &[f64]| {
            ts.iter()
                .map(|&t| curve[t as usize - 1])
                .collect::<Vec<_>>()
        };
        let variants = self
            .variants
            .iter()
            .map(|v| VariantReport {
                id: v.id.clone(),
                sweep_value: v.sweep_value.clone(),
                t: ts.clone(),
                summaries: v
                    .summaries
                    .iter()
                    .map(|s| ExportedSummary {
                        policy: s.policy.clone(),
                        runs: s.summary.runs,
                        final_mean: s.summary.final_mean,
                        final_std: s.summary.final_std,
                        mean: pick(&s.summary.mean),
                        std: pick(&s.summary.std),
                    })
                    .collect(),
                bounds: v.bounds.clone(),
            })
            .collect();
        ExperimentReport {
            config: self.config.clone(),
            variants,
        }
    }

    /// One row per (variant, policy, seed, logged round), in that order.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        let ts = self.logged_rounds();
        let labels = self.policy_labels();
        for r in &self.runs {
            let id = &self.variants[r.variant].id;
            let seed = r.seed.to_string();
            for &t in &ts {
                let value = r.regret[t as usize - 1].to_string();
                w.write_record([
                    id.as_str(),
                    labels[r.policy].as_str(),
                    seed.as_str(),
                    &t.to_string(),
                    &value,
                ])
                .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }

    /// SVG plot of mean ± std cumulative regret for one variant.
    pub fn svg(&self, variant: usize) -> String {
        let report = self.report();
        render_svg(&report.variants[variant])
    }

    /// Writes the requested formats into `dir`; returns the written paths.
    pub fn export(&self, formats: &[Format], dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = file_stem(&self.config.name);
        let mut written = Vec::new();
        for f in formats {
            match f {
                Format::Csv => {
                    let p = dir.join(format!("{stem}.csv"));
                    self.write_csv(std::io::BufWriter::new(std::fs::File::create(&p)?))?;
                    written.push(p);
                }
                Format::Json => {
                    let p = dir.join(format!("{stem}.json"));
                    std::fs::write(&p, self.report().to_json()?)?;
                    written.push(p);
                }
                Format::Svg => {
                    let report = self.report();
                    for (i, v) in report.variants.iter().enumerate() {
                        let name = if report.variants.len() == 1 {
                            format!("{stem}.svg")
                        } else {
                            format!("{stem}-{i}.svg")
                        };
                        let p = dir.join(name);
                        std::fs::write(&p, render_svg(v))?;
                        written.push(p);
                    }
                }
            }
        }
        Ok(written)
    }
}

fn file_stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "experiment".into()
    } else {
        s
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Mean curves as polylines with a translucent ±1 std band per policy.
pub fn render_svg(v: &VariantReport) -> String {
    let (w, h) = (800.0, 500.0);
    let (left, right, top, bottom) = (70.0, 170.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let t_max = v.t.last().copied().unwrap_or(1).max(1) as f64;
    let y_max = v
        .summaries
        .iter()
        .flat_map(|s| s.mean.iter().zip(&s.std).map(|(m, d)| m + d))
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let x = |t: u64| left + pw * t as f64 / t_max;
    let y = |r: f64| top + ph * (1.0 - r.max(0.0) / y_max);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        escape(&v.id)
    );
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1"><line x1="{left}" y1="{}" x2="{}" y2="{}"/><line x1="{left}" y1="{top}" x2="{left}" y2="{}"/></g>"#,
        top + ph,
        left + pw,
        top + ph,
        top + ph
    );
    for i in 0..=4 {
        let frac = i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            left + pw * frac,
            top + ph + 18.0,
            (t_max * frac).round()
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{:.1}</text>"#,
            left - 6.0,
            top + ph * (1.0 - frac) + 4.0,
            y_max * frac
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">t</text>"#,
        left + pw / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">cumulative regret</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    for (i, s) in v.summaries.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let upper =
            v.t.iter()
                .zip(&s.mean)
                .zip(&s.std)
                .map(|((&t, m), d)| (x(t), y(m + d)));
        let lower: Vec<(f64, f64)> =
            v.t.iter()
                .zip(&s.mean)
                .zip(&s.std)
                .map(|((&t, m), d)| (x(t), y(m - d)))
                .collect();
        let band: Vec<String> = upper
            .chain(lower.into_iter().rev())
            .map(|(a, b)| format!("{a:.2},{b:.2}"))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon class="band" points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            band.join(" ")
        );
        let line: Vec<String> =
            v.t.iter()
                .zip(&s.mean)
                .map(|(&t, m)| format!("{:.2},{:.2}", x(t), y(*m)))
                .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="mean" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            line.join(" ")
        );
        let ly = top + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            w - right + 12.0,
            w - right + 32.0,
            w - right + 38.0,
            ly + 4.0,
            escape(&s.policy)
        );
    }
    out.push_str("</svg>\n");
    out
}
