use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SimulationTrace;

/// Pointwise mean and sample standard deviation of regret curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSummary {
    pub runs: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub final_mean: f64,
    pub final_std: f64,
}

/// Mean and sample std (n − 1 denominator; 0 for a single value). Values
/// are summed in sorted order so the result does not depend on input order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    sq.sort_by(f64::total_cmp);
    (mean, (sq.iter().sum::<f64>() / (n - 1.0)).sqrt())
}

/// sqrt((s1² + s2²) / 2).
pub fn pooled_std(s1: f64, s2: f64) -> f64 {
    ((s1 * s1 + s2 * s2) / 2.0).sqrt()
}

pub fn aggregate_curves(curves: &[Vec<f64>]) -> Result<RegretSummary> {
    let first = curves
        .first()
        .ok_or_else(|| Error::domain("nothing to aggregate"))?;
    let len = first.len();
    if let Some(bad) = curves.iter().find(|c| c.len() != len) {
        return Err(Error::domain(format!(
            "curves have mismatched lengths {len} and {}",
            bad.len()
        )));
    }
    let mut mean = Vec::with_capacity(len);
    let mut std = Vec::with_capacity(len);
    let mut column = vec![0.0; curves.len()];
    for t in 0..len {
        for (slot, c) in column.iter_mut().zip(curves) {
            *slot = c[t];
        }
        let (m, s) = mean_std(&column);
        mean.push(m);
        std.push(s);
    }
    Ok(RegretSummary {
        runs: curves.len(),
        final_mean: mean.last().copied().unwrap_or(0.0),
        final_std: std.last().copied().unwrap_or(0.0),
        mean,
        std,
    })
}

/// Aggregates the cumulative-regret curves of several seeded runs.
pub fn aggregate_traces(traces: &[SimulationTrace]) -> Result<RegretSummary> {
    let curves: Vec<Vec<f64>> = traces.iter().map(SimulationTrace::regret_curve).collect();
    aggregate_curves(&curves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_curve_has_zero_std() {
        let s = aggregate_curves(&[vec![0.0, 1.0, 3.0]]).unwrap();
        assert_eq!(s.std, vec![0.0; 3]);
        assert_eq!(s.mean, vec![0.0, 1.0, 3.0]);
    }

    #[test]
    fn two_constant_curves() {
        let s = aggregate_curves(&[vec![0.0; 4], vec![2.0; 4]]).unwrap();
        assert!(s.mean.iter().all(|&m| m == 1.0));
        assert!(s.std.iter().all(|&v| (v - 2f64.sqrt()).abs() < 1e-15));
        assert_eq!(s.final_mean, 1.0);
    }

    #[test]
    fn order_does_not_matter() {
        let curves = vec![
            vec![0.1, 0.7],
            vec![0.3, 1.9],
            vec![0.2, 0.05],
            vec![1e-9, 3.3],
        ];
        let a = aggregate_curves(&curves).unwrap();
        let mut rev = curves.clone();
        rev.reverse();
        rev.swap(0, 2);
        assert_eq!(a, aggregate_curves(&rev).unwrap());
    }

    #[test]
    fn errors_and_pooling() {
        assert!(aggregate_curves(&[]).is_err());
        assert!(aggregate_curves(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!((pooled_std(3.0, 4.0) - 12.5f64.sqrt()).abs() < 1e-15);
    }
}
