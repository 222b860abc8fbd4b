//! Beta posteriors over Bernoulli means.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Success/failure pseudo-counts of a Beta(s, f) belief.
///
/// Counts are real-valued so that rewards anywhere in `[0, 1]` can be
/// absorbed; with binary rewards they stay integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaBelief {
    s: f64,
    f: f64,
}

impl Default for BetaBelief {
    /// The uniform prior Beta(1, 1).
    fn default() -> Self {
        Self { s: 1.0, f: 1.0 }
    }
}

impl BetaBelief {
    pub fn new(s: f64, f: f64) -> Result<Self> {
        if !(s >= 1.0 && f >= 1.0 && s.is_finite() && f.is_finite()) {
            return Err(Error::domain(format!(
                "Beta pseudo-counts must be finite and >= 1, got ({s}, {f})"
            )));
        }
        Ok(Self { s, f })
    }

    pub fn successes(&self) -> f64 {
        self.s
    }

    pub fn failures(&self) -> f64 {
        self.f
    }

    /// Posterior mean s / (s + f).
    pub fn mean(&self) -> f64 {
        self.s / (self.s + self.f)
    }

    /// Number of rewards absorbed since the Beta(1, 1) prior.
    pub fn observations(&self) -> f64 {
        self.s + self.f - 2.0
    }

    /// Absorbs one reward: s += r, f += 1 − r.
    pub fn update(&mut self, reward: f64) -> Result<()> {
        *self = self.updated(reward)?;
        Ok(())
    }

    pub fn updated(&self, reward: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::domain(format!("reward {reward} outside [0, 1]")));
        }
        Ok(Self {
            s: self.s + reward,
            f: self.f + (1.0 - reward),
        })
    }

    /// One draw from Beta(s, f) as the ratio X / (X + Y) of Gamma(s) and Gamma(f) draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = Gamma::new(self.s, 1.0).expect("shape >= 1").sample(rng);
        let y = Gamma::new(self.f, 1.0).expect("shape >= 1").sample(rng);
        x / (x + y)
    }
}
