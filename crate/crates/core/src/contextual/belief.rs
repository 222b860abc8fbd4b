use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of rank-one inverse updates between full re-inversions.
pub const RESOLVE_PERIOD: u64 = 1000;

/// A context vector x in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ContextVector(DVector<f64>);

impl ContextVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("context vector has dimension zero"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("context vector has non-finite entries"));
        }
        Ok(Self(DVector::from_vec(values)))
    }

    /// The i-th standard basis vector of R^dim.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        Self(v)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ContextVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ContextVector> for Vec<f64> {
    fn from(x: ContextVector) -> Self {
        x.0.as_slice().to_vec()
    }
}

/// Gaussian posterior of a linear reward model: precision `B`, response
/// `f`, mean `mu = B⁻¹ f`, and sampling scale `v`.
///
/// `B⁻¹` is kept up to date with Sherman–Morrison rank-one updates and
/// recomputed from scratch every [`RESOLVE_PERIOD`] updates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBelief {
    precision: DMatrix<f64>,
    precision_inv: DMatrix<f64>,
    response: DVector<f64>,
    mean: DVector<f64>,
    scale: f64,
    updates: u64,
}

impl LinearBelief {
    /// `B = I`, `f = 0`, `mu = 0`.
    pub fn new(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("linear belief needs dimension >= 1"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!(
                "sampling scale v must be positive, got {scale}"
            )));
        }
        Ok(Self {
            precision: DMatrix::identity(dim, dim),
            precision_inv: DMatrix::identity(dim, dim),
            response: DVector::zeros(dim),
            mean: DVector::zeros(dim),
            scale,
            updates: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }

    pub fn precision_inverse(&self) -> &DMatrix<f64> {
        &self.precision_inv
    }

    pub fn response(&self) -> &DVector<f64> {
        &self.response
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    fn check_dim(&self, x: &ContextVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::domain(format!(
                "context has dimension {}, belief expects {}",
                x.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Predicted reward mu·x.
    pub fn predicted(&self, x: &ContextVector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.mean.dot(x.as_vector()))
    }

    /// xᵀ B⁻¹ x.
    pub fn confidence_width(&self, x: &ContextVector) -> Result<f64> {
        self.check_dim(x)?;
        let d = self.dim();
        let xs = x.as_slice();
        let inv = self.precision_inv.as_slice();
        let mut acc = 0.0;
        for j in 0..d {
            let col = &inv[j * d..(j + 1) * d];
            let mut inner = 0.0;
            for i in 0..d {
                inner += col[i] * xs[i];
            }
            acc += xs[j] * inner;
        }
        Ok(acc.max(0.0))
    }

    /// A draw from N(mu·x, v · xᵀ B⁻¹ x).
    pub fn sample<R: Rng + ?Sized>(&self, x: &ContextVector, rng: &mut R) -> Result<f64> {
        let mean = self.predicted(x)?;
        let var = self.scale * self.confidence_width(x)?;
        let z: f64 = rng.sample(StandardNormal);
        Ok(mean + var.sqrt() * z)
    }

    /// LinUCB index mu·x + alpha · sqrt(xᵀ B⁻¹ x).
    pub fn ucb_index(&self, x: &ContextVector, alpha: f64) -> Result<f64> {
        Ok(self.predicted(x)? + alpha * self.confidence_width(x)?.sqrt())
    }

    /// B += x xᵀ, f += r x, mu = B⁻¹ f.
    pub fn update(&mut self, x: &ContextVector, reward: f64) -> Result<()> {
        self.check_dim(x)?;
        if !reward.is_finite() {
            return Err(Error::domain(format!("non-finite reward {reward}")));
        }
        let xv = x.as_vector();
        self.precision.ger(1.0, xv, xv, 1.0);
        self.response.axpy(reward, xv, 1.0);
        self.updates += 1;
        if self.updates % RESOLVE_PERIOD == 0 {
            self.resolve();
        } else {
            // Sherman–Morrison for symmetric B: (B + xxᵀ)⁻¹ = B⁻¹ − (B⁻¹x)(B⁻¹x)ᵀ / (1 + xᵀB⁻¹x).
            let bx = &self.precision_inv * xv;
            let denom = 1.0 + xv.dot(&bx);
            self.precision_inv.ger(-1.0 / denom, &bx, &bx, 1.0);
        }
        self.mean = &self.precision_inv * &self.response;
        Ok(())
    }

    /// Recomputes `B⁻¹` from `B` via Cholesky.
    pub fn resolve(&mut self) {
        self.precision_inv = self
            .precision
            .clone()
            .cholesky()
            .expect("B = I + sum of outer products is positive definite")
            .inverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStreams;

    #[test]
    fn fresh_belief_samples_standard_normal() {
        let b = LinearBelief::new(3, 1.0).unwrap();
        let x = ContextVector::basis(3, 0);
        let mut rng = SeedStreams::new(1).policy();
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| b.sample(&x, &mut rng).unwrap()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02);
        assert!((var - 1.0).abs() < 0.05);
    }

    #[test]
    fn zero_context_is_deterministic() {
        let b = LinearBelief::new(4, 1.0).unwrap();
        let mut rng = SeedStreams::new(2).policy();
        for _ in 0..10 {
            assert_eq!(b.sample(&ContextVector::zeros(4), &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn repeated_observations_match_ridge_solution() {
        // Closed form: B = 1 + n on the e1 axis, f = n, mean = n / (1 + n).
        let mut b = LinearBelief::new(2, 1.0).unwrap();
        let x = ContextVector::basis(2, 0);
        let n = 10_000;
        for _ in 0..n {
            b.update(&x, 1.0).unwrap();
        }
        let expected = n as f64 / (1.0 + n as f64);
        assert!((b.mean()[0] - expected).abs() < 1e-10);
        let mut rng = SeedStreams::new(3).policy();
        let m = (0..10_000)
            .map(|_| b.sample(&x, &mut rng).unwrap())
            .sum::<f64>()
            / 10_000.0;
        assert!((m - expected).abs() < 0.01);
    }

    #[test]
    fn single_update_by_hand() {
        let mut b = LinearBelief::new(3, 1.0).unwrap();
        b.update(&ContextVector::basis(3, 0), 1.0).unwrap();
        assert_eq!(
            b.precision(),
            &DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, 1.0]))
        );
        assert_eq!(b.response().as_slice(), &[1.0, 0.0, 0.0]);
        assert!((b.mean()[0] - 0.5).abs() < 1e-15);

        let mut z = LinearBelief::new(3, 1.0).unwrap();
        z.update(&ContextVector::basis(3, 1), 0.0).unwrap();
        assert_eq!(z.response().as_slice(), &[0.0, 0.0, 0.0]);
        assert_eq!(z.precision()[(1, 1)], 2.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LinearBelief::new(0, 1.0).is_err());
        assert!(LinearBelief::new(2, 0.0).is_err());
        assert!(ContextVector::new(vec![]).is_err());
        assert!(ContextVector::new(vec![f64::NAN]).is_err());
        let mut b = LinearBelief::new(2, 1.0).unwrap();
        let x3 = ContextVector::zeros(3);
        assert!(b.sample(&x3, &mut SeedStreams::new(0).policy()).is_err());
        assert!(b.update(&ContextVector::zeros(2), f64::INFINITY).is_err());
    }
}
