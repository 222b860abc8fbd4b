//! Clustered linear contextual instances.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::generators::random_clustering;
use crate::contextual::ContextVector;
use crate::error::{Error, Result};
use crate::model::{ArmId, DisjointClustering};

/// Distribution of the per-round context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextDistribution {
    /// x ~ U([0,1]^d).
    #[default]
    Uniform,
    /// x ~ N(0, I_d).
    Gaussian,
}

fn default_dim() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualSpec {
    pub n_arms: usize,
    pub n_clusters: usize,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Scale of each arm's perturbation around its cluster centroid.
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default)]
    pub context: ContextDistribution,
}

impl ContextualSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::domain("context dimension must be at least 1"));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain(format!(
                "epsilon {} must be non-negative",
                self.epsilon
            )));
        }
        if self.n_clusters == 0 || self.n_clusters > self.n_arms {
            return Err(Error::domain(format!(
                "cannot split {} arms into {} clusters",
                self.n_arms, self.n_clusters
            )));
        }
        Ok(())
    }
}

/// Arms with coefficient vectors θ_j; the reward of arm j under context x
/// is uniform between 0 and 2θ_j·x, so its mean is θ_j·x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualInstance {
    pub thetas: Vec<Vec<f64>>,
    pub clustering: DisjointClustering,
    #[serde(default)]
    pub context: ContextDistribution,
}

impl ContextualInstance {
    pub fn new(
        thetas: Vec<Vec<f64>>,
        clustering: DisjointClustering,
        context: ContextDistribution,
    ) -> Result<Self> {
        let dim = thetas.first().map_or(0, Vec::len);
        if dim == 0 || thetas.iter().any(|t| t.len() != dim) {
            return Err(Error::domain(
                "coefficient vectors must share a positive dimension",
            ));
        }
        if clustering.n_arms() != thetas.len() {
            return Err(Error::domain(
                "clustering and coefficients disagree on the arm count",
            ));
        }
        Ok(Self {
            thetas,
            clustering,
            context,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.thetas.len()
    }

    pub fn dim(&self) -> usize {
        self.thetas[0].len()
    }

    pub fn expected_reward(&self, arm: ArmId, x: &ContextVector) -> f64 {
        self.thetas[arm]
            .iter()
            .zip(x.as_slice())
            .map(|(t, v)| t * v)
            .sum()
    }

    pub fn best_expected(&self, x: &ContextVector) -> f64 {
        (0..self.n_arms())
            .map(|a| self.expected_reward(a, x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn regret_of(&self, arm: ArmId, x: &ContextVector) -> f64 {
        self.best_expected(x) - self.expected_reward(arm, x)
    }

    pub fn draw_context<R: Rng + ?Sized>(&self, rng: &mut R) -> ContextVector {
        gen_context_from(self.dim(), self.context, rng)
    }

    /// Uniform on the interval between 0 and 2θ·x (a point mass at 0 when θ·x = 0).
    pub fn draw_reward<R: Rng + ?Sized>(
        &self,
        arm: ArmId,
        x: &ContextVector,
        rng: &mut R,
    ) -> Result<f64> {
        if arm >= self.n_arms() {
            return Err(Error::contract(format!("arm {arm} out of range")));
        }
        if x.dim() != self.dim() {
            return Err(Error::domain(format!(
                "context dimension {} != {}",
                x.dim(),
                self.dim()
            )));
        }
        let m = self.expected_reward(arm, x);
        Ok(2.0 * m * rng.gen::<f64>())
    }
}

fn gen_context_from<R: Rng + ?Sized>(
    dim: usize,
    dist: ContextDistribution,
    rng: &mut R,
) -> ContextVector {
    let values = match dist {
        ContextDistribution::Uniform => (0..dim).map(|_| rng.gen::<f64>()).collect(),
        ContextDistribution::Gaussian => (0..dim).map(|_| rng.sample(StandardNormal)).collect(),
    };
    ContextVector::new(values).expect("dim >= 1 and finite draws")
}

/// x ~ U([0,1]^dim).
pub fn gen_context<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ContextVector> {
    if dim == 0 {
        return Err(Error::domain("context dimension must be at least 1"));
    }
    Ok(gen_context_from(dim, ContextDistribution::Uniform, rng))
}

/// Arms assigned to clusters at random; centroids N(0, I_d) and
/// θ_j = centroid + ε·N(0, I_d).
pub fn gen_contextual<R: Rng + ?Sized>(
    spec: &ContextualSpec,
    rng: &mut R,
) -> Result<ContextualInstance> {
    spec.validate()?;
    let clustering = random_clustering(spec.n_arms, spec.n_clusters, rng)?;
    let normal =
        |rng: &mut R| -> Vec<f64> { (0..spec.dim).map(|_| rng.sample(StandardNormal)).collect() };
    let centroids: Vec<Vec<f64>> = (0..spec.n_clusters).map(|_| normal(rng)).collect();
    let thetas = (0..spec.n_arms)
        .map(|a| {
            let v = normal(rng);
            centroids[clustering.cluster_of(a)]
                .iter()
                .zip(v)
                .map(|(c, e)| c + spec.epsilon * e)
                .collect()
        })
        .collect();
    ContextualInstance::new(thetas, clustering, spec.context)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStreams;

    fn spec(eps: f64) -> ContextualSpec {
        ContextualSpec {
            n_arms: 40,
            n_clusters: 4,
            dim: 5,
            epsilon: eps,
            horizon: None,
            context: ContextDistribution::Uniform,
        }
    }

    #[test]
    fn zero_epsilon_shares_theta_within_clusters() {
        let inst = gen_contextual(&spec(0.0), &mut SeedStreams::new(1).instance()).unwrap();
        for members in inst.clustering.clusters() {
            assert!(members
                .iter()
                .all(|&a| inst.thetas[a] == inst.thetas[members[0]]));
        }
        let inst = gen_contextual(&spec(0.5), &mut SeedStreams::new(1).instance()).unwrap();
        let m = inst.clustering.clusters().find(|m| m.len() > 1).unwrap();
        assert_ne!(inst.thetas[m[0]], inst.thetas[m[1]]);
    }

    #[test]
    fn reward_mean_is_linear_and_signed() {
        let c = DisjointClustering::single(2);
        let inst = ContextualInstance::new(
            vec![vec![-1.0, 0.0], vec![0.3, 0.4]],
            c,
            ContextDistribution::Uniform,
        )
        .unwrap();
        let x = ContextVector::basis(2, 0);
        let mut rng = SeedStreams::new(2).environment();
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| inst.draw_reward(0, &x, &mut rng).unwrap())
            .collect();
        assert!(draws.iter().all(|&r| (-2.0..=0.0).contains(&r)));
        let mean = draws.iter().sum::<f64>() / n as f64;
        assert!((mean + 1.0).abs() < 0.02, "{mean}");
        let y = ContextVector::new(vec![1.0, 1.0]).unwrap();
        let mean: f64 = (0..n)
            .map(|_| inst.draw_reward(1, &y, &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.7).abs() < 0.01);
        assert_eq!(
            inst.draw_reward(1, &ContextVector::zeros(2), &mut rng)
                .unwrap(),
            0.0
        );
        assert!((inst.regret_of(0, &y) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn uniform_contexts() {
        let mut rng = SeedStreams::new(3).context();
        let n = 100_000;
        let mut sums = [0.0; 3];
        for _ in 0..n {
            let x = gen_context(3, &mut rng).unwrap();
            assert!(x.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
            for (s, v) in sums.iter_mut().zip(x.as_slice()) {
                *s += v;
            }
        }
        assert!(sums.iter().all(|s| (s / n as f64 - 0.5).abs() < 0.01));
        let a = gen_context(4, &mut SeedStreams::new(4).context()).unwrap();
        let b = gen_context(4, &mut SeedStreams::new(4).context()).unwrap();
        assert_eq!(a, b);
        assert!(gen_context(0, &mut rng).is_err());
    }

    #[test]
    fn spec_round_trips_and_defaults() {
        let s: ContextualSpec =
            serde_json::from_str(r#"{"n_arms":10,"n_clusters":2,"epsilon":0.1}"#).unwrap();
        assert_eq!(s.dim, 5);
        assert_eq!(s.context, ContextDistribution::Uniform);
        let back: ContextualSpec =
            serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
        let mut bad = s.clone();
        bad.epsilon = -1.0;
        assert!(gen_contextual(&bad, &mut SeedStreams::new(0).instance()).is_err());
    }
}
