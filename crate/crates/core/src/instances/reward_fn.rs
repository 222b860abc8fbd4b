use serde::{Deserialize, Serialize};

/// Closed-form expected-reward landscapes over arm features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardFn {
    /// f(x) = ½(sin 13x · sin 27x + 1) on [0, 1].
    SinProduct,
    /// f(x) = ½(exp(−(0.1 − x)²/0.05) + exp(−(0.9 − x)²/0.8)) on [0, 1].
    GaussianMix1d,
    /// f(x₁, x₂) = ½e^{−100(0.2−x₁)²} + ⅕e^{−100(0.7−x₁)²} + ⅕e^{−100(0.7−x₂)²} on [0, 1]².
    Bump2d,
}

impl RewardFn {
    /// Dimension of the feature space the function is defined on.
    pub fn feature_dim(self) -> usize {
        match self {
            RewardFn::SinProduct | RewardFn::GaussianMix1d => 1,
            RewardFn::Bump2d => 2,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            RewardFn::SinProduct => 0.5 * ((13.0 * x[0]).sin() * (27.0 * x[0]).sin() + 1.0),
            RewardFn::GaussianMix1d => {
                let a = (-(0.1 - x[0]).powi(2) / 0.05).exp();
                let b = (-(0.9 - x[0]).powi(2) / 0.8).exp();
                0.5 * (a + b)
            }
            RewardFn::Bump2d => {
                0.5 * (-100.0 * (0.2 - x[0]).powi(2)).exp()
                    + 0.2 * (-100.0 * (0.7 - x[0]).powi(2)).exp()
                    + 0.2 * (-100.0 * (0.7 - x[1]).powi(2)).exp()
            }
        }
    }
}
