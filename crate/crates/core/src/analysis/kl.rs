use crate::error::{Error, Result};

fn xlogy_ratio(x: f64, a: f64, b: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (a / b).ln()
    }
}

/// KL divergence D(p, q) between Bernoulli(p) and Bernoulli(q).
///
/// Returns `f64::INFINITY` when `q` is 0 or 1 and `p != q`.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!(
            "KL arguments must lie in [0, 1], got ({p}, {q})"
        )));
    }
    if p == q {
        return Ok(0.0);
    }
    if q == 0.0 || q == 1.0 {
        return Ok(f64::INFINITY);
    }
    let d = xlogy_ratio(p, p, q) + xlogy_ratio(1.0 - p, 1.0 - p, 1.0 - q);
    Ok(d.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(kl_bernoulli(0.5, 0.5).unwrap(), 0.0);
        assert!((kl_bernoulli(0.6, 0.5).unwrap() - 0.020135513550688863).abs() < 1e-12);
        assert!((kl_bernoulli(0.0, 0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((kl_bernoulli(1.0, 0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn boundary_cases() {
        assert_eq!(kl_bernoulli(0.3, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_bernoulli(0.3, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_bernoulli(1.0, 1.0).unwrap(), 0.0);
        assert!(kl_bernoulli(-0.1, 0.5).is_err());
        assert!(kl_bernoulli(0.5, f64::NAN).is_err());
    }

    #[test]
    fn asymmetric() {
        let a = kl_bernoulli(0.1, 0.5).unwrap();
        let b = kl_bernoulli(0.5, 0.1).unwrap();
        assert!((a - b).abs() > 1e-3);
    }
}
