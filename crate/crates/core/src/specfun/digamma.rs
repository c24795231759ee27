use crate::{Error, Result};

/// Arguments are lifted by recurrence to at least this value before the
/// asymptotic series is applied.
const ASYMPTOTIC_FROM: f64 = 12.0;

// B_{2k} / (2k) for k = 1..=8
const BERNOULLI_OVER_2K: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// ψ(z) for z > 0.
pub fn digamma(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::domain("digamma", z));
    }
    let mut x = z;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_FROM {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = BERNOULLI_OVER_2K
        .iter()
        .rev()
        .fold(0.0, |acc, &b| acc * inv2 + b)
        * inv2;
    Ok(shift + x.ln() - 0.5 / x - tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::EULER_GAMMA;
    use approx::assert_relative_eq;

    #[test]
    fn special_values() {
        assert_relative_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(
            digamma(0.5).unwrap(),
            -EULER_GAMMA - 2.0 * std::f64::consts::LN_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn integer_arguments_are_harmonic_numbers() {
        // ψ(n) = H_{n−1} − γ
        let mut h = 0.0;
        for n in 1..40 {
            assert_relative_eq!(
                digamma(n as f64).unwrap(),
                h - EULER_GAMMA,
                max_relative = 1e-13
            );
            h += 1.0 / n as f64;
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-2.5).is_err());
    }
}
