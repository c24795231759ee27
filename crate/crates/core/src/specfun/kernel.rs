//! The oscillatory kernels Δ(v) and φ(v), v = ω|r − r′|.
//!
//! Both are of the form P(v) + C(v) cos 2v + S(v) sin 2v with polynomial
//! coefficients, and both vanish at the origin far faster than their
//! individual terms (Δ ∝ v⁶, φ ∝ v⁸). Below a switchover argument the
//! functions are evaluated from their Taylor series, whose coefficients are
//! generated at first use from the polynomial coefficients themselves.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Arguments below this use the Taylor series of φ, above it the direct form.
///
/// At v = 1 the first omitted series term (order v³²) is ~1e-20, well under
/// 1e-13 · (4/9) v⁸, and the direct form loses under two digits.
pub const PHI_SERIES_SWITCHOVER: f64 = 1.0;

/// Highest power kept in the φ and Δ series.
pub const SERIES_MAX_POWER: u32 = 30;

const DELTA_SERIES_SWITCHOVER: f64 = 1.0;

/// A dimensionless kernel evaluation with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub v: f64,
    pub value: f64,
    pub abs_err_bound: f64,
}

/// `plain(v) + cos2(v) cos 2v + sin2(v) sin 2v`, coefficients by power.
struct TrigPolynomial {
    plain: &'static [f64],
    cos2: &'static [f64],
    sin2: &'static [f64],
}

const PHI: TrigPolynomial = TrigPolynomial {
    plain: &[-9.0, 0.0, -2.0, 0.0, -1.0],
    cos2: &[9.0, 0.0, -16.0, 0.0, 3.0],
    sin2: &[0.0, 18.0, 0.0, -8.0, 0.0, 1.0],
};

// (3 − 2v² + v⁴) sin²v − v(3 − v²) sin 2v + 3v² cos²v, rewritten with
// sin²v = (1 − cos 2v)/2 and cos²v = (1 + cos 2v)/2.
const DELTA: TrigPolynomial = TrigPolynomial {
    plain: &[1.5, 0.0, 0.5, 0.0, 0.5],
    cos2: &[-1.5, 0.0, 2.5, 0.0, -0.5],
    sin2: &[0.0, -3.0, 0.0, 1.0],
};

fn poly(coeffs: &[f64], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * v + c)
}

fn poly_abs(coeffs: &[f64], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * v + c.abs())
}

impl TrigPolynomial {
    fn direct(&self, v: f64) -> f64 {
        let (s, c) = (2.0 * v).sin_cos();
        poly(self.plain, v) + poly(self.cos2, v) * c + poly(self.sin2, v) * s
    }

    /// Sum of the magnitudes of the three pieces; sets the rounding scale.
    fn magnitude(&self, v: f64) -> f64 {
        poly_abs(self.plain, v) + poly_abs(self.cos2, v) + poly_abs(self.sin2, v)
    }

    /// Taylor coefficients up to `max_power`, keeping only nonzero ones.
    ///
    /// A coefficient whose value is within rounding of the terms that built
    /// it is an exact cancellation and is stored as zero.
    fn taylor(&self, max_power: u32) -> Vec<(u32, f64)> {
        // 2^k / k!
        let mut scaled = vec![1.0_f64; max_power as usize + 1];
        for k in 1..scaled.len() {
            scaled[k] = scaled[k - 1] * 2.0 / k as f64;
        }
        let cos_coeff = |k: i64| -> f64 {
            if k < 0 || k % 2 != 0 {
                0.0
            } else if (k / 2) % 2 == 0 {
                scaled[k as usize]
            } else {
                -scaled[k as usize]
            }
        };
        let sin_coeff = |k: i64| -> f64 {
            if k < 0 || k % 2 == 0 {
                0.0
            } else if ((k - 1) / 2) % 2 == 0 {
                scaled[k as usize]
            } else {
                -scaled[k as usize]
            }
        };

        let mut out = Vec::new();
        for m in 0..=max_power as i64 {
            let mut terms = Vec::new();
            if let Some(&c) = self.plain.get(m as usize) {
                terms.push(c);
            }
            for (j, &c) in self.cos2.iter().enumerate() {
                terms.push(c * cos_coeff(m - j as i64));
            }
            for (j, &c) in self.sin2.iter().enumerate() {
                terms.push(c * sin_coeff(m - j as i64));
            }
            let sum: f64 = terms.iter().sum();
            let scale = terms.iter().fold(0.0_f64, |a, t| a.max(t.abs()));
            if sum.abs() > 64.0 * f64::EPSILON * scale {
                out.push((m as u32, sum));
            }
        }
        out
    }
}

/// Even-power Taylor series Σ c_p v^p starting at `leading`.
struct Series {
    leading: u32,
    /// Coefficients of v^leading, v^(leading+2), ...
    coeffs: Vec<f64>,
    /// Coefficient of the first power that was dropped.
    next: f64,
}

impl Series {
    fn build(tp: &TrigPolynomial) -> Series {
        let all = tp.taylor(SERIES_MAX_POWER + 2);
        let leading = all
            .first()
            .map(|&(p, _)| p)
            .expect("kernel series is empty");
        let mut coeffs = Vec::new();
        let mut next = 0.0;
        let mut p = leading;
        for &(power, c) in &all {
            assert!(power % 2 == 0, "odd Taylor coefficient in an even kernel");
            while p < power {
                if p <= SERIES_MAX_POWER {
                    coeffs.push(0.0);
                }
                p += 2;
            }
            if power <= SERIES_MAX_POWER {
                coeffs.push(c);
            } else {
                next = c;
            }
            p = power + 2;
        }
        Series {
            leading,
            coeffs,
            next,
        }
    }

    /// Σ c_p v^(p − shift) for shift ≤ leading, skipping the first `skip` terms.
    fn eval_shifted(&self, v: f64, shift: u32, skip: usize) -> f64 {
        let w = v * v;
        let s = self.coeffs[skip..]
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * w + c);
        s * v.powi((self.leading + 2 * skip as u32 - shift) as i32)
    }

    fn abs_sum(&self, v: f64) -> f64 {
        let w = v * v;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * w + c.abs())
            * v.powi(self.leading as i32)
    }

    fn truncation(&self, v: f64) -> f64 {
        let last = self.leading + 2 * self.coeffs.len() as u32;
        self.next.abs() * v.powi(last as i32)
    }
}

fn phi_series() -> &'static Series {
    static S: OnceLock<Series> = OnceLock::new();
    S.get_or_init(|| Series::build(&PHI))
}

fn delta_series() -> &'static Series {
    static S: OnceLock<Series> = OnceLock::new();
    S.get_or_init(|| Series::build(&DELTA))
}

/// Generated Taylor coefficients of φ as (power, coefficient) pairs.
pub fn phi_series_coefficients() -> Vec<(u32, f64)> {
    let s = phi_series();
    s.coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| (s.leading + 2 * i as u32, c))
        .collect()
}

fn check_arg(function: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(function, v))
    }
}

/// Δ(v) = (3 − 2v² + v⁴) sin²v − v(3 − v²) sin 2v + 3v² cos²v.
pub fn delta(v: f64) -> Result<f64> {
    delta_kernel(v).map(|k| k.value)
}

pub fn delta_kernel(v: f64) -> Result<KernelValue> {
    check_arg("delta", v)?;
    let s = delta_series();
    let (value, abs_err_bound) = if v < DELTA_SERIES_SWITCHOVER {
        (
            s.eval_shifted(v, 0, 0),
            s.truncation(v) + 4.0 * f64::EPSILON * s.abs_sum(v),
        )
    } else {
        (DELTA.direct(v), 8.0 * f64::EPSILON * DELTA.magnitude(v))
    };
    Ok(KernelValue {
        v,
        value,
        abs_err_bound,
    })
}

/// φ(v) = −9 − 2v² − v⁴ + (9 − 16v² + 3v⁴) cos 2v + v(18 − 8v² + v⁴) sin 2v.
pub fn phi(v: f64) -> Result<f64> {
    phi_kernel(v).map(|k| k.value)
}

pub fn phi_kernel(v: f64) -> Result<KernelValue> {
    check_arg("phi", v)?;
    let s = phi_series();
    let (value, abs_err_bound) = if v < PHI_SERIES_SWITCHOVER {
        (
            s.eval_shifted(v, 0, 0),
            s.truncation(v) + 4.0 * f64::EPSILON * s.abs_sum(v),
        )
    } else {
        (PHI.direct(v), 8.0 * f64::EPSILON * PHI.magnitude(v))
    };
    Ok(KernelValue {
        v,
        value,
        abs_err_bound,
    })
}

/// φ(v)/vⁿ for 4 ≤ n ≤ 8, finite at v = 0 (−4/9 for n = 8, zero otherwise).
pub fn phi_ratio(v: f64, n: u32) -> Result<f64> {
    check_arg("phi_ratio", v)?;
    if !(4..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "phi_ratio power must lie in 4..=8, got {n}"
        )));
    }
    Ok(phi_ratio_unchecked(v, n))
}

/// [`phi_ratio`] without argument validation, for inner loops.
#[inline]
pub(crate) fn phi_ratio_unchecked(v: f64, n: u32) -> f64 {
    if v < PHI_SERIES_SWITCHOVER {
        phi_series().eval_shifted(v, n, 0)
    } else {
        PHI.direct(v) / v.powi(n as i32)
    }
}

/// φ(v) + (4/9) v⁸, evaluated without cancelling the leading term.
pub fn phi_remainder(v: f64) -> Result<f64> {
    check_arg("phi_remainder", v)?;
    if v < PHI_SERIES_SWITCHOVER {
        Ok(phi_series().eval_shifted(v, 0, 1))
    } else {
        Ok(PHI.direct(v) + 4.0 / 9.0 * v.powi(8))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_arguments() {
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert_eq!(delta(0.0).unwrap(), 0.0);
        assert_relative_eq!(phi_ratio(0.0, 8).unwrap(), -4.0 / 9.0, max_relative = 1e-15);
        assert_eq!(phi_ratio(0.0, 6).unwrap(), 0.0);
    }

    #[test]
    fn leading_series_terms() {
        let c = phi_series_coefficients();
        assert_eq!(c[0].0, 8);
        assert_relative_eq!(c[0].1, -4.0 / 9.0, max_relative = 1e-14);
        assert_eq!(c[1].0, 10);
        assert_relative_eq!(c[1].1, 28.0 / 225.0, max_relative = 1e-14);
        assert!(c.last().unwrap().0 >= 18);
        assert_eq!(delta_series().leading, 6);
    }

    #[test]
    fn switchover_truncation_is_below_target() {
        let v = PHI_SERIES_SWITCHOVER;
        let s = phi_series();
        assert!(s.truncation(v) < 1e-13 * 4.0 / 9.0 * v.powi(8));
    }

    #[test]
    fn series_and_direct_agree_near_switchover() {
        let s = phi_series();
        for i in 0..200 {
            let v = 0.6 + 0.8 * i as f64 / 199.0;
            let series = s.eval_shifted(v, 0, 0);
            let direct = PHI.direct(v);
            assert!(
                ((series - direct) / direct).abs() < 1e-9,
                "v = {v}: {series} vs {direct}"
            );
        }
    }

    #[test]
    fn ratio_is_continuous_across_switchover() {
        for n in 4..=8 {
            let lo = phi_ratio(PHI_SERIES_SWITCHOVER * (1.0 - 1e-12), n).unwrap();
            let hi = phi_ratio(PHI_SERIES_SWITCHOVER, n).unwrap();
            assert!(((lo - hi) / hi).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn large_argument_form() {
        let v: f64 = 50.0;
        let asym = -v.powi(4) + v.powi(5) * (2.0 * v).sin() + 3.0 * v.powi(4) * (2.0 * v).cos();
        let exact = phi(v).unwrap();
        // the remainder is O(v³)
        assert!((exact - asym).abs() < 20.0 * v.powi(3));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(phi(f64::NAN).is_err());
        assert!(delta(f64::INFINITY).is_err());
        assert!(phi(-1.0).is_err());
        assert!(phi_ratio(1.0, 9).is_err());
        assert!(phi_ratio(1.0, 3).is_err());
    }

    #[test]
    fn error_bounds_are_nonnegative() {
        for &v in &[0.0, 1e-5, 0.5, 1.0, 3.0, 100.0] {
            let k = phi_kernel(v).unwrap();
            assert!(k.abs_err_bound >= 0.0 && k.value.is_finite());
            let k = delta_kernel(v).unwrap();
            assert!(k.abs_err_bound >= 0.0 && k.value.is_finite());
        }
    }
}
