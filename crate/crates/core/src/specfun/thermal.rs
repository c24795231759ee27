//! The thermal integrals fₙ(t) = ∫₀^∞ dx xⁿ/(x² + 1) · 1/(e^{x/t} − 1).

use std::f64::consts::PI;

use crate::quadrature::{try_integrate_semi_infinite, QuadratureConfig};
use crate::{Error, Result};

use super::digamma::digamma;

/// Largest k for which ζ(2k) is tabulated.
pub const MAX_ZETA_INDEX: u32 = 8;

/// Closed forms are abandoned for the defining integral once the terms
/// cancel by more than this factor.
const CANCELLATION_LIMIT: f64 = 1e6;

/// Odd order n = 2k + 1 of a thermal function with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThermalFunctionOrder {
    n: u32,
}

impl ThermalFunctionOrder {
    pub const F3: ThermalFunctionOrder = ThermalFunctionOrder { n: 3 };
    pub const F9: ThermalFunctionOrder = ThermalFunctionOrder { n: 9 };

    pub fn new(n: u32) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) || (n - 1) / 2 > MAX_ZETA_INDEX {
            return Err(Error::InvalidParameter(format!(
                "thermal function order must be odd and in 3..={}, got {n}",
                2 * MAX_ZETA_INDEX + 1
            )));
        }
        Ok(ThermalFunctionOrder { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u32 {
        (self.n - 1) / 2
    }
}

/// ζ(2k) for 1 ≤ k ≤ 8 from the π-power closed forms.
pub fn zeta_even(k: u32) -> Result<f64> {
    let (num, den) = match k {
        1 => (1.0, 6.0),
        2 => (1.0, 90.0),
        3 => (1.0, 945.0),
        4 => (1.0, 9450.0),
        5 => (1.0, 93555.0),
        6 => (691.0, 638512875.0),
        7 => (2.0, 18243225.0),
        8 => (3617.0, 325641566250.0),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "zeta_even index must be in 1..={MAX_ZETA_INDEX}, got {k}"
            )))
        }
    };
    Ok(num / den * PI.powi(2 * k as i32))
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// fₙ(t) from its Γ·ζ·digamma closed form.
///
/// Falls back to the defining integral when the closed-form terms cancel
/// badly, which happens for t ≪ 1.
pub fn thermal_f(order: ThermalFunctionOrder, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain("thermal_f", t));
    }
    let k = order.k();
    let mut sum = 0.0;
    let mut largest = 0.0_f64;
    for j in 1..=k {
        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        let term = sign * factorial(2 * j - 1) * zeta_even(j)? * t.powi(2 * j as i32);
        largest = largest.max(term.abs());
        sum += term;
    }
    let bracket = digamma(1.0 / (2.0 * PI * t))? + (2.0 * PI * t).ln() + PI * t;
    let sign = if (k + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let last = sign * 0.5 * bracket;
    largest = largest.max(last.abs());
    sum += last;

    if sum.abs() * CANCELLATION_LIMIT < largest {
        return thermal_integral(order.n(), t);
    }
    Ok(sum)
}

/// The defining integral of fₙ(t), by quadrature, for any n ≥ 1.
///
/// Even orders (for instance the x⁴/(x² + 1) weight of the large-body
/// torque) have no closed form and always come through here.
pub fn thermal_integral(n: u32, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain("thermal_integral", t));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "thermal_integral needs n ≥ 1".into(),
        ));
    }
    let cfg = QuadratureConfig {
        rel_tol: 1e-12,
        abs_tol: f64::MIN_POSITIVE,
        ..QuadratureConfig::default()
    };
    // x = t y
    let integrand = |y: f64| -> Result<f64> {
        if y == 0.0 {
            return Ok(if n == 1 { t * t } else { 0.0 });
        }
        let x = t * y;
        Ok(t * x.powi(n as i32) / (x * x + 1.0) / y.exp_m1())
    };
    let est = try_integrate_semi_infinite(integrand, 0.0, 1.0, &cfg)?;
    Ok(est.value)
}
