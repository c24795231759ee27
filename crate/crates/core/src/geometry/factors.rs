use std::f64::consts::PI;

use super::radial::{panel_breaks, phi_integral, psi_integral};
use super::{AllenWrench, DualFlag, GeometryConfig, VoxelPairBody};
use crate::quadrature::{
    integrate_pairwise_volumes, try_integrate_1d_with_breaks, IntegralEstimate, QuadratureConfig,
    VectorEstimate,
};
use crate::specfun::{phi_ratio_unchecked, phi_remainder};
use crate::{Error, Result};

/// Below this overall size √(b̃² + 4ã²) the reduced factors are computed
/// from the Cartesian forms with the −(4/9) part of φ/v⁸ removed, since that
/// part integrates to zero exactly and the polar terms lose about
/// 2 log₁₀(1/size) digits to cancellation.
pub const SMALL_BODY_EXTENT: f64 = 0.05;

/// True when either length vanishes, leaving nothing to integrate.
fn empty_domain(a: f64, b: f64) -> Result<bool> {
    if a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite() {
        Ok(a == 0.0 || b == 0.0)
    } else {
        Err(Error::Geometry(format!(
            "reduced lengths must be non-negative and finite, got ã = {a}, b̃ = {b}"
        )))
    }
}

/// φ(v)/v⁸ or, with `subtracted`, that minus its v → 0 value −4/9.
fn kernel8(v: f64, subtracted: bool) -> Result<f64> {
    if subtracted {
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(phi_remainder(v)? / v.powi(8))
    } else {
        Ok(phi_ratio_unchecked(v, 8))
    }
}

/// Linear combination of radial integrals. The combination counts as
/// converged when its own error meets the tolerance, even if a part that
/// contributes negligibly stopped at its rounding floor.
fn sum_terms(q: &QuadratureConfig, terms: &[(f64, IntegralEstimate)]) -> IntegralEstimate {
    let mut total = IntegralEstimate::sum(terms.iter().map(|&(c, e)| e.scaled(c)));
    total.converged |= total.err_estimate <= q.tolerance(total.value);
    total
}

/// Ĵ for the dual Allen wrench from the polar form: three Φ pieces and one
/// Ψ piece in the radial variable.
pub fn allen_wrench_hat_polar(a: f64, b: f64, cfg: &GeometryConfig) -> Result<IntegralEstimate> {
    if empty_domain(a, b)? {
        return Ok(IntegralEstimate::zero());
    }
    let q = &cfg.quad;
    let t = cfg.tail;
    let c = (b * b + 4.0 * a * a).sqrt();
    Ok(sum_terms(
        q,
        &[
            (-a, phi_integral(0.0, 2.0 * a, 6, q, t)?),
            (a, psi_integral(b, c, 6, q, t)?),
            (0.5 * b * b, phi_integral(b, c, 7, q, t)?),
            (0.5, phi_integral(0.0, b, 5, q, t)?),
            (-0.5, phi_integral(2.0 * a, c, 5, q, t)?),
        ],
    ))
}

fn nested<I>(x_max: f64, inner: I, q: &QuadratureConfig) -> Result<IntegralEstimate>
where
    I: Fn(f64) -> Result<f64>,
{
    try_integrate_1d_with_breaks(inner, &panel_breaks(0.0, x_max), q)
}

fn aw_cartesian(
    a: f64,
    b: f64,
    q: &QuadratureConfig,
    subtracted: bool,
) -> Result<IntegralEstimate> {
    let y_breaks = panel_breaks(0.0, 2.0 * a);
    let inner = |x: f64| -> Result<f64> {
        let f = |y: f64| Ok((y - a) * kernel8((x * x + y * y).sqrt(), subtracted)?);
        Ok(x * try_integrate_1d_with_breaks(f, &y_breaks, q)?.value)
    };
    nested(b, inner, q)
}

/// Ĵ for the dual Allen wrench by direct two-dimensional quadrature of
/// ∫₀^{b̃} dx̃ ∫₀^{2ã} dỹ x̃ (ỹ − ã) φ(v)/v⁸ with v = √(x̃² + ỹ²).
pub fn allen_wrench_hat_cartesian(
    a: f64,
    b: f64,
    cfg: &GeometryConfig,
) -> Result<IntegralEstimate> {
    if empty_domain(a, b)? {
        return Ok(IntegralEstimate::zero());
    }
    aw_cartesian(a, b, &cfg.quad, false)
}

/// Ĵ for the dual Allen wrench, J_z = 2 S_A S_B ω⁴ Ĵ(ωa, ωb).
pub fn allen_wrench_hat(a: f64, b: f64, cfg: &GeometryConfig) -> Result<IntegralEstimate> {
    if empty_domain(a, b)? {
        return Ok(IntegralEstimate::zero());
    }
    if (b * b + 4.0 * a * a).sqrt() <= SMALL_BODY_EXTENT {
        aw_cartesian(a, b, &cfg.quad, true)
    } else {
        allen_wrench_hat_polar(a, b, cfg)
    }
}

/// (56/675) ã⁴ b̃², the leading small-body behaviour.
pub fn allen_wrench_small_asymptote(a: f64, b: f64) -> f64 {
    56.0 / 675.0 * a.powi(4) * b * b
}

/// (11/30) π ã, the leading large-body behaviour.
pub fn allen_wrench_large_asymptote(a: f64) -> f64 {
    11.0 / 30.0 * PI * a
}

/// Ĵ for the dual flag from its twelve radial terms.
pub fn dual_flag_hat_polar(a: f64, b: f64, cfg: &GeometryConfig) -> Result<IntegralEstimate> {
    if empty_domain(a, b)? {
        return Ok(IntegralEstimate::zero());
    }
    let q = &cfg.quad;
    let t = cfg.tail;
    let c1 = (a * a + b * b).sqrt();
    let c2 = (4.0 * a * a + b * b).sqrt();
    let a2 = a * a;
    let a3 = a2 * a;
    let b2 = b * b;
    let bracket = sum_terms(
        q,
        &[
            (-1.0 / 3.0, phi_integral(0.0, a, 4, q, t)?),
            (1.0 / 3.0, phi_integral(a, 2.0 * a, 4, q, t)?),
            (-a, phi_integral(0.0, b, 5, q, t)?),
            (a, phi_integral(2.0 * a, c2, 5, q, t)?),
            (2.0 * a2, phi_integral(0.0, a, 6, q, t)?),
            (-a * b2, phi_integral(b, c2, 7, q, t)?),
            (4.0 / 3.0 * a3, phi_integral(a, c1, 7, q, t)?),
            (-4.0 / 3.0 * a3, phi_integral(2.0 * a, c2, 7, q, t)?),
            (2.0 / 3.0, psi_integral(b, c1, 4, q, t)?),
            (-1.0 / 3.0, psi_integral(b, c2, 4, q, t)?),
            (-2.0 / 3.0 * (3.0 * a2 + b2), psi_integral(b, c1, 6, q, t)?),
            (1.0 / 3.0 * b2, psi_integral(b, c2, 6, q, t)?),
        ],
    );
    Ok(bracket.scaled(-1.0))
}

fn df_cartesian(
    a: f64,
    b: f64,
    q: &QuadratureConfig,
    subtracted: bool,
) -> Result<IntegralEstimate> {
    let near = panel_breaks(0.0, a);
    let far = panel_breaks(0.0, 2.0 * a);
    let inner = |x: f64| -> Result<f64> {
        let k = |y: f64| kernel8((x * x + y * y).sqrt(), subtracted);
        let first = try_integrate_1d_with_breaks(|y| Ok(2.0 * (a * a - y * y) * k(y)?), &near, q)?;
        let second = try_integrate_1d_with_breaks(|y| Ok((y * y - 2.0 * a * y) * k(y)?), &far, q)?;
        Ok(-x * (first.value + second.value))
    };
    nested(b, inner, q)
}

/// Ĵ for the dual flag by two-dimensional quadrature, the flag height
/// integral having been done in closed form.
pub fn dual_flag_hat_cartesian(a: f64, b: f64, cfg: &GeometryConfig) -> Result<IntegralEstimate> {
    if empty_domain(a, b)? {
        return Ok(IntegralEstimate::zero());
    }
    df_cartesian(a, b, &cfg.quad, false)
}

/// Ĵ for the dual flag, J_z = ω³ S_A L_B Ĵ(ωa, ωb).
pub fn dual_flag_hat(a: f64, b: f64, cfg: &GeometryConfig) -> Result<IntegralEstimate> {
    if empty_domain(a, b)? {
        return Ok(IntegralEstimate::zero());
    }
    if (b * b + 4.0 * a * a).sqrt() <= SMALL_BODY_EXTENT {
        df_cartesian(a, b, &cfg.quad, true)
    } else {
        dual_flag_hat_polar(a, b, cfg)
    }
}

/// (56/675) ã⁵ b̃².
pub fn dual_flag_small_asymptote(a: f64, b: f64) -> f64 {
    56.0 / 675.0 * a.powi(5) * b * b
}

/// (11/15) π ã².
pub fn dual_flag_large_asymptote(a: f64) -> f64 {
    11.0 / 15.0 * PI * a * a
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("geometric factor", omega))
    }
}

/// J_z(ω) = 2 S_A S_B ω⁴ Ĵ(ωa, ωb).
pub fn allen_wrench_factor(g: &AllenWrench, omega: f64, cfg: &GeometryConfig) -> Result<f64> {
    check_omega(omega)?;
    let hat = allen_wrench_hat(omega * g.a, omega * g.b, cfg)?;
    Ok(2.0 * g.s_a * g.s_b * omega.powi(4) * hat.value)
}

/// J_z(ω) = ω³ S_A L_B Ĵ(ωa, ωb).
pub fn dual_flag_factor(g: &DualFlag, omega: f64, cfg: &GeometryConfig) -> Result<f64> {
    check_omega(omega)?;
    let hat = dual_flag_hat(omega * g.a, omega * g.b, cfg)?;
    Ok(g.s_a * g.l_b * omega.powi(3) * hat.value)
}

/// The full vector J_AB(ω) = −∫_A ∫_B (r × r′) φ(ω|r − r′|)/|r − r′|⁸ by
/// voxel pair sums.
pub fn voxel_factor(g: &VoxelPairBody, omega: f64, cfg: &GeometryConfig) -> Result<VectorEstimate> {
    check_omega(omega)?;
    let w8 = omega.powi(8);
    let kernel = |r: [f64; 3], s: [f64; 3]| -> [f64; 3] {
        let d = ((r[0] - s[0]).powi(2) + (r[1] - s[1]).powi(2) + (r[2] - s[2]).powi(2)).sqrt();
        let k = -w8 * phi_ratio_unchecked(omega * d, 8);
        [
            k * (r[1] * s[2] - r[2] * s[1]),
            k * (r[2] * s[0] - r[0] * s[2]),
            k * (r[0] * s[1] - r[1] * s[0]),
        ]
    };
    integrate_pairwise_volumes(&g.voxels_a, &g.voxels_b, kernel, &cfg.pairwise)
}
