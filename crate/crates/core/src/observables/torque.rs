use std::f64::consts::PI;

use num_complex::Complex64;

use super::TorqueConfig;
use crate::geometry::{Body, GeometryConfig};
use crate::materials::{occupation, xab, MaterialModel, NonreciprocalPolarizability, ThermalState};
use crate::quadrature::{integrate_semi_infinite_sampled, IntegralEstimate, WeightedSample};
use crate::specfun::{thermal_f, ThermalFunctionOrder};
use crate::{Error, Result};

/// ã at the spectral peak below which the large-body limit is flagged.
const LARGE_REGIME_MIN: f64 = 10.0;
/// ã at the spectral peak above which the small-body limit is flagged.
const SMALL_REGIME_MAX: f64 = 1.0;

/// One node of a spectral integral: the density dτ/dω at `omega` and its
/// quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub omega: f64,
    pub density: f64,
    pub weight: f64,
}

/// A torque about z. `tau` is in eV, `tau_si` in N·m.
#[derive(Debug, Clone, PartialEq)]
pub struct TorqueResult {
    pub tau: f64,
    pub tau_si: f64,
    pub err_estimate: f64,
    pub err_si: f64,
    pub converged: bool,
    /// Quadrature nodes of the ω-integral; Σ weight · density = tau.
    /// Empty for closed-form results.
    pub spectrum: Vec<SpectralPoint>,
    /// τ₀ for the limiting forms, with tau = τ₀ τ̂.
    pub prefactor: Option<f64>,
    pub tau_hat: Option<f64>,
    pub warnings: Vec<String>,
}

impl TorqueResult {
    fn new(tau: f64, err: f64, converged: bool, cfg: &TorqueConfig) -> Self {
        TorqueResult {
            tau,
            tau_si: cfg.units.torque_si(tau),
            err_estimate: err,
            err_si: cfg.units.torque_si(err),
            converged,
            spectrum: Vec::new(),
            prefactor: None,
            tau_hat: None,
            warnings: Vec::new(),
        }
    }

    fn zero(cfg: &TorqueConfig) -> Self {
        TorqueResult::new(0.0, 0.0, true, cfg)
    }

    /// Σ weight · density over the stored spectrum.
    pub fn spectrum_integral(&self) -> f64 {
        self.spectrum.iter().map(|p| p.weight * p.density).sum()
    }

    /// Frequency of the largest |dτ/dω| on the stored spectrum.
    pub fn peak_omega(&self) -> Option<f64> {
        self.spectrum
            .iter()
            .max_by(|a, b| a.density.abs().total_cmp(&b.density.abs()))
            .map(|p| p.omega)
    }
}

fn spectrum_from(
    samples: Vec<WeightedSample>,
    scale_x: f64,
    scale_density: f64,
) -> Vec<SpectralPoint> {
    samples
        .into_iter()
        .map(|s| SpectralPoint {
            omega: s.x * scale_x,
            density: s.value * scale_density,
            weight: s.weight * scale_x,
        })
        .collect()
}

/// Penetration depth 1/(ω Im √(1 + χ)) of a Drude metal.
fn skin_depth(metal: &MaterialModel, omega: f64) -> Option<f64> {
    match metal {
        MaterialModel::Drude { .. } => {
            let eps = Complex64::new(1.0, 0.0) + metal.chi(omega).ok()?;
            Some(1.0 / (omega * eps.sqrt().im))
        }
        _ => None,
    }
}

/// The second-order torque (1/4π³) ∫₀^∞ X_AB(ω) [n(ω,T) − n(ω,T′)] J_z(ω) dω.
///
/// Voxel bodies skip the pitch-halving refinement of J inside the spectral
/// integral; call [`crate::geometry::voxel_factor`] directly for its error.
pub fn torque_second_order(
    body: &Body,
    ma: &MaterialModel,
    mb: &MaterialModel,
    ts: &ThermalState,
    cfg: &TorqueConfig,
) -> Result<TorqueResult> {
    ma.validate()?;
    mb.validate()?;
    if ts.is_equilibrium() {
        return Ok(TorqueResult::zero(cfg));
    }
    let geometry = GeometryConfig {
        pairwise: crate::quadrature::PairwiseConfig {
            refine: false,
            ..cfg.geometry.pairwise
        },
        ..cfg.geometry
    };
    let norm = 1.0 / (4.0 * PI.powi(3));
    let integrand = |omega: f64| -> Result<f64> {
        let x = xab(ma, mb, omega)?;
        let dn = ts.thermal_weight(omega);
        if x == 0.0 || dn == 0.0 {
            return Ok(0.0);
        }
        Ok(norm * x * dn * body.geometric_factor(omega, &geometry)?)
    };
    let (est, samples) =
        integrate_semi_infinite_sampled(integrand, 0.0, ts.t_max(), &cfg.spectral)?;
    let mut out = TorqueResult::new(est.value, est.err_estimate, est.converged, cfg);
    out.spectrum = spectrum_from(samples, 1.0, 1.0);
    if let Some(peak) = out.peak_omega() {
        if let Some(delta) = skin_depth(ma, peak) {
            out.warnings.extend(body.warnings(delta));
        }
    }
    if !est.converged {
        out.warnings.push(format!(
            "spectral integral did not reach tolerance (error estimate {:e} eV)",
            est.err_estimate
        ));
    }
    Ok(out)
}

fn limit_prefactor_check(drude: &MaterialModel, chi_b: f64) -> Result<(f64, f64)> {
    if !chi_b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "chi_B must be finite, got {chi_b}"
        )));
    }
    drude.drude_parameters()
}

/// τ₀ of the large-body limit. For the Allen wrench
/// (11/60π²) S_A S_B a ν⁴ ω_p² χ_B, for the dual flag
/// (11/60π²) a² S_A L_B ν⁴ ω_p² χ_B.
pub fn large_limit_prefactor(body: &Body, drude: &MaterialModel, chi_b: f64) -> Result<f64> {
    let (wp, nu) = limit_prefactor_check(drude, chi_b)?;
    let c = 11.0 / (60.0 * PI * PI) * nu.powi(4) * wp * wp * chi_b;
    match body {
        Body::AllenWrench(g) => Ok(c * g.s_a * g.s_b * g.a),
        Body::DualFlag(g) => Ok(c * g.a * g.a * g.s_a * g.l_b),
        Body::Voxels(_) => Err(Error::InvalidParameter(
            "limiting forms need an Allen wrench or dual flag".into(),
        )),
    }
}

/// τ₀ of the small-body limit. For the Allen wrench
/// (28/675π³) χ_B ν⁹ ω_p² S_A S_B a⁴ b², for the dual flag
/// (14/675π³) χ_B ν⁹ ω_p² S_A L_B a⁵ b².
pub fn small_limit_prefactor(body: &Body, drude: &MaterialModel, chi_b: f64) -> Result<f64> {
    let (wp, nu) = limit_prefactor_check(drude, chi_b)?;
    let c = chi_b * nu.powi(9) * wp * wp / (675.0 * PI.powi(3));
    match body {
        Body::AllenWrench(g) => Ok(28.0 * c * g.s_a * g.s_b * g.a.powi(4) * g.b * g.b),
        Body::DualFlag(g) => Ok(14.0 * c * g.s_a * g.l_b * g.a.powi(5) * g.b * g.b),
        Body::Voxels(_) => Err(Error::InvalidParameter(
            "limiting forms need an Allen wrench or dual flag".into(),
        )),
    }
}

/// τ̂ = ∫₀^∞ x⁴/(x² + 1) [n(x; t) − n(x; t′)] dx with t = T/ν, integrated
/// as a single difference. Returns the estimate and its nodes in x.
pub fn large_limit_tau_hat(
    ts: &ThermalState,
    nu: f64,
    cfg: &crate::quadrature::QuadratureConfig,
) -> Result<(IntegralEstimate, Vec<WeightedSample>)> {
    if ts.is_equilibrium() {
        return Ok((IntegralEstimate::zero(), Vec::new()));
    }
    let (t, tp) = (ts.t_env / nu, ts.t_body / nu);
    let integrand = |x: f64| -> Result<f64> {
        let x2 = x * x;
        Ok(x2 * x2 / (x2 + 1.0) * (occupation(x, t) - occupation(x, tp)))
    };
    integrate_semi_infinite_sampled(integrand, 0.0, t.max(tp), cfg)
}

/// τ̂ = f₉(T/ν) − f₉(T′/ν).
pub fn small_limit_tau_hat(ts: &ThermalState, nu: f64) -> Result<f64> {
    if ts.is_equilibrium() {
        return Ok(0.0);
    }
    Ok(thermal_f(ThermalFunctionOrder::F9, ts.t_env / nu)?
        - thermal_f(ThermalFunctionOrder::F9, ts.t_body / nu)?)
}

/// Location of the maximum of x^p/(x² + 1)|Δn| on a log grid, in x = ω/ν.
fn limit_peak(ts: &ThermalState, nu: f64, p: i32) -> f64 {
    let (t, tp) = (ts.t_env / nu, ts.t_body / nu);
    let hi = t.max(tp);
    (0..241)
        .map(|i| hi * 10f64.powf(-3.0 + 5.0 * i as f64 / 240.0))
        .map(|x| {
            (
                x,
                (x.powi(p) / (x * x + 1.0) * (occupation(x, t) - occupation(x, tp))).abs(),
            )
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(x, _)| x)
        .unwrap_or(hi)
}

/// The large-body limit τ₀ τ̂ with a dispersionless B part.
pub fn torque_large_limit(
    body: &Body,
    drude: &MaterialModel,
    chi_b: f64,
    ts: &ThermalState,
    cfg: &TorqueConfig,
) -> Result<TorqueResult> {
    let tau0 = large_limit_prefactor(body, drude, chi_b)?;
    let (_, nu) = drude.drude_parameters()?;
    let (hat, samples) = large_limit_tau_hat(ts, nu, &cfg.spectral)?;
    let mut out = TorqueResult::new(
        tau0 * hat.value,
        (tau0 * hat.err_estimate).abs(),
        hat.converged,
        cfg,
    );
    out.prefactor = Some(tau0);
    out.tau_hat = Some(hat.value);
    out.spectrum = spectrum_from(samples, nu, tau0 / nu);
    if !ts.is_equilibrium() {
        let a_peak = limit_peak(ts, nu, 4) * nu * body.half_length();
        if a_peak < LARGE_REGIME_MIN {
            out.warnings.push(format!(
                "large-body limit used at a_tilde = {a_peak:.3e} at the spectral peak (wants >= {LARGE_REGIME_MIN})"
            ));
        }
    }
    Ok(out)
}

/// The small-body limit τ₀ [f₉(t) − f₉(t′)] with a dispersionless B part.
pub fn torque_small_limit(
    body: &Body,
    drude: &MaterialModel,
    chi_b: f64,
    ts: &ThermalState,
    cfg: &TorqueConfig,
) -> Result<TorqueResult> {
    let tau0 = small_limit_prefactor(body, drude, chi_b)?;
    let (_, nu) = drude.drude_parameters()?;
    let hat = small_limit_tau_hat(ts, nu)?;
    let roundoff = if ts.is_equilibrium() {
        0.0
    } else {
        let f = |t: f64| thermal_f(ThermalFunctionOrder::F9, t / nu).map(f64::abs);
        100.0 * f64::EPSILON * (f(ts.t_env)? + f(ts.t_body)?)
    };
    let mut out = TorqueResult::new(tau0 * hat, (tau0 * roundoff).abs(), true, cfg);
    out.prefactor = Some(tau0);
    out.tau_hat = Some(hat);
    if !ts.is_equilibrium() {
        let a_peak = limit_peak(ts, nu, 9) * nu * body.half_length();
        if a_peak > SMALL_REGIME_MAX {
            out.warnings.push(format!(
                "small-body limit used at a_tilde = {a_peak:.3e} at the spectral peak (wants <= {SMALL_REGIME_MAX})"
            ));
        }
    }
    Ok(out)
}

/// First-order torque of a nonreciprocal body,
/// (1/3π²) ∫₀^∞ ω³ Re α(ω) [n(ω,T) − n(ω,T′)] dω.
///
/// This is the full-line ∫ dω/2π ω³/(6π) Re α (coth βω/2 − coth β′ω/2)
/// folded onto ω > 0 with Re α even in ω.
pub fn torque_first_order_nonreciprocal(
    alpha: &NonreciprocalPolarizability,
    ts: &ThermalState,
    cfg: &TorqueConfig,
) -> Result<TorqueResult> {
    if ts.is_equilibrium() {
        return Ok(TorqueResult::zero(cfg));
    }
    let norm = 1.0 / (3.0 * PI * PI);
    let integrand = |omega: f64| -> Result<f64> {
        let dn = ts.thermal_weight(omega);
        if dn == 0.0 {
            return Ok(0.0);
        }
        Ok(norm * omega.powi(3) * alpha.re_alpha(omega) * dn)
    };
    let (est, samples) =
        integrate_semi_infinite_sampled(integrand, 0.0, ts.t_max(), &cfg.spectral)?;
    let mut out = TorqueResult::new(est.value, est.err_estimate, est.converged, cfg);
    out.spectrum = spectrum_from(samples, 1.0, 1.0);
    Ok(out)
}
