use std::f64::consts::PI;

use super::TorqueConfig;
use crate::geometry::Body;
use crate::materials::{MaterialModel, ThermalState};
use crate::quadrature::{integrate_semi_infinite_sampled, try_integrate_1d, QuadratureConfig};
use crate::specfun::{thermal_f, ThermalFunctionOrder};
use crate::units::{AMU_EV, K_B_EV_PER_K};
use crate::{Error, Result};

/// Classical specific heat C_V = 3N of the metal part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DulongPetit {
    /// Mass per atom, eV.
    pub atomic_mass: f64,
    /// Temperature below which 3N overestimates C_V, eV.
    pub debye_temperature: f64,
}

impl DulongPetit {
    pub fn new(atomic_mass: f64, debye_temperature: f64) -> Result<Self> {
        if !(atomic_mass > 0.0 && atomic_mass.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "atomic mass must be positive, got {atomic_mass}"
            )));
        }
        if !(debye_temperature >= 0.0 && debye_temperature.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Debye temperature must be non-negative, got {debye_temperature}"
            )));
        }
        Ok(DulongPetit {
            atomic_mass,
            debye_temperature,
        })
    }

    /// 196.97 u, Θ = 170 K.
    pub fn gold() -> Self {
        DulongPetit {
            atomic_mass: 196.97 * AMU_EV,
            debye_temperature: 170.0 * K_B_EV_PER_K,
        }
    }
}

/// Net power absorbed by the metal. `power` in eV², `power_si` in W.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResult {
    pub power: f64,
    pub power_si: f64,
    /// (1/π²) 2a S_A ν³ ω_p², eV².
    pub prefactor: f64,
    /// p = f₃(T/ν) − f₃(T′/ν).
    pub p_hat: f64,
}

/// p(T, T′) = f₃(T/ν) − f₃(T′/ν).
pub fn power_hat(ts: &ThermalState, nu: f64) -> Result<f64> {
    if ts.is_equilibrium() {
        return Ok(0.0);
    }
    Ok(thermal_f(ThermalFunctionOrder::F3, ts.t_env / nu)?
        - thermal_f(ThermalFunctionOrder::F3, ts.t_body / nu)?)
}

fn wire(body: &Body) -> Result<(f64, f64)> {
    body.metal_cross_section().ok_or_else(|| {
        Error::InvalidParameter("radiated power needs an Allen wrench or dual flag".into())
    })
}

/// P = (1/π²) 2a S_A ν³ ω_p² [f₃(T/ν) − f₃(T′/ν)]; negative while the body
/// is hotter than its environment.
pub fn radiated_power(
    body: &Body,
    drude: &MaterialModel,
    ts: &ThermalState,
    units: &crate::units::UnitContext,
) -> Result<PowerResult> {
    let (a, s_a) = wire(body)?;
    let (wp, nu) = drude.drude_parameters()?;
    let prefactor = 2.0 * a * s_a * nu.powi(3) * wp * wp / (PI * PI);
    let p_hat = power_hat(ts, nu)?;
    let power = prefactor * p_hat;
    Ok(PowerResult {
        power,
        power_si: units.power_si(power),
        prefactor,
        p_hat,
    })
}

/// t₀ = 3π² ρ_A T / (m ω_p² ν³), eV⁻¹.
pub fn cooling_prefactor(
    body: &Body,
    drude: &MaterialModel,
    heat: &DulongPetit,
    t_env: f64,
) -> Result<f64> {
    let (wp, nu) = drude.drude_parameters()?;
    if !(t_env > 0.0 && t_env.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "environment temperature must be positive, got {t_env}"
        )));
    }
    Ok(3.0 * PI * PI * body.metal_density() * t_env / (heat.atomic_mass * wp * wp * nu.powi(3)))
}

/// Time to move from T′₀ to T′₁: t = t₀ t̂ with `t0` and `time` in eV⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct CoolingResult {
    pub t0: f64,
    pub t0_si: f64,
    pub t_hat: f64,
    pub err_estimate: f64,
    pub time: f64,
    pub time_si: f64,
    pub warnings: Vec<String>,
}

/// Checks that T′ moves from `t_start` toward `t_env` without reaching it.
pub fn check_cooling_path(t_env: f64, t_start: f64, t_end: f64) -> Result<()> {
    for (name, t) in [
        ("environment", t_env),
        ("initial", t_start),
        ("final", t_end),
    ] {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} temperature must be positive, got {t}"
            )));
        }
    }
    if t_start == t_env {
        return Err(Error::InvalidParameter(
            "initial temperature equals the environment temperature".into(),
        ));
    }
    if t_end == t_env {
        return Err(Error::Divergence(
            "reaching the environment temperature exactly takes an infinite time".into(),
        ));
    }
    if (t_start - t_env).signum() != (t_end - t_env).signum() {
        return Err(Error::InvalidParameter(format!(
            "initial ({t_start:e}) and final ({t_end:e}) temperatures lie on opposite sides of the environment ({t_env:e})"
        )));
    }
    if (t_end - t_env).abs() > (t_start - t_env).abs() {
        return Err(Error::InvalidParameter(format!(
            "final temperature {t_end:e} is farther from the environment than the initial {t_start:e}"
        )));
    }
    Ok(())
}

pub(crate) fn debye_warning(heat: &DulongPetit, t_low: f64) -> Option<String> {
    (t_low < heat.debye_temperature).then(|| {
        format!(
            "body temperature {:.1} K is below the Debye temperature {:.1} K; 3N overestimates the specific heat",
            t_low / K_B_EV_PER_K,
            heat.debye_temperature / K_B_EV_PER_K
        )
    })
}

/// t̂(u₀, u₁) = ∫_{u₀}^{u₁} du / p(u; T) with u = T′/T.
pub fn cooling_hat(
    u0: f64,
    u1: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<crate::quadrature::IntegralEstimate> {
    let f3 = |x: f64| thermal_f(ThermalFunctionOrder::F3, x);
    let base = f3(t)?;
    try_integrate_1d(|u| Ok(1.0 / (base - f3(u * t)?)), u0, u1, cfg)
}

/// Time for the body to go from `t_start` to `t_end` (eV) in an environment
/// at `t_env`, counting only the metal's emission and a 3N specific heat.
pub fn cooling_time(
    body: &Body,
    drude: &MaterialModel,
    heat: &DulongPetit,
    t_env: f64,
    t_start: f64,
    t_end: f64,
    cfg: &TorqueConfig,
) -> Result<CoolingResult> {
    check_cooling_path(t_env, t_start, t_end)?;
    wire(body)?;
    let (_, nu) = drude.drude_parameters()?;
    let t0 = cooling_prefactor(body, drude, heat, t_env)?;
    let mut warnings = Vec::new();
    warnings.extend(debye_warning(heat, t_start.min(t_end)));
    let (t_hat, err) = if t_start == t_end {
        (0.0, 0.0)
    } else {
        let est = cooling_hat(t_start / t_env, t_end / t_env, t_env / nu, &cfg.spectral)?;
        if !est.converged {
            warnings.push(format!(
                "cooling integral error estimate {:e} above tolerance",
                est.err_estimate
            ));
        }
        (est.value, est.err_estimate)
    };
    Ok(CoolingResult {
        t0,
        t0_si: cfg.units.time_si(t0),
        t_hat,
        err_estimate: err,
        time: t0 * t_hat,
        time_si: cfg.units.time_si(t0 * t_hat),
        warnings,
    })
}

/// Einstein–Hopf drag on an isotropic particle moving at `v` (fraction of
/// c) through radiation at `t_env`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceResult {
    /// eV².
    pub force: f64,
    /// N.
    pub force_si: f64,
    pub err_estimate: f64,
    pub converged: bool,
}

/// F = −(vβ/12π²) ∫₀^∞ ω⁵ Im α(ω) / sinh²(βω/2) dω, with Im α in eV⁻³.
pub fn einstein_hopf_force<F>(
    im_alpha: F,
    v: f64,
    t_env: f64,
    cfg: &TorqueConfig,
) -> Result<ForceResult>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if !(v.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "velocity must satisfy |v| < 1, got {v}"
        )));
    }
    if !(t_env > 0.0 && t_env.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {t_env}"
        )));
    }
    if v == 0.0 {
        return Ok(ForceResult {
            force: 0.0,
            force_si: 0.0,
            err_estimate: 0.0,
            converged: true,
        });
    }
    let integrand = |omega: f64| -> Result<f64> {
        let x = omega / t_env;
        let d = -(-x).exp_m1();
        // 1/sinh²(x/2) = 4e^{−x}/(1 − e^{−x})²
        Ok(omega.powi(5) * im_alpha(omega) * 4.0 * (-x).exp() / (d * d))
    };
    let (est, _) = integrate_semi_infinite_sampled(integrand, 0.0, t_env, &cfg.spectral)?;
    let c = -v / (t_env * 12.0 * PI * PI);
    let force = c * est.value;
    Ok(ForceResult {
        force,
        force_si: cfg.units.force_si(force),
        err_estimate: (c * est.err_estimate).abs(),
        converged: est.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AllenWrench;
    use crate::units::UnitContext;
    use approx::assert_relative_eq;

    fn body(units: &UnitContext) -> Body {
        let a = units.um(1.0);
        let r = units.nm(40.0);
        Body::AllenWrench(
            AllenWrench::with_wire_radii(a, a, r, r, units.g_per_cm3(19.3), 0.0).unwrap(),
        )
    }

    #[test]
    fn power_is_antisymmetric() {
        let u = UnitContext::default();
        let ts = ThermalState::from_kelvin(300.0, 600.0).unwrap();
        let p = radiated_power(&body(&u), &MaterialModel::gold(), &ts, &u).unwrap();
        let q = radiated_power(&body(&u), &MaterialModel::gold(), &ts.swapped(), &u).unwrap();
        assert!(p.power < 0.0);
        assert_eq!(p.power, -q.power);
    }

    #[test]
    fn cooling_path_is_validated() {
        let cfg = TorqueConfig::default();
        let b = body(&cfg.units);
        let gold = MaterialModel::gold();
        let heat = DulongPetit::gold();
        let t = cfg.units.kelvin(300.0);
        let reach = cooling_time(&b, &gold, &heat, t, 2.0 * t, t, &cfg);
        assert!(matches!(reach, Err(Error::Divergence(_))));
        assert!(cooling_time(&b, &gold, &heat, t, 2.0 * t, 0.5 * t, &cfg).is_err());
        assert!(cooling_time(&b, &gold, &heat, t, 1.1 * t, 1.2 * t, &cfg).is_err());
        let same = cooling_time(&b, &gold, &heat, t, 2.0 * t, 2.0 * t, &cfg).unwrap();
        assert_eq!(same.time, 0.0);
        let warm = cooling_time(&b, &gold, &heat, t, 0.5 * t, 0.9 * t, &cfg).unwrap();
        assert!(warm.t_hat > 0.0);
        assert_eq!(warm.warnings.len(), 1);
    }

    #[test]
    fn cooling_takes_positive_time() {
        let cfg = TorqueConfig::default();
        let t = cfg.units.kelvin(300.0);
        let r = cooling_time(
            &body(&cfg.units),
            &MaterialModel::gold(),
            &DulongPetit::gold(),
            t,
            2.0 * t,
            1.1 * t,
            &cfg,
        )
        .unwrap();
        assert!(r.t_hat > 0.0 && r.warnings.is_empty());
        assert_relative_eq!(r.time, r.t0 * r.t_hat);
    }

    #[test]
    fn drag_opposes_motion() {
        let cfg = TorqueConfig::default();
        let im = |w: f64| 1.0 / (1.0 + w * w);
        let f = einstein_hopf_force(im, 1e-3, 0.025, &cfg).unwrap();
        let g = einstein_hopf_force(im, -1e-3, 0.025, &cfg).unwrap();
        assert!(f.force < 0.0);
        assert_relative_eq!(f.force, -g.force);
        assert_eq!(
            einstein_hopf_force(im, 0.0, 0.025, &cfg).unwrap().force,
            0.0
        );
        assert_eq!(
            einstein_hopf_force(|_| 0.0, 1e-3, 0.025, &cfg)
                .unwrap()
                .force,
            0.0
        );
    }
}
