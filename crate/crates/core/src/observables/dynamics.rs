use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::heat::{check_cooling_path, cooling_prefactor, debye_warning, DulongPetit};
use super::torque::{
    large_limit_prefactor, large_limit_tau_hat, small_limit_prefactor, small_limit_tau_hat,
};
use super::TorqueConfig;
use crate::geometry::Body;
use crate::materials::{occupation, xab, MaterialModel, ThermalState};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre};
use crate::specfun::{thermal_f, ThermalFunctionOrder};
use crate::{Error, Result};

/// Which torque drives the rotation while the body relaxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regime {
    /// ã ≪ 1: τ̂ = f₉(t) − f₉(t′).
    Small,
    /// ã ≫ 1: τ̂ = ∫ x⁴/(x² + 1) Δn dx.
    Large,
    /// The full second-order spectral integral.
    #[default]
    Full,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Ok(Regime::Small),
            "large" => Ok(Regime::Large),
            "full" => Ok(Regime::Full),
            other => Err(Error::InvalidParameter(format!(
                "unknown regime '{other}' (expected small, large or full)"
            ))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Small => "small",
            Regime::Large => "large",
            Regime::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsConfig {
    pub torque: TorqueConfig,
    /// Gauss–Legendre nodes in u for ω̂_T.
    pub u_nodes: usize,
    /// Points on the returned trajectory.
    pub trace_points: usize,
    /// Full regime: the cached ω-grid reaches `omega_span · max(T, T′₀)`.
    pub omega_span: f64,
    /// Full regime: panel width as a fraction of min(T, T′₀, ν).
    pub panel_fraction: f64,
    pub nodes_per_panel: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            torque: TorqueConfig::default(),
            u_nodes: 40,
            trace_points: 64,
            omega_span: 80.0,
            panel_fraction: 0.5,
            nodes_per_panel: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub time_s: f64,
    pub t_body_k: f64,
    /// rad/s.
    pub omega_z: f64,
}

/// Relaxation toward the environment temperature and the angular velocity
/// gathered on the way. SI units throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace {
    pub regime: Regime,
    pub samples: Vec<TraceSample>,
    /// ω_T = (t₀τ₀/I) ω̂_T, s⁻¹.
    pub terminal_omega: f64,
    pub omega_hat: f64,
    /// t₀τ₀/I, s⁻¹.
    pub prefactor: f64,
    /// s.
    pub t0: f64,
    /// N·m.
    pub tau0: f64,
    /// τ(T′₀)/I, s⁻².
    pub initial_acceleration: f64,
    /// τ₀/I, s⁻².
    pub acceleration_prefactor: f64,
    pub warnings: Vec<String>,
}

/// Full-regime torque at any body temperature from J(ω) cached on a fixed
/// ω-grid. Temperature enters only through the occupation numbers.
struct CachedSpectrum {
    omega: Vec<f64>,
    weighted: Vec<f64>,
}

impl CachedSpectrum {
    fn new(
        body: &Body,
        ma: &MaterialModel,
        mb: &MaterialModel,
        hi: f64,
        width: f64,
        cfg: &DynamicsConfig,
    ) -> Result<Self> {
        let panels = (hi / width).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| hi * i as f64 / panels as f64)
            .collect();
        let (omega, w) = composite_gauss_legendre(&breaks, cfg.nodes_per_panel)?;
        let norm = 1.0 / (4.0 * PI.powi(3));
        let geometry = cfg.torque.geometry;
        let values = cfg
            .torque
            .spectral
            .execution
            .map_slice(&omega, |&om| -> Result<f64> {
                let x = xab(ma, mb, om)?;
                if x == 0.0 {
                    return Ok(0.0);
                }
                Ok(norm * x * body.geometric_factor(om, &geometry)?)
            });
        let weighted = values
            .into_iter()
            .zip(&w)
            .map(|(v, &wi)| v.map(|v| v * wi))
            .collect::<Result<Vec<_>>>()?;
        Ok(CachedSpectrum { omega, weighted })
    }

    fn torque(&self, ts: &ThermalState) -> f64 {
        if ts.is_equilibrium() {
            return 0.0;
        }
        self.omega
            .iter()
            .zip(&self.weighted)
            .map(|(&om, &g)| {
                let dn = occupation(om, ts.t_env) - occupation(om, ts.t_body);
                if g == 0.0 {
                    0.0
                } else {
                    g * dn
                }
            })
            .sum()
    }

    fn peak_omega(&self, ts: &ThermalState) -> f64 {
        self.omega
            .iter()
            .zip(&self.weighted)
            .map(|(&om, &g)| {
                (
                    om,
                    (g * (occupation(om, ts.t_env) - occupation(om, ts.t_body))).abs(),
                )
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(om, _)| om)
            .unwrap_or(ts.t_max())
    }
}

/// ω̂_T = ∫_{u₀}^1 τ̂/p du on one Gauss–Legendre rule.
fn omega_hat_with<T, P>(tau_hat: &T, p: &P, u0: f64, nodes: usize) -> Result<f64>
where
    T: Fn(f64) -> Result<f64>,
    P: Fn(f64) -> Result<f64>,
{
    if u0 == 1.0 {
        return Ok(0.0);
    }
    let (lo, hi) = if u0 < 1.0 { (u0, 1.0) } else { (1.0, u0) };
    let (us, ws) = gauss_legendre(nodes, lo, hi)?;
    let mut sum = 0.0;
    for (&u, &w) in us.iter().zip(&ws) {
        sum += w * tau_hat(u)? / p(u)?;
    }
    Ok(if u0 > 1.0 { -sum } else { sum })
}

/// ω̂_T(u₀) of a limiting regime at t = T/ν. Body independent.
pub fn omega_hat_limit(regime: Regime, t: f64, u0: f64, cfg: &DynamicsConfig) -> Result<f64> {
    if !(t > 0.0 && t.is_finite() && u0 > 0.0 && u0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need t > 0 and u0 > 0, got t = {t}, u0 = {u0}"
        )));
    }
    let state = |u: f64| ThermalState {
        t_env: t,
        t_body: u * t,
    };
    let tau_hat = |u: f64| -> Result<f64> {
        match regime {
            Regime::Small => small_limit_tau_hat(&state(u), 1.0),
            Regime::Large => Ok(large_limit_tau_hat(&state(u), 1.0, &cfg.torque.spectral)?
                .0
                .value),
            Regime::Full => Err(Error::InvalidParameter(
                "the full regime depends on the body".into(),
            )),
        }
    };
    let f3_env = thermal_f(ThermalFunctionOrder::F3, t)?;
    let p = |u: f64| -> Result<f64> { Ok(f3_env - thermal_f(ThermalFunctionOrder::F3, u * t)?) };
    omega_hat_with(&tau_hat, &p, u0, cfg.u_nodes)
}

/// ã at the peak above which the full regime reports the large-body τ₀.
const FULL_REGIME_LARGE_FROM: f64 = 2.0;

/// Angular velocity gained while the body relaxes from `t_start` toward
/// `t_env` (both eV), with B a dispersionless dielectric `chi_b`.
///
/// ω̂_T = ∫_{u₀}^1 τ̂(u)/p(u) du, u = T′/T, on Gauss–Legendre nodes. The
/// sign follows (T′₀ − T): a hot body turns clockwise for χ_B > 0.
#[allow(clippy::too_many_arguments)]
pub fn terminal_angular_velocity(
    body: &Body,
    metal: &MaterialModel,
    chi_b: f64,
    heat: &DulongPetit,
    t_env: f64,
    t_start: f64,
    regime: Regime,
    cfg: &DynamicsConfig,
) -> Result<DynamicsTrace> {
    check_cooling_path(t_env, t_start, t_start)?;
    if matches!(body, Body::Voxels(_)) {
        return Err(Error::InvalidParameter(
            "dynamics needs an Allen wrench or dual flag for the radiated power".into(),
        ));
    }
    if cfg.u_nodes == 0 || cfg.trace_points == 0 || cfg.nodes_per_panel == 0 {
        return Err(Error::InvalidParameter(
            "dynamics node counts must be positive".into(),
        ));
    }
    if !(cfg.omega_span > 0.0 && cfg.panel_fraction > 0.0) {
        return Err(Error::InvalidParameter(
            "omega_span and panel_fraction must be positive".into(),
        ));
    }
    let (_, nu) = metal.drude_parameters()?;
    let units = &cfg.torque.units;
    let t = t_env / nu;
    let u0 = t_start / t_env;
    let mut warnings = Vec::new();
    warnings.extend(debye_warning(heat, t_env.min(t_start)));
    let state = |u: f64| ThermalState {
        t_env,
        t_body: u * t_env,
    };

    let cached = match regime {
        Regime::Full => {
            let mb = MaterialModel::constant(chi_b)?;
            let hi = cfg.omega_span * t_env.max(t_start);
            let width = cfg.panel_fraction * t_env.min(t_start).min(nu);
            Some(CachedSpectrum::new(body, metal, &mb, hi, width, cfg)?)
        }
        _ => None,
    };
    let tau0 = match (&cached, regime) {
        (_, Regime::Small) => small_limit_prefactor(body, metal, chi_b)?,
        (_, Regime::Large) => large_limit_prefactor(body, metal, chi_b)?,
        (Some(c), Regime::Full) => {
            let a_peak = c.peak_omega(&state(u0)) * body.half_length();
            if a_peak >= FULL_REGIME_LARGE_FROM {
                large_limit_prefactor(body, metal, chi_b)?
            } else {
                small_limit_prefactor(body, metal, chi_b)?
            }
        }
        (None, Regime::Full) => unreachable!(),
    };
    if tau0 == 0.0 {
        return Err(Error::InvalidParameter(
            "chi_B = 0 gives no torque to normalise".into(),
        ));
    }
    let tau_hat = |u: f64| -> Result<f64> {
        let ts = state(u);
        match regime {
            Regime::Small => small_limit_tau_hat(&ts, nu),
            Regime::Large => Ok(large_limit_tau_hat(&ts, nu, &cfg.torque.spectral)?.0.value),
            Regime::Full => Ok(cached.as_ref().map_or(0.0, |c| c.torque(&ts)) / tau0),
        }
    };
    let f3 = |x: f64| thermal_f(ThermalFunctionOrder::F3, x);
    let f3_env = f3(t)?;
    let p = |u: f64| -> Result<f64> { Ok(f3_env - f3(u * t)?) };

    let omega_hat = omega_hat_with(&tau_hat, &p, u0, cfg.u_nodes)?;

    let t0 = cooling_prefactor(body, metal, heat, t_env)?;
    let inertia = body.moment_of_inertia();
    let prefactor = units.rate_si(t0 * tau0 / inertia);
    let acceleration_prefactor = units.angular_acceleration_si(tau0 / inertia);

    // Trajectory: u approaches 1 geometrically, down to |u − 1| = 10⁻³|u₀ − 1|.
    let n = cfg.trace_points;
    let u_at = |k: usize| 1.0 + (u0 - 1.0) * 10f64.powf(-3.0 * k as f64 / n as f64);
    let mut samples = Vec::with_capacity(n + 1);
    let (mut time_hat, mut omega_acc) = (0.0, 0.0);
    samples.push(TraceSample {
        time_s: 0.0,
        t_body_k: units.to_kelvin(t_start),
        omega_z: 0.0,
    });
    for k in 1..=n {
        let (ua, ub) = (u_at(k - 1), u_at(k));
        let (xs, wx) = gauss_legendre(8, ua.min(ub), ua.max(ub))?;
        let sign = if ub > ua { 1.0 } else { -1.0 };
        for (&u, &w) in xs.iter().zip(&wx) {
            let pu = p(u)?;
            time_hat += sign * w / pu;
            omega_acc += sign * w * tau_hat(u)? / pu;
        }
        samples.push(TraceSample {
            time_s: units.time_si(t0 * time_hat),
            t_body_k: units.to_kelvin(ub * t_env),
            omega_z: prefactor * omega_acc,
        });
    }

    Ok(DynamicsTrace {
        regime,
        samples,
        terminal_omega: prefactor * omega_hat,
        omega_hat,
        prefactor,
        t0: units.time_si(t0),
        tau0: units.torque_si(tau0),
        initial_acceleration: acceleration_prefactor * tau_hat(u0)?,
        acceleration_prefactor,
        warnings,
    })
}
