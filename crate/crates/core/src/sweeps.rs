//! Tabulated parameter sweeps of the dimensionless quantities behind each
//! figure-style curve: Ĵ(ã, b̃), τ̂(T′), t̂(u₀) and ω̂_T(u₀).
//!
//! Points are independent and run on the worker pool; rows always come back
//! in input order.

use std::fmt;
use std::str::FromStr;

use crate::geometry::{
    allen_wrench_hat, allen_wrench_large_asymptote, allen_wrench_small_asymptote, dual_flag_hat,
    dual_flag_large_asymptote, dual_flag_small_asymptote, GeometryConfig,
};
use crate::materials::ThermalState;
use crate::observables::{
    cooling_hat, large_limit_tau_hat, omega_hat_limit, small_limit_tau_hat, DynamicsConfig, Regime,
};
use crate::quadrature::QuadratureConfig;
use crate::{Error, Execution, Result};

/// The two named bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    AllenWrench,
    DualFlag,
}

impl FromStr for BodyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "allen-wrench" | "aw" => Ok(BodyKind::AllenWrench),
            "dual-flag" | "df" => Ok(BodyKind::DualFlag),
            other => Err(Error::InvalidParameter(format!(
                "unknown body '{other}' (expected allen-wrench or dual-flag)"
            ))),
        }
    }
}

impl fmt::Display for BodyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BodyKind::AllenWrench => "allen-wrench",
            BodyKind::DualFlag => "dual-flag",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryRow {
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub j_hat: f64,
    pub j_hat_small: f64,
    pub j_hat_large: f64,
}

fn collect<T: Send>(rows: Vec<Result<T>>) -> Result<Vec<T>> {
    rows.into_iter().collect()
}

fn non_empty<T>(points: &[T]) -> Result<()> {
    if points.is_empty() {
        Err(Error::InvalidParameter("sweep grid is empty".into()))
    } else {
        Ok(())
    }
}

/// Ĵ and both asymptotes at each (ã, b̃).
pub fn geometry_factor_sweep(
    kind: BodyKind,
    points: &[(f64, f64)],
    cfg: &GeometryConfig,
    exec: Execution,
) -> Result<Vec<GeometryRow>> {
    non_empty(points)?;
    collect(exec.map_slice(points, |&(a, b)| {
        let (j, small, large) = match kind {
            BodyKind::AllenWrench => (
                allen_wrench_hat(a, b, cfg)?,
                allen_wrench_small_asymptote(a, b),
                allen_wrench_large_asymptote(a),
            ),
            BodyKind::DualFlag => (
                dual_flag_hat(a, b, cfg)?,
                dual_flag_small_asymptote(a, b),
                dual_flag_large_asymptote(a),
            ),
        };
        Ok(GeometryRow {
            a_tilde: a,
            b_tilde: b,
            j_hat: j.value,
            j_hat_small: small,
            j_hat_large: large,
        })
    }))
}

/// Log-spaced grid of `n` points over [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "log grid needs 0 < lo < hi and n >= 2, got [{lo}, {hi}], n = {n}"
        )));
    }
    let (l, h) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

/// Evenly spaced grid of `n` points over [lo, hi].
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(hi > lo && lo.is_finite() && hi.is_finite()) || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "linear grid needs lo < hi and n >= 2, got [{lo}, {hi}], n = {n}"
        )));
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueHatRow {
    /// u = T′/T.
    pub u: f64,
    pub tau_hat: f64,
}

/// τ̂(u) of a limiting regime at t = T/ν.
pub fn tau_hat_sweep(
    regime: Regime,
    t: f64,
    us: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<TorqueHatRow>> {
    non_empty(us)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t = T/nu must be positive, got {t}"
        )));
    }
    collect(cfg.execution.map_slice(us, |&u| {
        let ts = ThermalState::new(t, u * t)?;
        let tau_hat = match regime {
            Regime::Small => small_limit_tau_hat(&ts, 1.0)?,
            Regime::Large => large_limit_tau_hat(&ts, 1.0, cfg)?.0.value,
            Regime::Full => {
                return Err(Error::InvalidParameter(
                    "tau_hat sweeps need the small or large regime".into(),
                ))
            }
        };
        Ok(TorqueHatRow { u, tau_hat })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingRow {
    pub u0: f64,
    pub u1: f64,
    pub t_hat: f64,
}

/// t̂(u₀, u₁) at t = T/ν.
pub fn cooling_sweep(
    t: f64,
    u0s: &[f64],
    u1: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<CoolingRow>> {
    non_empty(u0s)?;
    if u1 == 1.0 {
        return Err(Error::Divergence(
            "cooling to u1 = 1 takes an infinite time".into(),
        ));
    }
    collect(cfg.execution.map_slice(u0s, |&u0| {
        crate::observables::check_cooling_path(1.0, u0, u1)?;
        let t_hat = if u0 == u1 {
            0.0
        } else {
            cooling_hat(u0, u1, t, cfg)?.value
        };
        Ok(CoolingRow { u0, u1, t_hat })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaHatRow {
    pub u0: f64,
    pub omega_hat: f64,
}

/// ω̂_T(u₀) of a limiting regime at t = T/ν.
pub fn omega_hat_sweep(
    regime: Regime,
    t: f64,
    u0s: &[f64],
    cfg: &DynamicsConfig,
) -> Result<Vec<OmegaHatRow>> {
    non_empty(u0s)?;
    collect(cfg.torque.spectral.execution.map_slice(u0s, |&u0| {
        Ok(OmegaHatRow {
            u0,
            omega_hat: omega_hat_limit(regime, t, u0, cfg)?,
        })
    }))
}
