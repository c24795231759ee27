//! Conversion between laboratory units and natural units (eV).

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// ħ in eV·s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;
/// k_B in eV/K.
pub const K_B_EV_PER_K: f64 = 8.617333262e-5;
/// Joules per eV.
pub const JOULE_PER_EV: f64 = 1.602176634e-19;
/// Atomic mass unit in eV.
pub const AMU_EV: f64 = 931.49410242e6;
/// One gram in eV.
pub const GRAM_EV: f64 = 5.60958860e32;
/// ħc in eV·cm (CODATA 2018).
pub const HBAR_C_EV_CM_CODATA: f64 = 1.973269804e-5;
/// ħc rounded to 2·10⁻⁵ eV·cm, the value behind the published numbers.
pub const HBAR_C_EV_CM_ROUNDED: f64 = 2e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitMode {
    #[default]
    Codata,
    Rounded,
}

impl FromStr for UnitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "codata" => Ok(UnitMode::Codata),
            "rounded" => Ok(UnitMode::Rounded),
            other => Err(Error::InvalidParameter(format!(
                "unit mode must be codata or rounded, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for UnitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitMode::Codata => "codata",
            UnitMode::Rounded => "rounded",
        })
    }
}

/// Unit conversions for one choice of ħc. Only lengths (and through them
/// densities) depend on the mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitContext {
    mode: UnitMode,
    hbar_c_ev_cm: f64,
}

impl Default for UnitContext {
    fn default() -> Self {
        UnitContext::codata()
    }
}

impl UnitContext {
    pub fn new(mode: UnitMode) -> Self {
        let hbar_c_ev_cm = match mode {
            UnitMode::Codata => HBAR_C_EV_CM_CODATA,
            UnitMode::Rounded => HBAR_C_EV_CM_ROUNDED,
        };
        UnitContext { mode, hbar_c_ev_cm }
    }

    pub fn codata() -> Self {
        UnitContext::new(UnitMode::Codata)
    }

    pub fn rounded() -> Self {
        UnitContext::new(UnitMode::Rounded)
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    pub fn hbar_c_ev_cm(&self) -> f64 {
        self.hbar_c_ev_cm
    }

    /// Length in cm to eV⁻¹.
    pub fn cm(&self, x: f64) -> f64 {
        x / self.hbar_c_ev_cm
    }

    pub fn um(&self, x: f64) -> f64 {
        self.cm(x * 1e-4)
    }

    pub fn nm(&self, x: f64) -> f64 {
        self.cm(x * 1e-7)
    }

    /// eV⁻¹ to cm.
    pub fn to_cm(&self, length: f64) -> f64 {
        length * self.hbar_c_ev_cm
    }

    pub fn to_um(&self, length: f64) -> f64 {
        self.to_cm(length) * 1e4
    }

    /// Temperature in K to eV.
    pub fn kelvin(&self, t: f64) -> f64 {
        t * K_B_EV_PER_K
    }

    pub fn to_kelvin(&self, t: f64) -> f64 {
        t / K_B_EV_PER_K
    }

    /// Mass density in g/cm³ to eV⁴.
    pub fn g_per_cm3(&self, rho: f64) -> f64 {
        rho * GRAM_EV * self.hbar_c_ev_cm.powi(3)
    }

    /// Mass in atomic mass units to eV.
    pub fn amu(&self, m: f64) -> f64 {
        m * AMU_EV
    }

    /// Torque (or energy) in eV to N·m.
    pub fn torque_si(&self, tau: f64) -> f64 {
        tau * JOULE_PER_EV
    }

    /// Time in eV⁻¹ to seconds.
    pub fn time_si(&self, t: f64) -> f64 {
        t * HBAR_EV_S
    }

    /// Rate or angular frequency in eV to s⁻¹.
    pub fn rate_si(&self, w: f64) -> f64 {
        w / HBAR_EV_S
    }

    /// Angular acceleration in eV² to s⁻².
    pub fn angular_acceleration_si(&self, a: f64) -> f64 {
        a / (HBAR_EV_S * HBAR_EV_S)
    }

    /// Power in eV² to W.
    pub fn power_si(&self, p: f64) -> f64 {
        p * JOULE_PER_EV / HBAR_EV_S
    }

    /// Force in eV² to N.
    pub fn force_si(&self, f: f64) -> f64 {
        f * JOULE_PER_EV / (self.hbar_c_ev_cm * 1e-2)
    }
}
