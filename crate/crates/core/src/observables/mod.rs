//! Physical outputs: torques, drag force, radiated power, cooling time and
//! terminal angular velocity.
//!
//! Each observable is a closed-form prefactor times a dimensionless
//! integral, and results carry both so that either can be checked on its
//! own.

mod dynamics;
mod heat;
mod torque;

pub use dynamics::{
    omega_hat_limit, terminal_angular_velocity, DynamicsConfig, DynamicsTrace, Regime, TraceSample,
};
pub use heat::{
    check_cooling_path, cooling_hat, cooling_prefactor, cooling_time, einstein_hopf_force,
    power_hat, radiated_power, CoolingResult, DulongPetit, ForceResult, PowerResult,
};
pub use torque::{
    large_limit_prefactor, large_limit_tau_hat, small_limit_prefactor, small_limit_tau_hat,
    torque_first_order_nonreciprocal, torque_large_limit, torque_second_order, torque_small_limit,
    SpectralPoint, TorqueResult,
};

use crate::geometry::GeometryConfig;
use crate::quadrature::QuadratureConfig;
use crate::units::UnitContext;

/// Settings shared by the spectral integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueConfig {
    pub spectral: QuadratureConfig,
    pub geometry: GeometryConfig,
    pub units: UnitContext,
}

impl Default for TorqueConfig {
    fn default() -> Self {
        TorqueConfig {
            spectral: QuadratureConfig {
                rel_tol: 1e-8,
                abs_tol: 1e-300,
                ..QuadratureConfig::default()
            },
            geometry: GeometryConfig::default(),
            units: UnitContext::default(),
        }
    }
}

impl TorqueConfig {
    pub fn with_units(mut self, units: UnitContext) -> Self {
        self.units = units;
        self
    }
}
