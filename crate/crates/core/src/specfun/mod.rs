//! Special functions and kernels.

mod digamma;
mod kernel;
mod sici;
mod thermal;

pub use digamma::digamma;
pub(crate) use kernel::phi_ratio_unchecked;
pub use kernel::{
    delta, delta_kernel, phi, phi_kernel, phi_ratio, phi_remainder, phi_series_coefficients,
    KernelValue, PHI_SERIES_SWITCHOVER, SERIES_MAX_POWER,
};
pub use sici::{cosine_integral, sici, sine_integral};
pub use thermal::{thermal_f, thermal_integral, zeta_even, ThermalFunctionOrder, MAX_ZETA_INDEX};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
