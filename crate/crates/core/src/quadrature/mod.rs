//! Adaptive Gauss–Kronrod quadrature, Gauss–Legendre rules and pairwise
//! voxel sums.

mod adaptive;
mod legendre;
mod pairwise;
mod semi_infinite;

pub use adaptive::{
    integrate_1d, integrate_1d_sampled, integrate_1d_with_breaks, try_integrate_1d,
    try_integrate_1d_with_breaks, WeightedSample,
};
pub use legendre::{composite_gauss_legendre, gauss_legendre};
pub use pairwise::{
    check_disjoint, integrate_pairwise_volumes, pair_sum, PairwiseConfig, VectorEstimate, Voxel,
};
pub use semi_infinite::{
    integrate_semi_infinite, integrate_semi_infinite_sampled, integrate_semi_infinite_scaled,
    scan_cutoff, try_integrate_semi_infinite,
};

use crate::{Error, Execution, Result};

/// Tolerances shared by the one-dimensional integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the number of Gauss–Kronrod segments.
    pub max_subdivisions: usize,
    /// A semi-infinite range is truncated once the integrand magnitude
    /// falls below this fraction of its peak.
    pub semi_infinite_cutoff_ratio: f64,
    pub execution: Execution,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            semi_infinite_cutoff_ratio: 1e-14,
            execution: Execution::default(),
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be non-negative, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be positive".into(),
            ));
        }
        let c = self.semi_infinite_cutoff_ratio;
        if !(c > 0.0 && c <= 1e-6) {
            return Err(Error::InvalidParameter(format!(
                "semi_infinite_cutoff_ratio must lie in (0, 1e-6], got {c}"
            )));
        }
        Ok(())
    }

    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
    /// False when the subdivision budget ran out before the tolerance was met.
    pub converged: bool,
}

impl IntegralEstimate {
    pub fn zero() -> Self {
        IntegralEstimate {
            value: 0.0,
            err_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of independent estimates, in order.
    pub fn sum<I: IntoIterator<Item = IntegralEstimate>>(parts: I) -> Self {
        parts
            .into_iter()
            .fold(IntegralEstimate::zero(), |acc, p| IntegralEstimate {
                value: acc.value + p.value,
                err_estimate: acc.err_estimate + p.err_estimate,
                evaluations: acc.evaluations + p.evaluations,
                converged: acc.converged && p.converged,
            })
    }

    pub fn scaled(self, factor: f64) -> Self {
        IntegralEstimate {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.abs(),
            ..self
        }
    }
}
