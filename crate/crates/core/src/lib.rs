//! Spontaneous quantum-vacuum torques on inhomogeneous chiral bodies that are
//! out of thermal equilibrium with their blackbody environment.
//!
//! The crate works in natural units (ħ = c = ε₀ = k_B = 1) with every energy,
//! frequency and temperature expressed in eV and every length in eV⁻¹.
//! [`units::UnitContext`] converts laboratory quantities at the boundary.
//!
//! Module map:
//!
//! - [`specfun`]: the torque kernel φ(v), Δ(v), sine integral, digamma and the
//!   thermal integrals fₙ(t).
//! - [`quadrature`]: adaptive Gauss–Kronrod integration, semi-infinite
//!   truncation and the voxel pair-sum oracle.
//! - [`materials`]: susceptibility models, X_AB(ω) and occupation factors.
//! - [`geometry`]: the dual Allen wrench, dual flag and voxel bodies with
//!   their geometric factors and moments of inertia.
//! - [`observables`]: torques, radiated power, cooling time and terminal
//!   angular velocity.
//! - [`sweeps`]: tabulated parameter sweeps shared by the CLI and the
//!   regression tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod geometry;
pub mod materials;
pub mod observables;
pub mod quadrature;
pub mod specfun;
pub mod sweeps;
pub mod units;

pub use error::{Error, Result};
pub use exec::Execution;
