//! Two-part chiral bodies, their geometric factors J_AB(ω) and moments of
//! inertia.
//!
//! Lengths are in eV⁻¹, mass densities in eV⁴. Every body lies in the
//! xy-plane and the torque is taken about the z-axis through the origin.

mod factors;
mod radial;
mod voxels;

pub use factors::{
    allen_wrench_factor, allen_wrench_hat, allen_wrench_hat_cartesian, allen_wrench_hat_polar,
    allen_wrench_large_asymptote, allen_wrench_small_asymptote, dual_flag_factor, dual_flag_hat,
    dual_flag_hat_cartesian, dual_flag_hat_polar, dual_flag_large_asymptote,
    dual_flag_small_asymptote, voxel_factor, SMALL_BODY_EXTENT,
};
pub use radial::{phi_integral, psi_integral, TailMethod, TAIL_OFFSET};
pub use voxels::VoxelPairBody;

use crate::quadrature::{PairwiseConfig, QuadratureConfig, Voxel};
use crate::{Error, Result};

/// Numerical settings for the geometric factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub quad: QuadratureConfig,
    pub tail: TailMethod,
    pub pairwise: PairwiseConfig,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            quad: QuadratureConfig {
                rel_tol: 1e-12,
                abs_tol: 1e-300,
                max_subdivisions: 5000,
                ..QuadratureConfig::default()
            },
            tail: TailMethod::default(),
            pairwise: PairwiseConfig::default(),
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!(
            "{name} must be non-negative and finite, got {x}"
        )))
    }
}

/// Number of cells of width close to `pitch` covering `length`.
fn cells(length: f64, pitch: f64) -> Result<usize> {
    positive("voxel pitch", pitch)?;
    let n = (length / pitch).round().max(1.0);
    if n > 1e7 {
        return Err(Error::Geometry(format!(
            "pitch {pitch} is too fine for length {length}"
        )));
    }
    Ok(n as usize)
}

/// Dual Allen wrench: a shaft A along y over [−a, a] with tags B of length b
/// from (0, −a) to (b, −a) and from (0, a) to (−b, a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllenWrench {
    pub a: f64,
    pub b: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub rho_a: f64,
    pub rho_b: f64,
}

impl AllenWrench {
    pub fn new(a: f64, b: f64, s_a: f64, s_b: f64, rho_a: f64, rho_b: f64) -> Result<Self> {
        positive("a", a)?;
        positive("b", b)?;
        positive("S_A", s_a)?;
        positive("S_B", s_b)?;
        non_negative("rho_A", rho_a)?;
        non_negative("rho_B", rho_b)?;
        Ok(AllenWrench {
            a,
            b,
            s_a,
            s_b,
            rho_a,
            rho_b,
        })
    }

    /// Wires of circular cross-section with the given radii.
    pub fn with_wire_radii(
        a: f64,
        b: f64,
        r_a: f64,
        r_b: f64,
        rho_a: f64,
        rho_b: f64,
    ) -> Result<Self> {
        let pi = std::f64::consts::PI;
        AllenWrench::new(a, b, pi * r_a * r_a, pi * r_b * r_b, rho_a, rho_b)
    }

    /// ρ_A S_A (2/3) a³ + ρ_B S_B 2b (a² + b²/3).
    pub fn moment_of_inertia(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        self.rho_a * self.s_a * 2.0 / 3.0 * a.powi(3)
            + self.rho_b * self.s_b * 2.0 * b * (a * a + b * b / 3.0)
    }

    /// Thin-wire caveats for a metal of the given skin depth.
    pub fn warnings(&self, skin_depth: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (name, s) in [("A", self.s_a), ("B", self.s_b)] {
            if s.sqrt() > skin_depth {
                out.push(format!(
                    "wire {name} is thicker than the skin depth (sqrt(S) = {:.3e} > {skin_depth:.3e} 1/eV)",
                    s.sqrt()
                ));
            }
        }
        out
    }

    /// Thin-wire voxels: line cells along the shaft and the two tags.
    pub fn voxelize(&self, pitch: f64) -> Result<(Vec<Voxel>, Vec<Voxel>)> {
        let na = cells(2.0 * self.a, pitch)?;
        let ha = 2.0 * self.a / na as f64;
        let shaft = (0..na)
            .map(|i| Voxel {
                center: [0.0, -self.a + (i as f64 + 0.5) * ha, 0.0],
                volume: self.s_a * ha,
                extent: [0.0, ha, 0.0],
            })
            .collect();
        let nb = cells(self.b, pitch)?;
        let hb = self.b / nb as f64;
        let mut tags = Vec::with_capacity(2 * nb);
        for i in 0..nb {
            let x = (i as f64 + 0.5) * hb;
            tags.push(Voxel {
                center: [x, -self.a, 0.0],
                volume: self.s_b * hb,
                extent: [hb, 0.0, 0.0],
            });
            tags.push(Voxel {
                center: [-x, self.a, 0.0],
                volume: self.s_b * hb,
                extent: [hb, 0.0, 0.0],
            });
        }
        Ok((shaft, tags))
    }
}

/// Dual flag: a wire A along y over [−a, a] carrying sheets B of thickness
/// L_B over x ∈ [−b, 0], y ∈ [0, a] and x ∈ [0, b], y ∈ [−a, 0].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualFlag {
    pub a: f64,
    pub b: f64,
    pub s_a: f64,
    pub l_b: f64,
    pub rho_a: f64,
    pub rho_b: f64,
}

impl DualFlag {
    pub fn new(a: f64, b: f64, s_a: f64, l_b: f64, rho_a: f64, rho_b: f64) -> Result<Self> {
        positive("a", a)?;
        positive("b", b)?;
        positive("S_A", s_a)?;
        positive("L_B", l_b)?;
        non_negative("rho_A", rho_a)?;
        non_negative("rho_B", rho_b)?;
        Ok(DualFlag {
            a,
            b,
            s_a,
            l_b,
            rho_a,
            rho_b,
        })
    }

    pub fn with_wire_radius(
        a: f64,
        b: f64,
        r_a: f64,
        l_b: f64,
        rho_a: f64,
        rho_b: f64,
    ) -> Result<Self> {
        DualFlag::new(a, b, std::f64::consts::PI * r_a * r_a, l_b, rho_a, rho_b)
    }

    /// (2/3) a [ρ_A S_A a² + ρ_B L_B b (a² + b²)].
    pub fn moment_of_inertia(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        2.0 / 3.0
            * a
            * (self.rho_a * self.s_a * a * a + self.rho_b * self.l_b * b * (a * a + b * b))
    }

    pub fn warnings(&self, skin_depth: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.s_a.sqrt() > skin_depth {
            out.push(format!(
                "wire A is thicker than the skin depth (sqrt(S) = {:.3e} > {skin_depth:.3e} 1/eV)",
                self.s_a.sqrt()
            ));
        }
        if self.l_b > 0.1 * self.b.min(self.a) {
            out.push(format!(
                "flag thickness {:.3e} is not small against its width {:.3e}",
                self.l_b, self.b
            ));
        }
        out
    }

    /// Line cells along the wire and square sheet cells on the flags.
    pub fn voxelize(&self, pitch: f64) -> Result<(Vec<Voxel>, Vec<Voxel>)> {
        let na = cells(2.0 * self.a, pitch)?;
        let ha = 2.0 * self.a / na as f64;
        let wire = (0..na)
            .map(|i| Voxel {
                center: [0.0, -self.a + (i as f64 + 0.5) * ha, 0.0],
                volume: self.s_a * ha,
                extent: [0.0, ha, 0.0],
            })
            .collect();
        let nx = cells(self.b, pitch)?;
        let ny = cells(self.a, pitch)?;
        let hx = self.b / nx as f64;
        let hy = self.a / ny as f64;
        let mut flags = Vec::with_capacity(2 * nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                let x = (i as f64 + 0.5) * hx;
                let y = (j as f64 + 0.5) * hy;
                let cell = |cx, cy| Voxel {
                    center: [cx, cy, 0.0],
                    volume: self.l_b * hx * hy,
                    extent: [hx, hy, 0.0],
                };
                flags.push(cell(-x, y));
                flags.push(cell(x, -y));
            }
        }
        Ok((wire, flags))
    }
}

/// Any of the supported bodies.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    AllenWrench(AllenWrench),
    DualFlag(DualFlag),
    Voxels(VoxelPairBody),
}

impl Body {
    pub fn moment_of_inertia(&self) -> f64 {
        match self {
            Body::AllenWrench(g) => g.moment_of_inertia(),
            Body::DualFlag(g) => g.moment_of_inertia(),
            Body::Voxels(g) => g.moment_of_inertia(),
        }
    }

    /// z-component of J_AB(ω).
    pub fn geometric_factor(&self, omega: f64, cfg: &GeometryConfig) -> Result<f64> {
        match self {
            Body::AllenWrench(g) => allen_wrench_factor(g, omega, cfg),
            Body::DualFlag(g) => dual_flag_factor(g, omega, cfg),
            Body::Voxels(g) => Ok(voxel_factor(g, omega, cfg)?.value[2]),
        }
    }

    /// Half-length of the A part, the length that sets the size regime.
    pub fn half_length(&self) -> f64 {
        match self {
            Body::AllenWrench(g) => g.a,
            Body::DualFlag(g) => g.a,
            Body::Voxels(g) => g.half_extent(),
        }
    }

    pub fn warnings(&self, skin_depth: f64) -> Vec<String> {
        match self {
            Body::AllenWrench(g) => g.warnings(skin_depth),
            Body::DualFlag(g) => g.warnings(skin_depth),
            Body::Voxels(_) => Vec::new(),
        }
    }

    /// Mass density of the A part.
    pub fn metal_density(&self) -> f64 {
        match self {
            Body::AllenWrench(g) => g.rho_a,
            Body::DualFlag(g) => g.rho_a,
            Body::Voxels(g) => g.rho_a,
        }
    }

    /// Half-length and cross section of the metal wire, which set the
    /// radiated power.
    pub fn metal_cross_section(&self) -> Option<(f64, f64)> {
        match self {
            Body::AllenWrench(g) => Some((g.a, g.s_a)),
            Body::DualFlag(g) => Some((g.a, g.s_a)),
            Body::Voxels(_) => None,
        }
    }
}
