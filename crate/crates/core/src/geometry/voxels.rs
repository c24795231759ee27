use std::io::Read;

use crate::quadrature::{check_disjoint, Voxel};
use crate::units::UnitContext;
use crate::{Error, Execution, Result};

/// A body given as two disjoint voxel sets of homogeneous material.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelPairBody {
    pub voxels_a: Vec<Voxel>,
    pub voxels_b: Vec<Voxel>,
    pub rho_a: f64,
    pub rho_b: f64,
}

impl VoxelPairBody {
    pub fn new(voxels_a: Vec<Voxel>, voxels_b: Vec<Voxel>, rho_a: f64, rho_b: f64) -> Result<Self> {
        if voxels_a.is_empty() || voxels_b.is_empty() {
            return Err(Error::Geometry("both parts need at least one voxel".into()));
        }
        for v in voxels_a.iter().chain(&voxels_b) {
            if !v.center.iter().all(|c| c.is_finite()) || !(v.volume > 0.0 && v.volume.is_finite())
            {
                return Err(Error::Geometry(format!(
                    "voxel at {:?} needs a finite center and positive volume",
                    v.center
                )));
            }
        }
        if !(rho_a >= 0.0 && rho_b >= 0.0) {
            return Err(Error::Geometry("densities must be non-negative".into()));
        }
        check_disjoint(&voxels_a, &voxels_b, Execution::default())?;
        Ok(VoxelPairBody {
            voxels_a,
            voxels_b,
            rho_a,
            rho_b,
        })
    }

    /// Reads `x,y,z,volume,part` rows with lengths in μm and part A or B.
    /// Each row becomes a cube of the given volume.
    pub fn from_csv<R: Read>(
        reader: R,
        units: &UnitContext,
        rho_a: f64,
        rho_b: f64,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let expected = ["x", "y", "z", "volume", "part"];
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {}", expected.join(",")),
            });
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            let num = |i: usize| -> Result<f64> {
                let raw = rec.get(i).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("missing {}", expected[i]),
                })?;
                let x: f64 = raw.parse().map_err(|e| Error::Parse {
                    line,
                    message: format!("{}: {e}", expected[i]),
                })?;
                if !x.is_finite() {
                    return Err(Error::Parse {
                        line,
                        message: format!("{} is not finite", expected[i]),
                    });
                }
                Ok(x)
            };
            let center = [units.um(num(0)?), units.um(num(1)?), units.um(num(2)?)];
            let vol_um3 = num(3)?;
            if vol_um3 <= 0.0 {
                return Err(Error::Parse {
                    line,
                    message: "volume must be positive".into(),
                });
            }
            let volume = units.um(1.0).powi(3) * vol_um3;
            let voxel = Voxel::cube(center, volume);
            match rec.get(4) {
                Some("A") => a.push(voxel),
                Some("B") => b.push(voxel),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("part must be A or B, got {:?}", other.unwrap_or("")),
                    })
                }
            }
        }
        VoxelPairBody::new(a, b, rho_a, rho_b)
    }

    /// Σ ρ V (x² + y²).
    pub fn moment_of_inertia(&self) -> f64 {
        let part = |vs: &[Voxel], rho: f64| -> f64 {
            vs.iter()
                .map(|v| rho * v.volume * (v.center[0].powi(2) + v.center[1].powi(2)))
                .sum()
        };
        part(&self.voxels_a, self.rho_a) + part(&self.voxels_b, self.rho_b)
    }

    /// Largest distance of a part-A cell boundary from the origin.
    pub fn half_extent(&self) -> f64 {
        self.voxels_a
            .iter()
            .map(|v| {
                let r = v.center.iter().map(|c| c * c).sum::<f64>().sqrt();
                r + 0.5 * v.extent.iter().map(|e| e * e).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// The mirror image under x → −x.
    pub fn mirrored_x(&self) -> Self {
        let flip = |vs: &[Voxel]| -> Vec<Voxel> {
            vs.iter()
                .map(|v| Voxel {
                    center: [-v.center[0], v.center[1], v.center[2]],
                    ..*v
                })
                .collect()
        };
        VoxelPairBody {
            voxels_a: flip(&self.voxels_a),
            voxels_b: flip(&self.voxels_b),
            ..*self
        }
    }

    pub fn swapped(&self) -> Self {
        VoxelPairBody {
            voxels_a: self.voxels_b.clone(),
            voxels_b: self.voxels_a.clone(),
            rho_a: self.rho_b,
            rho_b: self.rho_a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "x,y,z,volume,part\n0,0.5,0,0.001,A\n0,-0.5,0,0.001,A\n0.5,1,0,0.001,B\n";

    #[test]
    fn parses_parts() {
        let body =
            VoxelPairBody::from_csv(GOOD.as_bytes(), &UnitContext::codata(), 1.0, 1.0).unwrap();
        assert_eq!(body.voxels_a.len(), 2);
        assert_eq!(body.voxels_b.len(), 1);
    }

    #[test]
    fn bad_part_label_reports_line() {
        let text = "x,y,z,volume,part\n0,0.5,0,0.001,A\n0.5,1,0,0.001,C\n";
        match VoxelPairBody::from_csv(text.as_bytes(), &UnitContext::codata(), 1.0, 1.0) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_number_reports_line() {
        let text = "x,y,z,volume,part\n0,0.5,0,0.001,A\n0.5,one,0,0.001,B\n";
        assert!(matches!(
            VoxelPairBody::from_csv(text.as_bytes(), &UnitContext::codata(), 1.0, 1.0),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn overlapping_parts_are_a_geometry_error() {
        let text = "x,y,z,volume,part\n0,0,0,1,A\n0.2,0,0,1,B\n";
        assert!(matches!(
            VoxelPairBody::from_csv(text.as_bytes(), &UnitContext::codata(), 1.0, 1.0),
            Err(Error::Geometry(_))
        ));
    }
}
