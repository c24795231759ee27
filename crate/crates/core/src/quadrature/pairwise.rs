use crate::{Error, Execution, Result};

/// A cell of a discretised body: midpoint, volume and box side lengths.
///
/// Zero extents mark collapsed directions, e.g. a wire voxel has two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Voxel {
    pub center: [f64; 3],
    pub volume: f64,
    pub extent: [f64; 3],
}

impl Voxel {
    /// Cube of the given volume.
    pub fn cube(center: [f64; 3], volume: f64) -> Self {
        let side = volume.cbrt();
        Voxel {
            center,
            volume,
            extent: [side; 3],
        }
    }

    /// Halves the voxel along every non-collapsed direction.
    pub fn subdivide(&self) -> Vec<Voxel> {
        let axes: Vec<usize> = (0..3).filter(|&i| self.extent[i] > 0.0).collect();
        let count = 1usize << axes.len();
        let mut extent = self.extent;
        for &i in &axes {
            extent[i] *= 0.5;
        }
        (0..count)
            .map(|mask| {
                let mut center = self.center;
                for (bit, &i) in axes.iter().enumerate() {
                    let sign = if mask >> bit & 1 == 1 { 0.5 } else { -0.5 };
                    center[i] += sign * extent[i];
                }
                Voxel {
                    center,
                    volume: self.volume / count as f64,
                    extent,
                }
            })
            .collect()
    }

    fn overlaps(&self, other: &Voxel) -> bool {
        (0..3).all(|i| {
            let d = (self.center[i] - other.center[i]).abs();
            let half = 0.5 * (self.extent[i] + other.extent[i]);
            if half > 0.0 {
                d < half * (1.0 - 1e-9)
            } else {
                d <= 1e-12 * (self.center[i].abs() + other.center[i].abs())
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Estimate the discretisation error by repeating the sum with every
    /// voxel halved.
    pub refine: bool,
    /// Refinement is skipped when the halved sum would exceed this many
    /// pairs.
    pub max_refined_pairs: usize,
    pub execution: Execution,
}

impl Default for PairwiseConfig {
    fn default() -> Self {
        PairwiseConfig {
            rel_tol: 1e-3,
            abs_tol: 0.0,
            refine: true,
            max_refined_pairs: 50_000_000,
            execution: Execution::default(),
        }
    }
}

/// Vector-valued result of a pair sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorEstimate {
    pub value: [f64; 3],
    /// Componentwise error estimate; infinite when no refinement was done.
    pub err_estimate: [f64; 3],
    pub pairs: usize,
    pub converged: bool,
}

/// Fails with a geometry error naming the first pair of overlapping voxels.
pub fn check_disjoint(a: &[Voxel], b: &[Voxel], exec: Execution) -> Result<()> {
    let hits = exec.map_slice(a, |va| b.iter().position(|vb| va.overlaps(vb)));
    for (i, hit) in hits.into_iter().enumerate() {
        if let Some(j) = hit {
            return Err(Error::Geometry(format!(
                "voxel {i} of part A at {:?} overlaps voxel {j} of part B at {:?}",
                a[i].center, b[j].center
            )));
        }
    }
    Ok(())
}

/// Σᵢⱼ k(rᵢ, rⱼ) Vᵢ Vⱼ, with rows in parallel and a fixed summation order.
pub fn pair_sum<K>(a: &[Voxel], b: &[Voxel], kernel: &K, exec: Execution) -> [f64; 3]
where
    K: Fn([f64; 3], [f64; 3]) -> [f64; 3] + Sync,
{
    let rows = exec.map_slice(a, |va| {
        let mut acc = [0.0; 3];
        for vb in b {
            let k = kernel(va.center, vb.center);
            let w = va.volume * vb.volume;
            for c in 0..3 {
                acc[c] += k[c] * w;
            }
        }
        acc
    });
    let mut total = [0.0; 3];
    for r in rows {
        for c in 0..3 {
            total[c] += r[c];
        }
    }
    total
}

/// Midpoint-rule double volume integral ∫_A ∫_B k(r, r′) dV dV′ over two
/// disjoint voxel sets.
pub fn integrate_pairwise_volumes<K>(
    a: &[Voxel],
    b: &[Voxel],
    kernel: K,
    cfg: &PairwiseConfig,
) -> Result<VectorEstimate>
where
    K: Fn([f64; 3], [f64; 3]) -> [f64; 3] + Sync,
{
    if a.is_empty() || b.is_empty() {
        return Err(Error::Geometry("both parts need at least one voxel".into()));
    }
    if let Some(v) = a
        .iter()
        .chain(b)
        .find(|v| !(v.volume > 0.0 && v.volume.is_finite()))
    {
        return Err(Error::Geometry(format!(
            "voxel at {:?} has non-positive volume",
            v.center
        )));
    }
    check_disjoint(a, b, cfg.execution)?;
    let coarse = pair_sum(a, b, &kernel, cfg.execution);
    let fine_a: Vec<Voxel> = a.iter().flat_map(Voxel::subdivide).collect();
    let fine_b: Vec<Voxel> = b.iter().flat_map(Voxel::subdivide).collect();
    let fine_pairs = fine_a.len().saturating_mul(fine_b.len());
    if !cfg.refine || fine_pairs > cfg.max_refined_pairs {
        return Ok(VectorEstimate {
            value: coarse,
            err_estimate: [f64::INFINITY; 3],
            pairs: a.len() * b.len(),
            converged: false,
        });
    }
    let fine = pair_sum(&fine_a, &fine_b, &kernel, cfg.execution);
    let mut err = [0.0; 3];
    let mut converged = true;
    let scale = fine.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for c in 0..3 {
        // midpoint error is O(h²), so the halved sum carries a third of the difference
        err[c] = (fine[c] - coarse[c]).abs() / 3.0;
        converged &= err[c] <= cfg.abs_tol.max(cfg.rel_tol * scale);
    }
    Ok(VectorEstimate {
        value: fine,
        err_estimate: err,
        pairs: a.len() * b.len() + fine_pairs,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(x0: f64, n: usize, h: f64) -> Vec<Voxel> {
        (0..n)
            .map(|i| Voxel {
                center: [x0 + (i as f64 + 0.5) * h, 0.0, 0.0],
                volume: h,
                extent: [h, 0.0, 0.0],
            })
            .collect()
    }

    #[test]
    fn subdivision_conserves_volume_and_centroid() {
        let v = Voxel {
            center: [1.0, 2.0, 3.0],
            volume: 8.0,
            extent: [2.0, 4.0, 0.0],
        };
        let kids = v.subdivide();
        assert_eq!(kids.len(), 4);
        assert_relative_eq!(kids.iter().map(|k| k.volume).sum::<f64>(), 8.0);
        for c in 0..3 {
            let mean = kids.iter().map(|k| k.center[c]).sum::<f64>() / 4.0;
            assert_relative_eq!(mean, v.center[c]);
        }
    }

    #[test]
    fn separable_double_integral() {
        // ∫₀¹∫₂³ x y dy dx = 1/2 · 5/2
        let a = grid(0.0, 20, 0.05);
        let b = grid(2.0, 20, 0.05);
        let est = integrate_pairwise_volumes(
            &a,
            &b,
            |r, s| [r[0] * s[0], 0.0, 0.0],
            &PairwiseConfig::default(),
        )
        .unwrap();
        assert_relative_eq!(est.value[0], 1.25, max_relative = 1e-12);
    }

    #[test]
    fn error_estimate_brackets_truth() {
        let a = grid(0.0, 8, 0.125);
        let b = grid(1.5, 8, 0.125);
        let k = |r: [f64; 3], s: [f64; 3]| [1.0 / (s[0] - r[0]).powi(2), 0.0, 0.0];
        let est = integrate_pairwise_volumes(&a, &b, k, &PairwiseConfig::default()).unwrap();
        // ∫₀¹∫_{1.5}^{2.5} (y − x)⁻² = ln(1.5 · 1.5 / (0.5 · 2.5))
        let exact = (2.25f64 / 1.25).ln();
        assert!((est.value[0] - exact).abs() < 3.0 * est.err_estimate[0]);
    }

    #[test]
    fn overlap_is_detected() {
        let a = grid(0.0, 4, 0.25);
        let b = grid(0.9, 4, 0.25);
        let err = integrate_pairwise_volumes(&a, &b, |_, _| [1.0; 3], &PairwiseConfig::default())
            .unwrap_err();
        assert!(matches!(err, Error::Geometry(_)));
    }

    #[test]
    fn strategies_agree_bitwise() {
        let a = grid(0.0, 30, 0.1);
        let b = grid(3.0, 30, 0.1);
        let k = |r: [f64; 3], s: [f64; 3]| [(r[0] * s[0]).sin(), 0.0, 0.0];
        assert_eq!(
            pair_sum(&a, &b, &k, Execution::Parallel),
            pair_sum(&a, &b, &k, Execution::Sequential)
        );
    }
}
