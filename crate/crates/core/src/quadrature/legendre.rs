use std::f64::consts::PI;

use crate::{Error, Result};

/// n-point Gauss–Legendre nodes and weights on [a, b], ascending.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "Gauss–Legendre rule needs n ≥ 1".into(),
        ));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(
            "Gauss–Legendre limits must be finite".into(),
        ));
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            z = 0.0;
            dp = 1.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = c - h * z;
        x[n - 1 - i] = c + h * z;
        w[i] = h * wi;
        w[n - 1 - i] = h * wi;
    }
    Ok((x, w))
}

/// Composite rule: `per_panel` Gauss points on each panel between
/// consecutive breakpoints.
pub fn composite_gauss_legendre(breaks: &[f64], per_panel: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (ref_x, ref_w) = gauss_legendre(per_panel, -1.0, 1.0)?;
    let mut x = Vec::with_capacity(per_panel * breaks.len());
    let mut w = Vec::with_capacity(per_panel * breaks.len());
    for p in breaks.windows(2) {
        let c = 0.5 * (p[0] + p[1]);
        let h = 0.5 * (p[1] - p[0]);
        for (xi, wi) in ref_x.iter().zip(&ref_w) {
            x.push(c + h * xi);
            w.push(h * wi);
        }
    }
    Ok((x, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_for_high_polynomials() {
        for n in [1usize, 2, 5, 20, 40] {
            let (x, w) = gauss_legendre(n, 0.0, 2.0).unwrap();
            let deg = 2 * n as i32 - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            assert_relative_eq!(
                s,
                2f64.powi(deg + 1) / (deg + 1) as f64,
                max_relative = 1e-13
            );
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn composite_covers_all_panels() {
        let (x, w) = composite_gauss_legendre(&[0.0, 1.0, 3.0], 8).unwrap();
        assert_eq!(x.len(), 16);
        assert_relative_eq!(w.iter().sum::<f64>(), 3.0, max_relative = 1e-14);
    }
}
