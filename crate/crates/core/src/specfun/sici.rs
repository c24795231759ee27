//! Sine and cosine integrals.

use num_complex::Complex64;

use crate::{Error, Result};

use super::EULER_GAMMA;

const SERIES_LIMIT: f64 = 4.0;

/// Si(x) = ∫₀ˣ sin t / t dt for x ≥ 0.
pub fn sine_integral(x: f64) -> Result<f64> {
    sici(x).map(|(si, _)| si)
}

/// Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1)/t dt for x > 0.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("cosine_integral", x));
    }
    sici(x).map(|(_, ci)| ci)
}

/// Both integrals at once; Ci(0) is reported as −∞.
pub fn sici(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain("sici", x));
    }
    if x == 0.0 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    if x <= SERIES_LIMIT {
        Ok(series(x))
    } else {
        Ok(continued_fraction(x))
    }
}

fn series(x: f64) -> (f64, f64) {
    let x2 = x * x;
    // Si: Σ (−1)^k x^(2k+1) / ((2k+1)(2k+1)!)
    let mut term = x; // x^(2k+1)/(2k+1)!
    let mut si = x;
    // Ci − γ − ln x: Σ_{k≥1} (−1)^k x^(2k) / (2k (2k)!)
    let mut cterm = 1.0; // x^(2k)/(2k)!
    let mut ci = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        cterm *= -x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
        let dc = cterm / (2.0 * kf);
        ci += dc;
        term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
        let ds = term / (2.0 * kf + 1.0);
        si += ds;
        if ds.abs() < 1e-17 * si.abs() && dc.abs() < 1e-17 * (ci.abs() + 1.0) {
            break;
        }
    }
    (si, EULER_GAMMA + x.ln() + ci)
}

/// Lentz evaluation of E₁(ix), from which Ci(x) = −Re E₁(ix) and
/// Si(x) = π/2 + Im E₁(ix).
fn continued_fraction(x: f64) -> (f64, f64) {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..1000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let (s, co) = x.sin_cos();
    h *= Complex64::new(co, -s);
    (std::f64::consts::FRAC_PI_2 + h.im, -h.re)
}
