//! The radial integrals Φ(α, β, n) = ∫ φ(v)/vⁿ dv and
//! Ψ(α, β, n) = ∫ φ(v)/vⁿ √(1 − α²/v²) dv over [α, β].
//!
//! Ranges of a few dozen units are integrated adaptively on panels no wider
//! than half a period of the cos 2v, sin 2v factors. Long ranges switch to a
//! tail treatment beyond v = α + [`TAIL_OFFSET`]: the non-oscillatory part
//! of φ is integrated directly, and the oscillatory part, written as
//! Re[A(v) e^{2iv}], by repeated integration by parts with the derivatives
//! of A taken from its Taylor jet.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quadrature::{try_integrate_1d_with_breaks, IntegralEstimate, QuadratureConfig};
use crate::specfun::phi_ratio_unchecked;
use crate::{Error, Result};

/// Distance from the nearest singularity of the amplitude at which the
/// integration-by-parts series becomes accurate to rounding.
pub const TAIL_OFFSET: f64 = 40.0;

/// The tail treatment is used only when it saves at least this much range.
const TAIL_MIN_SPAN: f64 = 60.0;

const JET_ORDER: usize = 32;

/// How the far part of a long radial integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailMethod {
    /// Asymptotic integration by parts beyond the tail offset.
    #[default]
    Asymptotic,
    /// Plain adaptive quadrature over the whole range.
    Quadrature,
}

fn check_limits(name: &str, alpha: f64, beta: f64, n: u32) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite() && beta.is_finite() && beta >= alpha) {
        return Err(Error::InvalidParameter(format!(
            "{name} needs 0 ≤ α ≤ β, got α = {alpha}, β = {beta}"
        )));
    }
    if !(4..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "{name} power must lie in 4..=8, got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn panel_breaks(a: f64, b: f64) -> Vec<f64> {
    let count = ((b - a) / (0.5 * PI)).ceil().max(1.0) as usize;
    let mut breaks: Vec<f64> = (0..count)
        .map(|i| a + (b - a) * i as f64 / count as f64)
        .collect();
    breaks.push(b);
    breaks
}

/// Φ(α, β, n) = ∫_α^β φ(v)/vⁿ dv, 4 ≤ n ≤ 8.
pub fn phi_integral(
    alpha: f64,
    beta: f64,
    n: u32,
    cfg: &QuadratureConfig,
    tail: TailMethod,
) -> Result<IntegralEstimate> {
    check_limits("phi_integral", alpha, beta, n)?;
    radial(0.0, alpha, beta, n, cfg, tail)
}

/// Ψ(α, β, n) = ∫_α^β φ(v)/vⁿ √(1 − α²/v²) dv, 4 ≤ n ≤ 8.
pub fn psi_integral(
    alpha: f64,
    beta: f64,
    n: u32,
    cfg: &QuadratureConfig,
    tail: TailMethod,
) -> Result<IntegralEstimate> {
    check_limits("psi_integral", alpha, beta, n)?;
    radial(alpha, alpha, beta, n, cfg, tail)
}

/// ∫_lo^hi φ(v)/vⁿ √(1 − s²/v²) dv with s = 0 (Φ) or s = lo (Ψ).
fn radial(
    s: f64,
    lo: f64,
    hi: f64,
    n: u32,
    cfg: &QuadratureConfig,
    tail: TailMethod,
) -> Result<IntegralEstimate> {
    if hi == lo {
        return Ok(IntegralEstimate::zero());
    }
    let start = s + TAIL_OFFSET;
    let split = if tail == TailMethod::Asymptotic && hi - start.max(lo) > TAIL_MIN_SPAN {
        Some(start.max(lo))
    } else {
        None
    };
    let near_end = split.unwrap_or(hi);
    let near = near_integral(s, lo, near_end, n, cfg)?;
    match split {
        None => Ok(near),
        Some(v0) => {
            let smooth = smooth_tail(s, v0, hi, n, cfg)?;
            let (osc, osc_err) = oscillatory_tail(s, v0, hi, n)?;
            let mut total = IntegralEstimate::sum([near, smooth]);
            total.value += osc;
            total.err_estimate += osc_err;
            total.converged |= total.err_estimate <= cfg.tolerance(total.value);
            Ok(total)
        }
    }
}

fn near_integral(
    s: f64,
    lo: f64,
    hi: f64,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    if hi <= lo {
        return Ok(IntegralEstimate::zero());
    }
    if s == 0.0 {
        return try_integrate_1d_with_breaks(
            |v| Ok(phi_ratio_unchecked(v, n)),
            &panel_breaks(lo, hi),
            cfg,
        );
    }
    // v = s cosh u removes the square-root endpoint behaviour
    let u_of = |v: f64| (v / s).acosh();
    let breaks: Vec<f64> = panel_breaks(lo, hi)
        .into_iter()
        .map(|v| if v <= s { 0.0 } else { u_of(v) })
        .collect();
    let integrand = |u: f64| -> Result<f64> {
        let (sh, ch) = (u.sinh(), u.cosh());
        let v = s * ch;
        Ok(phi_ratio_unchecked(v, n) * s * sh * sh / ch)
    };
    try_integrate_1d_with_breaks(integrand, &breaks, cfg)
}

fn weight(s: f64, v: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        (1.0 - (s / v).powi(2)).sqrt()
    }
}

// −(9 + 2v² + v⁴) w / vⁿ
fn smooth_tail(
    s: f64,
    v0: f64,
    v1: f64,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    let mut breaks = vec![v0];
    let mut x = v0;
    while x * 2.0 < v1 {
        x *= 2.0;
        breaks.push(x);
    }
    breaks.push(v1);
    let f = |v: f64| -> Result<f64> {
        let v2 = v * v;
        Ok(-(9.0 + 2.0 * v2 + v2 * v2) * weight(s, v) / v.powi(n as i32))
    };
    try_integrate_1d_with_breaks(f, &breaks, cfg)
}

/// Truncated Taylor series in h = v − v₀.
#[derive(Clone)]
struct Jet([f64; JET_ORDER + 1]);

impl Jet {
    fn constant(c: f64) -> Self {
        let mut j = [0.0; JET_ORDER + 1];
        j[0] = c;
        Jet(j)
    }

    fn mul(&self, o: &Jet) -> Jet {
        let mut r = [0.0; JET_ORDER + 1];
        for i in 0..=JET_ORDER {
            for k in 0..=JET_ORDER - i {
                r[i + k] += self.0[i] * o.0[k];
            }
        }
        Jet(r)
    }

    fn scale_add(&self, a: f64, c: f64) -> Jet {
        let mut r = self.0.map(|x| a * x);
        r[0] += c;
        Jet(r)
    }

    fn sqrt(&self) -> Jet {
        let mut w = [0.0; JET_ORDER + 1];
        w[0] = self.0[0].sqrt();
        for k in 1..=JET_ORDER {
            let mut acc = self.0[k];
            for j in 1..k {
                acc -= w[j] * w[k - j];
            }
            w[k] = acc / (2.0 * w[0]);
        }
        Jet(w)
    }
}

/// Taylor jets of the cos 2v and sin 2v amplitudes of φ(v) w(v)/vⁿ about v₀.
fn amplitude_jets(s: f64, v0: f64, n: u32) -> (Jet, Jet) {
    let mut v = Jet::constant(v0);
    v.0[1] = 1.0;
    let mut inv_pow = [0.0; JET_ORDER + 1];
    inv_pow[0] = v0.powi(-(n as i32));
    for k in 1..=JET_ORDER {
        inv_pow[k] = inv_pow[k - 1] * (-(n as f64) - k as f64 + 1.0) / (k as f64 * v0);
    }
    let mut base = Jet(inv_pow);
    if s != 0.0 {
        let mut inv2 = [0.0; JET_ORDER + 1];
        // 1/v² = Σ (−1)ᵏ (k + 1) hᵏ / v₀^{k+2}
        for (k, c) in inv2.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *c = sign * (k as f64 + 1.0) / v0.powi(k as i32 + 2);
        }
        let w = Jet(inv2).scale_add(-s * s, 1.0).sqrt();
        base = base.mul(&w);
    }
    let v2 = v.mul(&v);
    let v3 = v2.mul(&v);
    let v4 = v2.mul(&v2);
    let v5 = v4.mul(&v);
    let mut c = v4.scale_add(3.0, 9.0);
    let mut sn = v.scale_add(18.0, 0.0);
    for i in 0..=JET_ORDER {
        c.0[i] -= 16.0 * v2.0[i];
        sn.0[i] += -8.0 * v3.0[i] + v5.0[i];
    }
    (c.mul(&base), sn.mul(&base))
}

/// e^{2iv} Σₖ (−1)ᵏ A⁽ᵏ⁾(v)/(2i)^{k+1}, an antiderivative of A e^{2iv}
/// up to the truncation error returned alongside.
fn boundary(s: f64, v0: f64, n: u32) -> (Complex64, f64) {
    let (c, sn) = amplitude_jets(s, v0, n);
    let factor = Complex64::new(0.0, -0.5);
    let mut power = factor;
    let mut fact = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..=JET_ORDER {
        if k > 0 {
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let amp = Complex64::new(c.0[k], -sn.0[k]) * (sign * fact);
        let term = amp * power;
        let mag = term.norm();
        if mag > last {
            break;
        }
        sum += term;
        last = mag;
        if mag <= 1e-17 * sum.norm() {
            break;
        }
        power *= factor;
    }
    let phase = Complex64::from_polar(1.0, 2.0 * v0);
    (phase * sum, last)
}

fn oscillatory_tail(s: f64, v0: f64, v1: f64, n: u32) -> Result<(f64, f64)> {
    let (b1, e1) = boundary(s, v1, n);
    let (b0, e0) = boundary(s, v0, n);
    let value = (b1 - b0).re;
    if !value.is_finite() {
        return Err(Error::Evaluation { abscissa: v1 });
    }
    Ok((value, e0 + e1))
}
