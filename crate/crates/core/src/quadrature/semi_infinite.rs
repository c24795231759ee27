use super::adaptive::{
    sampled_with, try_integrate_1d_with_breaks, Batched, Sampler, Serial, WeightedSample,
};
use super::{IntegralEstimate, QuadratureConfig};
use crate::{Error, Result};

const SCAN_POINTS: usize = 121;
const SCAN_DECADES_BELOW: f64 = 3.0;
const SCAN_DECADES_ABOVE: f64 = 3.0;

/// Breakpoints covering [a, X] where X is the first point of a geometric
/// scan over [10⁻³, 10³]·scale beyond which |f| stays under
/// `cutoff · peak`. Returns `None` when f vanishes on the whole scan.
pub fn scan_cutoff<F>(f: &F, a: f64, scale: f64, cfg: &QuadratureConfig) -> Result<Option<Vec<f64>>>
where
    F: Fn(f64) -> Result<f64>,
{
    scan_with(&Serial(f), a, scale, cfg)
}

fn scan_with<S: Sampler>(
    f: &S,
    a: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Option<Vec<f64>>> {
    cfg.validate()?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scan scale must be positive, got {scale}"
        )));
    }
    if !a.is_finite() || a < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "semi-infinite lower limit must be finite and non-negative, got {a}"
        )));
    }
    let span = SCAN_DECADES_BELOW + SCAN_DECADES_ABOVE;
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| {
            scale * 10f64.powf(-SCAN_DECADES_BELOW + span * i as f64 / (SCAN_POINTS - 1) as f64)
        })
        .filter(|&x| x > a)
        .collect();
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "lower limit {a} lies beyond the scan range of scale {scale}"
        )));
    }
    let mags: Vec<f64> = f.sample(&grid)?.into_iter().map(f64::abs).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(None);
    }
    let threshold = cfg.semi_infinite_cutoff_ratio * peak;
    let last = mags.iter().rposition(|&m| m > threshold).unwrap_or(0);
    if last + 1 == grid.len() {
        return Err(Error::Divergence(format!(
            "integrand has not decayed to {:e} of its peak by x = {:e}",
            cfg.semi_infinite_cutoff_ratio, grid[last]
        )));
    }
    let mut breaks = Vec::with_capacity(last + 3);
    breaks.push(a);
    breaks.extend_from_slice(&grid[..=last + 1]);
    Ok(Some(breaks))
}

/// ∫ₐ^∞ f with the scan placed on `scale`, the typical width of f.
pub fn try_integrate_semi_infinite<F>(
    f: F,
    a: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    match scan_cutoff(&f, a, scale, cfg)? {
        None => Ok(IntegralEstimate::zero()),
        Some(breaks) => try_integrate_1d_with_breaks(f, &breaks, cfg),
    }
}

pub fn integrate_semi_infinite_scaled<F>(
    f: F,
    a: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), a, scale, cfg)
}

/// ∫ₐ^∞ f for an integrand whose structure lives near unit scale.
pub fn integrate_semi_infinite<F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> f64,
{
    integrate_semi_infinite_scaled(f, a, 1.0, cfg)
}

/// Semi-infinite integral together with the nodes of the final rule.
/// Integrand batches run on the worker pool when `cfg.execution` is
/// parallel.
pub fn integrate_semi_infinite_sampled<F>(
    f: F,
    a: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<(IntegralEstimate, Vec<WeightedSample>)>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let sampler = Batched(f, cfg.execution);
    match scan_with(&sampler, a, scale, cfg)? {
        None => Ok((IntegralEstimate::zero(), Vec::new())),
        Some(breaks) => sampled_with(&sampler, &breaks, cfg),
    }
}
