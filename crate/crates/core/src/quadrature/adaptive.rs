use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{IntegralEstimate, QuadratureConfig};
use crate::{Error, Execution, Result};

// 21-point Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208218306298,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Each Kronrod segment reports at least 50 ε ∫|f| of error; refinement
/// stops once the total is within twice that floor.
const ROUNDOFF_FLOOR: f64 = 100.0 * f64::EPSILON;

/// One quadrature node of a converged rule: ∫f ≈ Σ weight · value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSample {
    pub x: f64,
    pub weight: f64,
    pub value: f64,
}

/// Evaluates the integrand at a batch of abscissae.
pub(crate) trait Sampler {
    fn sample(&self, xs: &[f64]) -> Result<Vec<f64>>;
}

pub(crate) struct Serial<F>(pub F);

impl<F: Fn(f64) -> Result<f64>> Sampler for Serial<F> {
    fn sample(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| checked(&self.0, x)).collect()
    }
}

/// Batches go to the worker pool; meant for expensive integrands.
pub(crate) struct Batched<F>(pub F, pub Execution);

impl<F: Fn(f64) -> Result<f64> + Sync + Send> Sampler for Batched<F> {
    fn sample(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.1
            .map_slice(xs, |&x| checked(&self.0, x))
            .into_iter()
            .collect()
    }
}

fn checked<F: Fn(f64) -> Result<f64>>(f: &F, x: f64) -> Result<f64> {
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Evaluation { abscissa: x })
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    abs: f64,
    /// Samples at the 21 Kronrod nodes in ascending order.
    values: [f64; 21],
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Kronrod nodes on [a, b] in ascending order with their weights.
fn nodes(a: f64, b: f64) -> ([f64; 21], [f64; 21]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 21];
    let mut w = [0.0; 21];
    for i in 0..10 {
        x[i] = c - h * XGK[i];
        x[20 - i] = c + h * XGK[i];
        w[i] = h * WGK[i];
        w[20 - i] = h * WGK[i];
    }
    x[10] = c;
    w[10] = h * WGK[10];
    (x, w)
}

fn gk21<S: Sampler>(f: &S, a: f64, b: f64) -> Result<Segment> {
    let h = 0.5 * (b - a);
    let (x, _) = nodes(a, b);
    let sampled = f.sample(&x)?;
    let mut values = [0.0; 21];
    values.copy_from_slice(&sampled);
    let fc = values[10];
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_k = WGK[10] * fc.abs();
    for i in 0..10 {
        let (f1, f2) = (values[i], values[20 - i]);
        kronrod += WGK[i] * (f1 + f2);
        abs_k += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for i in 0..10 {
        asc += WGK[i] * ((values[i] - mean).abs() + (values[20 - i] - mean).abs());
    }
    let value = kronrod * h;
    let abs_k = abs_k * h.abs();
    let asc = asc * h.abs();
    let mut err = ((kronrod - gauss) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (1.0f64).min((200.0 * err / asc).powf(1.5));
    }
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_k);
    }
    Ok(Segment {
        a,
        b,
        value,
        err,
        abs: abs_k,
        values,
    })
}

fn adaptive<S: Sampler>(
    f: &S,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(IntegralEstimate, Vec<Segment>)> {
    cfg.validate()?;
    if breaks.len() < 2 {
        return Ok((IntegralEstimate::zero(), Vec::new()));
    }
    for w in breaks.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) || w[1] < w[0] {
            return Err(Error::InvalidParameter(format!(
                "integration breakpoints must be finite and ascending, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    let budget = cfg.max_subdivisions + heap.len();
    let mut value: f64 = heap.iter().map(|s| s.value).sum();
    let mut err: f64 = heap.iter().map(|s| s.err).sum();
    let mut abs: f64 = heap.iter().map(|s| s.abs).sum();
    let mut converged;
    loop {
        converged = err <= cfg.tolerance(value);
        // no further bisection can beat the rounding floor of the rule
        let roundoff_limited = err <= ROUNDOFF_FLOOR * abs;
        if converged || roundoff_limited || heap.len() >= budget {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // the segment cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        evaluations += 42;
        if heap.len() % 256 == 0 {
            // bound the drift of the running sums
            value = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.err).sum();
            abs = heap.iter().map(|s| s.abs).sum();
        }
    }
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments.iter().map(|s| s.value).sum();
    let err_estimate = segments.iter().map(|s| s.err).sum();
    Ok((
        IntegralEstimate {
            value,
            err_estimate,
            evaluations,
            converged,
        },
        segments,
    ))
}

/// ∫ₐᵇ f for a fallible integrand.
pub fn try_integrate_1d<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if b < a {
        return Ok(try_integrate_1d(f, b, a, cfg)?.scaled(-1.0));
    }
    Ok(adaptive(&Serial(f), &[a, b], cfg)?.0)
}

/// ∫ₐᵇ f. A non-finite sample is reported as [`Error::Evaluation`].
pub fn integrate_1d<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> f64,
{
    try_integrate_1d(|x| Ok(f(x)), a, b, cfg)
}

/// Integral over the ascending breakpoints, adapting globally across all
/// panels.
pub fn try_integrate_1d_with_breaks<F>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(adaptive(&Serial(f), breaks, cfg)?.0)
}

pub fn integrate_1d_with_breaks<F>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> f64,
{
    try_integrate_1d_with_breaks(|x| Ok(f(x)), breaks, cfg)
}

pub(crate) fn sampled_with<S: Sampler>(
    f: &S,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(IntegralEstimate, Vec<WeightedSample>)> {
    let (est, segments) = adaptive(f, breaks, cfg)?;
    let mut samples = Vec::with_capacity(21 * segments.len());
    for s in &segments {
        let (x, w) = nodes(s.a, s.b);
        for i in 0..21 {
            samples.push(WeightedSample {
                x: x[i],
                weight: w[i],
                value: s.values[i],
            });
        }
    }
    Ok((est, samples))
}

/// Like [`try_integrate_1d_with_breaks`], also returning the nodes and
/// weights of the final rule, so that Σ weight · value reproduces the
/// estimate. Each batch of 21 nodes is evaluated on the worker pool when
/// `cfg.execution` is parallel.
pub fn integrate_1d_sampled<F>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(IntegralEstimate, Vec<WeightedSample>)>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    sampled_with(&Batched(f, cfg.execution), breaks, cfg)
}
