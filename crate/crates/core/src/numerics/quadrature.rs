use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::C64;
use crate::error::{Error, Result};

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule.
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
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Tolerances and limits shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Spectral truncation radius. `None` lets each integral pick
    /// `1e4 · max(μ₀, 1/a)` or its own problem-specific scale.
    pub truncation_radius: Option<f64>,
    /// Multiplier on those default scales; ignored when a radius is given.
    pub truncation_scale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-12, max_subdivisions: 20_000, truncation_radius: None, truncation_scale: 1.0 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Domain(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Domain(format!("abs_tol must be non-negative, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        if !(self.truncation_scale > 0.0 && self.truncation_scale.is_finite()) {
            return Err(Error::Domain(format!("truncation_scale must be positive, got {}", self.truncation_scale)));
        }
        if let Some(r) = self.truncation_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Domain(format!("truncation_radius must be positive, got {r}")));
            }
        }
        Ok(())
    }

    /// Same limits with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol * factor, abs_tol: self.abs_tol * factor, ..*self }
    }

    /// Truncation point: the explicit radius, else `default · truncation_scale`.
    pub fn cut(&self, default: f64) -> f64 {
        self.truncation_radius.unwrap_or(default * self.truncation_scale)
    }

    pub(crate) fn tolerance(&self, value: C64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Value of a definite integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: C64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn zero() -> Self {
        Self { value: C64::new(0.0, 0.0), abs_error: 0.0, evaluations: 0 }
    }
}

impl std::ops::Add for Integral {
    type Output = Integral;
    fn add(self, o: Integral) -> Integral {
        Integral {
            value: self.value + o.value,
            abs_error: self.abs_error + o.abs_error,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

fn sample<F: Fn(f64) -> C64>(f: &F, x: f64) -> Result<C64> {
    let v = f(x);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample { at: x })
    }
}

fn gk21<F: Fn(f64) -> C64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = sample(f, centre)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = C64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[10];
    let mut fv = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 10];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = sample(f, centre - dx)?;
        let f2 = sample(f, centre + dx)?;
        kronrod += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut resasc = (fc - mean).norm() * WGK[10];
    for (j, (f1, f2)) in fv.iter().enumerate() {
        resasc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (1.0f64).min((200.0 * error / resasc).powf(1.5));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { lo, hi, value: kronrod * half, error })
}

/// Globally adaptive Gauss-Kronrod (10/21) integration of a complex-valued
/// integrand on the finite interval `[lo, hi]`.
pub fn integrate_adaptive<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> C64,
{
    integrate_breakpoints(f, &[lo, hi], spec)
}

/// Adaptive integration over consecutive panels `[b₀,b₁], [b₁,b₂], …`.
/// Breakpoints let callers place oscillation panels or known kinks.
pub fn integrate_breakpoints<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> C64,
{
    spec.validate()?;
    if breaks.len() < 2 {
        return Ok(Integral::zero());
    }
    if breaks.iter().any(|b| !b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let s = gk21(&f, w[0], w[1])?;
        evaluations += 21;
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    let mut splits = 0;
    while err > spec.tolerance(total) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        // Intervals at the resolution of the floating-point grid cannot be refined.
        if !(mid > worst.lo.min(worst.hi) && mid < worst.lo.max(worst.hi))
            || (worst.hi - worst.lo).abs() <= 1e-14 * worst.lo.abs().max(worst.hi.abs())
        {
            done.push(worst);
            continue;
        }
        if splits >= spec.max_subdivisions {
            heap.push(worst);
            return Err(Error::NonConvergence { estimate: err, tolerance: spec.tolerance(total) });
        }
        let left = gk21(&f, worst.lo, mid)?;
        let right = gk21(&f, mid, worst.hi)?;
        evaluations += 42;
        splits += 1;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the rounding drift of the incremental updates.
    let value = heap.iter().chain(done.iter()).fold(C64::new(0.0, 0.0), |a, s| a + s.value);
    let abs_error = heap.iter().chain(done.iter()).map(|s| s.error).sum::<f64>();
    if abs_error > spec.tolerance(value) && heap.is_empty() {
        return Err(Error::NonConvergence { estimate: abs_error, tolerance: spec.tolerance(value) });
    }
    Ok(Integral { value, abs_error, evaluations })
}

/// Integral over `[0, hi]` of an integrand with an integrable `t^{-1/2}`
/// endpoint singularity, via `t = s²`.
pub fn integrate_sqrt_endpoint<F>(f: F, hi: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> C64,
{
    let top = hi.sqrt();
    let g = |s: f64| f(s * s) * (2.0 * s);
    let mut breaks = vec![0.0];
    // Geometric grading keeps logarithmic factors near the origin resolved.
    let mut b = top * 2f64.powi(-20);
    while b < top {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(top);
    integrate_breakpoints(g, &breaks, spec)
}

/// Composite 21-point Kronrod rule on a fixed set of panels: a reusable
/// node/weight table for integrals that are re-evaluated many times.
#[derive(Debug, Clone)]
pub struct FixedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FixedRule {
    /// Panels `[b₀,b₁], …`; a panel flagged in `sqrt_first` uses `t = b₀ + s²`
    /// to absorb an inverse-square-root singularity at its left end.
    pub fn from_breaks(breaks: &[f64], sqrt_first: bool) -> Self {
        let mut nodes = Vec::with_capacity(21 * breaks.len());
        let mut weights = Vec::with_capacity(21 * breaks.len());
        for (k, w) in breaks.windows(2).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            if k == 0 && sqrt_first {
                let top = (hi - lo).sqrt();
                for (s, ws) in Self::panel(0.0, top) {
                    nodes.push(lo + s * s);
                    weights.push(ws * 2.0 * s);
                }
            } else {
                for (t, wt) in Self::panel(lo, hi) {
                    nodes.push(t);
                    weights.push(wt);
                }
            }
        }
        Self { nodes, weights }
    }

    fn panel(lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        (0..21).map(move |i| {
            let (x, w) = if i < 10 {
                (-XGK[i], WGK[i])
            } else if i == 10 {
                (0.0, WGK[10])
            } else {
                (XGK[20 - i], WGK[20 - i])
            };
            (c + h * x, h * w)
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
