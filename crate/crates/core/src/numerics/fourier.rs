use std::f64::consts::PI;

use super::quadrature::{integrate_breakpoints, Integral, QuadratureSpec};
use super::C64;
use crate::error::{Error, Result};

/// Which half of the real line a transform runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Negative,
    Positive,
}

const DEFAULT_LIMIT: f64 = 1e7;

/// `∫ f(x) e^{iξx} dx` over one half-line for `f = O(|x|^{-2})`.
///
/// The range is grown by doubling. Beyond the current cut `X` the remainder
/// is modelled analytically (power-law fit when `ξ = 0`, integration by parts
/// otherwise) and the model is accepted once successive cuts agree to within
/// `abs_tol`.
pub fn halfline_fourier<F>(f: F, side: HalfLine, xi: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    let sgn = match side {
        HalfLine::Negative => -1.0,
        HalfLine::Positive => 1.0,
    };
    // Work in t = |x| with frequency ω so that e^{iξx} = e^{iωt}.
    let omega = sgn * xi;
    let ft = |t: f64| f(sgn * t);
    let limit = spec.truncation_radius.unwrap_or(DEFAULT_LIMIT);
    let panel = if omega == 0.0 { f64::INFINITY } else { PI / omega.abs() };
    let integrand = |t: f64| ft(t) * C64::from_polar(1.0, omega * t);

    let chunk = |lo: f64, hi: f64| -> Result<Integral> {
        let mut breaks = vec![lo];
        // Logarithmic breaks plus oscillation panels.
        let mut b = lo;
        while b < hi {
            let step = panel.min((0.5 * b).max(0.25));
            b = (b + step).min(hi);
            breaks.push(b);
            if breaks.len() > spec.max_subdivisions {
                return Err(Error::TailBoundExceeded { bound: ft(hi).abs() * hi, tolerance: spec.abs_tol });
            }
        }
        integrate_breakpoints(integrand, &breaks, spec)
    };

    let tail = |x: f64| -> C64 {
        if omega == 0.0 {
            power_tail(&ft, x)
        } else {
            parts_tail(&ft, x, omega)
        }
    };

    let mut x = if omega == 0.0 { 4.0 } else { (8.0 * panel).max(4.0) };
    let mut acc = chunk(0.0, x)?;
    let mut prev_tail = tail(x);
    loop {
        let next = 2.0 * x;
        let piece = chunk(x, next)?;
        let t = tail(next);
        let mismatch = (prev_tail - piece.value - t).norm();
        acc = acc + piece;
        x = next;
        prev_tail = t;
        let tol = spec.abs_tol.max(spec.rel_tol * (acc.value + t).norm());
        // a non-finite model means the decay is not yet asymptotic
        if mismatch.is_finite() && mismatch <= tol {
            return Ok(Integral {
                value: acc.value + t,
                abs_error: acc.abs_error + mismatch,
                evaluations: acc.evaluations,
            });
        }
        if x >= limit {
            return Err(Error::TailBoundExceeded { bound: mismatch, tolerance: tol });
        }
    }
}

// ∫_X^∞ f for f ~ C t^{-p}, with p fitted from f(X/2) and f(X).
fn power_tail<F: Fn(f64) -> f64>(f: &F, x: f64) -> C64 {
    let fx = f(x);
    let fh = f(0.5 * x);
    if fx == 0.0 || fh == 0.0 || fx.signum() != fh.signum() {
        return C64::new(0.0, 0.0);
    }
    let p = (fh / fx).log2();
    if p <= 1.0 {
        return C64::new(f64::INFINITY, 0.0);
    }
    C64::new(fx * x / (p - 1.0), 0.0)
}

// ∫_X^∞ f(t) e^{iωt} dt ≈ e^{iωX} Σ_{n<3} (−1)^{n+1} f^{(n)}(X)/(iω)^{n+1}
fn parts_tail<F: Fn(f64) -> f64>(f: &F, x: f64, omega: f64) -> C64 {
    let h = 1e-3 * x;
    let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    let iw = C64::new(0.0, omega);
    let series = -f0 / iw + d1 / (iw * iw) - d2 / (iw * iw * iw);
    C64::from_polar(1.0, omega * x) * series
}

/// `∫_X^∞ H(t) e^{iνt} dt` by three terms of integration by parts, with
/// derivatives from central differences of step `0.005·X`. Returns the value
/// and the size of the last retained term as an error scale.
pub(crate) fn oscillatory_tail<H: Fn(f64) -> C64>(h: H, x: f64, nu: f64) -> (C64, f64) {
    let step = 0.005 * x;
    let (hm, h0, hp) = (h(x - step), h(x), h(x + step));
    let d1 = (hp - hm) / (2.0 * step);
    let d2 = (hp - h0 * 2.0 + hm) / (step * step);
    let iv = C64::new(0.0, nu);
    let t0 = -h0 / iv;
    let t1 = d1 / (iv * iv);
    let t2 = -d2 / (iv * iv * iv);
    (C64::from_polar(1.0, nu * x) * (t0 + t1 + t2), t2.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() }
    }

    #[test]
    fn exponential_at_zero_frequency() {
        let v = halfline_fourier(|x| (2.0 * x).exp(), HalfLine::Negative, 0.0, &spec()).unwrap();
        assert!((v.value - C64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn weighted_exponential_any_frequency() {
        for xi in [-3.0, 0.0, 0.7, 12.0] {
            let v = halfline_fourier(|x| -x * (2.0 * x).exp(), HalfLine::Negative, xi, &spec()).unwrap();
            let exact = C64::new(2.0, xi).powi(-2);
            assert!((v.value - exact).norm() < 1e-11, "{xi}: {} vs {exact}", v.value);
        }
    }

    #[test]
    fn lorentzian_positive_axis() {
        let v = halfline_fourier(|x| 1.0 / (1.0 + x * x), HalfLine::Positive, 0.0, &spec()).unwrap();
        assert!((v.value.re - PI / 2.0).abs() < 1e-9, "{}", v.value);
    }

    #[test]
    fn lorentzian_oscillatory() {
        // Re ∫₀^∞ cos(ξx)/(1+x²) dx = (π/2)e^{−ξ}
        let v = halfline_fourier(|x| 1.0 / (1.0 + x * x), HalfLine::Positive, 2.0, &spec()).unwrap();
        assert!((v.value.re - PI / 2.0 * (-2f64).exp()).abs() < 1e-10, "{}", v.value);
    }

    #[test]
    fn parts_tail_of_inverse_square() {
        // ∫_X^∞ e^{iνt}/t² dt = e^{iνX}/X + iν e^{iνX}·e^{w}E₁(w), w = −iνX
        let x = 200.0;
        for nu in [-1.3, 0.8] {
            let (v, err) = oscillatory_tail(|t| C64::new(1.0 / (t * t), 0.0), x, nu);
            let phase = C64::from_polar(1.0, nu * x);
            let w = C64::new(0.0, -nu * x);
            let exact = phase / x + C64::new(0.0, nu) * phase * crate::numerics::exp_e1(w);
            // truncation error is the next term, 4!/(X⁵ν⁴), well inside the reported scale
            assert!((v - exact).norm() < 0.1 * err, "{v} vs {exact}");
            assert!(err < 1e-8);
        }
    }

    #[test]
    fn slow_decay_is_rejected() {
        let r = halfline_fourier(|x| 1.0 / (1.0 + x.abs()).sqrt(), HalfLine::Positive, 0.0, &spec());
        assert!(matches!(r, Err(Error::TailBoundExceeded { .. })));
    }
}
