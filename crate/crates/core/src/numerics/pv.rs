use super::quadrature::{integrate_breakpoints, Integral, QuadratureSpec};
use super::C64;
use crate::error::{Error, Result};

/// `PV ∫₀^∞ g(t)/(t² − ξ²) dt` for an even kernel `g`, evaluated as the
/// regular integral `∫₀^∞ [g(t) − g(ξ)]/(t² − ξ²) dt` (the principal value of
/// `∫₀^∞ dt/(t² − ξ²)` vanishes).
///
/// The range `[T, ∞)` is mapped onto `(0, 1]` by `t = T/u`, where
/// `T = max(8ξ, truncation_radius)` and the radius defaults to `1e4`.
pub fn pv_integral_even_logkernel<G>(g: G, xi: f64, spec: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    pv_even_integral(g, xi, spec).map(|i| i.value.re)
}

pub(crate) fn pv_even_integral<G>(g: G, xi: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    G: Fn(f64) -> f64,
{
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!("principal-value point must be positive, got {xi}")));
    }
    let g0 = g(xi);
    if !g0.is_finite() {
        return Err(Error::NonFiniteSample { at: xi });
    }
    let top = spec.truncation_radius.unwrap_or(1e4).max(8.0 * xi);
    let mut breaks = vec![0.0, 0.5 * xi, xi, 2.0 * xi];
    let mut b = 8.0 * xi;
    while b < top {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(top);
    // Removable singularity at t = ξ: use the symmetric difference quotient
    // for nodes that land on it in floating point.
    let h = 1e-6 * xi;
    let at_pole = (g(xi + h) - g(xi - h)) / (2.0 * h) / (2.0 * xi);
    let body = integrate_breakpoints(
        |t| {
            let v = if t == xi { at_pole } else { (g(t) - g0) / ((t - xi) * (t + xi)) };
            C64::new(v, 0.0)
        },
        &breaks,
        spec,
    )?;
    let tail = integrate_breakpoints(
        |u| {
            let t = top / u;
            C64::new((g(t) - g0) * top / ((top - xi * u) * (top + xi * u)), 0.0)
        },
        &[0.0, 1e-6, 1e-3, 0.1, 1.0],
        spec,
    )?;
    Ok(body + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_constant_kernels_vanish() {
        let spec = QuadratureSpec::default();
        assert_eq!(pv_integral_even_logkernel(|_| 0.0, 1.3, &spec).unwrap(), 0.0);
        for xi in [0.01, 1.0, 70.0] {
            let v = pv_integral_even_logkernel(|_| 2.5, xi, &spec).unwrap();
            assert!(v.abs() < 1e-12, "{xi}: {v}");
        }
    }

    #[test]
    fn rejects_non_positive_point() {
        let spec = QuadratureSpec::default();
        assert!(pv_integral_even_logkernel(|_| 1.0, 0.0, &spec).is_err());
        assert!(pv_integral_even_logkernel(|_| 1.0, -1.0, &spec).is_err());
    }

    #[test]
    fn lorentzian_closed_form() {
        // PV ∫₀^∞ 1/((1+t²)(t²−ξ²)) dt = −π/(2(1+ξ²))
        let spec = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() };
        for xi in [0.3, 1.0, 5.0] {
            let v = pv_integral_even_logkernel(|t| 1.0 / (1.0 + t * t), xi, &spec).unwrap();
            let exact = -std::f64::consts::PI / (2.0 * (1.0 + xi * xi));
            assert!((v - exact).abs() < 1e-11, "{xi}: {v} vs {exact}");
        }
    }
}
