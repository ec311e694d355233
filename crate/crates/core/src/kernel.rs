//! Wiener-Hopf factorisation of `Ξ(ξ) = 1 + μ₀/|ξ|`.
//!
//! `Ξ = Ξ₀⁺Ξ₀⁻·Ξ*·(πμ₀)/(ξ₊^{1/2}ξ₋^{1/2})` where `Ξ₀±` are Gamma-function
//! ratios and `Ξ*±` come from a Cauchy integral of `ln Ξ*`. On the real axis
//! `Ξ*⁺ = √Ξ* · e^{−i·sgn(ξ)·θ(|ξ|/μ₀)}` with a phase `θ` that depends on
//! `ξ/μ₀` alone, so it is tabulated once per process.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{log_gamma, pv_integral_even_logkernel, QuadratureSpec, C64};

/// How the phase of `Ξ*⁺` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// Piecewise Chebyshev table built once from principal-value integrals.
    #[default]
    Tabulated,
    /// A fresh principal-value integral per evaluation.
    Direct,
}

/// Factorisation machinery for one value of `μ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelFactors {
    mu0: f64,
    quadrature: QuadratureSpec,
    phase: PhaseMode,
}

/// `ln Ξ*(t)` for `μ₀ = 1`, accurate at both small and large `t`.
pub fn ln_xi_star_unit(t: f64) -> f64 {
    let t = t.abs();
    if t < 0.1 {
        // ln(tanh t / t) by its Taylor series; the closed form loses the
        // O(t²) part to rounding near 1.
        let t2 = t * t;
        let series = t2
            * (-1.0 / 3.0
                + t2 * (7.0 / 90.0
                    + t2 * (-62.0 / 2835.0
                        + t2 * (127.0 / 18900.0
                            + t2 * (-146.0 / 66825.0
                                + t2 * (1_414_477.0 / 1_915_538_625.0 + t2 * (-32764.0 / 127_702_575.0)))))));
        series + t.ln_1p()
    } else if t < 1.0 {
        // tanh(t)/t = (1 − e^{−2t})/(2t) · 2/(1 + e^{−2t})
        let q = (-2.0 * t).exp();
        ((-(-2.0 * t).exp_m1() / (2.0 * t)) * 2.0 / (1.0 + q)).ln() + t.ln_1p()
    } else if t > 30.0 {
        (1.0 / t).ln_1p()
    } else {
        let q = (-2.0 * t).exp();
        (-q).ln_1p() - q.ln_1p() + (1.0 / t).ln_1p()
    }
}

/// `I(s) = PV ∫₀^∞ ln Ξ*(t)/(t² − s²) dt` for `μ₀ = 1`.
pub fn log_kernel_pv(s: f64, spec: &QuadratureSpec) -> Result<f64> {
    pv_integral_even_logkernel(ln_xi_star_unit, s, spec)
}

const TABLE_LO: f64 = -18.420_680_743_952_367; // ln 1e-8
const TABLE_HI: f64 = 18.420_680_743_952_367;
const SEGMENTS: usize = 64;
const NODES: usize = 14;

struct PhaseTable {
    values: Vec<[f64; NODES]>,
    small_const: f64,
    large_const: f64,
}

fn cheb_node(j: usize) -> f64 {
    ((2 * j + 1) as f64 * PI / (2 * NODES) as f64).cos()
}

fn table_spec() -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-13, abs_tol: 1e-14, max_subdivisions: 50_000, truncation_radius: None, truncation_scale: 1.0 }
}

impl PhaseTable {
    fn build() -> Self {
        let width = (TABLE_HI - TABLE_LO) / SEGMENTS as f64;
        let spec = table_spec();
        let values: Vec<[f64; NODES]> = (0..SEGMENTS)
            .into_par_iter()
            .map(|k| {
                let centre = TABLE_LO + (k as f64 + 0.5) * width;
                let mut row = [0.0; NODES];
                for (j, v) in row.iter_mut().enumerate() {
                    let u = centre + 0.5 * width * cheb_node(j);
                    let s = u.exp();
                    // I(s) falls off like ln s/s²; keep the absolute target relative.
                    let spec = QuadratureSpec { abs_tol: spec.abs_tol / (s * s).max(1.0), ..spec };
                    *v = log_kernel_pv(s, &spec).expect("phase table integral");
                }
                row
            })
            .collect();
        let mut t = Self { values, small_const: 0.0, large_const: 0.0 };
        let lo = t.interp(TABLE_LO);
        let hi = t.interp(TABLE_HI);
        // I(s) ≈ C₀ − ln s below the table and −(ln s + C∞)/s² above it.
        t.small_const = lo + TABLE_LO;
        t.large_const = -hi * (2.0 * TABLE_HI).exp() - TABLE_HI;
        t
    }

    fn interp(&self, u: f64) -> f64 {
        let width = (TABLE_HI - TABLE_LO) / SEGMENTS as f64;
        let k = (((u - TABLE_LO) / width).floor() as isize).clamp(0, SEGMENTS as isize - 1) as usize;
        let centre = TABLE_LO + (k as f64 + 0.5) * width;
        let x = (u - centre) / (0.5 * width);
        // Barycentric formula on first-kind Chebyshev nodes.
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, v) in self.values[k].iter().enumerate() {
            let xj = cheb_node(j);
            let diff = x - xj;
            if diff == 0.0 {
                return *v;
            }
            let theta = (2 * j + 1) as f64 * PI / (2 * NODES) as f64;
            let w = if j % 2 == 0 { theta.sin() } else { -theta.sin() } / diff;
            num += w * v;
            den += w;
        }
        num / den
    }

    fn log_kernel(&self, s: f64) -> f64 {
        let u = s.ln();
        if u < TABLE_LO {
            self.small_const - u
        } else if u > TABLE_HI {
            -(u + self.large_const) / (s * s)
        } else {
            self.interp(u)
        }
    }
}

static PHASE_TABLE: OnceLock<PhaseTable> = OnceLock::new();

fn phase_table() -> &'static PhaseTable {
    PHASE_TABLE.get_or_init(PhaseTable::build)
}

/// Dimensionless phase `θ(s) = s·I(s)/π` from the process-wide table.
pub fn phase_tabulated(s: f64) -> f64 {
    s * phase_table().log_kernel(s) / PI
}

/// Dimensionless phase from a direct principal-value integral.
pub fn phase_direct(s: f64, spec: &QuadratureSpec) -> Result<f64> {
    // θ = s·I/π, so the integral needs abs_tol·π/s to deliver abs_tol in θ.
    let spec = QuadratureSpec { truncation_radius: None, abs_tol: spec.abs_tol * PI / s.max(1.0), ..*spec };
    Ok(s * log_kernel_pv(s, &spec)? / PI)
}

/// Branch `ξ₊^{1/2} = √(−iξ)` with the cut on the negative real axis.
pub fn sqrt_plus(xi: C64) -> C64 {
    (C64::new(0.0, -1.0) * xi).sqrt()
}

/// Branch `ξ₋^{1/2} = √(iξ)`.
pub fn sqrt_minus(xi: C64) -> C64 {
    (C64::new(0.0, 1.0) * xi).sqrt()
}

fn nonzero(xi: f64) -> Result<()> {
    if xi == 0.0 || !xi.is_finite() {
        Err(Error::Domain(format!("kernel evaluated at ξ = {xi}")))
    } else {
        Ok(())
    }
}

// Γ(1+w)/Γ(1/2+w) ~ √w·Σ cₙ w^{-n}; truncation error below 1e-15 for |w| > 60.
const RATIO_SERIES: [f64; 7] = [
    1.0,
    1.0 / 8.0,
    1.0 / 128.0,
    -5.0 / 1024.0,
    -21.0 / 32768.0,
    399.0 / 262_144.0,
    869.0 / 4_194_304.0,
];

fn gamma_ratio(w: C64) -> Result<C64> {
    if w.norm() > 60.0 {
        let inv = w.inv();
        let mut p = C64::new(0.0, 0.0);
        for c in RATIO_SERIES.iter().rev() {
            p = p * inv + c;
        }
        return Ok(w.sqrt() * p);
    }
    Ok((log_gamma(w + 1.0)? - log_gamma(w + 0.5)?).exp())
}

impl KernelFactors {
    pub fn new(mu0: f64, quadrature: QuadratureSpec) -> Result<Self> {
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return Err(Error::Domain(format!("mu0 must be positive, got {mu0}")));
        }
        quadrature.validate()?;
        Ok(Self { mu0, quadrature, phase: PhaseMode::Tabulated })
    }

    pub fn with_phase_mode(mut self, mode: PhaseMode) -> Self {
        self.phase = mode;
        self
    }

    /// Forces construction of the shared phase table.
    pub fn warm_up() {
        let _ = phase_table();
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    /// `Ξ(ξ) = 1 + μ₀/|ξ|`.
    pub fn xi(&self, xi: f64) -> Result<f64> {
        nonzero(xi)?;
        Ok(1.0 + self.mu0 / xi.abs())
    }

    /// `Ξ*(ξ) = tanh(|ξ|/μ₀)(1 + μ₀/|ξ|)`.
    pub fn xi_star(&self, xi: f64) -> Result<f64> {
        nonzero(xi)?;
        Ok(ln_xi_star_unit(xi / self.mu0).exp())
    }

    /// `Ξ*` continued to `ξ = 0` by its limit 1.
    pub fn xi_star_total(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            1.0
        } else {
            ln_xi_star_unit(xi / self.mu0).exp()
        }
    }

    /// `Ξ₀⁺(z) = Γ(1 − iz/(πμ₀))/Γ(1/2 − iz/(πμ₀))`, analytic for `Im z > −πμ₀/2`.
    pub fn xi0_plus(&self, z: C64) -> Result<C64> {
        if !(z.im > -PI * self.mu0 / 2.0) {
            return Err(Error::Domain(format!("Ξ₀⁺ requires Im z > −πμ₀/2, got z = {z}")));
        }
        gamma_ratio(C64::new(0.0, -1.0) * z / (PI * self.mu0))
    }

    /// `Ξ₀⁻(z) = Ξ₀⁺(−z)`.
    pub fn xi0_minus(&self, z: C64) -> Result<C64> {
        self.xi0_plus(-z)
    }

    fn phase(&self, s: f64) -> Result<f64> {
        match self.phase {
            PhaseMode::Tabulated => Ok(phase_tabulated(s)),
            PhaseMode::Direct => phase_direct(s, &self.quadrature),
        }
    }

    /// Boundary value of `Ξ*⁺` on the real axis.
    pub fn xi_star_plus_real(&self, xi: f64) -> Result<C64> {
        nonzero(xi)?;
        let s = xi.abs() / self.mu0;
        let modulus = (0.5 * ln_xi_star_unit(s)).exp();
        Ok(C64::from_polar(modulus, -xi.signum() * self.phase(s)?))
    }

    /// `Ξ*⁻ = conj Ξ*⁺` on the real axis.
    pub fn xi_star_minus_real(&self, xi: f64) -> Result<C64> {
        Ok(self.xi_star_plus_real(xi)?.conj())
    }

    /// `B⁺ = Ξ₀⁺Ξ*⁺/ξ₊^{1/2}`.
    pub fn b_plus(&self, xi: f64) -> Result<C64> {
        let z = C64::new(xi, 0.0);
        Ok(self.xi0_plus(z)? * self.xi_star_plus_real(xi)? / sqrt_plus(z))
    }

    /// `B⁻ = Ξ₀⁻Ξ*⁻/ξ₋^{1/2}`.
    pub fn b_minus(&self, xi: f64) -> Result<C64> {
        let z = C64::new(xi, 0.0);
        Ok(self.xi0_minus(z)? * self.xi_star_minus_real(xi)? / sqrt_minus(z))
    }

    /// Both combined factors, sharing the phase evaluation.
    pub fn b_pair(&self, xi: f64) -> Result<(C64, C64)> {
        let z = C64::new(xi, 0.0);
        let star = self.xi_star_plus_real(xi)?;
        let bp = self.xi0_plus(z)? * star / sqrt_plus(z);
        let bm = self.xi0_minus(z)? * star.conj() / sqrt_minus(z);
        Ok((bp, bm))
    }

    /// `|πμ₀B⁺B⁻/Ξ − 1|`.
    pub fn factorization_residual(&self, xi: f64) -> Result<f64> {
        let (bp, bm) = self.b_pair(xi)?;
        Ok((bp * bm * (PI * self.mu0) / self.xi(xi)? - 1.0).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kf(mu0: f64) -> KernelFactors {
        KernelFactors::new(mu0, QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn kernel_values() {
        let k = kf(1.0);
        assert_eq!(k.xi(1.0).unwrap(), 2.0);
        assert_eq!(k.xi(-1.0).unwrap(), 2.0);
        assert!(k.xi(0.0).is_err());
        assert!((k.xi(1e12).unwrap() - 1.0).abs() < 1e-11);
        assert!((k.xi_star(1.0).unwrap() - 2.0 * 1f64.tanh()).abs() < 1e-15);
        assert!(k.xi_star(0.0).is_err());
        assert_eq!(k.xi_star_total(0.0), 1.0);
    }

    #[test]
    fn xi_star_expansions() {
        let k = kf(2.0);
        let x: f64 = 1e-3;
        let s = x / 2.0;
        // The quadratic coefficient is −1/3: tanh(s)(1 + 1/s) = (1 + s)(1 − s²/3 + …).
        let series = 1.0 + s - s * s / 3.0;
        assert!((k.xi_star(x).unwrap() - series).abs() < 1e-10);
        let wrong = 1.0 + s - 5.0 / 6.0 * s * s;
        assert!((k.xi_star(x).unwrap() - wrong).abs() > 1e-7);
        let big = 50.0;
        assert!((k.xi_star(big).unwrap() - (1.0 + 2.0 / big)).abs() < 1e-15);
    }

    #[test]
    fn log_kernel_matches_direct_formula() {
        for t in [1e-6, 0.0999, 0.1, 0.3, 0.999, 1.0, 2.0, 29.9, 30.1, 1e5] {
            let direct = ((t as f64).tanh() * (1.0 + 1.0 / t)).ln();
            assert!((ln_xi_star_unit(t) - direct).abs() < 2e-15, "{t}");
        }
        // Relative accuracy at tiny arguments, against ln Ξ* = t − 5t²/6 + O(t³).
        let t = 1e-9;
        assert!((ln_xi_star_unit(t) - (t - 5.0 / 6.0 * t * t)) / t < 1e-15);
    }

    #[test]
    fn gamma_factor_at_origin() {
        let v = kf(3.0).xi0_plus(C64::new(0.0, 0.0)).unwrap();
        assert!((v - C64::new(1.0 / PI.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gamma_factor_on_imaginary_axis_is_real() {
        let v = kf(1.0).xi0_plus(C64::new(0.0, 1.0)).unwrap();
        let w = 1.0 / PI;
        let exact = (log_gamma(C64::new(1.0 + w, 0.0)).unwrap() - log_gamma(C64::new(0.5 + w, 0.0)).unwrap()).exp();
        assert!((v - exact).norm() < 1e-14 && v.im.abs() < 1e-15 && v.re > 0.0);
    }

    #[test]
    fn series_and_log_gamma_agree_at_switch() {
        for w in [C64::new(0.0, 60.5), C64::new(0.0, -70.0), C64::new(3.0, 59.0)] {
            let series = {
                let inv = w.inv();
                let mut p = C64::new(0.0, 0.0);
                for c in RATIO_SERIES.iter().rev() {
                    p = p * inv + c;
                }
                w.sqrt() * p
            };
            let exact = (log_gamma(w + 1.0).unwrap() - log_gamma(w + 0.5).unwrap()).exp();
            assert!((series - exact).norm() < 1e-13 * exact.norm(), "{w}");
        }
    }

    #[test]
    fn analyticity_half_plane_guard() {
        let k = kf(1.0);
        assert!(k.xi0_plus(C64::new(0.0, -PI / 2.0)).is_err());
        assert!(k.xi0_plus(C64::new(0.0, -1.5)).is_ok());
        assert!(k.xi0_minus(C64::new(0.0, 1.5)).is_ok());
    }

    #[test]
    fn coth_identity() {
        let k = kf(0.7);
        for xi in [-40.0, -1.3, 0.01, 0.5, 3.0, 25.0] {
            let z = C64::new(xi, 0.0);
            let lhs = k.xi0_plus(z).unwrap() * k.xi0_minus(z).unwrap() * (PI * 0.7 / xi);
            let coth = 1.0 / (xi / 0.7).tanh();
            assert!((lhs - coth).norm() < 1e-8 * coth.abs(), "{xi}");
        }
    }

    #[test]
    fn table_matches_direct_integral() {
        let spec = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-15, ..Default::default() };
        for s in [1e-7, 3.3e-4, 0.05, 0.99, 1.0, 7.5, 420.0, 9e6] {
            let t = phase_tabulated(s);
            let d = phase_direct(s, &spec).unwrap();
            assert!((t - d).abs() < 1e-10, "{s}: {t} vs {d}");
        }
    }

    #[test]
    fn table_extrapolation_outside_range() {
        let spec = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() };
        for s in [1e-10, 1e9, 1e11] {
            let t = phase_tabulated(s);
            let d = phase_direct(s, &spec).unwrap();
            assert!((t - d).abs() < 1e-10, "{s}: {t} vs {d}");
        }
    }

    #[test]
    fn modulus_and_conjugate_symmetry() {
        let k = kf(1.0);
        for xi in [-5.0, 0.2, 1.0, 80.0] {
            let p = k.xi_star_plus_real(xi).unwrap();
            assert!((p.norm_sqr() - k.xi_star(xi).unwrap()).abs() < 1e-14);
            assert_eq!(k.xi_star_minus_real(xi).unwrap(), p.conj());
        }
        assert!(k.xi_star_plus_real(0.0).is_err());
    }

    #[test]
    fn factorisation_identity() {
        let k = kf(2.0);
        for xi in [-2e3, -1.0, -1e-3, 1e-3, 0.5, 2.0, 13.0, 2e3] {
            assert!(k.factorization_residual(xi).unwrap() < 1e-9, "{xi}");
        }
    }
}
