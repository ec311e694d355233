//! The unperturbed load problem.
//!
//! With `g(β) = κΛ(β)⟦p̄⟧/B⁻ + κπμ₀B⁺⟨p̄⟩` and `Λ = ½(1 − μ*μ₀/|β|)`, the
//! Wiener-Hopf split `L± = ±g/2 + (1/2πi) PV∫ g(β)/(β−ξ) dβ` gives
//! `φ⁺ = −L⁺/(κπμ₀B⁺)`, `φ₁⁻ = L⁻B⁻`, `φ₂⁻ = φ₁⁻ + κ⟦p̄⟧`, and the half-plane
//! transforms `ū_j(ξ, y) = A_j(ξ) e^{−|ξy|}`.
//!
//! The principal value is taken on a fixed composite Kronrod grid over
//! `[0, R]`, using `g(−β) = conj g(β)` to fold the negative axis, and the range
//! beyond `R` is added analytically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Bimaterial, CrackLoad, Tone};
use crate::numerics::{oscillatory_tail, FixedRule, Integral, QuadratureSpec, C64};
use crate::weightfn::{check_balance, HalfLinePlan, WeightFunction};

/// Displacement and gradient at a point off the interface. `u` is relative
/// to a reference point because the absolute level is not defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub u: Option<f64>,
    pub gx: f64,
    pub gy: f64,
}

/// Side of the Plemelj split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Default guard on the defect angle from the interface, in degrees.
pub const DEFAULT_MIN_ANGLE_DEG: f64 = 5.0;

#[derive(Debug, Clone)]
pub struct UnperturbedSolution {
    load: CrackLoad,
    material: Bimaterial,
    w: WeightFunction,
    spec: QuadratureSpec,
    radius: f64,
    rule: FixedRule,
    g_nodes: Vec<C64>,
    tones: Option<Vec<Tone>>,
    min_angle: f64,
}

// Per-ξ factors shared by the load-problem quantities.
struct Factors {
    bp: C64,
    bm: C64,
    avg: C64,
    jump: C64,
    lambda: f64,
}

impl UnperturbedSolution {
    pub fn new(load: &CrackLoad, material: &Bimaterial, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        check_balance(load)?;
        let w = WeightFunction::new(material, *spec)?;
        let mu0 = material.mu0();
        let tones = load.tones();
        let (feature, panel, radius) = match &tones {
            Some(t) => {
                let w_max = t.iter().map(|t| t.omega).fold(0.0, f64::max);
                let w_min = t.iter().map(|t| t.omega).fold(f64::INFINITY, f64::min);
                let r = spec.cut(1000.0 / w_min).max(50.0 / w_min);
                (mu0.min(PI / w_max), PI / (2.0 * w_max), r)
            }
            None => {
                let inv_len = 1.0 / load.length_scale();
                let r = spec.cut(1e4 * mu0.max(inv_len));
                (mu0.min(inv_len), f64::INFINITY, r)
            }
        };
        let mut breaks = vec![0.0];
        let mut b = 1e-8 * feature;
        while b < feature {
            breaks.push(b);
            b *= 2.0;
        }
        while b < radius {
            breaks.push(b);
            b += (0.5 * b).min(panel);
        }
        breaks.push(radius);
        let rule = FixedRule::from_breaks(&breaks, true);
        let mut sol = Self {
            load: load.clone(),
            material: *material,
            w,
            spec: *spec,
            radius,
            rule,
            g_nodes: Vec::new(),
            tones,
            min_angle: DEFAULT_MIN_ANGLE_DEG.to_radians(),
        };
        let g_nodes = sol.rule.nodes.iter().map(|&t| sol.g(t)).collect::<Result<Vec<_>>>()?;
        sol.g_nodes = g_nodes;
        Ok(sol)
    }

    /// Replaces the minimum angle (radians) between the defect centre and the interface line.
    pub fn with_min_angle(mut self, radians: f64) -> Self {
        self.min_angle = radians;
        self
    }

    pub fn weight_function(&self) -> &WeightFunction {
        &self.w
    }

    pub fn material(&self) -> &Bimaterial {
        &self.material
    }

    pub fn load(&self) -> &CrackLoad {
        &self.load
    }

    /// Spectral radius of the principal-value grid; `L±` is available for `|ξ| < R/2`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `Λ(ξ) = ½(1 − μ*μ₀/|ξ|)`.
    pub fn lambda_fn(&self, xi: f64) -> Result<f64> {
        if xi == 0.0 {
            return Err(Error::Domain("Λ is singular at ξ = 0".into()));
        }
        Ok(0.5 * (1.0 - self.material.mu_star() * self.material.mu0() / xi.abs()))
    }

    fn factors(&self, xi: f64) -> Result<Factors> {
        let (bp, bm) = self.w.kernel().b_pair(xi)?;
        let (avg, jump) = self.load.transforms(xi);
        Ok(Factors { bp, bm, avg, jump, lambda: self.lambda_fn(xi)? })
    }

    fn g_from(&self, f: &Factors) -> C64 {
        let k = self.material.kappa;
        let mu0 = self.material.mu0();
        f.jump * (k * f.lambda) / f.bm + f.bp * f.avg * (k * PI * mu0)
    }

    /// The jump `g = L⁺ − L⁻` on the real axis.
    pub fn g(&self, xi: f64) -> Result<C64> {
        Ok(self.g_from(&self.factors(xi)?))
    }

    // g restricted to one exponential e^{−iωβ} of a point load.
    fn g_tone(&self, t: &Tone, bp: C64, bm: C64, beta: f64) -> C64 {
        let k = self.material.kappa;
        let mu0 = self.material.mu0();
        let lambda = 0.5 * (1.0 - self.material.mu_star() * mu0 / beta.abs());
        bm.inv() * (k * lambda * t.jump) + bp * (k * PI * mu0 * t.avg)
    }

    /// `PV ∫ g(β)/(β − ξ) dβ` over the whole line, for `0 < ξ < R/2`.
    fn pv(&self, xi: f64, g_xi: C64) -> Result<Integral> {
        let r = self.radius;
        let mut acc = C64::new(0.0, 0.0);
        for ((&beta, &wt), &gb) in self.rule.nodes.iter().zip(&self.rule.weights).zip(&self.g_nodes) {
            let d = beta - xi;
            let near = if d == 0.0 { C64::new(0.0, 0.0) } else { (gb - g_xi) / d };
            acc += (near - gb.conj() / (beta + xi)) * wt;
        }
        acc += g_xi * ((r - xi) / xi).ln();
        let (tail, err) = self.pv_tail(xi)?;
        Ok(Integral { value: acc + tail, abs_error: err, evaluations: self.rule.len() })
    }

    // ∫_R^∞ [g(β)/(β−ξ) − conj g(β)/(β+ξ)] dβ
    fn pv_tail(&self, xi: f64) -> Result<(C64, f64)> {
        let r = self.radius;
        match &self.tones {
            Some(tones) => {
                let step = 0.005 * r;
                let pts = [r - step, r, r + step];
                let mut b = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 3];
                for (slot, &p) in b.iter_mut().zip(&pts) {
                    *slot = self.w.kernel().b_pair(p)?;
                }
                let pick = |beta: f64| -> (C64, C64) {
                    let i = pts.iter().position(|&p| p == beta).unwrap_or(1);
                    b[i]
                };
                let mut total = C64::new(0.0, 0.0);
                let mut err = 0.0;
                for t in tones {
                    let up = |beta: f64| {
                        let (bp, bm) = pick(beta);
                        self.g_tone(t, bp, bm, beta) / (beta - xi)
                    };
                    let down = |beta: f64| {
                        let (bp, bm) = pick(beta);
                        self.g_tone(t, bp, bm, beta).conj() / (beta + xi)
                    };
                    let (v1, e1) = oscillatory_tail(up, r, -t.omega);
                    let (v2, e2) = oscillatory_tail(down, r, t.omega);
                    total += v1 - v2;
                    err += e1 + e2;
                }
                Ok((total, err))
            }
            None => {
                let delta = self.load.decay_exponent().unwrap_or(1.0);
                let gr = self.g(r)?;
                let f = gr / (r - xi) - gr.conj() / (r + xi);
                let tail = f * (r / (1.0 + delta));
                Ok((tail, tail.norm()))
            }
        }
    }

    fn check_range(&self, xi: f64) -> Result<()> {
        if xi == 0.0 || !xi.is_finite() {
            return Err(Error::Domain(format!("load transforms evaluated at ξ = {xi}")));
        }
        if xi.abs() >= 0.5 * self.radius {
            return Err(Error::Domain(format!(
                "|ξ| = {} exceeds half the spectral radius {}",
                xi.abs(),
                self.radius
            )));
        }
        Ok(())
    }

    fn l_plus_with(&self, xi: f64, f: &Factors) -> Result<C64> {
        let g = self.g_from(f);
        if xi > 0.0 {
            let p = self.pv(xi, g)?.value;
            Ok(g * 0.5 + p / C64::new(0.0, 2.0 * PI))
        } else {
            // L⁺(−ξ) = conj L⁺(ξ)
            let gpos = g.conj();
            let p = self.pv(-xi, gpos)?.value;
            Ok((gpos * 0.5 + p / C64::new(0.0, 2.0 * PI)).conj())
        }
    }

    /// `L±(ξ)` on the real axis.
    pub fn l_pm_real(&self, xi: f64, side: Side) -> Result<C64> {
        self.check_range(xi)?;
        let f = self.factors(xi)?;
        let lp = self.l_plus_with(xi, &f)?;
        Ok(match side {
            Side::Plus => lp,
            Side::Minus => lp - self.g_from(&f),
        })
    }

    fn phi_plus_with(&self, xi: f64, f: &Factors) -> Result<C64> {
        let lp = self.l_plus_with(xi, f)?;
        Ok(-lp / (f.bp * (self.material.kappa * PI * self.material.mu0())))
    }

    /// `φ⁺ = −L⁺/(κπμ₀B⁺)`: the interface traction beyond the tip.
    pub fn phi_plus_load(&self, xi: f64) -> Result<C64> {
        self.check_range(xi)?;
        self.phi_plus_with(xi, &self.factors(xi)?)
    }

    /// `φ₁⁻ = L⁻B⁻`.
    pub fn phi1_minus_load(&self, xi: f64) -> Result<C64> {
        self.check_range(xi)?;
        let f = self.factors(xi)?;
        let lm = self.l_plus_with(xi, &f)? - self.g_from(&f);
        Ok(lm * f.bm)
    }

    /// `φ₂⁻ = φ₁⁻ + κ⟦p̄⟧`.
    pub fn phi2_minus_load(&self, xi: f64) -> Result<C64> {
        Ok(self.phi1_minus_load(xi)? + self.load.jump(xi) * self.material.kappa)
    }

    fn a_with(&self, xi: f64, f: &Factors) -> Result<(C64, C64)> {
        let s = self.phi_plus_with(xi, f)? + f.avg;
        let ax = xi.abs();
        let a1 = -(s + f.jump * 0.5) / (self.material.mu1 * ax);
        let a2 = (s - f.jump * 0.5) / (self.material.mu2 * ax);
        Ok((a1, a2))
    }

    /// `(A₁, A₂)` with `ū_j(ξ, y) = A_j e^{−|ξy|}`.
    pub fn a_coeffs(&self, xi: f64) -> Result<(C64, C64)> {
        self.check_range(xi)?;
        self.a_with(xi, &self.factors(xi)?)
    }

    /// `⟦ū⟧ = A₁ − A₂` on the interface line.
    pub fn jump_u_bar(&self, xi: f64) -> Result<C64> {
        let (a1, a2) = self.a_coeffs(xi)?;
        Ok(a1 - a2)
    }

    /// `⟨σ̄⟩ = (|ξ|/2)(μ₂A₂ − μ₁A₁)`.
    pub fn avg_sigma_bar(&self, xi: f64) -> Result<C64> {
        let (a1, a2) = self.a_coeffs(xi)?;
        Ok((a2 * self.material.mu2 - a1 * self.material.mu1) * (0.5 * xi.abs()))
    }

    /// `⟦σ̄⟧ = −|ξ|(μ₁A₁ + μ₂A₂)`.
    pub fn jump_sigma_bar(&self, xi: f64) -> Result<C64> {
        let (a1, a2) = self.a_coeffs(xi)?;
        Ok(-(a1 * self.material.mu1 + a2 * self.material.mu2) * xi.abs())
    }

    fn guard(&self, x: f64, y: f64) -> Result<()> {
        if y == 0.0 || !y.is_finite() || !x.is_finite() {
            return Err(Error::Geometry(format!("point ({x}, {y}) is on the interface line")));
        }
        let angle = y.abs().atan2(x);
        // slack so that a grid placed exactly on the limit passes
        if angle.min(PI - angle) < self.min_angle * (1.0 - 1e-12) {
            return Err(Error::Geometry(format!(
                "point ({x}, {y}) is within {:.2}° of the interface line",
                self.min_angle.to_degrees()
            )));
        }
        let cut = 40.0 / y.abs();
        if cut >= 0.5 * self.radius {
            return Err(Error::Geometry(format!(
                "point ({x}, {y}) is too close to the interface for the spectral radius {}",
                self.radius
            )));
        }
        Ok(())
    }

    fn field_plan(&self, x: f64, y: f64) -> HalfLinePlan {
        let w_max = self.tones.as_ref().map_or(0.0, |t| t.iter().map(|t| t.omega).fold(0.0, f64::max));
        let freq = x.abs() + w_max;
        let cut = 40.0 / y.abs();
        let panel = if freq > 0.0 { Some(PI / freq) } else { None };
        let xi_c = self.material.mu0().min(1.0 / y.abs()).min(panel.unwrap_or(f64::INFINITY)).min(0.5 * cut);
        HalfLinePlan { xi_c, cut, panel }
    }

    /// `∇u⁰` at `(x, y)`, `y ≠ 0`.
    pub fn grad_u0(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (gx, gy, _) = self.grad_u0_with_error(x, y)?;
        Ok((gx, gy))
    }

    /// `∇u⁰` with an absolute error estimate for each component (summed).
    pub fn grad_u0_with_error(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        self.guard(x, y)?;
        if self.load.is_zero() {
            return Ok((0.0, 0.0, 0.0));
        }
        let plan = self.field_plan(x, y);
        let upper = y > 0.0;
        let ay = y.abs();
        let coeff = |xi: f64| -> Result<C64> {
            let (a1, a2) = self.a_coeffs(xi)?;
            Ok(if upper { a1 } else { a2 })
        };
        let base = |xi: f64| -> C64 {
            match coeff(xi) {
                Ok(a) => a * C64::from_polar((-xi * ay).exp(), -xi * x),
                Err(_) => C64::new(f64::NAN, f64::NAN),
            }
        };
        let ix = plan.integrate(|xi| base(xi) * C64::new(0.0, -xi), &self.spec)?;
        let sy = if upper { -1.0 } else { 1.0 };
        let iy = plan.integrate(|xi| base(xi) * (sy * xi), &self.spec)?;
        Ok((ix.value.re / PI, iy.value.re / PI, (ix.abs_error + iy.abs_error) / PI))
    }

    /// `u⁰(x, y) − u⁰(x_ref, y_ref)` for two points in the same half-plane.
    pub fn u0_relative(&self, x: f64, y: f64, reference: (f64, f64)) -> Result<f64> {
        let (xr, yr) = reference;
        self.guard(x, y)?;
        self.guard(xr, yr)?;
        if (y > 0.0) != (yr > 0.0) {
            return Err(Error::Geometry("reference point must lie in the same half-plane".into()));
        }
        if self.load.is_zero() {
            return Ok(0.0);
        }
        let upper = y > 0.0;
        let near = y.abs().min(yr.abs());
        let plan = self.field_plan(x.abs().max(xr.abs()), near);
        let f = |xi: f64| -> C64 {
            match self.a_coeffs(xi) {
                Ok((a1, a2)) => {
                    let a = if upper { a1 } else { a2 };
                    let e = C64::from_polar((-xi * y.abs()).exp(), -xi * x)
                        - C64::from_polar((-xi * yr.abs()).exp(), -xi * xr);
                    a * e
                }
                Err(_) => C64::new(f64::NAN, f64::NAN),
            }
        };
        Ok(plan.integrate(f, &self.spec)?.value.re / PI)
    }

    /// Field sample with `u` measured from `reference`.
    pub fn field_sample(&self, x: f64, y: f64, reference: (f64, f64)) -> Result<FieldSample> {
        let (gx, gy) = self.grad_u0(x, y)?;
        let u = self.u0_relative(x, y, reference)?;
        Ok(FieldSample { x, y, u: Some(u), gx, gy })
    }
}
