//! First-order change of the tip constant caused by a small inclusion.
//!
//! The inclusion enters through the far field of its boundary layer,
//! `w(x) = −(1/2π) ∇u⁰(Y)·𝓜(x − Y)/|x − Y|²`, whose `∂w/∂y` on the crack line
//! gives effective tractions `P = −½(μ₁+μ₂)∂w/∂y` and `Q = −(μ₁−μ₂)∂w/∂y`.
//! Writing `V = v₁ + iv₂` for `𝓜∇u⁰(Y)` and `Z = X + iY` for the centre,
//! `∂w/∂y(x, 0) = (1/4π)[iV/(x−Z)² − iV̄/(x−Z̄)²]`, so the half-line transforms
//! reduce to `∫ e^{iξx}/(x−c)² dx`, which has a closed form in `e^w E₁(w)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Bimaterial, CrackLoad, Inclusion, InclusionSpec};
use crate::numerics::{integrate_breakpoints, integrate_sqrt_endpoint, one_minus_w_exp_e1, Integral, QuadratureSpec, C64};
use crate::unperturbed::UnperturbedSolution;
use crate::weightfn::sigma0;

/// Symmetric 2×2 dipole matrix (length²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleMatrix {
    pub m: [[f64; 2]; 2],
}

fn check_axes(ell_a: f64, ell_b: f64) -> Result<()> {
    if !(ell_b > 0.0 && ell_a >= ell_b && ell_a.is_finite()) {
        return Err(Error::Domain(format!("semi-axes must satisfy ell_a >= ell_b > 0, got {ell_a}, {ell_b}")));
    }
    Ok(())
}

impl DipoleMatrix {
    pub const ZERO: Self = Self { m: [[0.0; 2]; 2] };

    /// Elastic elliptic inclusion with contrast `ν* = μ_out/μ_in`, major
    /// semi-axis `ell_a` at angle `alpha` to the x-axis.
    pub fn elliptic(ell_a: f64, ell_b: f64, alpha: f64, nu_star: f64) -> Result<Self> {
        check_axes(ell_a, ell_b)?;
        if !(nu_star > 0.0 && nu_star.is_finite()) {
            return Err(Error::Domain(format!("nu_star must be positive, got {nu_star}")));
        }
        let e = ell_b / ell_a;
        let (c2, s2) = ((2.0 * alpha).cos(), (2.0 * alpha).sin());
        let p = e + nu_star;
        let q = 1.0 + e * nu_star;
        let b11 = (1.0 + c2) / p + (1.0 - c2) / q;
        let b22 = (1.0 - c2) / p + (1.0 + c2) / q;
        let b12 = -(1.0 - e) * (nu_star - 1.0) * s2 / (p * q);
        let k = -0.5 * PI * ell_a * ell_b * (1.0 + e) * (nu_star - 1.0);
        Ok(Self { m: [[k * b11, k * b12], [k * b12, k * b22]] })
    }

    /// Rigid movable elliptic inclusion.
    pub fn rigid(ell_a: f64, ell_b: f64, alpha: f64) -> Result<Self> {
        check_axes(ell_a, ell_b)?;
        let e = ell_b / ell_a;
        let (c2, s2) = ((2.0 * alpha).cos(), (2.0 * alpha).sin());
        let (hp, hm) = (1.0 + c2, 1.0 - c2);
        let k = 0.5 * PI * ell_a * ell_b * (1.0 / e + 1.0);
        let off = k * (1.0 - e) * s2;
        Ok(Self { m: [[k * (hp + e * hm), off], [off, k * (hm + e * hp)]] })
    }

    /// Dipole of the inclusion in the stretched variable `(x − Y)/ε`, where
    /// the semi-axes become `d` and `d·e`.
    pub fn for_inclusion(inc: &InclusionSpec) -> Result<Self> {
        let (a, b) = (inc.d, inc.d * inc.aspect());
        match inc.inclusion {
            Inclusion::Elastic { nu_star } => Self::elliptic(a, b, inc.alpha, nu_star),
            Inclusion::Rigid => Self::rigid(a, b, inc.alpha),
        }
    }

    pub fn apply(&self, g: (f64, f64)) -> (f64, f64) {
        let m = &self.m;
        (m[0][0] * g.0 + m[0][1] * g.1, m[1][0] * g.0 + m[1][1] * g.1)
    }

    pub fn scaled(&self, k: f64) -> Self {
        let m = &self.m;
        Self { m: [[k * m[0][0], k * m[0][1]], [k * m[1][0], k * m[1][1]]] }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = &self.m;
        let mean = 0.5 * (m[0][0] + m[1][1]);
        let r = (0.5 * (m[0][0] - m[1][1])).hypot(m[0][1]);
        (mean - r, mean + r)
    }

    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// `∂w/∂y` on the line `y = 0` for gradient `g = ∇u⁰(Y)` and centre `y_c`.
pub fn boundary_layer_dy(x: f64, g: (f64, f64), m: &DipoleMatrix, y_c: (f64, f64)) -> Result<f64> {
    let r = (x - y_c.0, -y_c.1);
    let r2 = r.0 * r.0 + r.1 * r.1;
    if r2 == 0.0 {
        return Err(Error::Geometry(format!("evaluation point ({x}, 0) coincides with the inclusion centre")));
    }
    // g·𝓜v = (𝓜g)·v for symmetric 𝓜
    let v = m.apply(g);
    let first = -v.1 / (2.0 * PI * r2);
    let second = (v.0 * r.0 + v.1 * r.1) * r.1 / (PI * r2 * r2);
    Ok(first + second)
}

/// `∫_{−∞}^0 e^{iξx}/(x − c)² dx` for `Im c ≠ 0`.
fn t_minus(xi: f64, c: C64) -> C64 {
    if xi == 0.0 {
        return c.inv();
    }
    if xi < 0.0 {
        return t_minus(-xi, c.conj()).conj();
    }
    let w = C64::new(0.0, xi) * c;
    let mut v = one_minus_w_exp_e1(w) / c;
    if w.re < 0.0 && w.im < 0.0 {
        v -= w.exp() * (2.0 * PI * xi);
    }
    v
}

/// `∫_0^∞ e^{iξx}/(x − c)² dx`.
fn t_plus(xi: f64, c: C64) -> C64 {
    t_minus(-xi, -c)
}

// Half-line transforms of ∂w/∂y for the complex dipole vector v; conj(iV) = −iV̄.
fn dy_transforms(xi: f64, v: C64, z: C64) -> (C64, C64) {
    let iv = C64::new(0.0, 1.0) * v;
    let k = 1.0 / (4.0 * PI);
    let minus = (iv * t_minus(xi, z) + iv.conj() * t_minus(xi, z.conj())) * k;
    let plus = (iv * t_plus(xi, z) + iv.conj() * t_plus(xi, z.conj())) * k;
    (minus, plus)
}

/// Transforms of the effective tractions at one `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTractions {
    pub p_minus: C64,
    pub q_minus: C64,
    pub p_plus: C64,
    pub q_plus: C64,
}

pub fn effective_traction_transforms(
    g: (f64, f64),
    m: &DipoleMatrix,
    y_c: (f64, f64),
    material: &Bimaterial,
    xi: f64,
) -> Result<EffectiveTractions> {
    if y_c.1 == 0.0 {
        return Err(Error::Geometry("inclusion centre lies on the crack line".into()));
    }
    let v = m.apply(g);
    let (dm, dp) = dy_transforms(xi, C64::new(v.0, v.1), C64::new(y_c.0, y_c.1));
    let kp = -0.5 * (material.mu1 + material.mu2);
    let kq = -(material.mu1 - material.mu2);
    Ok(EffectiveTractions { p_minus: dm * kp, q_minus: dm * kq, p_plus: dp * kp, q_plus: dp * kq })
}

/// Effect of the inclusion on crack growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Shielding,
    Neutral,
    Amplifying,
}

impl SignClass {
    /// Amplifying when `Δσ₀` has the sign of the unperturbed tip traction,
    /// neutral inside the error band.
    pub fn classify(delta: f64, est_error: f64, tip_traction: f64) -> Self {
        if delta.abs() <= est_error {
            SignClass::Neutral
        } else if delta * if tip_traction == 0.0 { 1.0 } else { tip_traction } > 0.0 {
            SignClass::Amplifying
        } else {
            SignClass::Shielding
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SignClass::Shielding => "shielding",
            SignClass::Neutral => "neutral",
            SignClass::Amplifying => "amplifying",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationResult {
    pub delta_sigma0: f64,
    pub sign: SignClass,
    pub est_error: f64,
    /// `ℓ_a/d`; the perturbed constant is `σ₀ + ε²Δσ₀`.
    pub epsilon: f64,
}

/// `Δσ₀ = S₁v₁ + S₂v₂` for a fixed centre; `v = 𝓜∇u⁰(Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentreResponse {
    pub centre: (f64, f64),
    pub grad: (f64, f64),
    pub grad_error: f64,
    pub basis: (f64, f64),
    pub basis_error: f64,
}

impl CentreResponse {
    pub fn delta_sigma0(&self, m: &DipoleMatrix) -> (f64, f64) {
        let v = m.apply(self.grad);
        let value = self.basis.0 * v.0 + self.basis.1 * v.1;
        let err = self.basis_error * (v.0.abs() + v.1.abs())
            + (self.basis.0.abs() + self.basis.1.abs()) * m.norm() * self.grad_error;
        (value, err)
    }
}

/// Unperturbed solution plus `σ₀`, shared by every inclusion placement.
///
/// The effective crack-face tractions `P⁻`, `Q⁻` act as a load on the
/// first-order problem, and the Betti integral for `Δσ₀` weights them with the
/// opposite sign to the `σ₀` integral; both agree with the tip traction
/// obtained from `φ⁺` once that sign is accounted for.
#[derive(Debug, Clone)]
pub struct PerturbationProblem {
    solution: UnperturbedSolution,
    sigma0: f64,
    spec: QuadratureSpec,
}

impl PerturbationProblem {
    pub fn new(load: &CrackLoad, material: &Bimaterial, spec: &QuadratureSpec) -> Result<Self> {
        let solution = UnperturbedSolution::new(load, material, spec)?;
        let sigma0 = sigma0(load, material, spec)?.sigma0;
        Ok(Self { solution, sigma0, spec: *spec })
    }

    pub fn with_min_angle(mut self, radians: f64) -> Self {
        self.solution = self.solution.with_min_angle(radians);
        self
    }

    pub fn solution(&self) -> &UnperturbedSolution {
        &self.solution
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    /// Traction at the tip, `lim −iξφ⁺(ξ)`. The Betti constant carries the
    /// opposite sign, while `Δσ₀` is measured in the traction's convention.
    pub fn tip_traction(&self) -> f64 {
        -self.sigma0
    }

    /// Betti integral for unit `V` and for `V = i`, returned as the real and
    /// imaginary parts of one complex integral.
    fn basis_integral(&self, centre: (f64, f64)) -> Result<Integral> {
        let w = self.solution.weight_function();
        let m = self.solution.material();
        let mu0 = m.mu0();
        let ms2 = m.mu_star() * m.mu_star();
        let kp = -0.5 * (m.mu1 + m.mu2);
        let z = C64::new(centre.0, centre.1);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let f = |xi: f64| -> C64 {
            let (Ok(h), Ok(phi)) = (w.betti_weight(xi), w.phi_minus(xi)) else {
                return C64::new(f64::NAN, f64::NAN);
            };
            let wp = phi * (m.kappa * xi);
            let part = |v: C64| {
                let (dm, dp) = dy_transforms(xi, v, z);
                (h * (dm * (1.0 - ms2) - dp * ms2) + wp * dp).re * kp
            };
            C64::new(part(one), part(i))
        };
        let ay = centre.1.abs();
        let ax = centre.0.abs();
        let r = ax.hypot(ay);
        let xi_c = mu0.min(1.0 / r);
        let cut = self.spec.cut(1e8 * mu0.max(1.0 / ay));
        // oscillation panels while e^{−ξ|Y|} is still significant
        let mut breaks = vec![xi_c];
        let mut b = xi_c;
        let decay_end = 40.0 / ay;
        let cap = if ax > 0.0 { PI / ax } else { f64::INFINITY };
        while b < cut {
            let step = if b < decay_end { b.min(cap) } else { b };
            b = (b + step).min(cut);
            breaks.push(b);
        }
        let head = integrate_sqrt_endpoint(f, xi_c, &self.spec)?;
        let body = integrate_breakpoints(f, &breaks, &self.spec)?;
        // Re of the integrand falls off like ln ξ/ξ² past the cut
        let fc = f(cut);
        let tail = fc * cut;
        let mut total = head + body;
        total.value += tail;
        total.abs_error += tail.norm();
        Ok(total)
    }

    /// Gradient and Betti basis for an inclusion centred at `centre`.
    pub fn centre_response(&self, centre: (f64, f64)) -> Result<CentreResponse> {
        let (gx, gy, grad_error) = self.solution.grad_u0_with_error(centre.0, centre.1)?;
        let s = -(self.solution.material().mu0() / PI).sqrt();
        let integral = self.basis_integral(centre)?;
        Ok(CentreResponse {
            centre,
            grad: (gx, gy),
            grad_error,
            basis: (s * integral.value.re, s * integral.value.im),
            basis_error: s.abs() * integral.abs_error,
        })
    }

    fn classify(&self, r: &CentreResponse, m: &DipoleMatrix, epsilon: f64) -> PerturbationResult {
        let (delta, err) = r.delta_sigma0(m);
        PerturbationResult {
            delta_sigma0: delta,
            sign: SignClass::classify(delta, err, self.tip_traction()),
            est_error: err,
            epsilon,
        }
    }

    pub fn delta_sigma0(&self, inc: &InclusionSpec) -> Result<PerturbationResult> {
        inc.validate()?;
        let dipole = DipoleMatrix::for_inclusion(inc)?;
        self.delta_sigma0_with_dipole(inc, &dipole)
    }

    /// As [`delta_sigma0`](Self::delta_sigma0) with an explicit dipole matrix.
    pub fn delta_sigma0_with_dipole(&self, inc: &InclusionSpec, dipole: &DipoleMatrix) -> Result<PerturbationResult> {
        inc.validate()?;
        let r = self.centre_response(inc.centre())?;
        Ok(self.classify(&r, dipole, inc.epsilon()))
    }

    /// `Δσ₀` over a `(φ, α)` grid; `template` fixes `d`, the semi-axes and the
    /// inclusion type. Rows follow `phis`, columns `alphas`.
    pub fn sign_map(
        &self,
        template: &InclusionSpec,
        phis: &[f64],
        alphas: &[f64],
    ) -> Result<Vec<Vec<PerturbationResult>>> {
        phis.par_iter()
            .map(|&phi| {
                let base = InclusionSpec { phi, ..*template };
                base.validate()?;
                let r = self.centre_response(base.centre())?;
                alphas
                    .iter()
                    .map(|&alpha| {
                        let inc = InclusionSpec { alpha, ..base };
                        let dipole = DipoleMatrix::for_inclusion(&inc)?;
                        Ok(self.classify(&r, &dipole, inc.epsilon()))
                    })
                    .collect()
            })
            .collect()
    }
}

/// One-shot `Δσ₀` for a single inclusion.
pub fn delta_sigma0(
    load: &CrackLoad,
    material: &Bimaterial,
    inc: &InclusionSpec,
    spec: &QuadratureSpec,
) -> Result<PerturbationResult> {
    PerturbationProblem::new(load, material, spec)?.delta_sigma0(inc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{halfline_fourier, HalfLine};

    #[test]
    fn dipole_special_cases() {
        let z = DipoleMatrix::elliptic(2.0, 1.0, 0.4, 1.0).unwrap();
        assert_eq!(z.norm(), 0.0);
        let c = DipoleMatrix::elliptic(1.0, 1.0, 0.9, 5.0).unwrap();
        let want = -4.0 * PI / 3.0;
        assert!((c.m[0][0] - want).abs() < 1e-14 && (c.m[1][1] - want).abs() < 1e-14 && c.m[0][1].abs() < 1e-15);
        let r = DipoleMatrix::rigid(1.0, 1.0, 0.3).unwrap();
        assert!((r.m[0][0] - 2.0 * PI).abs() < 1e-14 && r.m[0][1].abs() < 1e-15);
        assert!(DipoleMatrix::elliptic(1.0, 2.0, 0.0, 2.0).is_err());
        assert!(DipoleMatrix::elliptic(1.0, 0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn dipole_definiteness() {
        for alpha in [0.0, 0.3, 1.2, 2.5] {
            let soft = DipoleMatrix::elliptic(1.0, 0.4, alpha, 5.0).unwrap().eigenvalues();
            assert!(soft.0 < 0.0 && soft.1 < 0.0);
            let stiff = DipoleMatrix::elliptic(1.0, 0.4, alpha, 0.2).unwrap().eigenvalues();
            assert!(stiff.0 > 0.0 && stiff.1 > 0.0);
            let rigid = DipoleMatrix::rigid(1.0, 0.4, alpha).unwrap().eigenvalues();
            assert!(rigid.0 > 0.0);
        }
    }

    #[test]
    fn rigid_is_the_stiff_limit() {
        for (e, alpha) in [(0.3, 0.2), (0.9, 2.0), (0.05, -1.0)] {
            let a = DipoleMatrix::rigid(1.0, e, alpha).unwrap();
            let b = DipoleMatrix::elliptic(1.0, e, alpha, 1e-8).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a.m[i][j] - b.m[i][j]).abs() < 1e-6 * a.norm());
                }
            }
        }
    }

    #[test]
    fn boundary_layer_values() {
        let id = DipoleMatrix { m: [[1.0, 0.0], [0.0, 1.0]] };
        let v = boundary_layer_dy(0.0, (0.0, 1.0), &id, (0.0, 1.0)).unwrap();
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(boundary_layer_dy(3.0, (0.4, 1.0), &DipoleMatrix::ZERO, (0.0, 1.0)).unwrap(), 0.0);
        let far = boundary_layer_dy(-1e4, (0.4, 1.0), &id, (0.3, 0.8)).unwrap() * 1e8;
        let farther = boundary_layer_dy(-2e4, (0.4, 1.0), &id, (0.3, 0.8)).unwrap() * 4e8;
        assert!((far / farther - 1.0).abs() < 1e-3);
        assert!(boundary_layer_dy(1.0, (1.0, 0.0), &id, (1.0, 0.0)).is_err());
    }

    #[test]
    fn complex_form_matches_vector_form() {
        let m = DipoleMatrix::elliptic(1.0, 0.5, 0.7, 3.0).unwrap();
        let g = (0.3, -1.1);
        let y = (-0.4, 0.9);
        let v = m.apply(g);
        let (vv, z) = (C64::new(v.0, v.1), C64::new(y.0, y.1));
        for x in [-3.0, -0.4, 0.0, 0.5, 7.0] {
            let i = C64::new(0.0, 1.0);
            let cf = (i * vv / (x - z).powi(2) - i * vv.conj() / (x - z.conj()).powi(2)) / (4.0 * PI);
            let direct = boundary_layer_dy(x, g, &m, y).unwrap();
            assert!((cf.re - direct).abs() < 1e-14 && cf.im.abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_transforms_match_quadrature() {
        let mat = Bimaterial::new(1.5, 0.5, 1.0).unwrap();
        let m = DipoleMatrix::elliptic(1.0, 0.5, 0.3, 5.0).unwrap();
        let g = (0.7, -0.2);
        let spec = QuadratureSpec { rel_tol: 1e-11, abs_tol: 1e-13, ..QuadratureSpec::default() };
        for y in [(0.5, 0.8), (-0.6, -0.7), (-0.3, 1.2)] {
            let field = |x: f64| -0.5 * (mat.mu1 + mat.mu2) * boundary_layer_dy(x, g, &m, y).unwrap();
            for xi in [0.0, 0.8, -2.5] {
                let t = effective_traction_transforms(g, &m, y, &mat, xi).unwrap();
                let qm = halfline_fourier(field, HalfLine::Negative, xi, &spec).unwrap().value;
                let qp = halfline_fourier(field, HalfLine::Positive, xi, &spec).unwrap().value;
                assert!((t.p_minus - qm).norm() < 1e-8, "{y:?} {xi}: {} vs {}", t.p_minus, qm);
                assert!((t.p_plus - qp).norm() < 1e-8, "{y:?} {xi}: {} vs {}", t.p_plus, qp);
                let ms = 2.0 * mat.mu_star();
                assert!((t.q_minus - t.p_minus * ms).norm() < 1e-14 * t.p_minus.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn identical_materials_give_no_jump_traction() {
        let mat = Bimaterial::new(1.0, 1.0, 1.0).unwrap();
        let m = DipoleMatrix::rigid(1.0, 0.5, 0.2).unwrap();
        let t = effective_traction_transforms((1.0, 0.5), &m, (0.2, 1.0), &mat, 1.3).unwrap();
        assert_eq!(t.q_minus.norm() + t.q_plus.norm(), 0.0);
    }

    #[test]
    fn classification() {
        assert_eq!(SignClass::classify(1.0, 0.1, 2.0), SignClass::Amplifying);
        assert_eq!(SignClass::classify(-1.0, 0.1, 2.0), SignClass::Shielding);
        assert_eq!(SignClass::classify(1.0, 0.1, -2.0), SignClass::Shielding);
        assert_eq!(SignClass::classify(-1.0, 0.1, -2.0), SignClass::Amplifying);
        assert_eq!(SignClass::classify(0.05, 0.1, 2.0), SignClass::Neutral);
        assert_eq!(SignClass::classify(0.0, 0.0, 2.0), SignClass::Neutral);
    }

    use crate::model::Inclusion;

    fn smooth_problem(mu_star: f64) -> PerturbationProblem {
        let m = Bimaterial::from_groups(mu_star, 1.0, 2.0, 1.0).unwrap();
        PerturbationProblem::new(&CrackLoad::smooth(), &m, &QuadratureSpec::default()).unwrap()
    }

    fn inclusion(phi: f64, alpha: f64, e: f64, inclusion: Inclusion) -> InclusionSpec {
        InclusionSpec { d: 1.0, phi, alpha, ell_a: 0.1, ell_b: 0.1 * e, inclusion }
    }

    #[test]
    fn unit_contrast_gives_zero() {
        let p = smooth_problem(0.2);
        let r = p.delta_sigma0(&inclusion(1.0, 0.3, 0.5, Inclusion::Elastic { nu_star: 1.0 })).unwrap();
        assert_eq!(r.delta_sigma0, 0.0);
        assert_eq!(r.sign, SignClass::Neutral);
    }

    #[test]
    fn linear_in_dipole() {
        let p = smooth_problem(-0.3);
        let inc = inclusion(2.0, 0.4, 0.5, Inclusion::Elastic { nu_star: 5.0 });
        let m = DipoleMatrix::for_inclusion(&inc).unwrap();
        let a = p.delta_sigma0_with_dipole(&inc, &m).unwrap().delta_sigma0;
        let b = p.delta_sigma0_with_dipole(&inc, &m.scaled(2.0)).unwrap().delta_sigma0;
        assert!((b / a - 2.0).abs() < 1e-8);
    }

    #[test]
    fn circle_is_isotropic_and_flips_with_inverse_contrast() {
        let p = smooth_problem(0.4);
        let soft = Inclusion::Elastic { nu_star: 5.0 };
        let a = p.delta_sigma0(&inclusion(1.2, 0.0, 1.0, soft)).unwrap();
        let b = p.delta_sigma0(&inclusion(1.2, 1.1, 1.0, soft)).unwrap();
        assert!((a.delta_sigma0 - b.delta_sigma0).abs() < 1e-8 * a.delta_sigma0.abs());
        let stiff = p.delta_sigma0(&inclusion(1.2, 0.0, 1.0, Inclusion::Elastic { nu_star: 0.2 })).unwrap();
        assert!(stiff.delta_sigma0 * a.delta_sigma0 < 0.0);
        // the circle dipoles at ν* and 1/ν* are exact negatives
        assert!((stiff.delta_sigma0 + a.delta_sigma0).abs() < 1e-12 * a.delta_sigma0.abs());
    }

    #[test]
    fn linear_in_load_and_independent_of_size() {
        let m = Bimaterial::from_groups(0.3, 1.0, 2.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let one = PerturbationProblem::new(&CrackLoad::point_triple(1.0, 1.0, 0.25).unwrap(), &m, &spec).unwrap();
        let two = PerturbationProblem::new(&CrackLoad::point_triple(2.0, 1.0, 0.25).unwrap(), &m, &spec).unwrap();
        let inc = inclusion(0.8, 0.6, 0.4, Inclusion::Rigid);
        let a = one.delta_sigma0(&inc).unwrap();
        let b = two.delta_sigma0(&inc).unwrap();
        assert!((b.delta_sigma0 / a.delta_sigma0 - 2.0).abs() < 1e-8);
        let small = InclusionSpec { ell_a: 0.01, ell_b: 0.004, ..inc };
        let c = one.delta_sigma0(&small).unwrap();
        assert!((c.delta_sigma0 - a.delta_sigma0).abs() < 1e-12 * a.delta_sigma0.abs());
        assert!((c.epsilon - 0.01).abs() < 1e-15);
    }

    #[test]
    fn guard_band_is_enforced() {
        let p = smooth_problem(0.0);
        let near = inclusion(2f64.to_radians(), 0.0, 0.5, Inclusion::Rigid);
        assert!(matches!(p.delta_sigma0(&near), Err(Error::Geometry(_))));
        let behind = inclusion(PI - 2f64.to_radians(), 0.0, 0.5, Inclusion::Rigid);
        assert!(matches!(p.delta_sigma0(&behind), Err(Error::Geometry(_))));
    }

    #[test]
    fn sign_map_periodicity_and_isotropy() {
        let p = smooth_problem(0.0);
        let phis = [0.5, 1.5, -2.0];
        let alphas = [0.1, 0.7, 0.1 + PI, 0.7 + PI];
        let tpl = inclusion(1.0, 0.0, 0.5, Inclusion::Elastic { nu_star: 5.0 });
        let map = p.sign_map(&tpl, &phis, &alphas).unwrap();
        assert_eq!(map.len(), 3);
        for row in &map {
            for k in 0..2 {
                let (a, b) = (row[k].delta_sigma0, row[k + 2].delta_sigma0);
                assert!((a - b).abs() < 1e-8 * a.abs().max(1e-300));
                assert_eq!(row[k].sign, row[k + 2].sign);
            }
        }
        let circle = InclusionSpec { ell_b: tpl.ell_a, ..tpl };
        for row in p.sign_map(&circle, &phis, &alphas).unwrap() {
            for cell in &row {
                assert!((cell.delta_sigma0 - row[0].delta_sigma0).abs() < 1e-10 * row[0].delta_sigma0.abs());
            }
        }
        let single = p.delta_sigma0(&InclusionSpec { phi: 1.5, alpha: 0.7, ..tpl }).unwrap();
        assert_eq!(single.delta_sigma0, map[1][1].delta_sigma0);
    }
}
