//! Materials, crack-face loadings and inclusion geometry.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::C64;

/// Two shear moduli bonded through a soft interface of compliance `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bimaterial {
    pub mu1: f64,
    pub mu2: f64,
    pub kappa: f64,
}

/// Dimensionless groups and the inverse interface length `μ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub mu0: f64,
    pub mu_star: f64,
    pub kappa_star: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Bimaterial {
    pub fn new(mu1: f64, mu2: f64, kappa: f64) -> Result<Self> {
        let m = Self { mu1, mu2, kappa };
        m.validate()?;
        Ok(m)
    }

    /// Material with contrast `mu_star`, modulus sum `mu1 + mu2 = sum` and
    /// the compliance that realises `kappa_star` for load length `a`.
    pub fn from_groups(mu_star: f64, kappa_star: f64, sum: f64, a: f64) -> Result<Self> {
        if !(mu_star > -1.0 && mu_star < 1.0) {
            return Err(Error::Domain(format!("mu_star must lie in (-1, 1), got {mu_star}")));
        }
        positive("kappa_star", kappa_star)?;
        positive("modulus sum", sum)?;
        positive("a", a)?;
        Self::new(0.5 * sum * (1.0 + mu_star), 0.5 * sum * (1.0 - mu_star), kappa_star * a / sum)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mu1", self.mu1)?;
        positive("mu2", self.mu2)?;
        positive("kappa", self.kappa)
    }

    pub fn mu0(&self) -> f64 {
        (self.mu1 + self.mu2) / (self.mu1 * self.mu2 * self.kappa)
    }

    pub fn mu_star(&self) -> f64 {
        (self.mu1 - self.mu2) / (self.mu1 + self.mu2)
    }

    pub fn kappa_star(&self, a: f64) -> f64 {
        self.kappa * (self.mu1 + self.mu2) / a
    }

    pub fn derive_params(&self, a: f64) -> Result<DerivedParams> {
        self.validate()?;
        positive("a", a)?;
        Ok(DerivedParams { mu0: self.mu0(), mu_star: self.mu_star(), kappa_star: self.kappa_star(a) })
    }
}

/// Closed-form transforms `(⟨p̄⟩, ⟦p̄⟧)` of the point-load triple: `F` on the
/// upper face at `x = −a`, balanced by `F/2` at `x = −a ± b` on the lower face.
pub fn point_load_transforms(force: f64, a: f64, b: f64, xi: f64) -> (C64, C64) {
    let e = C64::from_polar(1.0, b * xi);
    let shift = C64::from_polar(1.0, -(a + b) * xi);
    let avg = (e + 1.0).powi(2) * shift * (force / 4.0);
    let jump = (e - 1.0).powi(2) * shift * (-force / 2.0);
    (avg, jump)
}

/// Transforms of the faces `p₊(ξ) = (4/9)/(2+iξ)²`, `p₋(ξ) = 1/(3+iξ)²`.
pub fn smooth_face_transforms(xi: f64) -> (C64, C64) {
    let upper = C64::new(2.0, xi).powi(-2) * (4.0 / 9.0);
    let lower = C64::new(3.0, xi).powi(-2);
    (upper, lower)
}

/// `(⟨p̄⟩, ⟦p̄⟧)` of the smooth exponential loading.
pub fn smooth_load_transforms(xi: f64) -> (C64, C64) {
    let (up, lo) = smooth_face_transforms(xi);
    ((up + lo) * 0.5, up - lo)
}

/// One exponential `e^{−iωξ}` in a point-load transform, with the
/// coefficients it carries in `⟨p̄⟩` and `⟦p̄⟧`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tone {
    pub omega: f64,
    pub avg: f64,
    pub jump: f64,
}

type Transform = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// A loading known only through its transforms, with declared decay
/// `|p̄(ξ)| = O(ξ^{-(1+δ)})`.
#[derive(Clone)]
pub struct CustomLoad {
    avg: Transform,
    jump: Transform,
    delta: f64,
}

impl fmt::Debug for CustomLoad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomLoad").field("delta", &self.delta).finish_non_exhaustive()
    }
}

/// Self-balanced anti-plane tractions on the crack faces.
#[derive(Debug, Clone)]
pub enum CrackLoad {
    PointTriple { force: f64, a: f64, b: f64 },
    SmoothExponential,
    Custom(CustomLoad),
}

impl CrackLoad {
    pub fn point_triple(force: f64, a: f64, b: f64) -> Result<Self> {
        if !force.is_finite() {
            return Err(Error::Domain(format!("F must be finite, got {force}")));
        }
        positive("a", a)?;
        positive("b", b)?;
        if b >= a {
            return Err(Error::Domain(format!("point loads need 0 < b < a, got a={a}, b={b}")));
        }
        Ok(Self::PointTriple { force, a, b })
    }

    pub fn smooth() -> Self {
        Self::SmoothExponential
    }

    /// Custom transforms; `|⟦p̄⟧(0)|` must be below `1e-12`.
    pub fn custom<A, J>(avg: A, jump: J, delta: f64) -> Result<Self>
    where
        A: Fn(f64) -> C64 + Send + Sync + 'static,
        J: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        positive("decay exponent", delta)?;
        let j0 = jump(0.0).norm();
        if !(j0 < 1e-12) {
            return Err(Error::SelfBalanceViolation(j0));
        }
        Ok(Self::Custom(CustomLoad { avg: Arc::new(avg), jump: Arc::new(jump), delta }))
    }

    /// `(⟨p̄⟩(ξ), ⟦p̄⟧(ξ))`.
    pub fn transforms(&self, xi: f64) -> (C64, C64) {
        match self {
            Self::PointTriple { force, a, b } => point_load_transforms(*force, *a, *b, xi),
            Self::SmoothExponential => smooth_load_transforms(xi),
            Self::Custom(c) => ((c.avg)(xi), (c.jump)(xi)),
        }
    }

    pub fn avg(&self, xi: f64) -> C64 {
        self.transforms(xi).0
    }

    pub fn jump(&self, xi: f64) -> C64 {
        self.transforms(xi).1
    }

    /// Exponential decomposition of an oscillatory (point) loading.
    pub fn tones(&self) -> Option<Vec<Tone>> {
        match self {
            Self::PointTriple { force, a, b } => Some(vec![
                Tone { omega: a - b, avg: force / 4.0, jump: -force / 2.0 },
                Tone { omega: *a, avg: force / 2.0, jump: *force },
                Tone { omega: a + b, avg: force / 4.0, jump: -force / 2.0 },
            ]),
            _ => None,
        }
    }

    /// Decay exponent `δ` of the transforms, `None` for non-decaying ones.
    pub fn decay_exponent(&self) -> Option<f64> {
        match self {
            Self::PointTriple { .. } => None,
            Self::SmoothExponential => Some(1.0),
            Self::Custom(c) => Some(c.delta),
        }
    }

    /// Characteristic load length: the distance of the loads from the tip.
    pub fn length_scale(&self) -> f64 {
        match self {
            Self::PointTriple { a, .. } => *a,
            Self::SmoothExponential => 0.5,
            Self::Custom(_) => 1.0,
        }
    }

    /// Length `a` entering `κ* = κ(μ₁+μ₂)/a`: the upper-face load position
    /// for point loads, unity otherwise.
    pub fn reference_length(&self) -> f64 {
        match self {
            Self::PointTriple { a, .. } => *a,
            _ => 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::PointTriple { force, .. } if *force == 0.0)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::PointTriple { .. } => "point",
            Self::SmoothExponential => "smooth",
            Self::Custom(_) => "custom",
        }
    }

    /// Face tractions `(p₊(x), p₋(x))` for `x < 0` when they are ordinary
    /// functions (smooth loading only).
    pub fn faces_x(&self, x: f64) -> Option<(f64, f64)> {
        match self {
            Self::SmoothExponential if x < 0.0 => {
                Some((-(4.0 / 9.0) * x * (2.0 * x).exp(), -x * (3.0 * x).exp()))
            }
            Self::SmoothExponential => Some((0.0, 0.0)),
            _ => None,
        }
    }
}

/// Elastic contrast of the inclusion or the rigid limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inclusion {
    Elastic { nu_star: f64 },
    Rigid,
}

/// Elliptic defect centred at distance `d`, angle `phi` from the interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionSpec {
    pub d: f64,
    pub phi: f64,
    pub alpha: f64,
    pub ell_a: f64,
    pub ell_b: f64,
    pub inclusion: Inclusion,
}

impl InclusionSpec {
    pub fn validate(&self) -> Result<()> {
        positive("d", self.d)?;
        positive("ell_b", self.ell_b)?;
        if self.ell_a < self.ell_b {
            return Err(Error::Domain(format!(
                "semi-axes must satisfy ell_a >= ell_b, got {} < {}",
                self.ell_a, self.ell_b
            )));
        }
        if !(self.phi.abs() > 0.0 && self.phi.abs() < PI) {
            return Err(Error::Geometry(format!("phi must lie in (-pi, 0) or (0, pi), got {}", self.phi)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        if let Inclusion::Elastic { nu_star } = self.inclusion {
            positive("nu_star", nu_star)?;
        }
        if self.epsilon() >= 1.0 {
            return Err(Error::Geometry(format!("epsilon = ell_a/d must be below 1, got {}", self.epsilon())));
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        self.ell_a / self.d
    }

    pub fn aspect(&self) -> f64 {
        self.ell_b / self.ell_a
    }

    /// Centre `Y = (d cos φ, d sin φ)`.
    pub fn centre(&self) -> (f64, f64) {
        (self.d * self.phi.cos(), self.d * self.phi.sin())
    }
}

/// Centre of the inclusion.
pub fn inclusion_centre(s: &InclusionSpec) -> (f64, f64) {
    s.centre()
}
