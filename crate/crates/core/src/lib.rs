//! Crack-tip traction constants for a semi-infinite crack lying on a soft
//! imperfect interface between two anti-plane elastic half-planes.
//!
//! The pipeline is organised bottom-up:
//!
//! * [`numerics`]: adaptive Gauss-Kronrod quadrature, principal-value and
//!   half-line Fourier integrals, complex log-gamma and exponential integral.
//! * [`model`]: materials, crack-face loadings and inclusion geometry.
//! * [`kernel`]: Wiener-Hopf factorisation of `Ξ(ξ) = 1 + μ₀/|ξ|`.
//! * [`weightfn`]: weight-function transforms and the Betti-identity
//!   evaluation of the tip traction constant `σ₀`.
//! * [`unperturbed`]: the load-driven Wiener-Hopf problem and the physical
//!   field gradient away from the interface.
//! * [`perturbation`]: dipole matrices, effective tractions from a small
//!   inclusion, and the first-order change `Δσ₀`.
//!
//! Fourier transforms use the convention `f̄(ξ) = ∫ f(x) e^{iξx} dx`.

pub mod error;
pub mod kernel;
pub mod model;
pub mod numerics;

pub use error::{Error, Result};
pub use kernel::KernelFactors;
pub use model::{Bimaterial, CrackLoad, DerivedParams, Inclusion, InclusionSpec};
pub use numerics::{QuadratureSpec, C64};
pub mod weightfn;

pub use weightfn::{k3_perfect, ratio_r, sigma0, MaterialFamily, Sigma0Result, WeightFunction};
pub mod unperturbed;

pub use unperturbed::{FieldSample, UnperturbedSolution};
pub mod perturbation;

pub use perturbation::{
    delta_sigma0, DipoleMatrix, EffectiveTractions, PerturbationProblem, PerturbationResult, SignClass,
};
