//! Quadrature, principal values, half-line Fourier transforms and the
//! complex special functions used throughout the crate.

mod expint;
mod fourier;
mod gamma;
mod pv;
mod quadrature;

pub use expint::{exp_e1, one_minus_w_exp_e1};
pub use fourier::{halfline_fourier, HalfLine};
pub(crate) use fourier::oscillatory_tail;
pub use gamma::log_gamma;
pub use pv::pv_integral_even_logkernel;
pub use quadrature::{
    integrate_adaptive, integrate_breakpoints, integrate_sqrt_endpoint, FixedRule, Integral,
    QuadratureSpec,
};

pub type C64 = num_complex::Complex64;

/// `(ξ, value)` evaluation record of a transform-domain function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralSample {
    pub xi: f64,
    pub re: f64,
    pub im: f64,
}

impl SpectralSample {
    pub fn new(xi: f64, value: C64) -> Self {
        Self { xi, re: value.re, im: value.im }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}
