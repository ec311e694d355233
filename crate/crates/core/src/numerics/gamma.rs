use std::f64::consts::PI;

use super::C64;
use crate::error::{Error, Result};

// B_{2k} / (2k(2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Principal branch of `ln Γ(z)`: continuous on ℂ minus the non-positive
/// real axis and real on the positive real axis.
pub fn log_gamma(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma argument {z} is not finite")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        return Ok(reflected(z));
    }
    Ok(shifted_stirling(z))
}

fn shifted_stirling(z: C64) -> C64 {
    // Recur upward until the asymptotic series is accurate to full precision.
    // The product is accumulated directly (one rounding in its modulus),
    // the branch from the summed arguments.
    let mut prod = C64::new(1.0, 0.0);
    let mut phase = 0.0;
    let mut w = z;
    while w.norm() < 17.0 {
        prod *= w;
        phase += w.arg();
        w += 1.0;
    }
    stirling(w) - C64::new(prod.norm().ln(), phase)
}

fn stirling(z: C64) -> C64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = C64::new(0.0, 0.0);
    for c in STIRLING {
        series += term * c;
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

fn reflected(z: C64) -> C64 {
    // ln Γ(z) = ln π − ln sin(πz) − ln Γ(1−z), with the 2πi multiple chosen
    // so the result stays on the principal branch.
    let one_minus = shifted_stirling(1.0 - z);
    let s = ln_sin_pi(z);
    let raw = C64::new(PI.ln(), 0.0) - s - one_minus;
    // The principal branch has Im ln Γ continuous across Re z = 1/2 and
    // tending to the Stirling value; pick the branch nearest to it.
    let target = stirling_phase_estimate(z);
    let k = ((target - raw.im) / (2.0 * PI)).round();
    C64::new(raw.re, raw.im + 2.0 * PI * k)
}

// ln sin(πz) written to avoid overflow for large |Im z|.
fn ln_sin_pi(z: C64) -> C64 {
    let y = PI * z.im;
    if y.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = (e^{iπz} − e^{−iπz})/(2i); keep the dominant exponential.
    let x = PI * z.re;
    if y > 0.0 {
        // dominant e^{−iπz}: sin ≈ −e^{−iπz}/(2i)·(1 − e^{2iπz})
        let lead = C64::new(y, -x) - C64::new(2f64.ln(), 0.0) + C64::new(0.0, PI / 2.0);
        lead + (1.0 - (C64::new(-2.0 * y, 2.0 * x)).exp()).ln()
    } else {
        let lead = C64::new(-y, x) - C64::new(2f64.ln(), 0.0) - C64::new(0.0, PI / 2.0);
        lead + (1.0 - (C64::new(2.0 * y, -2.0 * x)).exp()).ln()
    }
}

// Imaginary part of ln Γ(z) on the principal branch, obtained by following
// the recurrence ln Γ(z) = ln Γ(z+n) − Σ ln(z+k) with principal logarithms,
// which stays continuous when Im z ≠ 0.
fn stirling_phase_estimate(z: C64) -> f64 {
    let n = (0.5 - z.re).ceil().max(0.0) as usize + 1;
    let mut shift = 0.0;
    let mut w = z;
    for _ in 0..n {
        shift += w.arg();
        w += 1.0;
    }
    shifted_stirling(w).im - shift
}
