use std::f64::consts::PI;

use super::C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn clean(w: C64) -> C64 {
    // `-0.0` would put a point on the cut onto its lower side.
    C64::new(w.re, if w.im == 0.0 { 0.0 } else { w.im })
}

fn series_region(w: C64) -> bool {
    let r = w.norm();
    r <= 5.0 || (w.re < -2.0 * w.im.abs() && r < 40.0)
}

/// Scaled exponential integral `e^{w} E₁(w)` on the principal branch, with
/// the cut along the negative real axis approached from above.
pub fn exp_e1(w: C64) -> C64 {
    let w = clean(w);
    let r = w.norm();
    if r == 0.0 {
        return C64::new(f64::INFINITY, 0.0);
    }
    if series_region(w) {
        return w.exp() * e1_series(w);
    }
    if r >= 40.0 {
        return asymptotic(w).1;
    }
    continued_fraction(w)
}

/// `1 − w·e^{w}E₁(w)`, evaluated without cancellation for large `|w|`.
pub fn one_minus_w_exp_e1(w: C64) -> C64 {
    let w = clean(w);
    if w.norm() >= 40.0 {
        return asymptotic(w).0;
    }
    1.0 - w * exp_e1(w)
}

fn e1_series(w: C64) -> C64 {
    // E₁(w) = −γ − ln w − Σ_{k≥1} (−w)^k / (k·k!)
    let mut sum = C64::new(0.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for k in 1..400 {
        let kf = k as f64;
        term *= -w / kf;
        let add = term / kf;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - w.ln() - sum
}

fn continued_fraction(w: C64) -> C64 {
    // e^{w}E₁(w) = 1/(w+1− 1/(w+3− 4/(w+5− …))) via modified Lentz.
    let tiny = 1e-300;
    let mut b = w + 1.0;
    let mut c = C64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..5000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = (b + d * an).inv();
        c = b + c.inv() * an;
        if c.norm() < tiny {
            c = C64::new(tiny, 0.0);
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

// Returns (1 − w·f, f) with f = e^{w}E₁(w) from the divergent asymptotic
// series, truncated at its smallest term. Valid for |w| ≥ 40.
fn asymptotic(w: C64) -> (C64, C64) {
    let inv = w.inv();
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(1.0, 0.0);
    let mut tail = C64::new(0.0, 0.0);
    let r = w.norm();
    let mut k = 1usize;
    loop {
        let next = term * (-(k as f64)) * inv;
        if next.norm() >= term.norm() || k as f64 > r {
            break;
        }
        term = next;
        sum += term;
        tail -= term;
        if term.norm() < 1e-18 {
            break;
        }
        k += 1;
    }
    let mut f = sum * inv;
    // Just above the negative real axis the Stokes term iπe^{w} is not
    // captured by the series; it is below 1e-17 for |w| ≥ 40 anyway.
    if w.re < 0.0 && w.im == 0.0 {
        f -= C64::new(0.0, PI) * w.exp();
    }
    (tail, f)
}
