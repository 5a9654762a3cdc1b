//! Complementary error function helpers.

use std::f64::consts::PI;

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

const CF_SWITCH: f64 = 2.0;

/// Scaled complementary error function `exp(x^2) * erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < CF_SWITCH {
        return (x * x).exp() * erfc(x);
    }
    // Lentz evaluation of the continued fraction
    // erfcx(x) = 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..200 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// `ln(erfc(x))` without underflow for large positive `x`.
pub fn ln_erfc(x: f64) -> f64 {
    if x > 0.0 {
        erfcx(x).ln() - x * x
    } else {
        erfc(x).ln()
    }
}
