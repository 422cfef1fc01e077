//! Regularized incomplete beta function.

use super::gamma::ln_gamma;

/// Continued fraction for `I_u(a, b)` (modified Lentz), valid for `u < (a+1)/(a+b+2)`.
fn continued_fraction(a: f64, b: f64, u: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let max_iter = 10_000 + (50.0 * a.max(b).sqrt()) as usize;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * u / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..max_iter {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * u / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * u / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_u(a, b)` for `a, b > 0`, `u ∈ [0, 1]`.
///
/// The continued fraction is applied directly below the pivot `(a+1)/(a+b+2)` and to the
/// reflected argument above it.  Endpoints are exact; invalid input yields NaN.
pub fn reg_inc_beta(a: f64, b: f64, u: f64) -> f64 {
    if !(a > 0.0) || !(b > 0.0) || !(0.0..=1.0).contains(&u) {
        return f64::NAN;
    }
    if u == 0.0 {
        return 0.0;
    }
    if u == 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * u.ln() + b * (-u).ln_1p();
    let front = ln_front.exp();
    if u < (a + 1.0) / (a + b + 2.0) {
        (front * continued_fraction(a, b, u) / a).clamp(0.0, 1.0)
    } else {
        (1.0 - front * continued_fraction(b, a, 1.0 - u) / b).clamp(0.0, 1.0)
    }
}
