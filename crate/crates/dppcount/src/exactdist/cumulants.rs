//! Cumulants of the counting statistic as sums of Bernoulli cumulants.

use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::exactdist::{ModeTable, DEFAULT_EPS};

/// Highest cumulant order supported.
pub const MAX_CUMULANT_ORDER: u32 = 8;

/// Integer coefficients (in powers of `p`) of the `q`-th cumulant of a Bernoulli(`p`) variable,
/// generated by `κ_{q+1} = p(1 − p) κ_q′` from `κ_1 = p`.
///
/// # Errors
/// [`Error::Range`] for `q = 0` or `q > 8`.
pub fn bernoulli_cumulant_poly(q: u32) -> Result<Vec<i64>> {
    if q == 0 || q > MAX_CUMULANT_ORDER {
        return Err(Error::Range(format!("cumulant order must lie in 1..=8, got {q}")));
    }
    let mut poly = vec![0, 1];
    for _ in 1..q {
        let deriv: Vec<i64> = poly.iter().enumerate().skip(1).map(|(i, &c)| i as i64 * c).collect();
        // Multiply by p − p².
        let mut next = vec![0; deriv.len() + 2];
        for (i, &c) in deriv.iter().enumerate() {
            next[i + 1] += c;
            next[i + 2] -= c;
        }
        poly = next;
    }
    while poly.len() > 1 && poly.last() == Some(&0) {
        poly.pop();
    }
    Ok(poly)
}

fn horner(poly: &[i64], p: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * p + c as f64)
}

/// `q`-th cumulant of Bernoulli(`p`); for `q ≥ 2` it is evaluated at `min(p, 1 − p)` using
/// `κ_q(1 − p) = (−1)^q κ_q(p)`.
///
/// # Errors
/// As for [`bernoulli_cumulant_poly`]; [`Error::Domain`] for `p ∉ [0, 1]`.
pub fn bernoulli_cumulant(q: u32, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let poly = bernoulli_cumulant_poly(q)?;
    Ok(if q == 1 || p <= 0.5 {
        horner(&poly, p)
    } else {
        let s = if q % 2 == 0 { 1.0 } else { -1.0 };
        s * horner(&poly, 1.0 - p)
    })
}

/// `q`-th cumulant of `Ξ_R = N − R` (so `q = 1` gives the centring error, ideally `0`).
///
/// # Errors
/// As for [`bernoulli_cumulant_poly`] and [`ModeTable::build`].
pub fn exact_cumulant(e: &Ensemble, big_r: f64, q: u32) -> Result<f64> {
    let poly = bernoulli_cumulant_poly(q)?;
    let table = ModeTable::build(e, big_r, DEFAULT_EPS)?;
    if q == 1 {
        let s: f64 = table.lambdas().iter().sum();
        return Ok(table.window().deterministic_count as f64 + s - big_r);
    }
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    Ok(table
        .pairs()
        .map(|(p, c)| if p <= 0.5 { horner(&poly, p) } else { sign * horner(&poly, c) })
        .sum())
}
