//! Edgeworth expansion of the Ginibre-type radii laws and their exact transforms.
//!
//! `(Γ_{k−α}^{(α)} − k)/√k` converges to `Z_α` (density `h_α²`) and
//! `Pr{(Γ_{k−α}^{(α)} − k)/√k ≤ x} = (1 − Φ_α(x)) + c_k Φ_α‴(x) + O(1/k)`.

use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::specfun::{hermite_sq_derivs, hermite_tail};

/// Coefficient `c_k` of `Φ_α‴` in the first Edgeworth correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeworthCoefficient {
    /// `1/(3√k)`, the value consistent with the skewness of the gamma law (default).
    #[default]
    Third,
    /// `1/√(3k)`, an alternative normalization kept for comparison.
    RootThird,
}

impl EdgeworthCoefficient {
    /// `c_k`.
    pub fn value(self, k: u64) -> f64 {
        let kf = k as f64;
        match self {
            Self::Third => 1.0 / (3.0 * kf.sqrt()),
            Self::RootThird => 1.0 / (3.0 * kf).sqrt(),
        }
    }
}

fn check(alpha: u32, k: u64) -> Result<()> {
    if k < 2 * alpha as u64 + 2 {
        return Err(Error::Domain(format!("the expansion needs k ≥ 2α + 2, got k = {k}, α = {alpha}")));
    }
    Ok(())
}

/// Edgeworth approximation `(1 − Φ_α(x)) + Φ_α‴(x)/(3√k)` to
/// `Pr{(Γ_{k−α}^{(α)} − k)/√k ≤ x}`.
///
/// # Errors
/// [`Error::Domain`] if `k < 2α + 2`; [`Error::Range`] for `α > 60`.
pub fn edgeworth_cdf(alpha: u32, k: u64, x: f64) -> Result<f64> {
    edgeworth_cdf_with(alpha, k, x, EdgeworthCoefficient::Third)
}

/// [`edgeworth_cdf`] with a selectable correction coefficient.
///
/// # Errors
/// As for [`edgeworth_cdf`].
pub fn edgeworth_cdf_with(alpha: u32, k: u64, x: f64, coef: EdgeworthCoefficient) -> Result<f64> {
    check(alpha, k)?;
    if x.is_infinite() {
        return Ok(if x > 0.0 { 1.0 } else { 0.0 });
    }
    let lead = hermite_tail(alpha, -x)?;
    let d3phi = -hermite_sq_derivs(alpha, x)?[2];
    Ok(lead + coef.value(k) * d3phi)
}

/// Exact `Pr{(Γ_{k−α}^{(α)} − k)/√k ≤ x} = λ_{k−α}(k + x√k)` (zero when the radius is negative).
///
/// # Errors
/// As for [`edgeworth_cdf`], plus evaluation errors of the radii law.
pub fn edgeworth_exact_cdf(alpha: u32, k: u64, x: f64) -> Result<f64> {
    check(alpha, k)?;
    let big_r = k as f64 + x * (k as f64).sqrt();
    if big_r <= 0.0 {
        return Ok(0.0);
    }
    if big_r.is_infinite() {
        return Ok(1.0);
    }
    Ensemble::ginibre(alpha)?.lambda_k(k - alpha as u64, big_r)
}

/// Binomial coefficient with `binom(n, m) = 0` for `n < m` (and for negative `n`).
fn binom(n: i64, m: u32) -> f64 {
    if n < m as i64 {
        return 0.0;
    }
    (0..m).fold(1.0, |acc, i| acc * (n - i as i64) as f64 / (i + 1) as f64)
}

/// Moment generating function of `Γ_{k−α}^{(α)}` (mean `k`):
/// `(1 − z)^{−k} Σ_ℓ binom(α, ℓ) binom(k−α−1, ℓ) z^{2ℓ}`.
///
/// # Errors
/// [`Error::Domain`] for `z ≥ 1` (pole) or `k ≤ α`.
pub fn mgf_alpha(alpha: u32, k: u64, z: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::Domain(format!("the transform has a pole at z = 1; got z = {z}")));
    }
    if k <= alpha as u64 {
        return Err(Error::Domain(format!("need k > α, got k = {k}, α = {alpha}")));
    }
    let z2 = z * z;
    let n = k as i64 - alpha as i64 - 1;
    let poly: f64 = (0..=alpha)
        .map(|l| binom(alpha as i64, l) * binom(n, l) * z2.powi(l as i32))
        .sum();
    Ok(poly * (-(k as f64) * (-z).ln_1p()).exp())
}

/// Moment generating function of `Z_α`: `E[e^{zZ_α}] = L_α(−z²) e^{z²/2}` with the classical
/// Laguerre polynomial `L_α(y) = Σ_ℓ binom(α, ℓ)(−y)^ℓ/ℓ!`.
pub fn cf_z(alpha: u32, z: f64) -> f64 {
    let y = z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for l in 1..=alpha {
        term *= (alpha - l + 1) as f64 / (l as f64) * y / l as f64;
        sum += term;
    }
    sum * (0.5 * y).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::laguerre_law::density;
    use crate::specfun::{hermite_sq, quad_breaks, QuadOptions};
    use std::f64::consts::PI;

    #[test]
    fn edgeworth_examples() {
        let v = edgeworth_cdf(0, 100, 0.0).unwrap();
        assert!((v - (0.5 + 1.0 / (3.0 * (2.0 * PI * 100.0).sqrt()))).abs() < 1e-15);
        assert!((v - 0.51330).abs() < 1e-5);
        let exact = crate::specfun::reg_inc_gamma(100.0, 100.0);
        assert!((v - exact).abs() < 1e-2);
        assert_eq!(edgeworth_cdf(2, 10, f64::INFINITY).unwrap(), 1.0);
        assert!(edgeworth_cdf(2, 5, 0.0).is_err());
        let alt = edgeworth_cdf_with(0, 100, 0.0, EdgeworthCoefficient::RootThird).unwrap();
        assert!((alt - (0.5 + 1.0 / (3.0f64 * 100.0).sqrt() / (2.0 * PI).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn mgf_matches_density_quadrature() {
        for (alpha, k) in [(0u32, 5u64), (1, 5), (2, 9), (2, 3), (3, 6)] {
            let j = k - alpha as u64;
            for z in [-0.7, -0.2, 0.3] {
                let f = |x: f64| if x > 600.0 { 0.0 } else { density(alpha, j, x) * (z * x).exp() };
                let q = quad_breaks(f, &[0.0, f64::INFINITY], QuadOptions::abs_rel(1e-13, 1e-12))
                    .unwrap();
                let m = mgf_alpha(alpha, k, z).unwrap();
                assert!((q.value / m - 1.0).abs() < 1e-9, "alpha={alpha} k={k} z={z}: {} vs {m}", q.value);
            }
        }
        assert!(mgf_alpha(0, 3, 1.0).is_err());
    }

    #[test]
    fn cf_matches_hermite_quadrature() {
        assert!((cf_z(1, 0.7) - 1.49 * (0.245f64).exp()).abs() < 1e-14);
        for alpha in [0u32, 1, 2, 4] {
            for z in [-1.2, 0.5, 2.0] {
                let q = quad_breaks(
                    |x: f64| if x.abs() > 60.0 { 0.0 } else { hermite_sq(alpha, x).unwrap() * (z * x).exp() },
                    &[f64::NEG_INFINITY, f64::INFINITY],
                    QuadOptions::abs_rel(1e-13, 1e-12),
                )
                .unwrap();
                assert!((q.value / cf_z(alpha, z) - 1.0).abs() < 1e-10, "alpha={alpha} z={z}");
            }
        }
    }

    #[test]
    fn edgeworth_error_decays_like_one_over_k() {
        let xs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.1).collect();
        for alpha in [0u32, 1, 2] {
            let errs: Vec<f64> = [25u64, 100, 400]
                .iter()
                .map(|&k| {
                    xs.iter()
                        .map(|&x| {
                            (edgeworth_exact_cdf(alpha, k, x).unwrap()
                                - edgeworth_cdf(alpha, k, x).unwrap())
                            .abs()
                        })
                        .fold(0.0, f64::max)
                })
                .collect();
            let slope = (errs[2].ln() - errs[0].ln()) / (400f64.ln() - 25f64.ln());
            assert!(slope <= -0.8, "alpha={alpha}: errors {errs:?}, slope {slope}");
        }
    }
}
