//! Certified upper bounds on the tails `λ_k(R)` and `1 − λ_k(R)` and on their sums over the
//! modes outside a truncation window.
//!
//! * Ginibre, `α = 0`: Chernoff `e^{k−R}(R/k)^k` for the single-mode bound; window sums use the
//!   Poisson-term ratios `λ_{k+1} ≤ R/(k+1)·λ_k` and `1 − λ_{k−1} ≤ (k−1)/R·(1 − λ_k)`.
//! * Ginibre, `α ≥ 1`: comparison with standard gamma laws,
//!   `λ_k ≤ 3^{2α+1} R^{α+1} Pr{Γ_{k−2α−2} ≤ R}` for `k ≥ R > 2α+2` and
//!   `1 − λ_k ≤ 4^α k^α Pr{Γ_{k+α} ≥ R}` for `k ≤ R`.
//! * Hyperbolic: `I_u(k, ρ) ≤ u^k max(1, (1−u)^{ρ−1})/(k B(k, ρ))` and the ratio
//!   `λ_{k+1} ≤ u(1 + ρ/k)·λ_k`, `u = R/(ρ+R)`.

use crate::ensembles::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, ln_reg_inc_gamma};

/// `ln` of the Chernoff bound `e^{m−R}(R/m)^m` (a bound on `Pr{Γ_m ≤ R}` for `m ≥ R` and on
/// `Pr{Γ_m ≥ R}` for `m ≤ R`).
fn ln_chernoff(m: f64, big_r: f64) -> f64 {
    if big_r == 0.0 {
        return f64::NEG_INFINITY;
    }
    m - big_r + m * (big_r / m).ln()
}

fn check(k: u64, big_r: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("modes are indexed from k = 1".into()));
    }
    if !(big_r >= 0.0) || big_r.is_infinite() {
        return Err(Error::Domain(format!("unfolded radius must be finite and non-negative, got {big_r}")));
    }
    Ok(())
}

/// Smallest radius at which the `α ≥ 1` comparison bound for `λ_k` is valid.
fn alpha_floor(alpha: u32) -> f64 {
    2.0 * alpha as f64 + 2.0 + 1e-9
}

/// `(ln B_λ, ln B_{1−λ})`: logs of certified upper bounds on `λ_k(R)` and `1 − λ_k(R)` (`0` when
/// no useful bound applies on that side).
fn ln_bounds(e: &Ensemble, k: u64, big_r: f64) -> (f64, f64) {
    if let Some(n) = e.n_particles() {
        if k > n {
            return (f64::NEG_INFINITY, 0.0);
        }
    }
    let kf = k as f64;
    match e.family() {
        Family::Hyperbolic => {
            let rho = e.rho().expect("hyperbolic has rho");
            if big_r == 0.0 {
                return (f64::NEG_INFINITY, 0.0);
            }
            let (ln_u, ln_1mu) = ((big_r / (rho + big_r)).ln(), (rho / (rho + big_r)).ln());
            let ln_beta = ln_gamma(kf) + ln_gamma(rho) - ln_gamma(kf + rho);
            let up = kf * ln_u + ((rho - 1.0) * ln_1mu).max(0.0) - kf.ln() - ln_beta;
            let lo = rho * ln_1mu + ((kf - 1.0) * ln_u).max(0.0) - rho.ln() - ln_beta;
            (up.min(0.0), lo.min(0.0))
        }
        _ => {
            let alpha = e.alpha();
            if alpha == 0 {
                let up = if kf >= big_r { ln_chernoff(kf, big_r) } else { 0.0 };
                let lo = if kf <= big_r { ln_chernoff(kf, big_r) } else { 0.0 };
                return (up.min(0.0), lo.min(0.0));
            }
            let af = alpha as f64;
            // λ_k(R) is non-decreasing in R, so the bound at a larger radius still applies.
            let r_up = big_r.max(alpha_floor(alpha));
            let up = if kf >= r_up {
                (2.0 * af + 1.0) * 3f64.ln()
                    + (af + 1.0) * r_up.ln()
                    + ln_reg_inc_gamma(kf - 2.0 * af - 2.0, r_up).0
            } else {
                0.0
            };
            let lo = if kf <= big_r {
                af * (4.0 * kf).ln() + ln_reg_inc_gamma(kf + af, big_r).1
            } else {
                0.0
            };
            (up.min(0.0), lo.min(0.0))
        }
    }
}

/// Certified upper bounds `(B_λ, B_{1−λ})` with `λ_k(R) ≤ B_λ` and `1 − λ_k(R) ≤ B_{1−λ}`.
///
/// The side on which a bound is informative is selected automatically (upper tail for `k ≥ R`,
/// lower tail for `k ≤ R` in the Ginibre families); the other side is the trivial bound `1`.
/// The minimum of the pair bounds `min(λ_k, 1 − λ_k)`.
///
/// # Errors
/// [`Error::Domain`] for `k = 0` or a negative or infinite radius.
pub fn tail_bound(e: &Ensemble, k: u64, big_r: f64) -> Result<(f64, f64)> {
    check(k, big_r)?;
    let (a, b) = ln_bounds(e, k, big_r);
    Ok((a.exp(), b.exp()))
}

/// Geometric tail sum `x₀^δ/(1 − q^δ)`, or `+∞` when `q ≥ 1`.
fn geometric(ln_first: f64, q: f64, delta: f64) -> f64 {
    if ln_first == f64::NEG_INFINITY {
        return 0.0;
    }
    if !(q < 1.0) {
        return f64::INFINITY;
    }
    let qd = q.max(0.0).powf(delta);
    (delta * ln_first).exp() / (1.0 - qd)
}

/// `ln` of the geometric tail sum `x₀^δ/(1 − q^δ)`: `−∞` for `x₀ = 0`, `+∞` when `q ≥ 1`.
fn ln_geometric(ln_first: f64, q: f64, delta: f64) -> f64 {
    if ln_first == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if !(q < 1.0) {
        return f64::INFINITY;
    }
    delta * ln_first - (-q.max(0.0).powf(delta)).ln_1p()
}

/// Certified upper bound on `Σ_{k > K} λ_k(R)^δ` (`δ ∈ (0, 1]`); `+∞` if no bound is available
/// at this `K` (the window must be widened).
///
/// # Errors
/// [`Error::Domain`] for invalid `R` or `δ`; evaluation errors of `λ_{K+1}`.
pub fn upper_tail_mass_bound(e: &Ensemble, k_cut: u64, big_r: f64, delta: f64) -> Result<f64> {
    Ok(ln_upper_tail_mass_bound(e, k_cut, big_r, delta)?.exp())
}

/// Logarithm of [`upper_tail_mass_bound`], finite far below the `f64` underflow threshold.
///
/// # Errors
/// As for [`upper_tail_mass_bound`].
pub fn ln_upper_tail_mass_bound(e: &Ensemble, k_cut: u64, big_r: f64, delta: f64) -> Result<f64> {
    check(1, big_r)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("exponent must lie in (0, 1], got {delta}")));
    }
    if let Some(n) = e.n_particles() {
        if k_cut >= n {
            return Ok(f64::NEG_INFINITY);
        }
    }
    let first = k_cut + 1;
    let kf = first as f64;
    match e.family() {
        Family::Hyperbolic => {
            let rho = e.rho().expect("hyperbolic has rho");
            let u = big_r / (rho + big_r);
            let q = u * (1.0 + rho / kf);
            // The incomplete beta underflows in the deep tail; its certified bound does not.
            let exact = e.ln_lambda_pair(first, big_r)?.0;
            let ln_first = if exact > f64::NEG_INFINITY || big_r == 0.0 { exact } else { ln_bounds(e, first, big_r).0 };
            Ok(ln_geometric(ln_first, q, delta))
        }
        _ if e.alpha() == 0 => {
            let q = big_r / (kf + 1.0);
            Ok(ln_geometric(e.ln_lambda_pair(first, big_r)?.0, q, delta))
        }
        _ => {
            let af = e.alpha() as f64;
            let r_up = big_r.max(alpha_floor(e.alpha()));
            if kf < r_up {
                return Ok(f64::INFINITY);
            }
            // The comparison bound's gamma index m = k − 2α − 2 has Poisson ratio R/(m+1).
            let m = kf - 2.0 * af - 2.0;
            let q = r_up / (m + 1.0);
            Ok(ln_geometric(ln_bounds(e, first, big_r).0, q, delta))
        }
    }
}

/// Certified upper bound on `Σ_{1 ≤ k < K} (1 − λ_k(R))^δ` (`δ ∈ (0, 1]`); `+∞` if no bound is
/// available at this `K`.
///
/// # Errors
/// As for [`upper_tail_mass_bound`].
pub fn lower_tail_mass_bound(e: &Ensemble, k_cut: u64, big_r: f64, delta: f64) -> Result<f64> {
    check(1, big_r)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("exponent must lie in (0, 1], got {delta}")));
    }
    if k_cut <= 1 {
        return Ok(0.0);
    }
    let last = k_cut - 1;
    let kf = last as f64;
    match e.family() {
        Family::Hyperbolic => {
            // No geometric decay towards k = 1; sum the single-mode bounds.
            Ok((1..=last).map(|k| (delta * ln_bounds(e, k, big_r).1).exp()).sum())
        }
        _ if e.alpha() == 0 => {
            let q = (kf - 1.0) / big_r;
            Ok(geometric(e.ln_lambda_pair(last, big_r)?.1, q, delta))
        }
        _ => {
            if kf > big_r {
                return Ok(f64::INFINITY);
            }
            let q = (kf + e.alpha() as f64) / big_r;
            Ok(geometric(ln_bounds(e, last, big_r).1, q, delta))
        }
    }
}
