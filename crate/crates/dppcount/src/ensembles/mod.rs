//! Ensemble descriptors, radii laws, limiting profiles, tail bounds and Edgeworth corrections.
//!
//! Every supported ensemble is described by independent "radii" `Γ_k`, `k ≥ 1`, after the
//! unfolding `R = T(r)` that makes the expected number of points in the disk `D_r` equal to `R`.
//! The probability that mode `k` is inside the disk is `λ_k(R) = Pr{Γ_k ≤ R}`:
//!
//! | family | `T(r)` | `Γ_k` |
//! |---|---|---|
//! | Ginibre, Landau level `α` | `r²` | density `L_α^{(k−α−1)}(x)² x^{k−α−1} e^{−x}` (Gamma(k) for `α = 0`) |
//! | finite Ginibre, `N` points | `r²` | as above, modes `k ≤ N` only |
//! | hyperbolic, parameter `ρ` | `ρr²/(1−r²)` | `ρ·BetaPrime(k, ρ)` |

mod bounds;
mod edgeworth;
mod laguerre_law;
mod profile;

use crate::error::{Error, Result};
use crate::specfun::{ln_reg_inc_gamma, reg_inc_beta, MAX_HERMITE_DEGREE};

pub use bounds::{ln_upper_tail_mass_bound, lower_tail_mass_bound, tail_bound, upper_tail_mass_bound};
pub use edgeworth::{
    cf_z, edgeworth_cdf, edgeworth_cdf_with, edgeworth_exact_cdf, mgf_alpha, EdgeworthCoefficient,
};
pub use profile::{profile, Profile, ProfileKind};

/// Ensemble family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Infinite Ginibre-type ensemble of Landau level `α` (`α = 0` is the Ginibre ensemble).
    GinibreLandau,
    /// Finite Ginibre-type ensemble with `N` modes.
    GinibreFinite,
    /// Hyperbolic (Möbius-invariant) ensemble on the unit disk with parameter `ρ`.
    Hyperbolic,
}

/// Model descriptor.  Only the fields relevant to the family are meaningful; constructors
/// enforce this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ensemble {
    family: Family,
    alpha: u32,
    n_particles: Option<u64>,
    rho: Option<f64>,
}

fn check_alpha(alpha: u32) -> Result<()> {
    if alpha > MAX_HERMITE_DEGREE {
        return Err(Error::Range(format!(
            "Landau level {alpha} exceeds the supported maximum {MAX_HERMITE_DEGREE}"
        )));
    }
    Ok(())
}

impl Ensemble {
    /// Infinite Ginibre-type ensemble of Landau level `alpha`.
    ///
    /// # Errors
    /// [`Error::Range`] for `alpha > 60`.
    pub fn ginibre(alpha: u32) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { family: Family::GinibreLandau, alpha, n_particles: None, rho: None })
    }

    /// Finite Ginibre-type ensemble with `n` modes.
    ///
    /// # Errors
    /// [`Error::Range`] for `alpha > 60`, [`Error::Domain`] for `n = 0`.
    pub fn ginibre_finite(alpha: u32, n: u64) -> Result<Self> {
        check_alpha(alpha)?;
        if n == 0 {
            return Err(Error::Domain("the finite ensemble needs at least one particle".into()));
        }
        Ok(Self { family: Family::GinibreFinite, alpha, n_particles: Some(n), rho: None })
    }

    /// Hyperbolic ensemble with parameter `rho > 0`.
    ///
    /// # Errors
    /// [`Error::Domain`] unless `rho` is positive and finite.
    pub fn hyperbolic(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("hyperbolic parameter must be positive, got {rho}")));
        }
        Ok(Self { family: Family::Hyperbolic, alpha: 0, n_particles: None, rho: Some(rho) })
    }

    /// Family of the ensemble.
    pub fn family(&self) -> Family {
        self.family
    }

    /// Landau level `α` (0 for the hyperbolic family).
    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Number of modes `N` of the finite ensemble.
    pub fn n_particles(&self) -> Option<u64> {
        self.n_particles
    }

    /// Hyperbolic parameter `ρ`.
    pub fn rho(&self) -> Option<f64> {
        self.rho
    }

    /// Geometry flag `ϑ`: 1 for the Ginibre families (profile centred at `k = R`), 0 for the
    /// hyperbolic family (profile in the variable `k/R`).
    pub fn theta(&self) -> u8 {
        match self.family {
            Family::Hyperbolic => 0,
            _ => 1,
        }
    }

    /// Fluctuation scale `Σ_R`: `√R` for the Ginibre families, `R` for the hyperbolic family.
    pub fn sigma(&self, big_r: f64) -> f64 {
        match self.family {
            Family::Hyperbolic => big_r,
            _ => big_r.sqrt(),
        }
    }

    /// Number of modes, if finite.
    pub fn max_mode(&self) -> Option<u64> {
        self.n_particles
    }

    /// Unfolding `R = T(r)`.
    ///
    /// # Errors
    /// [`Error::Domain`] for negative radii, or `r ≥ 1` in the hyperbolic family.
    pub fn unfold(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
        }
        match self.family {
            Family::Hyperbolic => {
                if r >= 1.0 {
                    return Err(Error::Domain(format!("hyperbolic radius must be < 1, got {r}")));
                }
                let r2 = r * r;
                Ok(self.rho.expect("hyperbolic has rho") * r2 / (1.0 - r2))
            }
            _ => Ok(r * r),
        }
    }

    /// Inverse unfolding `r = T^{−1}(R)`.
    ///
    /// # Errors
    /// [`Error::Domain`] for negative `R`.
    pub fn unfold_inv(&self, big_r: f64) -> Result<f64> {
        if !(big_r >= 0.0) {
            return Err(Error::Domain(format!("unfolded radius must be non-negative, got {big_r}")));
        }
        match self.family {
            Family::Hyperbolic => {
                let rho = self.rho.expect("hyperbolic has rho");
                Ok((big_r / (rho + big_r)).sqrt())
            }
            _ => Ok(big_r.sqrt()),
        }
    }

    /// `λ_k(R) = Pr{Γ_k ≤ R}` for mode `k ≥ 1`.  Modes beyond `N` of the finite ensemble are
    /// absent and get `0`.
    ///
    /// # Errors
    /// [`Error::Domain`] for `k = 0` or `R < 0`; quadrature failures for `α ≥ 1`.
    pub fn lambda_k(&self, k: u64, big_r: f64) -> Result<f64> {
        let (ln_p, ln_q) = self.ln_lambda_pair(k, big_r)?;
        Ok(if ln_p < ln_q { ln_p.exp() } else { -ln_q.exp_m1() })
    }

    /// `(ln λ_k(R), ln(1 − λ_k(R)))`, each accurate in relative terms deep into its tail.
    ///
    /// # Errors
    /// As for [`Ensemble::lambda_k`].
    pub fn ln_lambda_pair(&self, k: u64, big_r: f64) -> Result<(f64, f64)> {
        if k == 0 {
            return Err(Error::Domain("modes are indexed from k = 1".into()));
        }
        if !(big_r >= 0.0) {
            return Err(Error::Domain(format!("unfolded radius must be non-negative, got {big_r}")));
        }
        if let Some(n) = self.n_particles {
            if k > n {
                return Ok((f64::NEG_INFINITY, 0.0));
            }
        }
        match self.family {
            Family::Hyperbolic => {
                let rho = self.rho.expect("hyperbolic has rho");
                if big_r == 0.0 {
                    return Ok((f64::NEG_INFINITY, 0.0));
                }
                if big_r.is_infinite() {
                    return Ok((0.0, f64::NEG_INFINITY));
                }
                let u = big_r / (rho + big_r);
                let lam = reg_inc_beta(k as f64, rho, u);
                let co = reg_inc_beta(rho, k as f64, rho / (rho + big_r));
                Ok((lam.ln(), co.ln()))
            }
            _ if self.alpha == 0 => Ok(ln_reg_inc_gamma(k as f64, big_r)),
            _ => laguerre_law::ln_lambda_pair(self.alpha, k, big_r),
        }
    }

    /// `λ_k(R)` for every `k` in `k_lo..=k_hi` (computed in parallel for `α ≥ 1`).
    ///
    /// # Errors
    /// As for [`Ensemble::lambda_k`].
    pub fn lambdas(&self, k_lo: u64, k_hi: u64, big_r: f64) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        if k_lo > k_hi {
            return Ok(Vec::new());
        }
        if self.family != Family::Hyperbolic && self.alpha >= 1 {
            (k_lo..=k_hi).into_par_iter().map(|k| self.lambda_k(k, big_r)).collect()
        } else {
            (k_lo..=k_hi).map(|k| self.lambda_k(k, big_r)).collect()
        }
    }
}

/// Unfolding `R = T(r)`; see [`Ensemble::unfold`].
///
/// # Errors
/// As for [`Ensemble::unfold`].
pub fn unfold(e: &Ensemble, r: f64) -> Result<f64> {
    e.unfold(r)
}

/// Inverse unfolding; see [`Ensemble::unfold_inv`].
///
/// # Errors
/// As for [`Ensemble::unfold_inv`].
pub fn unfold_inv(e: &Ensemble, big_r: f64) -> Result<f64> {
    e.unfold_inv(big_r)
}

/// `λ_k(R)`; see [`Ensemble::lambda_k`].
///
/// # Errors
/// As for [`Ensemble::lambda_k`].
pub fn lambda_k(e: &Ensemble, k: u64, big_r: f64) -> Result<f64> {
    e.lambda_k(k, big_r)
}

/// Unfolded radius placing the disk edge at `a⁺` in the edge scaling of the finite Ginibre
/// ensemble: `R(N) = N(1 − a⁺/√N + (a⁺)²/(2N))`, so that `(N − R)/√R = a⁺ + O(N^{−1/2})`.
///
/// # Errors
/// [`Error::Domain`] when `N = 0` or the formula gives a non-positive radius.
pub fn edge_radius(n: u64, a_plus: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let nf = n as f64;
    let r = nf * (1.0 - a_plus / nf.sqrt() + a_plus * a_plus / (2.0 * nf));
    if !(r > 0.0) {
        return Err(Error::Domain(format!("edge radius is not positive for N = {n}, a+ = {a_plus}")));
    }
    Ok(r)
}
