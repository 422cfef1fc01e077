//! Limiting profiles `(Φ, Ψ, I)` of the mode probabilities.
//!
//! For the Ginibre families `λ_k(R) = Φ(x) + Ψ(x)/√R + O(1/R)` with `x = (k − R)/√R`; for the
//! hyperbolic family `λ_k(R) = Φ(x) + Ψ(x)/R + …` with `x = k/R`.  `Φ` is the limiting tail
//! function, `Ψ` the first correction and `I = (a⁻, a⁺)` the range of the scaled mode index.

use crate::ensembles::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::specfun::{
    gamma_pdf, ln_gamma, quad_breaks, reg_inc_gamma, reg_inc_gamma_upper, HermiteFunction,
    QuadOptions,
};

/// Which limiting tail function a profile uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// Harmonic-oscillator tail `Φ_α(x) = Pr{Z_α > x}` (Ginibre families).
    Hermite {
        /// Landau level `α`.
        alpha: u32,
    },
    /// Gamma tail `Φ_ρ(x) = Pr{Y_ρ > x}`, `Y_ρ ~ Gamma(shape ρ, rate ρ)` (hyperbolic family).
    Gamma {
        /// Hyperbolic parameter `ρ`.
        rho: f64,
    },
}

/// Limiting profile: tail function `Φ`, correction `Ψ`, interval `I = (a⁻, a⁺)`, scale map
/// `Σ_R` and the cached variance density integral `Λ″(0) = ∫_I Φ(1 − Φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    kind: ProfileKind,
    hermite: Option<HermiteFunction>,
    a_minus: f64,
    a_plus: f64,
    lambda2_0: f64,
}

impl Profile {
    fn new(kind: ProfileKind, a_minus: f64, a_plus: f64) -> Result<Self> {
        let hermite = match kind {
            ProfileKind::Hermite { alpha } => Some(HermiteFunction::new(alpha)?),
            ProfileKind::Gamma { .. } => None,
        };
        let mut p = Self { kind, hermite, a_minus, a_plus, lambda2_0: f64::NAN };
        let pts = p.breakpoints(0.0, 0.0);
        let v = quad_breaks(
            |x| {
                let (a, b) = p.phi_pair(x);
                a * b
            },
            &pts,
            QuadOptions::abs_rel(1e-13, 1e-12),
        )?;
        p.lambda2_0 = v.value;
        Ok(p)
    }

    /// Kind of tail function.
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Left end `a⁻` of `I`.
    pub fn a_minus(&self) -> f64 {
        self.a_minus
    }

    /// Right end `a⁺` of `I`.
    pub fn a_plus(&self) -> f64 {
        self.a_plus
    }

    /// `Λ″(0) = ∫_I Φ(1 − Φ)`.
    pub fn lambda2_0(&self) -> f64 {
        self.lambda2_0
    }

    /// Scale `Σ_R` matching the profile's scaling of the mode index.
    pub fn sigma(&self, big_r: f64) -> f64 {
        match self.kind {
            ProfileKind::Hermite { .. } => big_r.sqrt(),
            ProfileKind::Gamma { .. } => big_r,
        }
    }

    /// `(Φ(x), 1 − Φ(x))`, each accurate in its own small tail.
    pub fn phi_pair(&self, x: f64) -> (f64, f64) {
        match self.kind {
            ProfileKind::Hermite { .. } => {
                let h = self.hermite.as_ref().expect("hermite profile");
                (h.tail(x), h.tail(-x))
            }
            ProfileKind::Gamma { rho } => {
                if x <= 0.0 {
                    (1.0, 0.0)
                } else {
                    (reg_inc_gamma_upper(rho, rho * x), reg_inc_gamma(rho, rho * x))
                }
            }
        }
    }

    /// Tail function `Φ(x)`.
    pub fn phi(&self, x: f64) -> f64 {
        self.phi_pair(x).0
    }

    /// Complement `1 − Φ(x)`.
    pub fn phi_c(&self, x: f64) -> f64 {
        self.phi_pair(x).1
    }

    /// `Φ′(x)` (minus the density).
    pub fn dphi(&self, x: f64) -> f64 {
        match self.kind {
            ProfileKind::Hermite { .. } => -self.hermite.as_ref().expect("hermite profile").sq(x),
            ProfileKind::Gamma { rho } => -gamma_density(rho, x),
        }
    }

    /// `Φ‴(x)` (minus the second derivative of the density).
    pub fn d3phi(&self, x: f64) -> f64 {
        match self.kind {
            ProfileKind::Hermite { .. } => {
                -self.hermite.as_ref().expect("hermite profile").sq_derivs(x)[2]
            }
            ProfileKind::Gamma { rho } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let g = gamma_density(rho, x);
                let s = (rho - 1.0) / x - rho;
                -g * (s * s - (rho - 1.0) / (x * x))
            }
        }
    }

    /// First-order correction `Ψ(x)`.
    ///
    /// Ginibre families: `Ψ_α = (α − x²/2) Φ_α′ + Φ_α‴/3` (so `Ψ₀ = (2 + x²) φ/6`).
    /// Hyperbolic: `Ψ_ρ = ρ^ρ/(2Γ(ρ)) (ρx − ρ + 1) x^{ρ−1} e^{−ρx}`, from
    /// `λ_k(R) = E[Φ_ρ(Γ_k/R)]` with `Γ_k` standard gamma of mean `k` and variance `k`
    /// (`= x/R` after scaling), i.e. `Ψ_ρ = x Φ_ρ″/2`.
    pub fn psi(&self, x: f64) -> f64 {
        match self.kind {
            ProfileKind::Hermite { alpha } => {
                let d = self.hermite.as_ref().expect("hermite profile").sq_derivs(x);
                -(alpha as f64 - 0.5 * x * x) * d[0] - d[2] / 3.0
            }
            ProfileKind::Gamma { rho } => {
                if x <= 0.0 {
                    return 0.0;
                }
                0.5 * (rho * x - rho + 1.0) * gamma_density(rho, x)
            }
        }
    }

    /// Breakpoints covering `I` for quadrature of functions of `Φ(x − s)` and `Φ(x − t)`
    /// (pass `s = t = 0` for functions of `Φ(x)` alone).  The first and last entries are the
    /// (possibly infinite) ends of `I`.
    pub fn breakpoints(&self, s: f64, t: f64) -> Vec<f64> {
        let (lo_shift, hi_shift) = (s.min(t), s.max(t));
        let mut pts = Vec::new();
        match self.kind {
            ProfileKind::Hermite { alpha } => {
                let width = 2.0 * (2.0 * alpha as f64 + 1.0).sqrt() + 12.0;
                let mut x = lo_shift - width;
                while x <= hi_shift + width {
                    pts.push(x);
                    x += 1.0;
                }
            }
            ProfileKind::Gamma { rho } => {
                for base in [lo_shift.max(0.0), hi_shift.max(0.0)] {
                    for f in [1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0] {
                        pts.push(base + f / rho);
                    }
                }
            }
        }
        pts.retain(|&p| p > self.a_minus && p < self.a_plus && p.is_finite());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts.insert(0, self.a_minus);
        pts.push(self.a_plus);
        pts
    }
}

/// Density of Gamma(shape ρ, rate ρ) at `x`.
fn gamma_density(rho: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    rho * gamma_pdf(rho, rho * x)
}

/// Builds the limiting profile of an ensemble.
///
/// `edge_a_plus` selects the edge regime of the finite Ginibre ensemble (`I = (−∞, a⁺]`); without
/// it the finite ensemble is treated in the bulk (`I = ℝ`).
///
/// # Errors
/// [`Error::Domain`] if `edge_a_plus` is given for another family or is NaN.
pub fn profile(e: &Ensemble, edge_a_plus: Option<f64>) -> Result<Profile> {
    if let Some(a) = edge_a_plus {
        if e.family() != Family::GinibreFinite {
            return Err(Error::Domain("an edge position only applies to the finite ensemble".into()));
        }
        if a.is_nan() {
            return Err(Error::Domain("edge position is NaN".into()));
        }
    }
    match e.family() {
        Family::GinibreLandau | Family::GinibreFinite => Profile::new(
            ProfileKind::Hermite { alpha: e.alpha() },
            f64::NEG_INFINITY,
            edge_a_plus.unwrap_or(f64::INFINITY),
        ),
        Family::Hyperbolic => {
            let rho = e.rho().expect("hyperbolic has rho");
            // Guard the normalizing constant for extreme ρ.
            if !ln_gamma(rho).is_finite() {
                return Err(Error::Range(format!("hyperbolic parameter {rho} out of range")));
            }
            Profile::new(ProfileKind::Gamma { rho }, 0.0, f64::INFINITY)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::normal_pdf;
    use std::f64::consts::PI;

    #[test]
    fn profile_examples() {
        let g = profile(&Ensemble::ginibre(0).unwrap(), None).unwrap();
        assert!((g.phi(0.0) - 0.5).abs() < 1e-16);
        assert!((g.lambda2_0() - 1.0 / PI.sqrt()).abs() < 1e-12);
        let h = profile(&Ensemble::hyperbolic(1.0).unwrap(), None).unwrap();
        for x in [0.1, 1.0, 5.0] {
            assert!((h.phi(x) - (-x as f64).exp()).abs() < 1e-15);
        }
        assert!((h.lambda2_0() - 0.5).abs() < 1e-12);
        let edge = profile(&Ensemble::ginibre_finite(0, 400).unwrap(), Some(0.0)).unwrap();
        assert!((edge.lambda2_0() - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-12);
        assert!(profile(&Ensemble::ginibre(0).unwrap(), Some(0.0)).is_err());
    }

    #[test]
    fn breakpoints_span_the_interval() {
        let h = profile(&Ensemble::hyperbolic(0.5).unwrap(), None).unwrap();
        let pts = h.breakpoints(0.0, 0.0);
        assert_eq!((pts[0], *pts.last().unwrap()), (0.0, f64::INFINITY));
        assert!((h.lambda2_0() - 2.0 / PI).abs() < 1e-12);
        let g = profile(&Ensemble::ginibre(0).unwrap(), None).unwrap();
        assert_eq!(g.breakpoints(1.0, 2.0)[0], f64::NEG_INFINITY);
    }

    #[test]
    fn corrections_closed_forms() {
        let g = profile(&Ensemble::ginibre(0).unwrap(), None).unwrap();
        for x in [-2.0, 0.0, 1.3] {
            assert!((g.psi(x) - (2.0 + x * x) * normal_pdf(x) / 6.0).abs() < 1e-15);
            assert!((g.d3phi(x) - (1.0 - x * x) * normal_pdf(x)).abs() < 1e-15);
        }
        let g1 = profile(&Ensemble::ginibre(1).unwrap(), None).unwrap();
        for x in [-1.0, 0.4, 2.5] {
            let x2 = x * x;
            assert!((g1.dphi(x) + x2 * normal_pdf(x)).abs() < 1e-15);
            assert!((g1.d3phi(x) - (-x2 * x2 + 5.0 * x2 - 2.0) * normal_pdf(x)).abs() < 1e-14);
        }
        let h = profile(&Ensemble::hyperbolic(1.0).unwrap(), None).unwrap();
        for x in [0.2, 1.0, 3.0] {
            assert!((h.psi(x) - 0.5 * x * (-x as f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn hyperbolic_derivatives_match_finite_differences() {
        for rho in [0.5, 1.0, 2.0] {
            let p = profile(&Ensemble::hyperbolic(rho).unwrap(), None).unwrap();
            for x in [0.3, 1.1, 2.7] {
                let h = 1e-4;
                let d1 = (p.phi(x + h) - p.phi(x - h)) / (2.0 * h);
                assert!((d1 - p.dphi(x)).abs() < 1e-7);
                let d3 = (p.dphi(x + h) - 2.0 * p.dphi(x) + p.dphi(x - h)) / (h * h);
                assert!((d3 - p.d3phi(x)).abs() < 1e-5, "rho={rho} x={x}");
            }
        }
    }

    #[test]
    fn correction_matches_exact_mode_probabilities() {
        // √R (λ_k − Φ(x)) → Ψ(x) with an O(1/√R) remainder.
        for alpha in [0u32, 1, 2] {
            let e = Ensemble::ginibre(alpha).unwrap();
            let p = profile(&e, None).unwrap();
            let big_r = 10_000.0;
            for x in [-1.5, -0.5, 0.0, 0.8, 2.0] {
                let k = (big_r + x * 100.0) as u64;
                let xk = (k as f64 - big_r) / 100.0;
                let lam = e.lambda_k(k, big_r).unwrap();
                let scaled = (lam - p.phi(xk)) * 100.0;
                assert!((scaled - p.psi(xk)).abs() < 0.02, "alpha={alpha} x={xk}: {scaled} vs {}", p.psi(xk));
            }
        }
        for rho in [0.5, 1.0, 2.0] {
            let e = Ensemble::hyperbolic(rho).unwrap();
            let p = profile(&e, None).unwrap();
            let big_r = 2000.0;
            for x in [0.25, 0.9, 2.0] {
                let k = (x * big_r) as u64;
                let lam = e.lambda_k(k, big_r).unwrap();
                let scaled = (lam - p.phi(x)) * big_r;
                assert!((scaled - p.psi(x)).abs() < 0.02, "rho={rho} x={x}: {scaled} vs {}", p.psi(x));
            }
        }
    }
}
