//! The mod-phi layer: the limiting cumulant generating function `Λ`, the residue `ψ`, the rate
//! function `I` (convex conjugate of `Λ`) and the deviation estimators built from them.
//!
//! With `t = Σ_R`, `ln E e^{zΞ_R} = t Λ(z) + ln ψ(z) + o(1)` where
//! `Λ(z) = ∫_I κ_{Φ(x)}(z) dx` and `ln ψ(z) = ∫_I Ψ(x) ∂_pκ_{Φ(x)}(z) dx + κ_{Φ(a⁺)}(z)/2`.

mod kappa;

use crate::ensembles::{profile, Ensemble, Profile};
use crate::error::{Error, Result};
use crate::specfun::{normal_sf, quad_breaks, QuadOptions};
use std::f64::consts::PI;

pub use kappa::{kappa, kappa_dp, kappa_dz};

/// Largest `|z|` at which `Λ` and `ψ` are evaluated.
pub const Z_BAND: f64 = 30.0;

/// Tolerances for the `Λ` family of integrals.
const LAMBDA_TOL: QuadOptions = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_subdivisions: 4000 };
/// Tolerances for the `ψ` integral.
const PSI_TOL: QuadOptions = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-9, max_subdivisions: 4000 };
/// Residual target of the Legendre-transform solver.
const RATE_RESIDUAL: f64 = 1e-10;

/// A point of the rate function `I(y) = sup_x {xy − Λ(x)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    /// Argument `y`.
    pub y: f64,
    /// `I(y) ≥ 0`.
    pub i: f64,
    /// `I′(y)`, the maximizing `x*` with `Λ′(x*) = y`.
    pub i_prime: f64,
    /// `I″(y) = 1/Λ″(x*)`.
    pub i_double_prime: f64,
}

/// The four factors of the precise deviation estimate and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreciseDeviation {
    /// `e^{−t I(y)}`.
    pub exponential: f64,
    /// `√(I″(y)/(2πt))`.
    pub gaussian: f64,
    /// `ψ(I′(y))`.
    pub psi: f64,
    /// `1/(1 − e^{−I′(y)})` (lattice factor).
    pub lattice: f64,
    /// Product of the four factors: the estimate of `Pr{Ξ ≥ t y}`.
    pub value: f64,
    /// Rate-function data used.
    pub rate: RatePoint,
}

/// Estimates of `Pr{X̃ ≥ x}` for the normalized statistic `X̃ = Ξ/√(t Λ″(0))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorModEstimates {
    /// Functional form `1/√t` of the Berry–Esseen bound (the constant is left to the caller).
    pub berry_esseen_form: f64,
    /// Gaussian tail `Pr{N(0,1) ≥ x}`.
    pub extended_clt: f64,
    /// `exp(−t I(x/√(I″(0) t)))/(√(2π) x)`; `None` for `x ≤ 0`.
    pub moderate_dev: Option<f64>,
}

/// Limit object of the mod-phi convergence of the centred counting statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct ModPhiLimit {
    profile: Profile,
}

impl ModPhiLimit {
    /// Wraps a profile.
    pub fn new(profile: Profile) -> Self {
        Self { profile }
    }

    /// Limit of an ensemble (edge regime of the finite ensemble when `edge_a_plus` is given).
    ///
    /// # Errors
    /// As for [`profile`].
    pub fn for_ensemble(e: &Ensemble, edge_a_plus: Option<f64>) -> Result<Self> {
        Ok(Self::new(profile(e, edge_a_plus)?))
    }

    /// Underlying profile.
    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    fn check_z(z: f64) -> Result<()> {
        if !(z.abs() <= Z_BAND) {
            return Err(Error::Range(format!("|z| must not exceed {Z_BAND}, got {z}")));
        }
        Ok(())
    }

    /// `Λ^{(order)}(z)` for `order ∈ {0, 1, 2}`, integrating analytically differentiated
    /// integrands.  `Λ(0) = Λ′(0) = 0`; `Λ″(0)` is the profile's cached value.
    ///
    /// # Errors
    /// [`Error::Range`] for `|z| > 30` or `order > 2`; quadrature failures.
    pub fn lambda(&self, z: f64, order: u8) -> Result<f64> {
        Self::check_z(z)?;
        if order > 2 {
            return Err(Error::Range(format!("derivative order must be 0, 1 or 2, got {order}")));
        }
        if z == 0.0 {
            return Ok(if order == 2 { self.profile.lambda2_0() } else { 0.0 });
        }
        let pts = self.profile.breakpoints(0.0, 0.0);
        let p = &self.profile;
        Ok(quad_breaks(
            |x| {
                let (a, b) = p.phi_pair(x);
                kappa::kappa_dz_pq(a, b, z, order)
            },
            &pts,
            LAMBDA_TOL,
        )?
        .value)
    }

    /// `ψ(z) = exp(∫_I Ψ ∂_pκ_Φ(z) + κ_{Φ(a⁺)}(z)/2)`; the boundary term vanishes when
    /// `a⁺ = ∞`.
    ///
    /// # Errors
    /// [`Error::Range`] for `|z| > 30`; quadrature failures.
    pub fn psi(&self, z: f64) -> Result<f64> {
        Self::check_z(z)?;
        if z == 0.0 {
            return Ok(1.0);
        }
        let p = &self.profile;
        let pts = p.breakpoints(0.0, 0.0);
        let bulk = quad_breaks(
            |x| {
                let (a, b) = p.phi_pair(x);
                p.psi(x) * kappa::kappa_dp_pq(a, b, z)
            },
            &pts,
            PSI_TOL,
        )?
        .value;
        let boundary = if p.a_plus().is_finite() {
            let (a, b) = p.phi_pair(p.a_plus());
            0.5 * kappa::kappa_pq(a, b, z)
        } else {
            0.0
        };
        Ok((bulk + boundary).exp())
    }

    /// Attainable range `(Λ′(−30), Λ′(30))` of the rate-function argument.
    ///
    /// # Errors
    /// Quadrature failures.
    pub fn rate_domain(&self) -> Result<(f64, f64)> {
        Ok((self.lambda(-Z_BAND, 1)?, self.lambda(Z_BAND, 1)?))
    }

    /// Rate function `I(y) = x*y − Λ(x*)` with `Λ′(x*) = y`, solved by Newton's method
    /// safeguarded by bisection; the residual `|Λ′(x*) − y|` is at most `1e−10`.
    ///
    /// # Errors
    /// [`Error::Saturation`] for `y` outside the attainable range; [`Error::Convergence`] if the
    /// solver stalls; quadrature failures.
    pub fn rate(&self, y: f64) -> Result<RatePoint> {
        if y.is_nan() {
            return Err(Error::Domain("rate argument is NaN".into()));
        }
        let l2_0 = self.profile.lambda2_0();
        if y == 0.0 {
            return Ok(RatePoint { y, i: 0.0, i_prime: 0.0, i_double_prime: 1.0 / l2_0 });
        }
        let (lo_y, hi_y) = self.rate_domain()?;
        if !(y > lo_y && y < hi_y) {
            return Err(Error::Saturation { value: y, lo: lo_y, hi: hi_y });
        }
        let (mut lo, mut hi) = if y > 0.0 { (0.0, Z_BAND) } else { (-Z_BAND, 0.0) };
        let mut x = (y / l2_0).clamp(lo, hi);
        if x == lo || x == hi {
            x = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let f = self.lambda(x, 1)? - y;
            if f.abs() <= RATE_RESIDUAL {
                let l2 = self.lambda(x, 2)?;
                let i = x * y - self.lambda(x, 0)?;
                return Ok(RatePoint { y, i: i.max(0.0), i_prime: x, i_double_prime: 1.0 / l2 });
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let step = x - f / self.lambda(x, 2)?;
            x = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 {
                break;
            }
        }
        Err(Error::Convergence(format!("Legendre transform at y = {y} did not reach the residual target")))
    }

    /// Precise deviation estimate of `Pr{Ξ ≥ t y}` for `y > 0`:
    /// `e^{−tI(y)} √(I″(y)/(2πt)) ψ(I′(y))/(1 − e^{−I′(y)})`.
    ///
    /// # Errors
    /// [`Error::Domain`] for `y ≤ 0` or `t ≤ 0`; errors of [`ModPhiLimit::rate`] and
    /// [`ModPhiLimit::psi`].
    pub fn precise_deviation(&self, sigma_r: f64, y: f64) -> Result<PreciseDeviation> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("precise deviations need y > 0, got {y}")));
        }
        if !(sigma_r > 0.0) || sigma_r.is_infinite() {
            return Err(Error::Domain(format!("scale must be finite and positive, got {sigma_r}")));
        }
        let rate = self.rate(y)?;
        let exponential = (-sigma_r * rate.i).exp();
        let gaussian = (rate.i_double_prime / (2.0 * PI * sigma_r)).sqrt();
        let psi = self.psi(rate.i_prime)?;
        let lattice = -1.0 / (-rate.i_prime).exp_m1();
        Ok(PreciseDeviation { exponential, gaussian, psi, lattice, value: exponential * gaussian * psi * lattice, rate })
    }

    /// Extended-CLT, moderate-deviation and Berry–Esseen estimates at normalized level `x`.
    ///
    /// # Errors
    /// [`Error::Domain`] for `t ≤ 0`; rate-function errors of the moderate branch.
    pub fn cor_mod_estimates(&self, sigma_r: f64, x: f64) -> Result<CorModEstimates> {
        if !(sigma_r > 0.0) || sigma_r.is_infinite() {
            return Err(Error::Domain(format!("scale must be finite and positive, got {sigma_r}")));
        }
        let moderate_dev = if x > 0.0 {
            let y = x * (self.profile.lambda2_0() / sigma_r).sqrt();
            let r = self.rate(y)?;
            Some((-sigma_r * r.i).exp() / ((2.0 * PI).sqrt() * x))
        } else {
            None
        };
        Ok(CorModEstimates { berry_esseen_form: sigma_r.sqrt().recip(), extended_clt: normal_sf(x), moderate_dev })
    }

    /// Certified bound `exp(−y² e^{−|x|} Λ″(0)/12)` on `|exp(Λ(x + iy) − Λ(x))|`, `|y| ≤ π`.
    ///
    /// # Errors
    /// [`Error::Domain`] for `|y| > π` or NaN arguments.
    pub fn decay_check(&self, x: f64, y: f64) -> Result<f64> {
        if !(y.abs() <= PI) || x.is_nan() {
            return Err(Error::Domain(format!("need |y| ≤ π, got y = {y}")));
        }
        Ok((-y * y * (-x.abs()).exp() * self.profile.lambda2_0() / 12.0).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Vec<ModPhiLimit> {
        vec![
            ModPhiLimit::for_ensemble(&Ensemble::ginibre(0).unwrap(), None).unwrap(),
            ModPhiLimit::for_ensemble(&Ensemble::ginibre(1).unwrap(), None).unwrap(),
            ModPhiLimit::for_ensemble(&Ensemble::ginibre_finite(0, 100).unwrap(), Some(0.0)).unwrap(),
            ModPhiLimit::for_ensemble(&Ensemble::hyperbolic(1.0).unwrap(), None).unwrap(),
        ]
    }

    #[test]
    fn lambda_examples() {
        let g = &limits()[0];
        assert_eq!(g.lambda(0.0, 0).unwrap(), 0.0);
        assert!((g.lambda(0.0, 2).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-12);
        // The integral path agrees with the cached value near 0.
        assert!((g.lambda(1e-9, 2).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-9);
        let h = &limits()[3];
        assert!((h.lambda(0.0, 2).unwrap() - 0.5).abs() < 1e-12);
        assert!(g.lambda(31.0, 0).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for l in limits() {
            for z in [-3.0, -1.0, 0.5, 2.0, 3.0] {
                let h = 1e-5;
                let d1 = (l.lambda(z + h, 0).unwrap() - l.lambda(z - h, 0).unwrap()) / (2.0 * h);
                let d2 = (l.lambda(z + h, 1).unwrap() - l.lambda(z - h, 1).unwrap()) / (2.0 * h);
                assert!((d1 - l.lambda(z, 1).unwrap()).abs() < 1e-6, "z={z}");
                assert!((d2 - l.lambda(z, 2).unwrap()).abs() < 1e-6, "z={z}");
            }
        }
    }

    #[test]
    fn psi_normalization_and_boundary() {
        for l in limits() {
            assert_eq!(l.psi(0.0).unwrap(), 1.0);
            for z in [-3.0, -0.5, 1.0, 3.0] {
                assert!(l.psi(z).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn psi_matches_exact_cumulant_generating_function() {
        // ln E e^{zΞ_R} − √R Λ(z) → ln ψ(z) for the infinite Ginibre ensemble.
        use crate::exactdist::ModeTable;
        let e = Ensemble::ginibre(0).unwrap();
        let l = &limits()[0];
        let z = 0.5;
        let big_r: f64 = 1600.0;
        let table = ModeTable::build(&e, big_r, 1e-14).unwrap();
        let cgf: f64 = table.pairs().map(|(p, q)| kappa::kappa_pq(p, q, z)).sum();
        let resid = cgf - big_r.sqrt() * l.lambda(z, 0).unwrap();
        assert!((resid - l.psi(z).unwrap().ln()).abs() < 0.01, "{resid} vs {}", l.psi(z).unwrap().ln());
    }

    #[test]
    fn rate_examples_and_duality() {
        let g = &limits()[0];
        let r0 = g.rate(0.0).unwrap();
        assert_eq!((r0.i, r0.i_prime), (0.0, 0.0));
        assert!((r0.i_double_prime - PI.sqrt()).abs() < 1e-12);
        let r1 = g.rate(1.0).unwrap();
        assert!((g.lambda(r1.i_prime, 1).unwrap() - 1.0).abs() <= 1e-10);
        // Grid search for sup_x {x − Λ(x)}: coarse over [−10, 10], then refined.
        let objective = |x: f64| x - g.lambda(x, 0).unwrap();
        let best = (0..=2000)
            .map(|i| -10.0 + i as f64 * 1e-2)
            .max_by(|a, b| objective(*a).total_cmp(&objective(*b)))
            .unwrap();
        let grid = (0..=4000)
            .map(|i| best - 0.02 + i as f64 * 1e-5)
            .map(objective)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r1.i > 0.0 && (r1.i - grid).abs() < 1e-8, "{} vs {grid}", r1.i);
        for l in limits() {
            for x in [-2.0, -0.5, 0.7, 2.5] {
                let y = l.lambda(x, 1).unwrap();
                let r = l.rate(y).unwrap();
                let expect = x * y - l.lambda(x, 0).unwrap();
                assert!((r.i - expect).abs() < 1e-9, "x={x}: {} vs {expect}", r.i);
            }
        }
        let h = &limits()[3];
        assert!(matches!(h.rate(-5.0), Err(Error::Saturation { .. })));
    }

    #[test]
    fn precise_deviation_factors() {
        let g = &limits()[0];
        let d = g.precise_deviation(20.0, 1.0).unwrap();
        assert!((d.value - d.exponential * d.gaussian * d.psi * d.lattice).abs() <= 1e-15 * d.value);
        assert!(g.precise_deviation(20.0, 0.0).is_err());
        let small = g.precise_deviation(1e4, 1e-3).unwrap();
        assert!(small.exponential > 0.99);
    }

    #[test]
    fn cor_mod_examples() {
        let g = &limits()[0];
        let c = g.cor_mod_estimates(20.0, 0.0).unwrap();
        assert_eq!(c.extended_clt, 0.5);
        assert!(c.moderate_dev.is_none());
        let c2 = g.cor_mod_estimates(20.0, 2.0).unwrap();
        assert!(c2.moderate_dev.unwrap() > 0.0);
        let c3 = g.cor_mod_estimates(40.0, 2.0).unwrap();
        assert!((c2.berry_esseen_form / c3.berry_esseen_form - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decay_bound() {
        let g = &limits()[0];
        assert_eq!(g.decay_check(0.0, 0.0).unwrap(), 1.0);
        let v = g.decay_check(0.0, PI).unwrap();
        assert!((v - (-PI * PI / (12.0 * PI.sqrt())).exp()).abs() < 1e-12);
        assert_eq!(g.decay_check(1.0, 2.0).unwrap(), g.decay_check(1.0, -2.0).unwrap());
        assert!(g.decay_check(0.0, 4.0).is_err());
    }
}
