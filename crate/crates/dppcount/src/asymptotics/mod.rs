//! Asymptotic objects: covariance kernels of the functional limit theorems, the exact Bessel
//! covariance of the Ginibre disk counts, large-deviation regimes, entropy and cumulant
//! coefficients.

use crate::ensembles::{Profile, ProfileKind};
use crate::error::{Error, Result};
use crate::exactdist::{bernoulli_cumulant, bernoulli_cumulant_poly, entropy_function};
use crate::specfun::{
    bessel_i_scaled, hermite_tail, normal_sf, quad_breaks, reg_inc_gamma, reg_inc_gamma_upper,
    QuadOptions,
};
use std::f64::consts::PI;

/// Tolerances for kernel and coefficient integrals.
const KERNEL_TOL: QuadOptions = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_subdivisions: 4000 };

/// Microscopic covariance kernel `K(s, t) = ∫_I Φ(x − s)(1 − Φ(x − t)) dx` for `s ≤ t`
/// (arguments are swapped otherwise).  It is stationary, `K(s + c, t + c) = K(s, t)`, exactly
/// when `I = ℝ`.
///
/// # Errors
/// [`Error::Domain`] for NaN arguments; quadrature failures.
pub fn micro_kernel(profile: &Profile, s: f64, t: f64) -> Result<f64> {
    if s.is_nan() || t.is_nan() {
        return Err(Error::Domain("kernel arguments must not be NaN".into()));
    }
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    let pts = profile.breakpoints(s, t);
    Ok(quad_breaks(|x| profile.phi(x - s) * profile.phi_c(x - t), &pts, KERNEL_TOL)?.value)
}

/// Closed form of the Ginibre microscopic kernel:
/// `e^{−d²} − 2√π d Pr{N(0,1) ≥ √2 d}` with `d = |t − s|`; equals `√π K_{Φ₀}(2s, 2t)`.
pub fn ginibre_micro_closed(s: f64, t: f64) -> f64 {
    let d = (t - s).abs();
    (-d * d).exp() - 2.0 * PI.sqrt() * d * normal_sf(2f64.sqrt() * d)
}

/// Variance density `σ_t² = (Σ_{tR}/Σ_R) ∫_{a⁻}^{a⁺(t)} Φ(1 − Φ)` of the macroscopic limit:
/// `√t ∫Φ_α(1 − Φ_α)` for the Ginibre profiles.  `a_plus_t = −∞` (outside a finite droplet)
/// gives `0`; the upper limit never exceeds the profile's own `a⁺`.
///
/// # Errors
/// [`Error::Domain`] for `t ≤ 0`; quadrature failures.
pub fn macro_sigma2(profile: &Profile, t: f64, a_plus_t: f64) -> Result<f64> {
    if !(t > 0.0) || t.is_infinite() {
        return Err(Error::Domain(format!("t must be finite and positive, got {t}")));
    }
    if a_plus_t.is_nan() {
        return Err(Error::Domain("edge position is NaN".into()));
    }
    let upper = a_plus_t.min(profile.a_plus());
    if upper <= profile.a_minus() {
        return Ok(0.0);
    }
    let integral = if upper == profile.a_plus() {
        profile.lambda2_0()
    } else {
        let mut pts: Vec<f64> = profile.breakpoints(0.0, 0.0).into_iter().filter(|&p| p < upper).collect();
        pts.push(upper);
        quad_breaks(
            |x| {
                let (a, b) = profile.phi_pair(x);
                a * b
            },
            &pts,
            KERNEL_TOL,
        )?
        .value
    };
    Ok(profile.sigma(t) * integral)
}

/// Hyperbolic macroscopic kernel `∫₀^∞ Pr{Y_ρ > x/s} Pr{Y_ρ ≤ x/t} dx` for `s ≤ t` (swapped
/// otherwise), `Y_ρ ~ Gamma(shape ρ, rate ρ)`; `ρ = 1` returns the closed form `s²/(s + t)`.
///
/// # Errors
/// [`Error::Domain`] for non-positive arguments; quadrature failures.
pub fn hyper_kernel(rho: f64, s: f64, t: f64) -> Result<f64> {
    if !(rho > 0.0 && s > 0.0 && t > 0.0) || rho.is_infinite() || s.is_infinite() || t.is_infinite() {
        return Err(Error::Domain(format!("need finite positive ρ, s, t; got {rho}, {s}, {t}")));
    }
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    if rho == 1.0 {
        return Ok(s * s / (s + t));
    }
    let mut pts = vec![0.0];
    for scale in [s, t] {
        for f in [1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0] {
            pts.push(scale * f / rho);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.push(f64::INFINITY);
    Ok(quad_breaks(
        |x| reg_inc_gamma_upper(rho, rho * x / s) * reg_inc_gamma(rho, rho * x / t),
        &pts,
        KERNEL_TOL,
    )?
    .value)
}

/// Exact covariance `Cov{ξ(D_s), ξ(D_t)}` of the infinite Ginibre ensemble for radii
/// `0 ≤ s ≤ t` (swapped otherwise):
/// `e^{−s²−t²}(s² I₀(2st) + st I₁(2st)) − (t² − s²) ∫₀^{s²} e^{−t²−x} I₀(2t√x) dx`,
/// evaluated with exponentially scaled Bessel functions (`e^{−(t−s)²} Ĩ_ν(2st)`) and the
/// integral in the variable `u = √x`.
///
/// # Errors
/// [`Error::Domain`] for negative or non-finite radii; quadrature failures.
pub fn ginibre_cov_exact(s: f64, t: f64) -> Result<f64> {
    if !(s >= 0.0 && t >= 0.0) || s.is_infinite() || t.is_infinite() {
        return Err(Error::Domain(format!("radii must be finite and non-negative, got {s}, {t}")));
    }
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    let x = 2.0 * s * t;
    let diag = (-(t - s) * (t - s)).exp() * (s * s * bessel_i_scaled(0, x) + s * t * bessel_i_scaled(1, x));
    if s == t || s == 0.0 {
        return Ok(diag);
    }
    let mut pts = vec![0.0];
    // The integrand peaks near u = t (beyond the range when s < t); resolve its rise.
    let mut u = s;
    while u > 0.0 {
        pts.push(u);
        u -= 0.5;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let k = quad_breaks(
        |u| 2.0 * u * (-(t - u) * (t - u)).exp() * bessel_i_scaled(0, 2.0 * t * u),
        &pts,
        KERNEL_TOL,
    )?
    .value;
    Ok(diag - (t * t - s * s) * k)
}

/// Large-deviation regime selected by `γ` for the scale `Θ_R = R^{γ/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdpKind {
    /// `γ < 2`: `v_R = Θ_R²/R`, `J(t) = t²/2`.
    Quadratic,
    /// `γ = 2`: `v_R = Θ_R`, `J(t) = (1 + t) ln(1 + t) − t`.
    Poissonian,
    /// `γ > 2`: `v_R = Θ_R ln Θ_R`, `J(t) = t(1 − 2/γ)`.
    Stretched,
}

/// Large-deviation parameterization `Θ_R = R^{γ/2}` with `γ ∈ (1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdpRegime {
    gamma: f64,
    kind: LdpKind,
}

/// `J_γ(x)` and `∫₀^x J_γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdpRate {
    /// `J_γ(x)`.
    pub j: f64,
    /// `∫₀^x J_γ(t) dt`.
    pub integral: f64,
}

impl LdpRegime {
    /// Regime for exponent `γ`.
    ///
    /// # Errors
    /// [`Error::Domain`] unless `1 < γ < ∞`.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || gamma.is_infinite() {
            return Err(Error::Domain(format!("large deviations need 1 < γ < ∞, got {gamma}")));
        }
        let kind = if gamma < 2.0 {
            LdpKind::Quadratic
        } else if gamma == 2.0 {
            LdpKind::Poissonian
        } else {
            LdpKind::Stretched
        };
        Ok(Self { gamma, kind })
    }

    /// Exponent `γ`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Regime.
    pub fn kind(&self) -> LdpKind {
        self.kind
    }

    /// Deviation scale `Θ_R = R^{γ/2}`.
    pub fn theta(&self, big_r: f64) -> f64 {
        big_r.powf(0.5 * self.gamma)
    }

    /// Speed `v_R`.
    pub fn v(&self, big_r: f64) -> f64 {
        let th = self.theta(big_r);
        match self.kind {
            LdpKind::Quadratic => th * th / big_r,
            LdpKind::Poissonian => th,
            LdpKind::Stretched => th * th.ln(),
        }
    }
}

/// `J_γ(x)` and its antiderivative `∫₀^x J_γ`:
/// `x³/6`, `((1+x)² ln(1+x))/2 − x(3x+2)/4` and `(1 − 2/γ) x²/2` in the three regimes.
///
/// # Errors
/// [`Error::Domain`] for `x < 0` or NaN.
pub fn ldp_rate(regime: &LdpRegime, x: f64) -> Result<LdpRate> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("rate argument must be non-negative, got {x}")));
    }
    Ok(match regime.kind {
        LdpKind::Quadratic => LdpRate { j: 0.5 * x * x, integral: x * x * x / 6.0 },
        LdpKind::Poissonian => {
            let l = x.ln_1p();
            LdpRate {
                j: (1.0 + x) * l - x,
                integral: 0.5 * (1.0 + x) * (1.0 + x) * l - 0.25 * x * (3.0 * x + 2.0),
            }
        }
        LdpKind::Stretched => {
            let c = 1.0 - 2.0 / regime.gamma;
            LdpRate { j: c * x, integral: 0.5 * c * x * x }
        }
    })
}

/// Leading-order prediction of `−ln Pr{ξ(D_r) − r² ≥ x r^γ}` in the three branches:
/// `(x²/2)√π r^{2γ−1}` for `γ ∈ [1/2, 1)`, `(x³/6) r^{3γ−2}` for `γ ∈ (1, 2)` and
/// `((γ−2) x²/2) r^{2γ} ln r` for `γ > 2`.  Presentation only.
///
/// # Errors
/// [`Error::Domain`] for `γ` outside the branches or non-positive `x`, `r`.
pub fn jlm_prediction(gamma: f64, x: f64, r: f64) -> Result<f64> {
    if !(x > 0.0 && r > 0.0) {
        return Err(Error::Domain(format!("need x > 0 and r > 0, got {x}, {r}")));
    }
    if (0.5..1.0).contains(&gamma) {
        Ok(0.5 * x * x * PI.sqrt() * r.powf(2.0 * gamma - 1.0))
    } else if gamma > 1.0 && gamma < 2.0 {
        Ok(x * x * x / 6.0 * r.powf(3.0 * gamma - 2.0))
    } else if gamma > 2.0 && gamma.is_finite() {
        Ok(0.5 * (gamma - 2.0) * x * x * r.powf(2.0 * gamma) * r.ln())
    } else {
        Err(Error::Domain(format!("γ = {gamma} is not in [1/2, 1) ∪ (1, 2) ∪ (2, ∞)")))
    }
}

/// Integration breakpoints for functions of `Φ_α` on `ℝ`.
fn hermite_breaks(alpha: u32) -> Vec<f64> {
    let width = 2.0 * (2.0 * alpha as f64 + 1.0).sqrt() + 12.0;
    let mut pts = vec![f64::NEG_INFINITY];
    let mut x = -width;
    while x <= width {
        pts.push(x);
        x += 1.0;
    }
    pts.push(f64::INFINITY);
    pts
}

/// Area-law coefficient `∫_ℝ f_β(Φ_α(x)) dx`, so that the entropy of the disk of radius `r` is
/// `r ∫f_β(Φ_α) + o(r)`.
///
/// # Errors
/// [`Error::Domain`] for `β ≤ 0`; [`Error::Range`] for `α > 60`; quadrature failures.
pub fn entropy_coefficient(alpha: u32, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("β must be positive, got {beta}")));
    }
    hermite_tail(alpha, 0.0)?;
    let f = |x: f64| {
        let p = hermite_tail(alpha, x).expect("degree checked");
        entropy_function(beta, p.clamp(0.0, 1.0)).expect("arguments checked")
    };
    Ok(quad_breaks(f, &hermite_breaks(alpha), KERNEL_TOL)?.value)
}

/// Cumulant coefficients of the Ginibre disk counts:
/// `∫ κ_{2q}(Φ₀(t)) dt` (`odd_weighted = false`) or `−(2/3) ∫ t κ_{2q+1}(Φ₀(t)) dt`
/// (`odd_weighted = true`), where `κ_j(p)` is the `j`-th Bernoulli cumulant.
///
/// # Errors
/// [`Error::Range`] for `q = 0` or `q > 4`; quadrature failures.
pub fn disk_cumulant_coeff(q: u32, odd_weighted: bool) -> Result<f64> {
    if q == 0 || q > 4 {
        return Err(Error::Range(format!("q must lie in 1..=4, got {q}")));
    }
    let order = if odd_weighted { 2 * q + 1 } else { 2 * q };
    bernoulli_cumulant_poly(order)?;
    let pts = hermite_breaks(0);
    let kappa = |x: f64| bernoulli_cumulant(order, normal_sf(x)).expect("order checked");
    Ok(if odd_weighted {
        -2.0 / 3.0 * quad_breaks(|x| x * kappa(x), &pts, KERNEL_TOL)?.value
    } else {
        quad_breaks(kappa, &pts, KERNEL_TOL)?.value
    })
}

/// Whether a profile's kernel is stationary (`I = ℝ`).
pub fn is_stationary(profile: &Profile) -> bool {
    matches!(profile.kind(), ProfileKind::Hermite { .. })
        && profile.a_minus() == f64::NEG_INFINITY
        && profile.a_plus() == f64::INFINITY
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{profile, Ensemble};

    fn ginibre0() -> Profile {
        profile(&Ensemble::ginibre(0).unwrap(), None).unwrap()
    }

    #[test]
    fn micro_kernel_examples() {
        let g = ginibre0();
        assert!((micro_kernel(&g, 0.0, 0.0).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-12);
        assert!(micro_kernel(&g, 0.0, 10.0).unwrap() < 1e-8);
        let edge = profile(&Ensemble::ginibre_finite(0, 100).unwrap(), Some(0.0)).unwrap();
        assert!((micro_kernel(&edge, 0.0, 0.0).unwrap() - 0.5 / PI.sqrt()).abs() < 1e-12);
        assert!(is_stationary(&g) && !is_stationary(&edge));
        for c in [-5.0, -1.0, 1.0, 5.0] {
            let a = micro_kernel(&g, 0.3 + c, 1.1 + c).unwrap();
            let b = micro_kernel(&g, 0.3, 1.1).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(micro_kernel(&g, 2.0, 1.0).unwrap(), micro_kernel(&g, 1.0, 2.0).unwrap());
    }

    #[test]
    fn closed_ginibre_kernel() {
        assert_eq!(ginibre_micro_closed(0.4, 0.4), 1.0);
        assert!(ginibre_micro_closed(0.0, 30.0) < 1e-300);
        let g = ginibre0();
        for (s, t) in [(0.0, 0.5), (-1.0, 1.0), (2.0, 0.0)] {
            let q = PI.sqrt() * micro_kernel(&g, 2.0 * s, 2.0 * t).unwrap();
            assert!((ginibre_micro_closed(s, t) - q).abs() < 1e-8);
        }
    }

    #[test]
    fn macro_variance_examples() {
        let g = ginibre0();
        assert!((macro_sigma2(&g, 1.0, f64::INFINITY).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-12);
        assert!((macro_sigma2(&g, 4.0, f64::INFINITY).unwrap() - 2.0 / PI.sqrt()).abs() < 1e-12);
        assert_eq!(macro_sigma2(&g, 2.0, f64::NEG_INFINITY).unwrap(), 0.0);
        assert!((macro_sigma2(&g, 1.0, 0.0).unwrap() - 0.5 / PI.sqrt()).abs() < 1e-12);
        assert!(macro_sigma2(&g, 0.0, 0.0).is_err());
    }

    #[test]
    fn hyperbolic_kernel() {
        assert!((hyper_kernel(1.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((hyper_kernel(1.0, 1.0, 3.0).unwrap() - 0.25).abs() < 1e-15);
        // The quadrature path reproduces the closed form at ρ close to 1.
        let near = hyper_kernel(1.0 + 1e-9, 1.0, 3.0).unwrap();
        assert!((near - 0.25).abs() < 1e-8, "{near}");
        for rho in [0.5, 2.0] {
            let a = hyper_kernel(rho, 0.7, 1.9).unwrap();
            let b = hyper_kernel(rho, 0.7 * 5f64.exp(), 1.9 * 5f64.exp()).unwrap();
            assert!((b - 5f64.exp() * a).abs() < 1e-9 * b, "rho={rho}");
            let diag = hyper_kernel(rho, 1.0, 1.0).unwrap();
            let p = profile(&Ensemble::hyperbolic(rho).unwrap(), None).unwrap();
            assert!((diag - p.lambda2_0()).abs() < 1e-10, "rho={rho}: {diag} vs {}", p.lambda2_0());
        }
    }

    #[test]
    fn bessel_covariance() {
        let r: f64 = 2.0;
        let x = 2.0 * r * r;
        let closed = r * r * (bessel_i_scaled(0, x) + bessel_i_scaled(1, x));
        assert!((ginibre_cov_exact(r, r).unwrap() - closed).abs() < 1e-15);
        assert!((ginibre_cov_exact(r, r).unwrap() / (r / PI.sqrt()) - 1.0).abs() < 0.02);
        let e = Ensemble::ginibre(0).unwrap();
        for s in [0.5, 1.0, 2.5, 4.0, 5.0] {
            for t in [0.5, 1.0, 2.5, 4.0, 5.0] {
                let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
                let direct: f64 = (1..200)
                    .map(|k| e.lambda_k(k, lo * lo).unwrap() * (1.0 - e.lambda_k(k, hi * hi).unwrap()))
                    .sum();
                let v = ginibre_cov_exact(s, t).unwrap();
                assert!((v - direct).abs() < 1e-9, "s={s} t={t}: {v} vs {direct}");
            }
        }
    }

    #[test]
    fn ldp_examples() {
        let quad = LdpRegime::new(1.5).unwrap();
        let pois = LdpRegime::new(2.0).unwrap();
        let str3 = LdpRegime::new(3.0).unwrap();
        assert_eq!((quad.kind(), pois.kind(), str3.kind()), (LdpKind::Quadratic, LdpKind::Poissonian, LdpKind::Stretched));
        for reg in [quad, pois, str3] {
            assert_eq!(ldp_rate(&reg, 0.0).unwrap().j, 0.0);
            assert_eq!(ldp_rate(&reg, 0.0).unwrap().integral, 0.0);
            // The antiderivative matches quadrature of J.
            let q = quad_breaks(|t| ldp_rate(&reg, t).unwrap().j, &[0.0, 1.7], KERNEL_TOL).unwrap().value;
            assert!((ldp_rate(&reg, 1.7).unwrap().integral - q).abs() < 1e-12);
        }
        let p1 = ldp_rate(&pois, 1.0).unwrap();
        assert!((p1.j - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!((p1.integral - (2.0 * 2f64.ln() - 1.25)).abs() < 1e-15);
        assert!(LdpRegime::new(1.0).is_err());
        assert!((quad.v(400.0) - 400f64.powf(0.5)).abs() < 1e-12);
    }

    #[test]
    fn ldp_speed_matches_gamma_tails() {
        // −ln Pr{Γ_{R+tΘ} ≤ R}/v_R approaches J(t) monotonically.
        let reg = LdpRegime::new(1.5).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let vals: Vec<f64> = [1e3, 1e4, 1e5]
                .iter()
                .map(|&r: &f64| {
                    let k = (r + t * reg.theta(r)).round();
                    -crate::specfun::ln_reg_inc_gamma(k, r).0 / reg.v(r)
                })
                .collect();
            let target = ldp_rate(&reg, t).unwrap().j;
            let gaps: Vec<f64> = vals.iter().map(|v| (v - target).abs()).collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "t={t}: {vals:?} vs {target}");
        }
    }

    #[test]
    fn jlm_branches() {
        let r: f64 = 3.0;
        assert!((jlm_prediction(0.75, 2.0, r).unwrap() - 2.0 * PI.sqrt() * r.sqrt()).abs() < 1e-12);
        assert!((jlm_prediction(1.5, 2.0, r).unwrap() - 8.0 / 6.0 * r.powf(2.5)).abs() < 1e-12);
        assert!((jlm_prediction(3.0, 2.0, r).unwrap() - 2.0 * r.powi(6) * r.ln()).abs() < 1e-9);
        assert!(jlm_prediction(1.0, 1.0, r).is_err());
        assert!(jlm_prediction(2.0, 1.0, r).is_err());
    }

    #[test]
    fn entropy_coefficients() {
        let c0 = entropy_coefficient(0, 1.0).unwrap();
        let c1 = entropy_coefficient(1, 1.0).unwrap();
        assert!(c0 > 0.0 && ((c1 - c0) / c0).abs() > 0.01);
        let coarse = quad_breaks(
            |x| entropy_function(1.0, normal_sf(x)).unwrap(),
            &hermite_breaks(0),
            QuadOptions::abs_rel(1e-8, 1e-8),
        )
        .unwrap()
        .value;
        assert!((coarse - c0).abs() < 1e-7);
    }

    #[test]
    fn cumulant_coefficients() {
        assert!((disk_cumulant_coeff(1, false).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-12);
        let odd = disk_cumulant_coeff(1, true).unwrap();
        assert!(odd.is_finite() && odd < 0.0);
        let k4 = disk_cumulant_coeff(2, false).unwrap();
        assert!((k4 + 0.029833).abs() < 1e-5, "{k4}");
        assert!(disk_cumulant_coeff(5, false).is_err());
    }
}
