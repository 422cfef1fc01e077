//! Hermite functions and orthonormal generalized Laguerre polynomials.
//!
//! Both families are evaluated by three-term recurrences on *orthonormal* polynomials, which
//! stay `O(1)` in the oscillatory region and never form factorial ratios.

use super::gamma::{ln_gamma, normal_pdf, normal_sf};
use crate::error::{Error, Result};

/// Largest supported Hermite degree.
pub const MAX_HERMITE_DEGREE: u32 = 60;

fn check_degree(alpha: u32) -> Result<()> {
    if alpha > MAX_HERMITE_DEGREE {
        return Err(Error::Range(format!(
            "Hermite degree {alpha} exceeds the supported maximum {MAX_HERMITE_DEGREE}"
        )));
    }
    Ok(())
}

/// Values `Ĥ_0(x), …, Ĥ_n(x)` of the Hermite polynomials orthonormal for the standard
/// Gaussian weight `e^{−x²/2}/√(2π)`:  `√(j+1) Ĥ_{j+1} = x Ĥ_j − √j Ĥ_{j−1}`.
pub fn hermite_orthonormal(n: u32, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n as usize + 1);
    h.push(1.0);
    if n >= 1 {
        h.push(x);
    }
    for j in 1..n as usize {
        let jf = j as f64;
        let next = (x * h[j] - jf.sqrt() * h[j - 1]) / (jf + 1.0).sqrt();
        h.push(next);
    }
    h
}

/// Squared Hermite function `h_α(x)² = Ĥ_α(x)² e^{−x²/2}/√(2π)`, the density of `Z_α`.
///
/// # Errors
/// [`Error::Range`] for `α > 60`.
pub fn hermite_sq(alpha: u32, x: f64) -> Result<f64> {
    check_degree(alpha)?;
    let h = hermite_orthonormal(alpha, x)[alpha as usize];
    Ok(h * h * normal_pdf(x))
}

/// `[g, g′, g″, g‴]` for `g = h_α²`, from the derivative rule `Ĥ_j′ = √j Ĥ_{j−1}` and
/// `φ′ = −xφ` (all analytic, no finite differences).
///
/// # Errors
/// [`Error::Range`] for `α > 60`.
pub fn hermite_sq_derivs(alpha: u32, x: f64) -> Result<[f64; 4]> {
    check_degree(alpha)?;
    let hs = hermite_orthonormal(alpha, x);
    let a = alpha as usize;
    let af = alpha as f64;
    let at = |j: usize| -> f64 { hs[j] };
    let h0 = at(a);
    let h1 = if a >= 1 { af.sqrt() * at(a - 1) } else { 0.0 };
    let h2 = if a >= 2 { (af * (af - 1.0)).sqrt() * at(a - 2) } else { 0.0 };
    let h3 = if a >= 3 { (af * (af - 1.0) * (af - 2.0)).sqrt() * at(a - 3) } else { 0.0 };
    // P = Ĥ² and its derivatives.
    let p0 = h0 * h0;
    let p1 = 2.0 * h0 * h1;
    let p2 = 2.0 * (h1 * h1 + h0 * h2);
    let p3 = 6.0 * h1 * h2 + 2.0 * h0 * h3;
    let phi = normal_pdf(x);
    let x2 = x * x;
    Ok([
        p0 * phi,
        (p1 - x * p0) * phi,
        (p2 - 2.0 * x * p1 + (x2 - 1.0) * p0) * phi,
        (p3 - 3.0 * x * p2 + 3.0 * (x2 - 1.0) * p1 + (3.0 * x - x2 * x) * p0) * phi,
    ])
}

fn tail_nonnegative(alpha: u32, x: f64) -> f64 {
    // Φ_α(x) = Φ₀(x) + φ(x) Σ_{n=1}^{α} Ĥ_n(x) Ĥ_{n−1}(x)/√n: each step follows from
    // d/dx[φ Ĥ_n Ĥ_{n−1}/√n] = φ (Ĥ_{n−1}² − Ĥ_n²).
    let hs = hermite_orthonormal(alpha, x);
    let mut s = 0.0;
    for n in 1..=alpha as usize {
        s += hs[n] * hs[n - 1] / (n as f64).sqrt();
    }
    (normal_sf(x) + normal_pdf(x) * s).clamp(0.0, 1.0)
}

/// Harmonic-oscillator tail `Φ_α(x) = Pr{Z_α > x} = ∫_x^∞ h_α²`, in closed form.
///
/// For `x < 0` the symmetry `Φ_α(x) = 1 − Φ_α(−x)` is used, so the tail is accurate in
/// relative terms for large positive `x` and its complement for large negative `x`.
///
/// # Errors
/// [`Error::Range`] for `α > 60`.
pub fn hermite_tail(alpha: u32, x: f64) -> Result<f64> {
    check_degree(alpha)?;
    Ok(if x >= 0.0 { tail_nonnegative(alpha, x) } else { 1.0 - tail_nonnegative(alpha, -x) })
}

/// Hermite function of a fixed degree (the density `h_α²` of `Z_α` and its tail).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteFunction {
    degree: u32,
}

impl HermiteFunction {
    /// # Errors
    /// [`Error::Range`] for `α > 60`.
    pub fn new(degree: u32) -> Result<Self> {
        check_degree(degree)?;
        Ok(Self { degree })
    }

    /// Degree `α`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `h_α(x)² ≥ 0`.
    pub fn sq(&self, x: f64) -> f64 {
        let h = hermite_orthonormal(self.degree, x)[self.degree as usize];
        h * h * normal_pdf(x)
    }

    /// `[h_α², (h_α²)′, (h_α²)″, (h_α²)‴]` at `x`.
    pub fn sq_derivs(&self, x: f64) -> [f64; 4] {
        hermite_sq_derivs(self.degree, x).expect("degree validated at construction")
    }

    /// `Φ_α(x) = ∫_x^∞ h_α²`.
    pub fn tail(&self, x: f64) -> f64 {
        hermite_tail(self.degree, x).expect("degree validated at construction")
    }
}

/// `ℓ_n(x; a)`: degree-`n` polynomial orthonormal for the Gamma(`a`) probability law
/// (`a > 0`), signed like the classical Laguerre polynomial (leading coefficient `(−1)^n`·positive).
///
/// Recurrence: `√((j+1)(j+a)) ℓ̃_{j+1} = (x − (2j+a)) ℓ̃_j − √(j(j+a−1)) ℓ̃_{j−1}` for the
/// positively-led version `ℓ̃`, and `ℓ_n = (−1)^n ℓ̃_n`.
pub fn laguerre_gamma_orthonormal(n: u32, a: f64, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let next = ((x - (2.0 * jf + a)) * cur - (jf * (jf + a - 1.0)).sqrt() * prev)
            / ((jf + 1.0) * (jf + a)).sqrt();
        prev = cur;
        cur = next;
    }
    if n % 2 == 1 {
        -cur
    } else {
        cur
    }
}

/// Orthonormal generalized Laguerre polynomial `L_α^{(β)}(x)`, normalized so that
/// `∫₀^∞ L_α^{(β)}(x)² x^β e^{−x} dx = 1` and positively proportional to the classical one.
///
/// For `β > −1` this is `ℓ_α(x; β+1)/√Γ(β+1)`.  For a negative integer `β = −m` with
/// `1 ≤ m ≤ α` the weight is not integrable on its own and the classical reflection
/// `L_α^{(−m)}(x) = (−x)^m L_{α−m}^{(m)}(x)` (orthonormal form) is used.
///
/// # Errors
/// [`Error::Domain`] if `β < −α`, or `β ≤ −1` is not an integer (no normalizable polynomial).
pub fn laguerre_eval(alpha: u32, beta: f64, x: f64) -> Result<f64> {
    if beta > -1.0 {
        return Ok(laguerre_gamma_orthonormal(alpha, beta + 1.0, x) * (-0.5 * ln_gamma(beta + 1.0)).exp());
    }
    let m = -beta;
    if m.fract() != 0.0 || m > alpha as f64 {
        return Err(Error::Domain(format!(
            "orthonormal Laguerre polynomial of degree {alpha} undefined for parameter {beta}"
        )));
    }
    let m_int = m as u32;
    let inner = laguerre_eval(alpha - m_int, m, x)?;
    Ok((-x).powi(m_int as i32) * inner)
}

/// Orthonormal generalized Laguerre polynomial of fixed degree and parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerrePoly {
    degree: u32,
    beta: f64,
}

impl LaguerrePoly {
    /// # Errors
    /// [`Error::Domain`] when no normalizable polynomial exists (see [`laguerre_eval`]).
    pub fn new(degree: u32, beta: f64) -> Result<Self> {
        laguerre_eval(degree, beta, 1.0)?;
        Ok(Self { degree, beta })
    }

    /// `L_α^{(β)}(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        laguerre_eval(self.degree, self.beta, x).expect("parameters validated at construction")
    }

    /// Degree `α`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Parameter `β`.
    pub fn beta(&self) -> f64 {
        self.beta
    }
}
