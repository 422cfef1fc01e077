//! Entanglement entropies `Σ_k f_β(λ_k)` of the restricted kernel.

use crate::ensembles::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::exactdist::{window_with_exponent, ModeTable};

/// Discarded-mode budget for [`exact_entropy`].
const ENTROPY_BUDGET: f64 = 1e-9;

/// `f_β(x) = ln(x^β + (1 − x)^β)/(1 − β)` and its limit `f_1(x) = −x ln x − (1 − x) ln(1 − x)`,
/// evaluated from `ln x` and `ln(1 − x)`.
fn f_beta_ln(beta: f64, ln_x: f64, ln_1mx: f64) -> f64 {
    let (x, c) = (ln_x.exp(), ln_1mx.exp());
    if (beta - 1.0).abs() < 1e-8 {
        let term = |v: f64, lv: f64| if v == 0.0 { 0.0 } else { -v * lv };
        return term(x, ln_x) + term(c, ln_1mx);
    }
    let (a, b) = (beta * ln_x, beta * ln_1mx);
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return 0.0;
    }
    let ln_sum = m + ((a - m).exp() + (b - m).exp()).ln();
    ln_sum / (1.0 - beta)
}

/// `f_β(x)` for `x ∈ [0, 1]`, `β > 0`.
///
/// # Errors
/// [`Error::Domain`] for `β ≤ 0` or `x ∉ [0, 1]`.
pub fn entropy_function(beta: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("need β > 0 and x ∈ [0, 1], got β = {beta}, x = {x}")));
    }
    Ok(f_beta_ln(beta, x.ln(), (-x).ln_1p()))
}

/// Hölder constant `C` and exponent `Δ` with `f_β(x) ≤ C min(x, 1 − x)^Δ`.
///
/// `Δ = 0.9 min(β, 1)`.  For `β < 1`, `f_β(x) ≤ ln(1 + x^β)/(1 − β) ≤ x^Δ/(1 − β)` on
/// `x ≤ 1/2`.  For `β ≥ 1`, `f_β ≤ f_1` and `sup f_1(x)/x^{0.9} = 10 e^{−0.9} < 4.1`.
fn holder(beta: f64) -> (f64, f64) {
    let delta = 0.9 * beta.min(1.0);
    let c = if beta < 1.0 { 1.0 / (1.0 - beta) } else { 4.1 };
    (c, delta)
}

/// Entanglement entropy `Tr f_β(K|_{D_r}) = Σ_k f_β(λ_k(r²))` of a Ginibre-type ensemble, with
/// the discarded modes contributing less than `1e−9`.
///
/// # Errors
/// [`Error::Domain`] for `β ≤ 0`, `r ≤ 0` or a hyperbolic ensemble.
pub fn exact_entropy(e: &Ensemble, r: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !(r > 0.0) || r.is_infinite() {
        return Err(Error::Domain(format!("need β > 0 and finite r > 0, got β = {beta}, r = {r}")));
    }
    if e.family() == Family::Hyperbolic {
        return Err(Error::Domain("entropies are provided for the Ginibre families".into()));
    }
    let big_r = e.unfold(r)?;
    let (c, delta) = holder(beta);
    let w = window_with_exponent(e, big_r, ENTROPY_BUDGET / c, delta)?;
    let table = ModeTable::new(e, big_r, w)?;
    Ok(table.ln_pairs().iter().map(|&(a, b)| f_beta_ln(beta, a, b)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_function_values() {
        assert!((entropy_function(1.0, 0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        for beta in [0.3, 1.0, 2.0] {
            assert_eq!(entropy_function(beta, 0.0).unwrap(), 0.0);
            assert_eq!(entropy_function(beta, 1.0).unwrap(), 0.0);
            assert!((entropy_function(beta, 0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-14);
        }
        // β → 1 is continuous.
        let a = entropy_function(1.0 + 1e-6, 0.2).unwrap();
        let b = entropy_function(1.0, 0.2).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn holder_bound_holds() {
        for beta in [0.2, 0.5, 0.99, 1.0, 1.5, 4.0] {
            let (c, delta) = holder(beta);
            for i in 1..2000 {
                let x = (i as f64 / 2000.0) * 0.5;
                let x = x.powi(4);
                assert!(entropy_function(beta, x).unwrap() <= c * x.powf(delta) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn entropy_window_is_wide_enough() {
        let e = Ensemble::ginibre(0).unwrap();
        let s = exact_entropy(&e, 5.0, 1.0).unwrap();
        let direct: f64 = (1..300)
            .map(|k| entropy_function(1.0, e.lambda_k(k, 25.0).unwrap()).unwrap())
            .sum();
        assert!((s - direct).abs() < 1e-9, "{s} vs {direct}");
    }
}
