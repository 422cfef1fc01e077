//! Exact finite-`R` computations: certified truncation windows, the Poisson-binomial law of the
//! counting statistic, exact cumulants, tails and entanglement entropies.
//!
//! The count of points in the disk is `Σ_k 1{Γ_k ≤ R}`.  Modes far below `R` are almost surely
//! inside the disk and modes far above almost surely outside, so only a window `k_lo..=k_hi` is
//! random at working precision.  Every window carries a certified bound `eps_total` on the
//! total-variation error of treating the modes below it as certain hits and the modes above it
//! as certain misses.

mod cumulants;
mod entropy;
mod pmf;

use crate::ensembles::{lower_tail_mass_bound, upper_tail_mass_bound, Ensemble, Family};
use crate::error::{Error, Result};

pub use cumulants::{bernoulli_cumulant, bernoulli_cumulant_poly, exact_cumulant, MAX_CUMULANT_ORDER};
pub use entropy::{entropy_function, exact_entropy};
pub use pmf::{
    exact_log_tail, exact_tail, kolmogorov_distance, pmf, threshold_count, PoissonBinomialPMF,
};

/// Default total-variation budget for windows built implicitly.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Range of random modes together with its certified truncation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWindow {
    /// First random mode.
    pub k_lo: u64,
    /// Last random mode.
    pub k_hi: u64,
    /// Number of modes below the window counted as certain hits (`k_lo − 1`).
    pub deterministic_count: u64,
    /// Certified bound on `Σ_{k<k_lo}(1 − λ_k) + Σ_{k>k_hi} λ_k`.
    pub eps_total: f64,
}

impl TruncationWindow {
    /// Number of random modes.
    pub fn len(&self) -> usize {
        (self.k_hi + 1 - self.k_lo) as usize
    }

    /// Whether the window holds no random mode.
    pub fn is_empty(&self) -> bool {
        self.k_hi < self.k_lo
    }
}

/// Smallest `K ≥ start` whose bound is at most `target`, by galloping then bisection.
fn search_up(start: u64, cap: Option<u64>, target: f64, bound: impl Fn(u64) -> Result<f64>) -> Result<(u64, f64)> {
    let clamp = |k: u64| cap.map_or(k, |n| k.min(n));
    let mut hi = clamp(start);
    let mut b = bound(hi)?;
    if b <= target {
        return Ok((hi, b));
    }
    let mut lo = hi;
    let mut inc = 1u64;
    while b > target {
        if cap == Some(hi) {
            return Err(Error::Budget(format!("no window meets the budget {target} up to k = {hi}")));
        }
        if inc > 1 << 40 {
            return Err(Error::Budget(format!("window search diverged for budget {target}")));
        }
        lo = hi;
        hi = clamp(hi + inc);
        inc *= 2;
        b = bound(hi)?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let bm = bound(mid)?;
        if bm <= target {
            hi = mid;
            b = bm;
        } else {
            lo = mid;
        }
    }
    Ok((hi, b))
}

/// Largest `K ≤ start` (and `≥ 1`) whose bound is at most `target`.
fn search_down(start: u64, target: f64, bound: impl Fn(u64) -> Result<f64>) -> Result<(u64, f64)> {
    let mut lo = start.max(1);
    let mut b = bound(lo)?;
    if b <= target {
        return Ok((lo, b));
    }
    let mut hi = lo;
    let mut dec = 1u64;
    while b > target {
        hi = lo;
        lo = lo.saturating_sub(dec).max(1);
        dec *= 2;
        b = bound(lo)?;
        if lo == 1 && b > target {
            return Err(Error::Budget(format!("no lower window meets the budget {target}")));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let bm = bound(mid)?;
        if bm <= target {
            lo = mid;
            b = bm;
        } else {
            hi = mid;
        }
    }
    Ok((lo, b))
}

/// Largest supported unfolded radius.
pub const MAX_UNFOLDED_RADIUS: f64 = 1e9;

/// Largest supported number of modes in a window.
pub const MAX_WINDOW_LEN: u64 = 1_000_000;

/// Window whose discarded modes satisfy `Σ_{k<k_lo}(1 − λ_k)^δ + Σ_{k>k_hi} λ_k^δ ≤ budget`.
pub(crate) fn window_with_exponent(e: &Ensemble, big_r: f64, budget: f64, delta: f64) -> Result<TruncationWindow> {
    if !(big_r >= 0.0) || big_r.is_infinite() {
        return Err(Error::Domain(format!("unfolded radius must be finite and non-negative, got {big_r}")));
    }
    if big_r > MAX_UNFOLDED_RADIUS {
        return Err(Error::Range(format!("unfolded radius {big_r} exceeds the supported {MAX_UNFOLDED_RADIUS}")));
    }
    let half = 0.5 * budget;
    let centre = (big_r.floor() as u64).max(1);
    let (k_hi, up) = search_up(centre, e.max_mode(), half, |k| upper_tail_mass_bound(e, k, big_r, delta))?;
    let (k_lo, lo) = match e.family() {
        Family::Hyperbolic => (1, 0.0),
        _ => search_down(centre.min(k_hi), half, |k| lower_tail_mass_bound(e, k, big_r, delta))?,
    };
    if k_hi - k_lo + 1 > MAX_WINDOW_LEN {
        return Err(Error::Range(format!(
            "window of {} modes exceeds the supported {MAX_WINDOW_LEN}",
            k_hi - k_lo + 1
        )));
    }
    Ok(TruncationWindow { k_lo, k_hi, deterministic_count: k_lo - 1, eps_total: up + lo })
}

/// Certified truncation window for the counting statistic at unfolded radius `R`.
///
/// # Errors
/// [`Error::Domain`] for `eps ∉ (0, 1e−3]` or an invalid radius; [`Error::Range`] beyond
/// [`MAX_UNFOLDED_RADIUS`] or [`MAX_WINDOW_LEN`]; [`Error::Budget`] if no window meets the budget.
pub fn window(e: &Ensemble, big_r: f64, eps: f64) -> Result<TruncationWindow> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::Domain(format!("window budget must lie in (0, 1e-3], got {eps}")));
    }
    window_with_exponent(e, big_r, eps, 1.0)
}

/// `(ln λ_k, ln(1 − λ_k))` for every mode of a window, computed once (in parallel for the
/// quadrature-based laws) and shared by the exact and Monte Carlo layers.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    window: TruncationWindow,
    big_r: f64,
    ln_pairs: Vec<(f64, f64)>,
}

impl ModeTable {
    /// Tabulates the window's modes.
    ///
    /// # Errors
    /// Evaluation errors of the radii laws.
    pub fn new(e: &Ensemble, big_r: f64, window: TruncationWindow) -> Result<Self> {
        use rayon::prelude::*;
        let ks: Vec<u64> = (window.k_lo..=window.k_hi).collect();
        let ln_pairs = if e.family() != Family::Hyperbolic && e.alpha() >= 1 {
            ks.par_iter().map(|&k| e.ln_lambda_pair(k, big_r)).collect::<Result<Vec<_>>>()?
        } else {
            ks.iter().map(|&k| e.ln_lambda_pair(k, big_r)).collect::<Result<Vec<_>>>()?
        };
        Ok(Self { window, big_r, ln_pairs })
    }

    /// Builds the window with budget `eps` and tabulates it.
    ///
    /// # Errors
    /// As for [`window`] and [`ModeTable::new`].
    pub fn build(e: &Ensemble, big_r: f64, eps: f64) -> Result<Self> {
        Self::new(e, big_r, window(e, big_r, eps)?)
    }

    /// Underlying window.
    pub fn window(&self) -> TruncationWindow {
        self.window
    }

    /// Unfolded radius.
    pub fn big_r(&self) -> f64 {
        self.big_r
    }

    /// `(ln λ_k, ln(1 − λ_k))` in window order.
    pub fn ln_pairs(&self) -> &[(f64, f64)] {
        &self.ln_pairs
    }

    /// `(λ_k, 1 − λ_k)` in window order, each taken from its own logarithm.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ln_pairs.iter().map(|&(a, b)| (a.exp(), b.exp()))
    }

    /// `λ_k` in window order.
    pub fn lambdas(&self) -> Vec<f64> {
        self.ln_pairs
            .iter()
            .map(|&(a, b)| if a < b { a.exp() } else { -b.exp_m1() })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_window_is_certified_a_posteriori() {
        let e = Ensemble::ginibre(0).unwrap();
        let w = window(&e, 100.0, 1e-12).unwrap();
        assert!(w.k_lo < 100 && w.k_hi > 100);
        let (below, above) = (100 - w.k_lo, w.k_hi - 100);
        assert!((50..=110).contains(&below) && (50..=110).contains(&above), "{w:?}");
        let discarded: f64 = (1..w.k_lo).map(|k| 1.0 - e.lambda_k(k, 100.0).unwrap()).sum::<f64>()
            + (w.k_hi + 1..w.k_hi + 400).map(|k| e.lambda_k(k, 100.0).unwrap()).sum::<f64>();
        assert!(discarded <= w.eps_total && w.eps_total <= 1e-12);
        assert_eq!(w.deterministic_count, w.k_lo - 1);
    }

    #[test]
    fn finite_window_is_clamped() {
        let e = Ensemble::ginibre_finite(0, 50).unwrap();
        let w = window(&e, 100.0, 1e-10).unwrap();
        assert_eq!(w.k_hi, 50);
        assert!(w.k_lo <= 50);
    }

    #[test]
    fn oversized_windows_are_rejected() {
        let g = Ensemble::ginibre(0).unwrap();
        assert!(matches!(window(&g, 1e10, 1e-12), Err(Error::Range(_))));
        let h = Ensemble::hyperbolic(0.5).unwrap();
        assert!(matches!(window(&h, 1e5, 1e-12), Err(Error::Range(_))));
    }

    #[test]
    fn hyperbolic_window_has_bounded_ratio() {
        let e = Ensemble::hyperbolic(1.0).unwrap();
        let w = window(&e, 10.0, 1e-10).unwrap();
        assert_eq!(w.k_lo, 1);
        assert!(w.k_hi as f64 / 10.0 < 40.0, "{w:?}");
        let discarded: f64 = (w.k_hi + 1..w.k_hi + 20_000).map(|k| e.lambda_k(k, 10.0).unwrap()).sum();
        assert!(discarded <= w.eps_total && w.eps_total <= 1e-10);
    }

    #[test]
    fn landau_window() {
        let e = Ensemble::ginibre(2).unwrap();
        let w = window(&e, 64.0, 1e-12).unwrap();
        let discarded: f64 = (1..w.k_lo).map(|k| 1.0 - e.lambda_k(k, 64.0).unwrap()).sum::<f64>()
            + (w.k_hi + 1..w.k_hi + 200).map(|k| e.lambda_k(k, 64.0).unwrap()).sum::<f64>();
        assert!(discarded <= w.eps_total && w.eps_total <= 1e-12, "{w:?} {discarded}");
        assert!(window(&e, 64.0, 0.1).is_err());
    }
}
