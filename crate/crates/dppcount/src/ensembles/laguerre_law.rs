//! Radii laws of the Ginibre-type ensembles of Landau level `α ≥ 1`.
//!
//! Mode `k` has density `L_α^{(k−α−1)}(x)² x^{k−α−1} e^{−x}`.  Writing `d = min(α, k−1)` and
//! `a = |k−α−1| + 1`, this equals `ℓ_d(x; a)² · g_a(x)` where `g_a` is the Gamma(`a`) density and
//! `ℓ_d(·; a)` is orthonormal for it (for `k ≤ α` this uses the reflection of negative-integer
//! Laguerre parameters).  The CDF is integrated adaptively, split at the zeros of `ℓ_d`, on
//! whichever side of the mean keeps the result relatively accurate.

use crate::error::Result;
use crate::specfun::{gamma_pdf, laguerre_gamma_orthonormal, quad_breaks, QuadOptions};

/// Degree and Gamma shape of the density of mode `k`.
pub(crate) fn degree_and_shape(alpha: u32, k: u64) -> (u32, f64) {
    let d = (alpha as u64).min(k - 1) as u32;
    let a = ((k as i64 - alpha as i64 - 1).unsigned_abs() + 1) as f64;
    (d, a)
}

/// Density of `Γ_k^{(α)}` at `x ≥ 0`.
pub(crate) fn density(alpha: u32, k: u64, x: f64) -> f64 {
    let (d, a) = degree_and_shape(alpha, k);
    let l = laguerre_gamma_orthonormal(d, a, x);
    let g = gamma_pdf(a, x);
    if g == 0.0 {
        0.0
    } else {
        l * l * g
    }
}

/// Zeros of `ℓ_d(·; a)`: eigenvalues of the Jacobi matrix with diagonal `2j + a` and
/// off-diagonal `√((j+1)(j+a))`, located by Sturm-sequence bisection.
pub(crate) fn laguerre_zeros(d: u32, a: f64) -> Vec<f64> {
    let n = d as usize;
    if n == 0 {
        return Vec::new();
    }
    let diag: Vec<f64> = (0..n).map(|j| 2.0 * j as f64 + a).collect();
    let off2: Vec<f64> = (0..n - 1).map(|j| (j as f64 + 1.0) * (j as f64 + a)).collect();
    // Number of eigenvalues strictly below `lam`.
    let count_below = |lam: f64| -> usize {
        let mut cnt = 0;
        let mut q = diag[0] - lam;
        if q < 0.0 {
            cnt += 1;
        }
        for j in 1..n {
            let prev = if q == 0.0 { 1e-300 } else { q };
            q = diag[j] - lam - off2[j - 1] / prev;
            if q < 0.0 {
                cnt += 1;
            }
        }
        cnt
    };
    let upper = diag
        .iter()
        .enumerate()
        .map(|(j, dj)| {
            let left = if j > 0 { off2[j - 1].sqrt() } else { 0.0 };
            let right = if j + 1 < n { off2[j].sqrt() } else { 0.0 };
            dj + left + right
        })
        .fold(0.0, f64::max);
    (0..n)
        .map(|i| {
            let (mut lo, mut hi) = (0.0, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-14 * hi.max(1.0) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// `(ln λ_k, ln(1 − λ_k))` for Landau level `α ≥ 1`.
pub(crate) fn ln_lambda_pair(alpha: u32, k: u64, big_r: f64) -> Result<(f64, f64)> {
    if big_r == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    if big_r.is_infinite() {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    let (d, a) = degree_and_shape(alpha, k);
    let mean = 2.0 * d as f64 + a;
    let sd = ((2.0 * d as f64 + 1.0) * (a + d as f64)).sqrt();
    let zeros = laguerre_zeros(d, a);
    let mut scale_points: Vec<f64> = zeros;
    for j in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        scale_points.push(mean - j * sd);
        scale_points.push(mean + j * sd);
    }
    scale_points.push(mean);
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-13, max_subdivisions: 4000 };
    let f = |x: f64| density(alpha, k, x);
    if big_r <= mean {
        let mut pts = vec![0.0];
        pts.extend(scale_points.iter().copied().filter(|&p| p > 0.0 && p < big_r));
        pts.push(big_r);
        pts.sort_by(f64::total_cmp);
        let lower = quad_breaks(f, &pts, opts)?.value.clamp(0.0, 1.0);
        Ok((lower.ln(), (-lower).ln_1p()))
    } else {
        let mut pts = vec![big_r];
        pts.extend(scale_points.iter().copied().filter(|&p| p > big_r));
        pts.sort_by(f64::total_cmp);
        pts.push(f64::INFINITY);
        let upper = quad_breaks(f, &pts, opts)?.value.clamp(0.0, 1.0);
        Ok(((-upper).ln_1p(), upper.ln()))
    }
}
