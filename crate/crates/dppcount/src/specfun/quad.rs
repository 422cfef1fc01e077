//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite and infinite ranges.
//!
//! Infinite ranges are mapped onto `[0, 1]`: `[a, ∞)` through `x = a + t/(1−t)` and `(−∞, b]`
//! through `x = b − (1−t)/t`; `(−∞, ∞)` is split at the origin.  All initial segments share
//! one priority queue, so the error budget is spent where it is needed.  Splitting at interior
//! singularities or near-zeros of the integrand is left to callers via [`quad_breaks`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod nodes (non-negative half, descending) of the 15-point rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
/// Gauss weights for the embedded 7-point rule (nodes are `XGK[1], XGK[3], XGK[5], XGK[7]`).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Integral estimate.
    pub value: f64,
    /// Estimate of the absolute error of `value` (always `≥ 0`).
    pub abs_error_estimate: f64,
    /// Number of interval bisections performed.
    pub subdivisions: usize,
}

/// Tolerances and limits for [`quad_breaks`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target (the run stops once either target is met).
    pub rel_tol: f64,
    /// Maximum number of bisections before giving up.
    pub max_subdivisions: usize,
}

impl QuadOptions {
    /// Absolute tolerance only, with the default subdivision cap.
    pub fn abs(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: 0.0, max_subdivisions: 4000 }
    }

    /// Absolute and relative tolerances with the default subdivision cap.
    pub fn abs_rel(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, max_subdivisions: 4000 }
    }
}

#[derive(Clone, Copy)]
enum Map {
    Finite,
    Upper(f64),
    Lower(f64),
}

impl Map {
    /// Returns `(x(t), dx/dt)`.
    #[inline]
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Finite => (t, 1.0),
            Map::Upper(a) => {
                let s = 1.0 - t;
                (a + t / s, 1.0 / (s * s))
            }
            Map::Lower(b) => (b - (1.0 - t) / t, 1.0 / (t * t)),
        }
    }
}

struct Piece {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, map: Map, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut eval = |t: f64| -> Result<f64> {
        let (x, jac) = map.apply(t);
        let y = f(x);
        if y.is_nan() || y.is_infinite() {
            return Err(Error::Domain(format!("integrand not finite at x = {x}")));
        }
        // An exactly-zero integrand at a huge mapped abscissa must not become 0·∞.
        Ok(if y == 0.0 { 0.0 } else { y * jac })
    };
    let fc = eval(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    Ok((value, err))
}

/// Integrates `f` over `[a, b]` (either end may be infinite) to absolute tolerance `tol`.
///
/// # Errors
/// [`Error::Quadrature`] with the best estimate if the subdivision cap is reached, and
/// [`Error::Domain`] if the integrand returns a non-finite value.
pub fn quad<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    quad_breaks(f, &[a, b], QuadOptions::abs(tol))
}

/// Integrates `f` over `[points[0], points[last]]`, treating every listed point as a forced
/// breakpoint.  The first and last points may be infinite; interior points must be finite and
/// the list must be non-decreasing.
///
/// # Errors
/// As for [`quad`]; additionally [`Error::Domain`] for an invalid breakpoint list.
pub fn quad_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: QuadOptions,
) -> Result<QuadratureResult> {
    if points.len() < 2 {
        return Err(Error::Domain("need at least two integration limits".into()));
    }
    let mut pts: Vec<f64> = points.to_vec();
    if pts.iter().any(|p| p.is_nan()) || pts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain(format!("integration limits must be ordered: {points:?}")));
    }
    if pts[1..pts.len() - 1].iter().any(|p| p.is_infinite()) {
        return Err(Error::Domain("interior breakpoints must be finite".into()));
    }
    // A doubly infinite single range is split at the origin.
    if pts.len() == 2 && pts[0] == f64::NEG_INFINITY && pts[1] == f64::INFINITY {
        pts = vec![f64::NEG_INFINITY, 0.0, f64::INFINITY];
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (map, lo, hi) = match (a.is_infinite(), b.is_infinite()) {
            (false, false) => (Map::Finite, a, b),
            (false, true) => (Map::Upper(a), 0.0, 1.0),
            (true, false) => (Map::Lower(b), 0.0, 1.0),
            (true, true) => return Err(Error::Domain("degenerate infinite range".into())),
        };
        let (value, error) = gk15(&mut f, map, lo, hi)?;
        total += value;
        total_err += error;
        heap.push(Piece { lo, hi, map, value, error });
    }
    let mut subdivisions = 0;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::Quadrature { best: total, abs_error: total_err });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval exhausted at machine resolution; accept its contribution as is.
            heap.push(Piece { error: 0.0, ..worst });
            total_err = heap.iter().map(|p| p.error).sum();
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.map, worst.lo, mid)?;
        let (v2, e2) = gk15(&mut f, worst.map, mid, worst.hi)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { lo: worst.lo, hi: mid, map: worst.map, value: v1, error: e1 });
        heap.push(Piece { lo: mid, hi: worst.hi, map: worst.map, value: v2, error: e2 });
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // Re-sum to stop drift of the running totals.
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let total_err = total_err.max(0.0);
    Ok(QuadratureResult { value: total, abs_error_estimate: total_err, subdivisions })
}
