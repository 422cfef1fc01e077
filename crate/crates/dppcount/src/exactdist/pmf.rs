//! Poisson-binomial law of the counting statistic by direct convolution, plain and tilted tails.

use crate::ensembles::{ln_upper_tail_mass_bound, Ensemble};
use crate::error::{Error, Result};
use crate::exactdist::{window, ModeTable, TruncationWindow, DEFAULT_EPS, MAX_WINDOW_LEN};

/// Entries below this are flushed to zero during convolution (and booked in the budget).
const FLUSH: f64 = 1e-300;

/// Exact law of a sum of independent Bernoulli variables, stored from the count `offset` upward.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonBinomialPMF {
    offset: u64,
    probs: Vec<f64>,
    eps_total: f64,
}

/// Convolves Bernoulli laws given as `(p, 1 − p)` pairs.  Returns the pmf, the number of
/// leading support points trimmed away and the total flushed mass.
fn convolve(pairs: impl Iterator<Item = (f64, f64)>) -> (Vec<f64>, u64, f64) {
    let mut probs = vec![1.0];
    let mut shift = 0u64;
    let mut flushed = 0.0;
    for (p, q) in pairs {
        // Each pair is renormalized so that rounding in `p + q` does not accumulate over
        // thousands of modes.
        let (p, q) = (p / (p + q), q / (p + q));
        let mut next = vec![0.0; probs.len() + 1];
        for (j, &v) in probs.iter().enumerate() {
            next[j] += v * q;
            next[j + 1] += v * p;
        }
        let lead = next.iter().take_while(|&&v| v < FLUSH).count().min(next.len() - 1);
        flushed += next[..lead].iter().sum::<f64>();
        next.drain(..lead);
        shift += lead as u64;
        while next.len() > 1 && *next.last().expect("non-empty") < FLUSH {
            flushed += next.pop().expect("non-empty");
        }
        probs = next;
    }
    (probs, shift, flushed)
}

impl PoissonBinomialPMF {
    /// Law of `Σ Bernoulli(p_i)` for explicit success probabilities (no truncation budget).
    ///
    /// # Errors
    /// [`Error::Domain`] if some `p_i ∉ [0, 1]`.
    pub fn from_probs(ps: &[f64]) -> Result<Self> {
        if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain(format!("success probability {p} outside [0, 1]")));
        }
        let (probs, offset, flushed) = convolve(ps.iter().map(|&p| (p, 1.0 - p)));
        Ok(Self { offset, probs, eps_total: flushed })
    }

    /// Law of the count for a tabulated window.
    pub fn from_table(table: &ModeTable) -> Self {
        let w = table.window();
        let (probs, shift, flushed) = convolve(table.pairs());
        Self { offset: w.deterministic_count + shift, probs, eps_total: w.eps_total + flushed }
    }

    /// Smallest count with stored mass.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Masses of the counts `offset, offset + 1, …`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Total-variation budget: window truncation plus flushed mass.
    pub fn eps_total(&self) -> f64 {
        self.eps_total
    }

    /// `Pr{N = n}`.
    pub fn prob(&self, n: u64) -> f64 {
        n.checked_sub(self.offset).and_then(|i| self.probs.get(i as usize)).copied().unwrap_or(0.0)
    }

    /// `Pr{N ≥ n}` for an integer threshold (summed from the small end of the tail).
    pub fn tail(&self, n: i64) -> f64 {
        let start = n - self.offset as i64;
        if start <= 0 {
            // Sum the complement when it is the smaller side.
            return 1.0 - self.cdf(n - 1);
        }
        self.probs.iter().skip(start as usize).rev().fold(0.0, |acc, p| acc + p)
    }

    /// `Pr{N ≤ n}`.
    pub fn cdf(&self, n: i64) -> f64 {
        let end = n - self.offset as i64;
        if end < 0 {
            return 0.0;
        }
        let end = (end as usize).min(self.probs.len() - 1);
        self.probs[..=end].iter().fold(0.0, |acc, p| acc + p)
    }

    /// `Pr{N − R ≥ y}` (the centred statistic `Ξ_R = N − R`).
    pub fn tail_xi(&self, big_r: f64, y: f64) -> f64 {
        match threshold_count(big_r, y) {
            None if y < 0.0 => 1.0,
            None => 0.0,
            Some(n) => self.tail(n).clamp(0.0, 1.0),
        }
    }

    /// Total stored mass.
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mean of the count.
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(j, &p)| (self.offset + j as u64) as f64 * p).sum()
    }

    /// Variance of the count.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let d = (self.offset + j as u64) as f64 - m;
                d * d * p
            })
            .sum()
    }
}

/// Smallest integer `n` with `n − R ≥ y`; values within `1e−9` of an integer are snapped to it so
/// that `y = k − R` selects `k`.  `None` if the threshold is infinite or NaN.
pub fn threshold_count(big_r: f64, y: f64) -> Option<i64> {
    let t = big_r + y;
    if !t.is_finite() {
        return None;
    }
    let r = t.round();
    Some(if (t - r).abs() <= 1e-9 * t.abs().max(1.0) { r as i64 } else { t.ceil() as i64 })
}

/// Exact law of the count in the disk of unfolded radius `R`, within total-variation budget
/// `eps`.
///
/// # Errors
/// As for [`window`]; [`Error::Budget`] if the flushed mass pushes the budget above `1e−3`.
pub fn pmf(e: &Ensemble, big_r: f64, eps: f64) -> Result<PoissonBinomialPMF> {
    let table = ModeTable::build(e, big_r, eps)?;
    let out = PoissonBinomialPMF::from_table(&table);
    if out.eps_total > 1e-3 {
        return Err(Error::Budget(format!("total-variation budget {} exceeds 1e-3", out.eps_total)));
    }
    Ok(out)
}

/// `Pr{Ξ_R ≥ y}` with absolute error at most `1e−12` (plus flushed mass).
///
/// # Errors
/// As for [`pmf`].
pub fn exact_tail(e: &Ensemble, big_r: f64, y: f64) -> Result<f64> {
    if y == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    Ok(pmf(e, big_r, DEFAULT_EPS)?.tail_xi(big_r, y))
}

/// `ln(e^a + e^b)`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Logistic function `1/(1 + e^{−x})` and its complement, each computed without cancellation.
fn sigmoid_pair(x: f64) -> (f64, f64) {
    if x >= 0.0 {
        let e = (-x).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = x.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

/// Relative accuracy targeted by [`exact_log_tail`] for the window truncation.
const LOG_TAIL_REL: f64 = 1e-10;

/// `ln Pr{Ξ_R ≥ y}`, accurate in relative terms even far below the `f64` range.
///
/// Above the mean the modes are exponentially tilted by `θ` chosen so that the tilted mean equals
/// the threshold `c`: `ln Pr{N ≥ c} = Σ_k ln(1 − λ_k + λ_k e^θ) − θc + ln Σ_{s≥c} P_θ(s) e^{−θ(s−c)}`.
/// The window above the threshold is widened until the neglected modes change the result by a
/// relative amount below `1e−10`; the bound uses log-concavity of the Poisson-binomial tail.
///
/// # Errors
/// As for [`pmf`]; [`Error::Budget`] if the relative accuracy cannot be certified.
pub fn exact_log_tail(e: &Ensemble, big_r: f64, y: f64) -> Result<f64> {
    let Some(c) = threshold_count(big_r, y) else {
        return Ok(if y < 0.0 { 0.0 } else { f64::NEG_INFINITY });
    };
    let base = window(e, big_r, DEFAULT_EPS)?;
    if (c as f64) <= big_r {
        let p = PoissonBinomialPMF::from_table(&ModeTable::new(e, big_r, base)?).tail(c);
        return Ok(p.ln());
    }
    let mut k_hi = base.k_hi.max(c as u64 + 16);
    if let Some(n) = e.max_mode() {
        if c as u64 > n {
            return Ok(f64::NEG_INFINITY);
        }
        k_hi = k_hi.min(n);
    }
    loop {
        if k_hi - base.k_lo + 1 > MAX_WINDOW_LEN {
            return Err(Error::Range(format!(
                "log-tail at R = {big_r}, y = {y} needs more than {MAX_WINDOW_LEN} modes"
            )));
        }
        let w = TruncationWindow { k_hi, eps_total: base.eps_total, ..base };
        let table = ModeTable::new(e, big_r, w)?;
        // Modes whose probability underflows inside the window are certified together with the
        // modes above it.
        let finite = table.ln_pairs().iter().rposition(|p| p.0 > f64::NEG_INFINITY).map_or(0, |i| i + 1);
        let ln_up = ln_upper_tail_mass_bound(e, base.k_lo - 1 + finite as u64, big_r, 1.0)?;
        let (ln_p, ln_ratio) = tilted_log_tail(table.ln_pairs(), c - base.deterministic_count as i64)?;
        // Neglected modes above the window multiply the tail by at most E[r^T] ≤ exp((r−1)·mass),
        // and modes below it (counted as certain hits) change it by a relative amount ≤ their mass.
        let excess = if ln_up == f64::NEG_INFINITY { 0.0 } else { (ln_ratio + ln_up).min(700.0).exp() };
        let rel = excess.exp_m1() + base.eps_total;
        if rel <= LOG_TAIL_REL {
            return Ok(ln_p);
        }
        if e.max_mode() == Some(k_hi) {
            return Err(Error::Budget(format!("log-tail at R = {big_r}, y = {y} could not be certified")));
        }
        let grow = ((k_hi - base.k_lo) / 2).max(16);
        k_hi = e.max_mode().map_or(k_hi + grow, |n| (k_hi + grow).min(n));
    }
}

/// `(ln Pr{S ≥ c}, ln(Pr{S ≥ c − 1}/Pr{S ≥ c}))` for `S = Σ Bernoulli(λ_k)` given the log pairs.
fn tilted_log_tail(ln_pairs: &[(f64, f64)], c: i64) -> Result<(f64, f64)> {
    let n = ln_pairs.len() as i64;
    if c <= 0 {
        return Ok((0.0, 0.0));
    }
    if c > n {
        return Ok((f64::NEG_INFINITY, f64::INFINITY));
    }
    let logits: Vec<f64> = ln_pairs.iter().map(|&(a, b)| a - b).collect();
    if c == n {
        let ln_p: f64 = ln_pairs.iter().map(|p| p.0).sum();
        let ln_prev = log_add_exp(ln_p, ln_p + logits.iter().map(|l| (-l).exp()).sum::<f64>().ln());
        return Ok((ln_p, ln_prev - ln_p));
    }
    let target = c as f64;
    let mean_at = |th: f64| -> (f64, f64) {
        logits.iter().fold((0.0, 0.0), |(m, v), &l| {
            let (s, t) = sigmoid_pair(l + th);
            (m + s, v + s * t)
        })
    };
    // Bracket and solve Σσ(l_k + θ) = c (monotone in θ).
    let (mut lo, mut hi) = (-1.0, 1.0);
    while mean_at(lo).0 > target {
        lo *= 2.0;
    }
    while mean_at(hi).0 < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Convergence("tilt parameter diverged".into()));
        }
    }
    let mut th = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (m, v) = mean_at(th);
        let f = m - target;
        if f.abs() <= 1e-12 * target.max(1.0) {
            break;
        }
        if f > 0.0 {
            hi = th;
        } else {
            lo = th;
        }
        let step = th - f / v;
        th = if v > 0.0 && step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if hi - lo <= 1e-15 * th.abs().max(1.0) {
            break;
        }
    }
    let ln_mgf: f64 = ln_pairs.iter().map(|&(a, b)| log_add_exp(b, a + th)).sum();
    let (tilted, shift, _) = convolve(logits.iter().map(|&l| sigmoid_pair(l + th)));
    let shift = shift as i64;
    // Σ_{s ≥ m} P_θ(s) e^{−θ(s−c)}.
    let weighted = |m: i64| -> f64 {
        tilted
            .iter()
            .enumerate()
            .map(|(j, &p)| (j as i64 + shift, p))
            .filter(|&(s, _)| s >= m)
            .map(|(s, p)| p * (-th * (s - c) as f64).exp())
            .sum()
    };
    let at_c = weighted(c);
    // Pr{S ≥ c−1}/Pr{S ≥ c} = 1 + P_θ(c−1) e^θ / at_c, kept in logs since e^θ may overflow.  A
    // flushed entry leaves the ratio unknown, which is reported as infinite (never certified).
    let ln_ratio = usize::try_from(c - 1 - shift)
        .ok()
        .and_then(|j| tilted.get(j))
        .map_or(f64::INFINITY, |&p| log_add_exp(0.0, p.ln() + th - at_c.ln()));
    Ok((ln_mgf - th * target + at_c.ln(), ln_ratio))
}

/// Kolmogorov distance `sup_x |Pr{(N − centre)/scale ≤ x} − F(x)|` between a lattice law and a
/// continuous CDF `F`; both one-sided limits at every atom are examined.
pub fn kolmogorov_distance(pmf: &PoissonBinomialPMF, centre: f64, scale: f64, cdf: impl Fn(f64) -> f64) -> f64 {
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (j, &p) in pmf.probs().iter().enumerate() {
        let x = ((pmf.offset() + j as u64) as f64 - centre) / scale;
        let f = cdf(x);
        worst = worst.max((below - f).abs());
        below += p;
        worst = worst.max((below - f).abs());
    }
    worst
}
