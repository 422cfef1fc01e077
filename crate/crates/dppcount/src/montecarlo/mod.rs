//! Reproducible Monte Carlo simulation of disk counts and multi-radius count paths.
//!
//! Counts never require sampling the radii themselves: mode `k` is inside the disk of unfolded
//! radius `R` with probability `λ_k(R)`, so one uniform `U_k` per mode decides membership for
//! every radius at once (`1{U_k ≤ λ_k(R_i)}` is non-decreasing in `R_i`).
//!
//! Randomness comes from ChaCha8 keyed by the 64-bit seed, with the 64-bit stream id as the
//! cipher stream.  Samples are produced in fixed chunks of [`CHUNK`]; chunk `c` starts at word
//! position `c·2⁴⁸` of the keystream, so each chunk is reproducible independently of how chunks
//! are scheduled across threads.

mod stats;

use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::exactdist::{threshold_count, window, ModeTable, TruncationWindow, DEFAULT_EPS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use stats::{chi_square_test, covariance, moments, wilson_interval, ChiSquare, SampleMoments};

/// Samples per independently seeded chunk.
pub const CHUNK: usize = 4096;

/// Smallest sample size accepted by [`estimate_tail`].
pub const MIN_TAIL_SAMPLES: usize = 1000;

/// Seed and stream identifying a reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSpec {
    /// Key of the generator.
    pub seed: u64,
    /// Stream selector.
    pub stream: u64,
}

impl RngSpec {
    /// Seed with stream `0`.
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Same seed, another stream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    /// Generator positioned at the start of chunk `chunk`.
    pub fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(u128::from(chunk) << 48);
        rng
    }
}

/// Monte Carlo estimate with its standard error and 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Point estimate.
    pub point: f64,
    /// Standard error (sample standard deviation over `√n`).
    pub stderr: f64,
    /// Number of samples.
    pub n_samples: usize,
    /// 95% confidence interval (Wilson score interval for frequencies).
    pub ci95: (f64, f64),
    /// Set when the estimated frequency is below `50/n`: use the exact tail instead.
    pub rare: bool,
}

/// Draws counts for a fixed radius from tabulated mode probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSampler {
    deterministic: u64,
    lambdas: Vec<f64>,
    eps_total: f64,
}

impl CountSampler {
    /// Sampler for a tabulated window.
    pub fn new(table: &ModeTable) -> Self {
        let w = table.window();
        Self { deterministic: w.deterministic_count, lambdas: table.lambdas(), eps_total: w.eps_total }
    }

    /// Sampler at unfolded radius `R` with the default window budget.
    ///
    /// # Errors
    /// As for [`ModeTable::build`].
    pub fn for_radius(e: &Ensemble, big_r: f64) -> Result<Self> {
        Ok(Self::new(&ModeTable::build(e, big_r, DEFAULT_EPS)?))
    }

    /// Sampler from explicit success probabilities (no deterministic part).
    pub fn from_probs(deterministic: u64, lambdas: Vec<f64>) -> Self {
        Self { deterministic, lambdas, eps_total: 0.0 }
    }

    /// Total-variation budget inherited from the window.
    pub fn eps_total(&self) -> f64 {
        self.eps_total
    }

    /// Smallest and largest attainable counts.
    pub fn support(&self) -> (u64, u64) {
        let certain = self.lambdas.iter().filter(|&&l| l >= 1.0).count() as u64;
        let possible = self.lambdas.iter().filter(|&&l| l > 0.0).count() as u64;
        (self.deterministic + certain, self.deterministic + possible)
    }

    /// One count: `deterministic_count + Σ_k 1{U_k ≤ λ_k}` (a mode with `λ_k = 0` is never hit).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.deterministic
            + self.lambdas.iter().filter(|&&l| {
                let u: f64 = rng.random();
                u < l
            }).count() as u64
    }
}

/// Draws count paths over an increasing grid of radii with shared uniforms per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSampler {
    deterministic: u64,
    /// `λ_k(R_i)` for each mode (outer) and radius (inner).
    lambdas: Vec<Vec<f64>>,
    eps_total: f64,
}

impl PathSampler {
    /// Sampler over the grid `R_1 < … < R_m`; the joint window spans the windows of all radii.
    ///
    /// # Errors
    /// [`Error::Domain`] for an empty or non-increasing grid; window and evaluation errors.
    pub fn new(e: &Ensemble, radii: &[f64], eps: f64) -> Result<Self> {
        if radii.is_empty() || radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("radii must form a non-empty increasing grid".into()));
        }
        let windows: Vec<TruncationWindow> = radii.iter().map(|&r| window(e, r, eps)).collect::<Result<_>>()?;
        let k_lo = windows.iter().map(|w| w.k_lo).min().expect("non-empty");
        let k_hi = windows.iter().map(|w| w.k_hi).max().expect("non-empty");
        let eps_total = windows.iter().map(|w| w.eps_total).sum();
        let joint = TruncationWindow { k_lo, k_hi, deterministic_count: k_lo - 1, eps_total };
        let tables: Vec<Vec<f64>> = radii
            .iter()
            .map(|&r| Ok(ModeTable::new(e, r, joint)?.lambdas()))
            .collect::<Result<_>>()?;
        let lambdas = (0..joint.len()).map(|j| tables.iter().map(|t| t[j]).collect()).collect();
        Ok(Self { deterministic: joint.deterministic_count, lambdas, eps_total })
    }

    /// Number of radii.
    pub fn len(&self) -> usize {
        self.lambdas.first().map_or(0, Vec::len)
    }

    /// Whether the grid is empty (never true for a constructed sampler).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total-variation budget of the joint window.
    pub fn eps_total(&self) -> f64 {
        self.eps_total
    }

    /// One path of counts, non-decreasing along the grid.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let m = self.len();
        let mut counts = vec![self.deterministic; m];
        for lam in &self.lambdas {
            let u: f64 = rng.random();
            // λ_k(R_i) is non-decreasing in i: find the first radius that captures the mode.
            let first = lam.partition_point(|&l| u >= l);
            for c in &mut counts[first..] {
                *c += 1;
            }
        }
        counts
    }
}

/// Runs `n` draws in fixed chunks (in parallel) and returns them in chunk order.
fn run_chunks<T: Send>(n: usize, spec: RngSpec, draw: impl Fn(&mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = spec.chunk_rng(c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect::<Vec<T>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// `n` independent counts, reproducible for a given [`RngSpec`] regardless of thread count.
pub fn sample_counts(sampler: &CountSampler, n: usize, spec: RngSpec) -> Vec<u64> {
    run_chunks(n, spec, |rng| sampler.sample(rng))
}

/// `n` independent count paths, reproducible for a given [`RngSpec`].
pub fn sample_paths(sampler: &PathSampler, n: usize, spec: RngSpec) -> Vec<Vec<u64>> {
    run_chunks(n, spec, |rng| sampler.sample(rng))
}

/// One count at unfolded radius `R` (convenience wrapper over [`CountSampler`]).
///
/// # Errors
/// As for [`CountSampler::for_radius`].
pub fn sample_count<R: Rng + ?Sized>(e: &Ensemble, big_r: f64, rng: &mut R) -> Result<u64> {
    Ok(CountSampler::for_radius(e, big_r)?.sample(rng))
}

/// One count path over an increasing grid (convenience wrapper over [`PathSampler`]).
///
/// # Errors
/// As for [`PathSampler::new`].
pub fn sample_path<R: Rng + ?Sized>(e: &Ensemble, radii: &[f64], rng: &mut R) -> Result<Vec<u64>> {
    Ok(PathSampler::new(e, radii, DEFAULT_EPS)?.sample(rng))
}

/// Frequency estimate of `Pr{Ξ_R ≥ y}` from a sampler.
///
/// # Errors
/// [`Error::Domain`] for fewer than 1000 samples or NaN `y`.
pub fn estimate_tail_with(sampler: &CountSampler, big_r: f64, y: f64, n: usize, spec: RngSpec) -> Result<McEstimate> {
    if n < MIN_TAIL_SAMPLES {
        return Err(Error::Domain(format!("tail estimates need at least {MIN_TAIL_SAMPLES} samples, got {n}")));
    }
    if y.is_nan() {
        return Err(Error::Domain("threshold is NaN".into()));
    }
    if let Some(v) = certain_tail(sampler, big_r, y) {
        return Ok(McEstimate { point: v, stderr: 0.0, n_samples: n, ci95: (v, v), rare: false });
    }
    tail_from_counts(&sample_counts(sampler, n, spec), sampler, big_r, y)
}

/// `Some(0)` or `Some(1)` when the event `{Ξ_R ≥ y}` is impossible or certain under the sampler.
fn certain_tail(sampler: &CountSampler, big_r: f64, y: f64) -> Option<f64> {
    let (min_count, max_count) = sampler.support();
    match threshold_count(big_r, y) {
        None => Some(if y < 0.0 { 1.0 } else { 0.0 }),
        Some(c) if c <= min_count as i64 => Some(1.0),
        Some(c) if c > max_count as i64 => Some(0.0),
        Some(_) => None,
    }
}

/// Frequency estimate of `Pr{Ξ_R ≥ y}` from counts already drawn from `sampler`, so that one
/// sample can serve a whole grid of thresholds.
///
/// # Errors
/// [`Error::Domain`] for fewer than 1000 counts or NaN `y`.
pub fn tail_from_counts(counts: &[u64], sampler: &CountSampler, big_r: f64, y: f64) -> Result<McEstimate> {
    let n = counts.len();
    if n < MIN_TAIL_SAMPLES {
        return Err(Error::Domain(format!("tail estimates need at least {MIN_TAIL_SAMPLES} samples, got {n}")));
    }
    if y.is_nan() {
        return Err(Error::Domain("threshold is NaN".into()));
    }
    if let Some(v) = certain_tail(sampler, big_r, y) {
        return Ok(McEstimate { point: v, stderr: 0.0, n_samples: n, ci95: (v, v), rare: false });
    }
    let c = threshold_count(big_r, y).expect("finite threshold");
    let hits = counts.iter().filter(|&&v| v as i64 >= c).count();
    let nf = n as f64;
    let point = hits as f64 / nf;
    let stderr = (point * (1.0 - point) / (nf - 1.0)).sqrt();
    Ok(McEstimate { point, stderr, n_samples: n, ci95: wilson_interval(hits, n), rare: point < 50.0 / nf })
}

/// Frequency estimate of `Pr{Ξ_R ≥ y}` with a Wilson 95% interval.
///
/// # Errors
/// As for [`estimate_tail_with`] and [`CountSampler::for_radius`].
pub fn estimate_tail(e: &Ensemble, big_r: f64, y: f64, n: usize, spec: RngSpec) -> Result<McEstimate> {
    estimate_tail_with(&CountSampler::for_radius(e, big_r)?, big_r, y, n, spec)
}
