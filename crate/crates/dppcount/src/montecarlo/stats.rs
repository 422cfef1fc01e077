//! Estimators: Wilson intervals, moments with standard errors, covariances, chi-square tests.

use crate::error::{Error, Result};
use crate::exactdist::PoissonBinomialPMF;
use crate::specfun::reg_inc_gamma_upper;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score 95% interval for `hits` successes out of `n` trials.
pub fn wilson_interval(hits: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Sample mean and variance with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMoments {
    /// Number of samples.
    pub n: usize,
    /// Sample mean.
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the mean.
    pub stderr_mean: f64,
    /// Standard error of the variance, `√((μ₄ − σ⁴(n−3)/(n−1))/n)`.
    pub stderr_variance: f64,
}

/// Moments of integer samples.
///
/// # Errors
/// [`Error::Domain`] for fewer than 4 samples.
pub fn moments(xs: &[u64]) -> Result<SampleMoments> {
    let n = xs.len();
    if n < 4 {
        return Err(Error::Domain(format!("need at least 4 samples, got {n}")));
    }
    let nf = n as f64;
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / nf;
    let (m2, m4) = xs.iter().fold((0.0, 0.0), |(a, b), &x| {
        let d = x as f64 - mean;
        let d2 = d * d;
        (a + d2, b + d2 * d2)
    });
    let variance = m2 / (nf - 1.0);
    let mu4 = m4 / nf;
    let s4 = variance * variance;
    let var_of_var = ((mu4 - s4 * (nf - 3.0) / (nf - 1.0)) / nf).max(0.0);
    Ok(SampleMoments {
        n,
        mean,
        variance,
        stderr_mean: (variance / nf).sqrt(),
        stderr_variance: var_of_var.sqrt(),
    })
}

/// Sample covariance of paired samples and its standard error (standard deviation of the
/// centred products over `√n`).
///
/// # Errors
/// [`Error::Domain`] for mismatched lengths or fewer than 4 pairs.
pub fn covariance(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n != ys.len() || n < 4 {
        return Err(Error::Domain(format!("need at least 4 paired samples, got {} and {}", n, ys.len())));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let cov = prods.iter().sum::<f64>() / (nf - 1.0);
    let pm = prods.iter().sum::<f64>() / nf;
    let var_p = prods.iter().map(|p| (p - pm) * (p - pm)).sum::<f64>() / (nf - 1.0);
    Ok((cov, (var_p / nf).sqrt()))
}

/// Pearson chi-square goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    /// Test statistic.
    pub statistic: f64,
    /// Degrees of freedom (bins − 1).
    pub dof: usize,
    /// Upper-tail p-value.
    pub p_value: f64,
}

/// Chi-square test of integer samples against an exact law.  Bins are formed in count order and
/// merged until each expects at least 5 observations; the extreme bins absorb the tails.
///
/// # Errors
/// [`Error::Domain`] if there are no samples or fewer than two bins.
pub fn chi_square_test(xs: &[u64], law: &PoissonBinomialPMF) -> Result<ChiSquare> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::Domain("no samples".into()));
    }
    let nf = n as f64;
    let lo = law.offset();
    let hi = lo + law.probs().len() as u64 - 1;
    let mut observed = vec![0usize; law.probs().len()];
    for &x in xs {
        observed[(x.clamp(lo, hi) - lo) as usize] += 1;
    }
    // Merge adjacent cells until each expected count reaches 5.
    let mut bins: Vec<(f64, usize)> = Vec::new();
    let (mut e_acc, mut o_acc) = (0.0, 0usize);
    for (p, o) in law.probs().iter().zip(&observed) {
        e_acc += p * nf;
        o_acc += o;
        if e_acc >= 5.0 {
            bins.push((e_acc, o_acc));
            e_acc = 0.0;
            o_acc = 0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += e_acc;
        last.1 += o_acc;
    }
    if bins.len() < 2 {
        return Err(Error::Domain("fewer than two bins with enough expected mass".into()));
    }
    let statistic: f64 = bins.iter().map(|&(e, o)| (o as f64 - e).powi(2) / e).sum();
    let dof = bins.len() - 1;
    Ok(ChiSquare { statistic, dof, p_value: reg_inc_gamma_upper(0.5 * dof as f64, 0.5 * statistic) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
    }

    #[test]
    fn moments_of_a_small_sample() {
        let m = moments(&[1, 2, 3, 4]).unwrap();
        assert_eq!(m.mean, 2.5);
        assert!((m.variance - 5.0 / 3.0).abs() < 1e-15);
        let (c, _) = covariance(&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 6.0, 8.0]).unwrap();
        assert!((c - 10.0 / 3.0).abs() < 1e-14);
    }
}
