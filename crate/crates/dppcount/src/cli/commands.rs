//! One table builder per command.  Grid points are evaluated concurrently and collected in grid
//! order.

use super::config::{CommandKind, RunConfig};
use super::table::Table;
use crate::asymptotics::{
    entropy_coefficient, ginibre_cov_exact, ginibre_micro_closed, hyper_kernel, ldp_rate, micro_kernel, LdpRegime,
};
use crate::ensembles::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::exactdist::{exact_cumulant, exact_entropy, exact_log_tail, pmf, ModeTable};
use crate::modphi::ModPhiLimit;
use crate::montecarlo::{sample_counts, sample_paths, tail_from_counts, CountSampler, PathSampler, RngSpec};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Exact tails below this level are recomputed in log space.
const LOG_TAIL_SWITCH: f64 = 1e-10;

/// Runs a validated configuration.
///
/// # Errors
/// [`Error::Config`] for invalid configurations; numerical errors otherwise.
pub fn build_table(config: &RunConfig) -> Result<Table> {
    config.validate()?;
    let e = config.ensemble()?;
    match config.command {
        CommandKind::Tail => tail(config, &e),
        CommandKind::Rate => rate(config, &e),
        CommandKind::Kernels => kernels(config, &e),
        CommandKind::Entropy => entropy(config, &e),
        CommandKind::Ldp => ldp(config, &e),
        CommandKind::Variance => variance(config, &e),
        CommandKind::Sample => sample(config, &e),
    }
}

/// Maps a saturated Legendre transform to a missing cell and keeps every other error.
fn unless_saturated<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Saturation { .. }) => Ok(None),
        Err(err) => Err(err),
    }
}

fn collect_rows(table: &mut Table, rows: Result<Vec<Vec<Option<f64>>>>) -> Result<()> {
    for row in rows? {
        table.push(row);
    }
    Ok(())
}

fn limit(config: &RunConfig, e: &Ensemble) -> Result<ModPhiLimit> {
    ModPhiLimit::for_ensemble(e, config.edge_aplus)
}

fn tail(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let big_r = config.unfolded_radius(e)?;
    let sigma = e.sigma(big_r);
    let lim = limit(config, e)?;
    let law = match pmf(e, big_r, config.eps_window) {
        Ok(p) => Some(p),
        Err(Error::Budget(_)) => None,
        Err(err) => return Err(err),
    };
    let mc = if config.samples > 0 {
        let sampler = CountSampler::new(&ModeTable::build(e, big_r, config.eps_window)?);
        let counts = sample_counts(&sampler, config.samples, RngSpec::new(config.seed));
        Some((sampler, counts))
    } else {
        None
    };
    let scale = (sigma / lim.profile().lambda2_0()).sqrt();
    let rows = config
        .grid
        .par_iter()
        .map(|&y| {
            let threshold = y * sigma;
            let exact = match &law {
                Some(p) => {
                    let v = p.tail_xi(big_r, threshold);
                    Some(if v < LOG_TAIL_SWITCH && threshold > 0.0 { exact_log_tail(e, big_r, threshold)?.exp() } else { v })
                }
                None => None,
            };
            let precise = if y > 0.0 { unless_saturated(lim.precise_deviation(sigma, y))?.map(|p| p.value) } else { None };
            let cor = unless_saturated(lim.cor_mod_estimates(sigma, y * scale))?;
            let est = match &mc {
                Some((sampler, counts)) => Some(tail_from_counts(counts, sampler, big_r, threshold)?),
                None => None,
            };
            Ok(vec![
                Some(y),
                exact,
                precise,
                cor.and_then(|c| c.moderate_dev),
                cor.map(|c| c.extended_clt),
                est.map(|m| m.point),
                est.map(|m| m.ci95.0),
                est.map(|m| m.ci95.1),
            ])
        })
        .collect();
    let mut table =
        Table::new(vec!["y", "exact", "precise_dev", "moderate_dev", "extended_clt", "mc_point", "mc_lo", "mc_hi"]);
    collect_rows(&mut table, rows)?;
    Ok(table)
}

fn rate(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let lim = limit(config, e)?;
    let rows = config
        .grid
        .par_iter()
        .map(|&y| {
            let r = unless_saturated(lim.rate(y))?;
            Ok(vec![Some(y), r.map(|p| p.i), r.map(|p| p.i_prime), r.map(|p| p.i_double_prime)])
        })
        .collect();
    let mut table = Table::new(vec!["y", "I", "Iprime", "Idoubleprime"]);
    collect_rows(&mut table, rows)?;
    Ok(table)
}

fn kernels(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let lim = limit(config, e)?;
    let pairs: Vec<(f64, f64)> = config.grid.iter().flat_map(|&s| config.grid.iter().map(move |&t| (s, t))).collect();
    let ginibre0 = e.family() == Family::GinibreLandau && e.alpha() == 0;
    let rows = pairs
        .par_iter()
        .map(|&(s, t)| {
            let micro = micro_kernel(lim.profile(), s, t)?;
            let closed = ginibre0.then(|| ginibre_micro_closed(0.5 * s, 0.5 * t) / PI.sqrt());
            let hyper = match e.rho() {
                Some(rho) if s > 0.0 && t > 0.0 => Some(hyper_kernel(rho, s, t)?),
                _ => None,
            };
            Ok(vec![Some(s), Some(t), Some(micro), closed, hyper])
        })
        .collect();
    let mut table = Table::new(vec!["s", "t", "micro", "ginibre_closed", "hyper_macro"]);
    collect_rows(&mut table, rows)?;
    Ok(table)
}

fn entropy(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let coefficient = entropy_coefficient(e.alpha(), config.beta)?;
    let rows = config
        .grid
        .par_iter()
        .map(|&r| {
            let exact = exact_entropy(e, r, config.beta)?;
            let area = r * coefficient;
            Ok(vec![Some(r), Some(exact), Some(area), Some(exact / area)])
        })
        .collect();
    let mut table = Table::new(vec!["r", "exact", "r_coefficient", "ratio"]);
    collect_rows(&mut table, rows)?;
    Ok(table)
}

fn ldp(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let regime = LdpRegime::new(config.gamma)?;
    let integral = ldp_rate(&regime, config.x)?.integral;
    let rows = config
        .grid
        .par_iter()
        .map(|&big_r| {
            let theta = regime.theta(big_r);
            let log_tail = exact_log_tail(e, big_r, config.x * theta)?;
            Ok(vec![Some(big_r), Some(config.x), Some(-log_tail / (theta * regime.v(big_r))), Some(integral)])
        })
        .collect();
    let mut table = Table::new(vec!["R", "x", "exact_normalized", "J_integral"]);
    collect_rows(&mut table, rows)?;
    Ok(table)
}

fn variance(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let ginibre0 = e.family() == Family::GinibreLandau && e.alpha() == 0;
    let rows = config
        .grid
        .par_iter()
        .map(|&r| {
            let exact = exact_cumulant(e, e.unfold(r)?, 2)?;
            let closed = if ginibre0 { Some(ginibre_cov_exact(r, r)?) } else { None };
            Ok(vec![Some(r), Some(exact), closed, Some(r / PI.sqrt())])
        })
        .collect();
    let mut table = Table::new(vec!["r", "exact_sum", "bessel_closed", "r_over_sqrt_pi"]);
    collect_rows(&mut table, rows)?;
    Ok(table)
}

fn sample(config: &RunConfig, e: &Ensemble) -> Result<Table> {
    let spec = RngSpec::new(config.seed);
    let mut table = Table::new(vec!["sample", "R", "count"]);
    if config.grid.is_empty() {
        let big_r = config.unfolded_radius(e)?;
        let sampler = CountSampler::new(&ModeTable::build(e, big_r, config.eps_window)?);
        for (i, c) in sample_counts(&sampler, config.samples, spec).into_iter().enumerate() {
            table.push(vec![Some(i as f64), Some(big_r), Some(c as f64)]);
        }
    } else {
        let sampler = PathSampler::new(e, &config.grid, config.eps_window)?;
        for (i, path) in sample_paths(&sampler, config.samples, spec).into_iter().enumerate() {
            for (&big_r, c) in config.grid.iter().zip(path) {
                table.push(vec![Some(i as f64), Some(big_r), Some(c as f64)]);
            }
        }
    }
    Ok(table)
}
