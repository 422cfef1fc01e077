//! Property tests for the invariants of the numerical layers, plus the fixed-seed
//! goodness-of-fit checks of the samplers.

use dppcount::asymptotics::{ginibre_cov_exact, hyper_kernel, micro_kernel};
use dppcount::ensembles::{profile, tail_bound, Ensemble};
use dppcount::exactdist::{
    bernoulli_cumulant, exact_cumulant, exact_tail, pmf, ModeTable, PoissonBinomialPMF,
};
use dppcount::modphi::ModPhiLimit;
use dppcount::montecarlo::{
    chi_square_test, sample_counts, wilson_interval, CountSampler, PathSampler, RngSpec,
};
use dppcount::specfun::{reg_inc_beta, reg_inc_gamma, reg_inc_gamma_upper};
use proptest::prelude::*;
use std::sync::OnceLock;

fn ensembles() -> impl Strategy<Value = Ensemble> {
    prop_oneof![
        (0u32..=3).prop_map(|a| Ensemble::ginibre(a).unwrap()),
        (0u32..=2, 20u64..200).prop_map(|(a, n)| Ensemble::ginibre_finite(a, n).unwrap()),
        prop_oneof![Just(0.5), Just(1.0), Just(2.0), 0.3f64..4.0].prop_map(|r| Ensemble::hyperbolic(r).unwrap()),
    ]
}

fn ginibre_limit() -> &'static ModPhiLimit {
    static LIMIT: OnceLock<ModPhiLimit> = OnceLock::new();
    LIMIT.get_or_init(|| ModPhiLimit::for_ensemble(&Ensemble::ginibre(0).unwrap(), None).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incomplete_gamma_is_a_monotone_distribution(a in 0.1f64..500.0, x in 0.0f64..800.0, dx in 0.0f64..20.0) {
        let p = reg_inc_gamma(a, x);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(reg_inc_gamma(a, x + dx) >= p - 1e-15);
        prop_assert!((p + reg_inc_gamma_upper(a, x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_is_monotone_and_reflects(a in 0.1f64..50.0, b in 0.1f64..50.0, x in 0.0f64..1.0, dx in 0.0f64..0.1) {
        let y = (x + dx).min(1.0);
        prop_assert!(reg_inc_beta(a, b, y) >= reg_inc_beta(a, b, x) - 1e-14);
        prop_assert!((reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1.0 - x) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn mode_probabilities_grow_with_radius(e in ensembles(), k in 1u64..150, r in 0.0f64..200.0, dr in 0.0f64..20.0) {
        let lo = e.lambda_k(k, r).unwrap();
        let hi = e.lambda_k(k, r + dr).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-13, "{lo} > {hi}");
        prop_assert_eq!(e.lambda_k(k, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn tail_bounds_dominate(e in ensembles(), k in 1u64..300, r in 1.0f64..150.0) {
        let exact = e.lambda_k(k, r).unwrap();
        let (upper, lower) = tail_bound(&e, k, r).unwrap();
        prop_assert!(exact <= upper * (1.0 + 1e-10) + 1e-300, "λ = {exact}, bound {upper}");
        prop_assert!(1.0 - exact <= lower * (1.0 + 1e-10) + 1e-15, "1 − λ = {}, bound {lower}", 1.0 - exact);
    }

    #[test]
    fn pmf_moments_match_cumulants(e in ensembles(), r in 2.0f64..120.0) {
        let p = pmf(&e, r, 1e-12).unwrap();
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!(p.probs().iter().all(|&v| v >= 0.0));
        let mean = exact_cumulant(&e, r, 1).unwrap() + r;
        prop_assert!((p.mean() - mean).abs() < 1e-9 * mean.max(1.0));
        let var = exact_cumulant(&e, r, 2).unwrap();
        prop_assert!((p.variance() - var).abs() < 1e-9 * var.max(1.0));
    }

    #[test]
    fn exact_tail_is_non_increasing(r in 5.0f64..200.0, y in -20.0f64..20.0, dy in 0.0f64..5.0) {
        let e = Ensemble::ginibre(0).unwrap();
        prop_assert!(exact_tail(&e, r, y + dy).unwrap() <= exact_tail(&e, r, y).unwrap() + 1e-15);
    }

    #[test]
    fn poisson_binomial_of_arbitrary_probabilities(ps in prop::collection::vec(0.0f64..=1.0, 1..60)) {
        let p = PoissonBinomialPMF::from_probs(&ps).unwrap();
        let mean: f64 = ps.iter().sum();
        let var: f64 = ps.iter().map(|q| q * (1.0 - q)).sum();
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!((p.mean() - mean).abs() < 1e-9);
        prop_assert!((p.variance() - var).abs() < 1e-9);
    }

    #[test]
    fn bernoulli_cumulants_reflect(q in 2u32..=dppcount::exactdist::MAX_CUMULANT_ORDER, p in 0.0f64..=1.0) {
        let a = bernoulli_cumulant(q, p).unwrap();
        let b = bernoulli_cumulant(q, 1.0 - p).unwrap();
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn ginibre_kernel_is_symmetric_and_stationary(s in -3.0f64..3.0, t in -3.0f64..3.0, c in -5.0f64..5.0) {
        let p = profile(&Ensemble::ginibre(0).unwrap(), None).unwrap();
        let k = micro_kernel(&p, s, t).unwrap();
        prop_assert!((k - micro_kernel(&p, t, s).unwrap()).abs() < 1e-12);
        prop_assert!((k - micro_kernel(&p, s + c, t + c).unwrap()).abs() < 1e-9);
        prop_assert!(k > 0.0);
    }

    #[test]
    fn hyperbolic_kernel_scales(rho in 0.4f64..3.0, s in 0.2f64..3.0, t in 0.2f64..3.0, c in -3.0f64..3.0) {
        let k = hyper_kernel(rho, s, t).unwrap();
        let scaled = hyper_kernel(rho, c.exp() * s, c.exp() * t).unwrap();
        prop_assert!((scaled - c.exp() * k).abs() < 1e-9 * scaled.max(1.0));
        prop_assert!((k - hyper_kernel(rho, t, s).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn bessel_covariance_is_symmetric_and_bounded(s in 0.0f64..5.0, t in 0.0f64..5.0) {
        let c = ginibre_cov_exact(s, t).unwrap();
        prop_assert_eq!(c, ginibre_cov_exact(t, s).unwrap());
        let (vs, vt) = (ginibre_cov_exact(s, s).unwrap(), ginibre_cov_exact(t, t).unwrap());
        prop_assert!(c >= -1e-12 && c * c <= vs * vt * (1.0 + 1e-9) + 1e-24);
    }

    #[test]
    fn wilson_interval_contains_the_frequency(n in 1usize..100_000, frac in 0.0f64..=1.0) {
        let hits = ((n as f64) * frac).floor() as usize;
        let (lo, hi) = wilson_interval(hits, n);
        let p = hits as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn sampled_paths_never_decrease(seed in any::<u64>(), base in 5.0f64..60.0, step in 0.5f64..10.0) {
        let e = Ensemble::ginibre(1).unwrap();
        let sampler = PathSampler::new(&e, &[base, base + step, base + 2.0 * step], 1e-12).unwrap();
        let mut rng = RngSpec::new(seed).chunk_rng(0);
        for _ in 0..20 {
            let v = sampler.sample(&mut rng);
            prop_assert!(v.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn legendre_duality(y in -1.5f64..3.0) {
        let lim = ginibre_limit();
        let r = lim.rate(y).unwrap();
        prop_assert!((lim.lambda(r.i_prime, 1).unwrap() - y).abs() < 1e-10);
        let x = r.i_prime;
        let dual = x * y - lim.lambda(x, 0).unwrap();
        prop_assert!((r.i - dual).abs() < 1e-9);
        prop_assert!(r.i >= 0.0 && r.i_double_prime > 0.0);
    }

    #[test]
    fn rate_is_convex(y in -1.0f64..2.5, h in 0.01f64..0.3) {
        let lim = ginibre_limit();
        let i = |v: f64| lim.rate(v).unwrap().i;
        prop_assert!(i(y - h) + i(y + h) - 2.0 * i(y) >= -1e-8);
    }
}

#[test]
fn variance_residual_stays_bounded() {
    let e = Ensemble::ginibre(0).unwrap();
    let l2 = ginibre_limit().profile().lambda2_0();
    let residuals: Vec<f64> = [25.0, 100.0, 400.0]
        .iter()
        .map(|&r| exact_cumulant(&e, r, 2).unwrap() - r.sqrt() * l2)
        .collect();
    assert!(residuals.iter().all(|v| v.abs() < 0.1), "{residuals:?}");
}

/// Goodness of fit of 10⁵ sampled counts against the exact law.
fn chi_square_fit(e: &Ensemble, big_r: f64, seed: u64) -> f64 {
    let table = ModeTable::build(e, big_r, 1e-12).unwrap();
    let counts = sample_counts(&CountSampler::new(&table), 100_000, RngSpec::new(seed));
    chi_square_test(&counts, &PoissonBinomialPMF::from_table(&table)).unwrap().p_value
}

#[test]
fn sampled_counts_fit_the_exact_law() {
    for (e, big_r, seed) in [
        (Ensemble::ginibre(0).unwrap(), 64.0, 101),
        (Ensemble::ginibre(1).unwrap(), 64.0, 102),
        (Ensemble::hyperbolic(1.0).unwrap(), 32.0, 103),
    ] {
        let p = chi_square_fit(&e, big_r, seed);
        assert!(p > 0.001, "{e:?} at R = {big_r}: p = {p}");
    }
}
