//! Cumulant generating function of a centred Bernoulli variable.
//!
//! `κ_p(z) = ln(1 + p(e^z − 1)) − pz` with `q = 1 − p` and `D = q + p e^z`:
//! `∂_z κ = pq(e^z − 1)/D`, `∂_z² κ = pq e^z/D²`, `∂_p κ = (e^z − 1)/D − z`.
//! Every function takes `q` separately so that `p` close to `1` keeps full relative accuracy.

/// `κ_p(z)`, computed from the smaller of `p` and `q` to avoid cancellation.
pub(crate) fn kappa_pq(p: f64, q: f64, z: f64) -> f64 {
    if p == 0.0 || q == 0.0 {
        return 0.0;
    }
    if p <= 0.5 {
        (p * z.exp_m1()).ln_1p() - p * z
    } else {
        q * z + (q * (-z).exp_m1()).ln_1p()
    }
}

/// `D = q + p e^z` (a sum of non-negative terms, so free of cancellation).
fn denom(p: f64, q: f64, z: f64) -> f64 {
    q + p * z.exp()
}

/// `∂_z^order κ_p(z)` for `order ∈ {0, 1, 2}`.
pub(crate) fn kappa_dz_pq(p: f64, q: f64, z: f64, order: u8) -> f64 {
    match order {
        0 => kappa_pq(p, q, z),
        1 => {
            if p == 0.0 || q == 0.0 {
                return 0.0;
            }
            p * q * z.exp_m1() / denom(p, q, z)
        }
        _ => {
            if p == 0.0 || q == 0.0 {
                return 0.0;
            }
            // pq e^z / D² = pq e^{−z} / (q e^{−z} + p)² (the form with the bounded exponential).
            if z <= 0.0 {
                let d = denom(p, q, z);
                p * q * z.exp() / (d * d)
            } else {
                let d = q * (-z).exp() + p;
                p * q * (-z).exp() / (d * d)
            }
        }
    }
}

/// `∂_p κ_p(z) = (e^z − 1)/(1 + p(e^z − 1)) − z`.
pub(crate) fn kappa_dp_pq(p: f64, q: f64, z: f64) -> f64 {
    z.exp_m1() / denom(p, q, z) - z
}

/// `κ_p(z) = ln(1 + p(e^z − 1)) − pz`, the cumulant generating function of `B − p` with
/// `B ~ Bernoulli(p)`.  `NaN` for `p ∉ [0, 1]`.
pub fn kappa(p: f64, z: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    kappa_pq(p, 1.0 - p, z)
}

/// `∂_z^order κ_p(z)` for `order ∈ {0, 1, 2}` (orders above 2 are treated as 2).
pub fn kappa_dz(p: f64, z: f64, order: u8) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    kappa_dz_pq(p, 1.0 - p, z, order)
}

/// `∂κ_p(z)/∂p = (e^z − 1)/(1 + p(e^z − 1)) − z`.
pub fn kappa_dp(p: f64, z: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    kappa_dp_pq(p, 1.0 - p, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(kappa(0.3, 0.0), 0.0);
        assert_eq!(kappa(0.0, 3.0), 0.0);
        assert_eq!(kappa(1.0, 3.0), 0.0);
        for z in [-2.0f64, 0.4, 5.0] {
            let half = ((1.0 + z.exp()) / 2.0).ln() - z / 2.0;
            assert!((kappa(0.5, z) - half).abs() < 1e-15);
            assert!((kappa(0.5, z) - kappa(0.5, -z)).abs() < 1e-14);
        }
        let (p, z) = (0.3f64, 1.2f64);
        let direct = (0.7 * (-p * z).exp() + 0.3 * ((1.0 - p) * z).exp()).ln();
        assert!((kappa(p, z) - direct).abs() < 1e-15);
        assert!(kappa(1.5, 0.1).is_nan());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for p in [1e-6, 0.2, 0.5, 0.93, 1.0 - 1e-9] {
            for z in [-8.0, -1.0, 0.3, 2.0, 25.0] {
                let d1 = (kappa(p, z + h) - kappa(p, z - h)) / (2.0 * h);
                let d2 = (kappa_dz(p, z + h, 1) - kappa_dz(p, z - h, 1)) / (2.0 * h);
                let dp = (kappa(p + h * p.min(1.0 - p), z) - kappa(p - h * p.min(1.0 - p), z))
                    / (2.0 * h * p.min(1.0 - p));
                let scale = |v: f64| 1e-6 * v.abs().max(1.0);
                assert!((d1 - kappa_dz(p, z, 1)).abs() < scale(d1), "p={p} z={z}");
                assert!((d2 - kappa_dz(p, z, 2)).abs() < scale(d2), "p={p} z={z}");
                if p.min(1.0 - p) > 1e-5 {
                    assert!((dp - kappa_dp(p, z)).abs() < 1e-5 * dp.abs().max(1.0), "p={p} z={z}");
                }
            }
        }
    }
}
