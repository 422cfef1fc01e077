//! Special functions and adaptive quadrature.
//!
//! Everything here is a pure function of its arguments.  The incomplete gamma function is
//! available both in linear and in logarithmic form so that callers can work far below the
//! `f64` underflow threshold (large-deviation tails).

mod bessel;
mod beta;
mod gamma;
mod orthopoly;
mod quad;

pub use bessel::bessel_i_scaled;
pub use beta::reg_inc_beta;
pub use gamma::{
    gamma_pdf, ln_gamma, ln_gamma_prefactor, ln_reg_inc_gamma, normal_pdf, normal_sf,
    reg_inc_gamma, reg_inc_gamma_upper,
};
pub use orthopoly::{
    hermite_orthonormal, hermite_sq, hermite_sq_derivs, hermite_tail, laguerre_eval,
    laguerre_gamma_orthonormal, HermiteFunction, LaguerrePoly, MAX_HERMITE_DEGREE,
};
pub use quad::{quad, quad_breaks, QuadOptions, QuadratureResult};
