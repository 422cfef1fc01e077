//! `dppcount`: counting statistics of rotation-invariant determinantal point processes.
//!
//! The moduli of the points of a rotation-invariant determinantal process on the plane (or the
//! disk) are independent random variables, so the number of points in a centred disk is a sum of
//! independent Bernoulli variables with success probabilities `λ_k(R) = Pr{Γ_k ≤ R}`.  This crate
//! builds everything on that representation:
//!
//! - [`specfun`]: incomplete gamma/beta, scaled Bessel functions, Hermite functions, orthonormal
//!   Laguerre polynomials and adaptive Gauss–Kronrod quadrature.
//! - [`ensembles`]: model descriptors for the (polyanalytic) Ginibre ensembles, the finite Ginibre
//!   ensemble and the hyperbolic ensembles; radii laws, limiting profiles, tail bounds and the
//!   Edgeworth correction.
//! - [`exactdist`]: certified truncation windows, the exact Poisson-binomial law of the counting
//!   statistic, exact cumulants, tails (including log-tails far below `f64` underflow) and
//!   entanglement entropies.
//! - [`modphi`]: the mod-phi layer: `Λ`, `ψ`, Legendre-transform rate functions and the precise,
//!   moderate and Berry–Esseen deviation estimators.
//! - [`asymptotics`]: covariance kernels of the functional limit theorems, the exact Bessel
//!   covariance of the Ginibre disk counts, large-deviation regimes, entropy and cumulant
//!   coefficients.
//! - [`montecarlo`]: reproducible, parallel simulation of counts and multi-radius paths.
//! - [`cli`]: the command-line front end emitting CSV/JSON tables.

pub mod asymptotics;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod exactdist;
pub mod modphi;
pub mod montecarlo;
pub mod specfun;

pub use error::{Error, Result};
