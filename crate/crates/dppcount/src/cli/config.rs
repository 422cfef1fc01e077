//! Run configuration: validated, serialized verbatim into every output.

use crate::ensembles::{Ensemble, Family};
use crate::error::{Error, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

/// Analysis to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Exact tail against the deviation estimators and a Monte Carlo frequency.
    Tail,
    /// Rate function `I`, `I′`, `I″`.
    Rate,
    /// Covariance kernels over an `(s, t)` grid.
    Kernels,
    /// Entanglement entropy against the area-law coefficient.
    Entropy,
    /// Normalized exact log-tails against the large-deviation rate integral.
    Ldp,
    /// Exact disk-count variance against the Bessel closed form.
    Variance,
    /// Raw Monte Carlo samples.
    Sample,
}

/// Ensemble family as spelled on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Infinite Ginibre-type ensemble of Landau level `--alpha`.
    Ginibre,
    /// Finite Ginibre-type ensemble with `--n-particles` modes.
    GinibreFinite,
    /// Hyperbolic ensemble with parameter `--rho`.
    Hyperbolic,
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// `# config:` line, column header, comma-separated rows.
    Csv,
    /// One JSON object with `config`, `columns` and `rows`.
    Json,
}

/// Complete description of a run.  Its canonical JSON (field order as declared) heads every
/// output, and re-running it reproduces the output exactly.  The output path is not part of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Analysis to run.
    pub command: CommandKind,
    /// Ensemble family.
    pub ensemble: EnsembleKind,
    /// Landau level (Ginibre families).
    pub alpha: u32,
    /// Hyperbolic parameter.
    pub rho: Option<f64>,
    /// Number of modes of the finite ensemble.
    pub n_particles: Option<u64>,
    /// Euclidean disk radius `r`.
    pub radius: Option<f64>,
    /// Unfolded radius `R` (mutually exclusive with `radius`).
    pub big_r: Option<f64>,
    /// Command-specific grid (thresholds, kernel arguments, radii).
    pub grid: Vec<f64>,
    /// Edge position `a⁺` of a finite droplet, for the limit objects.
    pub edge_aplus: Option<f64>,
    /// Requested accuracy; must not be finer than the library's certified `1e−12`.
    pub tol: f64,
    /// Total-variation budget of truncation windows.
    pub eps_window: f64,
    /// Random seed.
    pub seed: u64,
    /// Monte Carlo sample size (`0` disables sampling in `tail`).
    pub samples: usize,
    /// Entropy parameter `β`.
    pub beta: f64,
    /// Large-deviation exponent `γ`.
    pub gamma: f64,
    /// Large-deviation level `x`.
    pub x: f64,
    /// Output format.
    pub format: Format,
}

/// Finest accuracy the numerical layers certify.
pub const FINEST_TOL: f64 = 1e-12;

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    /// Canonical one-line JSON.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("configs serialize")
    }

    /// The ensemble described by the configuration.
    ///
    /// # Errors
    /// [`Error::Config`] for missing, superfluous or invalid ensemble parameters.
    pub fn ensemble(&self) -> Result<Ensemble> {
        let e = match self.ensemble {
            EnsembleKind::Ginibre | EnsembleKind::GinibreFinite if self.rho.is_some() => {
                return Err(config_err("--rho applies only to the hyperbolic ensemble"));
            }
            EnsembleKind::Ginibre if self.n_particles.is_some() => {
                return Err(config_err("--n-particles applies only to ginibre-finite"));
            }
            EnsembleKind::Ginibre => Ensemble::ginibre(self.alpha),
            EnsembleKind::GinibreFinite => {
                let n = self.n_particles.ok_or_else(|| config_err("ginibre-finite needs --n-particles"))?;
                Ensemble::ginibre_finite(self.alpha, n)
            }
            EnsembleKind::Hyperbolic => {
                if self.alpha != 0 || self.n_particles.is_some() {
                    return Err(config_err("the hyperbolic ensemble takes only --rho"));
                }
                let rho = self.rho.ok_or_else(|| config_err("hyperbolic needs --rho"))?;
                Ensemble::hyperbolic(rho)
            }
        };
        e.map_err(|err| config_err(err.to_string()))
    }

    /// Unfolded radius from `big_r` or `radius`.
    ///
    /// # Errors
    /// [`Error::Config`] if neither or both are given, or the value is invalid.
    pub fn unfolded_radius(&self, e: &Ensemble) -> Result<f64> {
        let big_r = match (self.big_r, self.radius) {
            (Some(big_r), None) => big_r,
            (None, Some(r)) => e.unfold(r).map_err(|err| config_err(err.to_string()))?,
            (None, None) => return Err(config_err("this command needs --big-r or --radius")),
            (Some(_), Some(_)) => return Err(config_err("--big-r and --radius are mutually exclusive")),
        };
        if !(big_r > 0.0) || big_r.is_infinite() {
            return Err(config_err(format!("unfolded radius must be finite and positive, got {big_r}")));
        }
        Ok(big_r)
    }

    /// Checks everything that can be checked without numerical work.
    ///
    /// # Errors
    /// [`Error::Config`] describing the first problem found.
    pub fn validate(&self) -> Result<()> {
        let e = self.ensemble()?;
        if !(self.tol >= FINEST_TOL && self.tol <= 1e-3) {
            return Err(config_err(format!("--tol must lie in [{FINEST_TOL}, 1e-3], got {}", self.tol)));
        }
        if !(self.eps_window > 0.0 && self.eps_window <= 1e-3) {
            return Err(config_err(format!("--eps-window must lie in (0, 1e-3], got {}", self.eps_window)));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(config_err("grid values must be finite"));
        }
        if let Some(a) = self.edge_aplus {
            if e.family() != Family::GinibreFinite || a.is_nan() {
                return Err(config_err("--edge-aplus applies only to ginibre-finite"));
            }
        }
        let ginibre_only = |what: &str| {
            if e.family() == Family::Hyperbolic {
                Err(config_err(format!("{what} is available for the Ginibre families only")))
            } else {
                Ok(())
            }
        };
        let need_grid = || {
            if self.grid.is_empty() {
                Err(config_err("--grid must not be empty"))
            } else {
                Ok(())
            }
        };
        let positive_grid = |what: &str| {
            if self.grid.iter().any(|&v| v <= 0.0) {
                Err(config_err(format!("{what} grid values must be positive")))
            } else {
                Ok(())
            }
        };
        match self.command {
            CommandKind::Tail => {
                need_grid()?;
                self.unfolded_radius(&e)?;
                if self.samples != 0 && self.samples < crate::montecarlo::MIN_TAIL_SAMPLES {
                    return Err(config_err(format!(
                        "--samples must be 0 or at least {}",
                        crate::montecarlo::MIN_TAIL_SAMPLES
                    )));
                }
            }
            CommandKind::Rate | CommandKind::Kernels => need_grid()?,
            CommandKind::Entropy => {
                need_grid()?;
                positive_grid("radius")?;
                ginibre_only("entropy")?;
                if !(self.beta > 0.0) || self.beta.is_infinite() {
                    return Err(config_err(format!("--beta must be finite and positive, got {}", self.beta)));
                }
            }
            CommandKind::Ldp => {
                need_grid()?;
                positive_grid("unfolded radius")?;
                crate::asymptotics::LdpRegime::new(self.gamma).map_err(|err| config_err(err.to_string()))?;
                if !(self.x > 0.0) || self.x.is_infinite() {
                    return Err(config_err(format!("--x must be finite and positive, got {}", self.x)));
                }
            }
            CommandKind::Variance => {
                need_grid()?;
                positive_grid("radius")?;
                ginibre_only("variance")?;
            }
            CommandKind::Sample => {
                if self.samples == 0 {
                    return Err(config_err("--samples must be positive"));
                }
                if self.grid.is_empty() {
                    self.unfolded_radius(&e)?;
                } else {
                    positive_grid("unfolded radius")?;
                    if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
                        return Err(config_err("sample path grids must be increasing"));
                    }
                }
            }
        }
        Ok(())
    }

    /// A valid configuration used in examples and tests.
    pub fn example() -> Self {
        Self {
            command: CommandKind::Tail,
            ensemble: EnsembleKind::Ginibre,
            alpha: 0,
            rho: None,
            n_particles: None,
            radius: None,
            big_r: Some(400.0),
            grid: vec![0.25, 0.5, 1.0],
            edge_aplus: None,
            tol: 1e-9,
            eps_window: 1e-12,
            seed: 0,
            samples: 0,
            beta: 1.0,
            gamma: 1.5,
            x: 1.0,
            format: Format::Csv,
        }
    }
}
