//! Numerical laboratory for spectral sums of singular measures on flat tori.
//!
//! The central object is the cumulative spectral sum
//! `N_mu(lambda) = sum over eigenvalues 2*pi*|k| <= lambda of |mu_hat(k)|^2`
//! for a finite Borel measure `mu` on the unit torus `T^n = R^n/Z^n`, where
//! eigenfunctions are exponentials and `mu_hat` is the Fourier transform of
//! the measure. For an `s`-dimensional measure with stabilized small-scale
//! pair geometry this sum grows like `C_{n,s} * A * lambda^(n-s)`, and the
//! crate provides every ingredient needed to compute, cross-validate and
//! stress that law at desk scale:
//!
//! * [`specfun`] - gamma/Bessel evaluations, formal ball volumes and the
//!   constant bundle `(C_{n,s}, gamma_s, gamma_{n,s}, kappa_s)`.
//! * [`measures`] - concrete measure models (subtorus Lebesgue, digit
//!   self-similar, Fourier-weighted densities, mixtures) with exact Fourier
//!   coefficients, sampling and ball masses.
//! * [`distdist`] - the distance distribution `F(r)`, normalized coefficient
//!   `a(r) = F(r)/r^s`, Gaussian pair averages `G(t)` and Riesz energies.
//! * [`spectral`] - lattice enumeration, spectral sweeps, heat-regularized
//!   sums and energy-weighted sums with their comparison inequalities.
//! * [`asymptotics`] - ratio sweeps, exponent fits, Laplace-transform
//!   (Abelian/Tauberian) consistency checks and oscillation verdicts.
//! * [`sharpness`] - the constructions showing the hypotheses are needed:
//!   two-dimension mixtures, block profiles realizing liminf/limsup, and the
//!   oscillating-density construction with its ball multiplier thresholds.
//! * [`config`]/[`report`] - reproducible experiment configs and CSV/JSON
//!   emission used by the command-line driver.
//!
//! All randomness is seeded and all parallel reductions are performed in a
//! fixed order, so every result is bit-reproducible for a given build.

pub mod asymptotics;
pub mod config;
pub mod distdist;
pub mod error;
pub mod measures;
pub mod quad;
pub mod report;
pub mod sharpness;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
