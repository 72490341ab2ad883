//! Random Fourier sums at random frequencies.
//!
//! For i.i.d. standardized coefficients a_1, a_2, ... the normalized sum
//! â^n(ν) = n^{-1/2} Σ a_j e^{-2πiνj}, viewed as a function of a uniformly
//! drawn frequency ν, has a value distribution that approaches the isotropic
//! complex Gaussian G (independent real and imaginary parts with variance
//! 1/2) for almost every coefficient sequence. This crate evaluates those
//! sums, computes their exact covariance structure, measures distances to G,
//! and runs reproducible convergence experiments.
//!
//! Modules:
//! * [`coeffmodels`]: coefficient laws and realizations.
//! * [`spectral`]: evaluation of â^n(ν).
//! * [`covariance`]: exact C^(n) and its limit ½·I.
//! * [`metrics`]: distances between empirical distributions and G.
//! * [`mclab`]: Monte Carlo experiments.
//! * [`oracles`]: slow reference implementations used for certification.

pub mod coeffmodels;
pub mod covariance;
pub mod empirical;
pub mod error;
pub mod linalg;
pub mod mclab;
pub mod metrics;
pub mod numeric;
pub mod oracles;
pub mod rng;
pub mod spectral;

pub use coeffmodels::{sample_coefficients, CoefficientModel, Family, Realization};
pub use covariance::{covariance_exact, covariance_limit, deviation_bound, CovarianceReport, FrequencyTuple};
pub use empirical::{Empirical1d, Empirical2d};
pub use error::{Error, FieldError, Result};
pub use metrics::TargetGaussian;
pub use spectral::{fourier_sum, fourier_sum_grid, sample_value_distribution, ComplexValue, Frequency};
