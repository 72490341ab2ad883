//! Well-behaved pseudometrics between an empirical value cloud and the
//! isotropic complex Gaussian target, plus their two-sample variants.
//!
//! * [`kolmogorov_1d`]: sup-distance between CDFs on the line.
//! * [`quadrant_sup`]: sup over lower-left quadrants in the plane, a class of
//!   finite VC dimension.
//! * [`mmd_to_target`]: kernel mean embedding distance for a Gaussian kernel.
//!
//! Each of these has the property that the distance from k i.i.d. draws to
//! their own law tends to zero in probability, uniformly over the law.

mod dkw;
mod kolmogorov;
mod mmd;
mod quadrant;
mod target;

pub use dkw::{dkw_exceedance_bound, dkw_radius, dkw_sample_size};
pub use kolmogorov::{kolmogorov_1d, kolmogorov_two_sample};
pub use mmd::{
    gaussian_kernel, median_heuristic_bandwidth, mmd_to_target, mmd_two_sample,
    target_cross_term, target_self_term, Bandwidth,
};
pub use quadrant::{quadrant_sup, quadrant_two_sample};
pub use target::TargetGaussian;
