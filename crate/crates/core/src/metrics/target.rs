use rand_distr::{Distribution, StandardNormal};

use crate::empirical::Empirical2d;
use crate::numeric::normal_cdf;
use crate::rng::stream_rng;

/// The limit law G: independent real and imaginary parts, each Normal(0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TargetGaussian;

impl TargetGaussian {
    pub const DIMENSION: usize = 2;
    pub const COMPONENT_VARIANCE: f64 = 0.5;

    /// CDF of one component, Normal(0, 1/2).
    pub fn component_cdf(&self, x: f64) -> f64 {
        normal_cdf(x, Self::COMPONENT_VARIANCE)
    }

    /// G({(x, y): x <= u, y <= v}).
    pub fn quadrant_probability(&self, u: f64, v: f64) -> f64 {
        self.component_cdf(u) * self.component_cdf(v)
    }

    /// CDF of |W| for W ~ G. |W|² is Exp(1), so P(|W| <= r) = 1 - e^{-r²}.
    pub fn modulus_cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            -(-r * r).exp_m1()
        }
    }

    pub fn sample_points(&self, m: usize, seed: u64, stream_id: u64) -> Vec<[f64; 2]> {
        let mut rng = stream_rng(seed, stream_id);
        let sd = Self::COMPONENT_VARIANCE.sqrt();
        (0..m)
            .map(|_| {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                [sd * x, sd * y]
            })
            .collect()
    }

    /// m i.i.d. draws from G. Panics if `m == 0`.
    pub fn sample(&self, m: usize, seed: u64, stream_id: u64) -> Empirical2d {
        Empirical2d::new(self.sample_points(m, seed, stream_id)).expect("m >= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_corner_has_quarter_mass() {
        assert_eq!(TargetGaussian.quadrant_probability(0.0, 0.0), 0.25);
        assert_eq!(TargetGaussian.quadrant_probability(f64::INFINITY, 0.0), 0.5);
    }

    #[test]
    fn modulus_cdf_limits() {
        assert_eq!(TargetGaussian.modulus_cdf(0.0), 0.0);
        assert!((TargetGaussian.modulus_cdf(1.0) - (1.0 - (-1f64).exp())).abs() < 1e-16);
        assert!(TargetGaussian.modulus_cdf(40.0) == 1.0);
    }

    #[test]
    fn samples_have_half_variance_per_component() {
        let pts = TargetGaussian.sample_points(200_000, 1, 1);
        let n = pts.len() as f64;
        for axis in 0..2 {
            let var = pts.iter().map(|p| p[axis] * p[axis]).sum::<f64>() / n;
            assert!((var - 0.5).abs() < 0.01, "axis {axis}: {var}");
        }
    }
}
