use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::empirical::Empirical2d;
use crate::error::{Error, Result};
use crate::metrics::TargetGaussian;
use crate::numeric::{median, pairwise_sum, Neumaier};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    Fixed(f64),
    /// Median pairwise distance of (up to the first 1000) sample points.
    MedianHeuristic,
}

impl Default for Bandwidth {
    fn default() -> Self {
        Bandwidth::Fixed(1.0)
    }
}

impl Bandwidth {
    pub fn resolve(&self, emp: &Empirical2d) -> Result<f64> {
        let h = match *self {
            Bandwidth::Fixed(h) => h,
            Bandwidth::MedianHeuristic => median_heuristic_bandwidth(emp),
        };
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "bandwidth",
                reason: format!("bandwidth must be positive, got {h}"),
            });
        }
        Ok(h)
    }
}

pub fn median_heuristic_bandwidth(emp: &Empirical2d) -> f64 {
    let pts = &emp.points()[..emp.len().min(1000)];
    let dists: Vec<f64> = pts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| pts[i + 1..].iter().map(move |q| (p[0] - q[0]).hypot(p[1] - q[1])))
        .collect();
    if dists.is_empty() {
        return 1.0;
    }
    median(&dists)
}

/// κ(x, y) = exp(-‖x - y‖² / (2h²)).
#[inline]
pub fn gaussian_kernel(x: [f64; 2], y: [f64; 2], h: f64) -> f64 {
    let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
    (-d2 / (2.0 * h * h)).exp()
}

/// T(x) = E_{Y~G} κ(x, Y) = h²/(h²+1/2) · exp(-‖x‖² / (2(h²+1/2))).
pub fn target_cross_term(x: [f64; 2], h: f64) -> f64 {
    let s = h * h + TargetGaussian::COMPONENT_VARIANCE;
    (h * h / s) * (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * s)).exp()
}

/// T₀ = E_{Y,Y'~G} κ(Y, Y') = h²/(h²+1).
pub fn target_self_term(h: f64) -> f64 {
    h * h / (h * h + 2.0 * TargetGaussian::COMPONENT_VARIANCE)
}

/// Mean of κ over all pairs (a_i, b_j). Row sums are independent tasks and
/// are reduced with a fixed pairwise tree, so the value does not depend on
/// the number of worker threads.
fn kernel_mean(a: &[[f64; 2]], b: &[[f64; 2]], h: f64) -> f64 {
    let rows: Vec<f64> = a
        .par_iter()
        .map(|&x| b.iter().map(|&y| gaussian_kernel(x, y, h)).collect::<Neumaier>().value())
        .collect();
    pairwise_sum(&rows) / (a.len() as f64 * b.len() as f64)
}

fn self_kernel_mean(a: &[[f64; 2]], h: f64) -> f64 {
    let rows: Vec<f64> = (0..a.len())
        .into_par_iter()
        .map(|i| {
            a[i + 1..]
                .iter()
                .map(|&y| gaussian_kernel(a[i], y, h))
                .collect::<Neumaier>()
                .value()
        })
        .collect();
    let k = a.len() as f64;
    (k + 2.0 * pairwise_sum(&rows)) / (k * k)
}

/// Points in lexicographic order, so that every sum below is independent of
/// the input ordering.
fn canonical(emp: &Empirical2d) -> Vec<[f64; 2]> {
    let mut pts = emp.points().to_vec();
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pts
}

fn clamped_sqrt(radicand: f64) -> f64 {
    debug_assert!(radicand >= -1e-12, "negative MMD radicand {radicand}");
    radicand.max(0.0).sqrt()
}

/// Biased (V-statistic) MMD between the empirical distribution and G, with
/// the G terms integrated in closed form.
pub fn mmd_to_target(emp: &Empirical2d, _target: &TargetGaussian, bandwidth: Bandwidth) -> Result<f64> {
    let h = bandwidth.resolve(emp)?;
    let pts = canonical(emp);
    let self_term = self_kernel_mean(&pts, h);
    let cross = pairwise_sum(&pts.iter().map(|&x| target_cross_term(x, h)).collect::<Vec<_>>())
        / pts.len() as f64;
    Ok(clamped_sqrt(self_term - 2.0 * cross + target_self_term(h)))
}

/// Biased MMD between two empirical distributions.
pub fn mmd_two_sample(a: &Empirical2d, b: &Empirical2d, h: f64) -> Result<f64> {
    let h = Bandwidth::Fixed(h).resolve(a)?;
    let (pa, pb) = (canonical(a), canonical(b));
    // Full Gram means on every side: equal multisets then give exactly zero.
    let radicand =
        kernel_mean(&pa, &pa, h) + kernel_mean(&pb, &pb, h) - 2.0 * kernel_mean(&pa, &pb, h);
    Ok(clamped_sqrt(radicand))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_origin_point_unit_bandwidth() {
        let e = Empirical2d::new(vec![[0.0, 0.0]]).unwrap();
        let d = mmd_to_target(&e, &TargetGaussian, Bandwidth::Fixed(1.0)).unwrap();
        assert!((d - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((d - 0.40825).abs() < 1e-5);
    }

    #[test]
    fn closed_form_terms_at_unit_bandwidth() {
        assert!((target_self_term(1.0) - 0.5).abs() < 1e-16);
        assert!((target_cross_term([0.0, 0.0], 1.0) - 2.0 / 3.0).abs() < 1e-16);
        // Large bandwidth: kernel flattens to 1.
        assert!((target_self_term(1e6) - 1.0).abs() < 1e-11);
        assert!((target_cross_term([0.3, -0.2], 1e6) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn non_positive_bandwidth_rejected() {
        let e = Empirical2d::new(vec![[0.0, 0.0]]).unwrap();
        for h in [0.0, -1.0, f64::NAN] {
            let err = mmd_to_target(&e, &TargetGaussian, Bandwidth::Fixed(h)).unwrap_err();
            assert!(err.to_string().contains("bandwidth must be positive"));
        }
    }

    #[test]
    fn two_sample_self_distance_is_zero() {
        let e = Empirical2d::new(TargetGaussian.sample_points(50, 1, 0)).unwrap();
        assert_eq!(mmd_two_sample(&e, &e, 1.0).unwrap(), 0.0);
        let mut rev = e.points().to_vec();
        rev.reverse();
        let r = Empirical2d::new(rev).unwrap();
        assert_eq!(mmd_two_sample(&e, &r, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn median_heuristic_is_positive() {
        let e = Empirical2d::new(TargetGaussian.sample_points(100, 2, 0)).unwrap();
        let h = median_heuristic_bandwidth(&e);
        // Median distance between two G draws is sqrt(2 ln 2) ≈ 1.18.
        assert!(h > 0.9 && h < 1.45, "{h}");
        assert!(mmd_to_target(&e, &TargetGaussian, Bandwidth::MedianHeuristic).is_ok());
    }
}
