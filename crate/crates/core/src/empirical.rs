//! Finite samples in R and R² with exact counting CDF queries.

use crate::error::{Error, Result};

/// Empirical distribution of real numbers. Points are kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Empirical1d {
    sorted: Vec<f64>,
}

impl Empirical1d {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("empirical distribution"));
        }
        if let Some(i) = points.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        points.sort_by(f64::total_cmp);
        Ok(Self { sorted: points })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Number of points `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&p| p <= x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.len() as f64
    }
}

/// Empirical distribution of points in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Empirical2d {
    points: Vec<[f64; 2]>,
}

impl Empirical2d {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("empirical distribution"));
        }
        if let Some(i) = points.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Number of points with `x <= u` and `y <= v`.
    pub fn count_quadrant(&self, u: f64, v: f64) -> usize {
        self.points.iter().filter(|p| p[0] <= u && p[1] <= v).count()
    }

    pub fn quadrant_cdf(&self, u: f64, v: f64) -> f64 {
        self.count_quadrant(u, v) as f64 / self.len() as f64
    }

    /// Marginal along coordinate `axis` (0 = real, 1 = imaginary).
    pub fn marginal(&self, axis: usize) -> Empirical1d {
        Empirical1d::new(self.points.iter().map(|p| p[axis]).collect()).expect("non-empty, finite")
    }

    /// Distribution of the Euclidean norms of the points.
    pub fn moduli(&self) -> Empirical1d {
        Empirical1d::new(self.points.iter().map(|p| p[0].hypot(p[1])).collect())
            .expect("non-empty, finite")
    }
}

/// Sorted distinct values together with, for each input, the rank of its value.
pub(crate) fn rank_coordinates(values: impl Iterator<Item = f64>) -> (Vec<f64>, Vec<usize>) {
    let values: Vec<f64> = values.collect();
    let mut distinct = values.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let ranks = values
        .iter()
        .map(|x| distinct.partition_point(|d| d < x))
        .collect();
    (distinct, ranks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_counts_ties() {
        let e = Empirical1d::new(vec![2.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.cdf(0.5), 0.0);
        assert_eq!(e.cdf(2.0), 0.75);
        assert_eq!(e.cdf(3.0), 1.0);
    }

    #[test]
    fn quadrant_counts() {
        let e = Empirical2d::new(vec![[0.0, 0.0], [1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert_eq!(e.count_quadrant(0.0, 0.0), 1);
        assert_eq!(e.count_quadrant(1.0, 0.0), 2);
        assert_eq!(e.count_quadrant(f64::INFINITY, f64::INFINITY), 3);
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert!(Empirical1d::new(vec![]).is_err());
        assert!(Empirical2d::new(vec![]).is_err());
        assert_eq!(Empirical2d::new(vec![[0.0, f64::NAN]]), Err(Error::NonFinite(0)));
    }

    #[test]
    fn ranks_of_distinct_values() {
        let (d, r) = rank_coordinates([3.0, 1.0, 3.0, 2.0].into_iter());
        assert_eq!(d, vec![1.0, 2.0, 3.0]);
        assert_eq!(r, vec![2, 0, 2, 1]);
    }
}
