//! Floating-point building blocks: exact phase reduction, compensated and
//! pairwise summation, the Gaussian CDF and order statistics.

use std::f64::consts::{PI, TAU};

/// `x * j` split as `whole + turns`, where `whole` is an integer and `turns`
/// lies in `[-1/2, 1/2]` up to one rounding. The product error term is
/// recovered with an FMA, so `turns` carries no accumulated angle error even
/// when `x * j` is large.
#[derive(Debug, Clone, Copy)]
pub struct ReducedPhase {
    pub turns: f64,
    pub whole_is_odd: bool,
}

#[inline]
pub fn reduce_product(x: f64, j: f64) -> ReducedPhase {
    let p = x * j;
    let err = x.mul_add(j, -p);
    let whole = p.round();
    // p - whole is exact: both share the exponent range of p and |p - whole| <= 1/2.
    let turns = (p - whole) + err;
    ReducedPhase {
        turns,
        whole_is_odd: whole.rem_euclid(2.0) != 0.0,
    }
}

/// `x` reduced modulo 1 into `[-1/2, 1/2]`.
#[inline]
pub fn reduce_turns(x: f64) -> f64 {
    x - x.round()
}

/// `(cos 2πt, sin 2πt)`.
#[inline]
pub fn unit_phasor(turns: f64) -> (f64, f64) {
    let (s, c) = (TAU * turns).sin_cos();
    (c, s)
}

/// `sin(π x)` for `x = whole + turns` as returned by [`reduce_product`].
#[inline]
pub fn sin_pi(phase: ReducedPhase) -> f64 {
    let s = (PI * phase.turns).sin();
    if phase.whole_is_odd {
        -s
    } else {
        s
    }
}

/// `(cos πx, sin πx)` for `x = whole + turns`.
#[inline]
pub fn cos_sin_pi(phase: ReducedPhase) -> (f64, f64) {
    let (s, c) = (PI * phase.turns).sin_cos();
    if phase.whole_is_odd {
        (-c, -s)
    } else {
        (c, s)
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<Neumaier>().value()
}

/// Fixed-shape pairwise reduction. The tree depends only on `values.len()`,
/// so the result is bit-stable regardless of how the inputs were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// CDF of Normal(0, variance) at `x`, via `erfc` (FreeBSD msun port in
/// `libm`, error within a couple of ulp; well under 1e-10 absolute).
pub fn normal_cdf(x: f64, variance: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(-x / (2.0 * variance).sqrt())
}

/// Linear-interpolation quantile (Hyndman–Fan type 7) of already sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn median(values: &[f64]) -> f64 {
    quantile_sorted(&sorted_copy(values), 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_exact_for_large_products() {
        // 0.1 * 2^40 has a large integer part; the fractional part must match
        // the exact rational value of the f64 nearest 0.1 times 2^40.
        let x = 0.1_f64;
        let j = (1u64 << 40) as f64;
        let r = reduce_product(x, j);
        // x = 3602879701896397 / 2^55, so x * 2^40 = 3602879701896397 / 2^15.
        let num: u64 = 3602879701896397;
        let rem = (num % (1 << 15)) as f64 / (1u64 << 15) as f64;
        let expected = if rem > 0.5 { rem - 1.0 } else { rem };
        assert!((r.turns - expected).abs() < 1e-16);
    }

    #[test]
    fn sin_pi_handles_parity() {
        let r = reduce_product(0.5, 3.0); // 1.5 -> whole 2, turns -0.5
        assert!((sin_pi(r) - (1.5 * PI).sin()).abs() < 1e-15);
        let r = reduce_product(0.25, 5.0); // 1.25
        assert!((sin_pi(r) - (1.25 * PI).sin()).abs() < 1e-15);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert_eq!(normal_cdf(0.0, 0.5), 0.5);
        // Phi(1.96) for the standard normal.
        assert!((normal_cdf(1.96, 1.0) - 0.975_002_104_851_780).abs() < 1e-12);
        assert!((normal_cdf(-1.0, 0.5) - 0.078_649_603_525_143_2).abs() < 1e-12);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 4.0);
    }
}
