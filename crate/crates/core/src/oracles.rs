//! Slow reference computations used to certify the production paths.
//!
//! Nothing here shares code with [`crate::spectral`], [`crate::covariance`]
//! or [`crate::metrics`]: arithmetic, phase reduction, random draws and
//! matrix products are all written out separately. Single-threaded.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    ExtendedPrecisionSum,
    MonteCarloIntegration,
    ExhaustiveTrigSum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult<T> {
    pub value: T,
    /// Absolute error estimate (a standard error for Monte Carlo results).
    pub error_estimate: f64,
    pub method: OracleMethod,
}

/// Double-double number hi + lo.
#[derive(Debug, Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let v = s - a;
        Dd {
            hi: s,
            lo: (a - (s - v)) + (b - v),
        }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        Dd::two_sum(s.hi, lo)
    }

    fn mul_f64(self, x: f64) -> Dd {
        let p = Dd::two_prod(self.hi, x);
        Dd::two_sum(p.hi, p.lo + self.lo * x)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

/// e^{-2πiνj} with νj formed and reduced in double-double.
fn dd_phasor(nu: f64, j: u64) -> (f64, f64) {
    let p = Dd::two_prod(nu, j as f64);
    let whole = p.hi.round();
    let frac = Dd::two_sum(p.hi - whole, p.lo);
    // angle = 2π·frac with the cross terms folded into lo.
    let exact = Dd::two_prod(frac.hi, TWO_PI.hi);
    let angle = Dd {
        hi: exact.hi,
        lo: exact.lo + frac.hi * TWO_PI.lo + frac.lo * TWO_PI.hi,
    };
    let (s, c) = angle.hi.sin_cos();
    // First-order correction for the low part of the angle.
    let cos = c - angle.lo * s;
    let sin = s + angle.lo * c;
    (cos, -sin)
}

/// â^n(ν) by naive term-by-term double-double summation, in both forward and
/// reverse order. The error estimate combines the order discrepancy with a
/// per-term rounding allowance.
pub fn oracle_fourier_sum(coefficients: &[f64], nu: f64) -> OracleResult<(f64, f64)> {
    let n = coefficients.len();
    let sum_in = |order: &mut dyn Iterator<Item = usize>| {
        let mut re = Dd::default();
        let mut im = Dd::default();
        for idx in order {
            let (c, s) = dd_phasor(nu, idx as u64 + 1);
            re = re.add(Dd::two_prod(coefficients[idx], c));
            im = im.add(Dd::two_prod(coefficients[idx], s));
        }
        let scale = 1.0 / (n as f64).sqrt();
        (re.mul_f64(scale).to_f64(), im.mul_f64(scale).to_f64())
    };
    let forward = sum_in(&mut (0..n));
    let reverse = sum_in(&mut (0..n).rev());
    let abs_sum: f64 = coefficients.iter().map(|a| a.abs()).sum();
    let allowance = 4.0 * f64::EPSILON * abs_sum / (n.max(1) as f64).sqrt();
    let discrepancy = (forward.0 - reverse.0).abs().max((forward.1 - reverse.1).abs());
    OracleResult {
        value: forward,
        error_estimate: allowance + discrepancy,
        method: OracleMethod::ExtendedPrecisionSum,
    }
}

/// Monte Carlo estimates of T(x) = E κ(x, Y) and T₀ = E κ(Y, Y') for
/// Y, Y' ~ G and κ the Gaussian kernel of bandwidth h.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmdTermEstimates {
    pub h: f64,
    pub draws: usize,
    pub cross: Vec<OracleResult<f64>>,
    pub self_term: OracleResult<f64>,
}

fn box_muller(rng: &mut StdRng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn oracle_mmd_terms(h: f64, xs: &[[f64; 2]], draws: usize, seed: u64) -> MmdTermEstimates {
    assert!(h > 0.0 && draws >= 2);
    let mut rng = StdRng::seed_from_u64(seed);
    let sd = 0.5f64.sqrt();
    let mut ys = Vec::with_capacity(draws);
    let mut yps = Vec::with_capacity(draws);
    for _ in 0..draws {
        let (a, b) = box_muller(&mut rng);
        let (c, d) = box_muller(&mut rng);
        ys.push([sd * a, sd * b]);
        yps.push([sd * c, sd * d]);
    }
    let kernel = |p: [f64; 2], q: [f64; 2]| {
        let dx = p[0] - q[0];
        let dy = p[1] - q[1];
        (-(dx * dx + dy * dy) / (2.0 * h * h)).exp()
    };
    let estimate = |vals: Vec<f64>| {
        let (mean, se) = mean_and_stderr(&vals);
        OracleResult {
            value: mean,
            error_estimate: se,
            method: OracleMethod::MonteCarloIntegration,
        }
    };
    let self_term = estimate(ys.iter().zip(&yps).map(|(&y, &yp)| kernel(y, yp)).collect());
    let cross = xs
        .iter()
        .map(|&x| estimate(ys.iter().map(|&y| kernel(x, y)).collect()))
        .collect();
    MmdTermEstimates {
        h,
        draws,
        cross,
        self_term,
    }
}

type M2 = [[f64; 2]; 2];

fn mat_mul(a: M2, b: M2) -> M2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn rotation_power(nu: f64, j: usize) -> M2 {
    let turns = (nu * j as f64).fract();
    let angle = std::f64::consts::TAU * turns;
    [[angle.cos(), -angle.sin()], [angle.sin(), angle.cos()]]
}

/// C^(n) = (1/n) Σ_j D^j C₀ D^{-j} with the block-diagonal rotations D^j and
/// C₀ = [c cᵀ]_{ll'}, c = (1, 0)ᵀ, multiplied out literally block by block.
pub fn oracle_covariance(nus: &[f64], n: usize) -> OracleResult<Vec<Vec<f64>>> {
    let k = nus.len();
    let cct: M2 = [[1.0, 0.0], [0.0, 0.0]];
    let mut acc = vec![vec![0.0; 2 * k]; 2 * k];
    for j in 1..=n {
        let d: Vec<M2> = nus.iter().map(|&nu| rotation_power(nu, j)).collect();
        let d_inv: Vec<M2> = d.iter().map(|m| [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]).collect();
        for l in 0..k {
            for lp in 0..k {
                let block = mat_mul(mat_mul(d[l], cct), d_inv[lp]);
                for r in 0..2 {
                    for c in 0..2 {
                        acc[2 * l + r][2 * lp + c] += block[r][c];
                    }
                }
            }
        }
    }
    for row in &mut acc {
        for v in row.iter_mut() {
            *v /= n as f64;
        }
    }
    let max_angle_turns = nus.iter().fold(0.0f64, |m, nu| m.max((nu * n as f64).abs()));
    OracleResult {
        value: acc,
        error_estimate: (n as f64) * f64::EPSILON + max_angle_turns * f64::EPSILON * 8.0,
        method: OracleMethod::ExhaustiveTrigSum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_is_analytic() {
        let r = oracle_fourier_sum(&[1.0], 0.3);
        let angle = 0.6 * std::f64::consts::PI;
        assert!((r.value.0 - angle.cos()).abs() < 2e-16);
        assert!((r.value.1 + angle.sin()).abs() < 2e-16);
    }

    #[test]
    fn quarter_frequency_four_products() {
        let r = oracle_covariance(&[0.25], 4);
        let want = [[0.5, 0.0], [0.0, 0.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.value[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rotation_preserves_block_trace() {
        let r = oracle_covariance(&[0.11, -0.37, 0.2], 37);
        for l in 0..3 {
            let tr = r.value[2 * l][2 * l] + r.value[2 * l + 1][2 * l + 1];
            assert!((tr - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn flat_kernel_limit() {
        let est = oracle_mmd_terms(1e6, &[[0.4, -0.1]], 1000, 1);
        assert!((est.self_term.value - 1.0).abs() < 1e-9);
        assert!((est.cross[0].value - 1.0).abs() < 1e-9);
    }
}
