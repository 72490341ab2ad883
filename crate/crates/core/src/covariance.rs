//! Exact covariance of the stacked real/imaginary parts of â^n at k
//! frequencies, and its convergence to ½·I_{2k}.
//!
//! With unit-variance coefficients, entry blocks of C^(n) are averages
//!
//! ```text
//! (1/n) Σ_{j=1..n} trig(2πν_l j) · trig(2πν_l' j)
//! ```
//!
//! which reduce by product-to-sum identities to the Dirichlet means
//! `(1/n) Σ e^{2πiθj}` at θ = ν_l ± ν_l'. Those have the closed form
//! `e^{iπθ(n+1)} sin(πnθ) / (n sin(πθ))`, whose modulus is at most
//! `1/(n |sin πθ|)`; that is the rate exposed by [`deviation_bound`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numeric::{cos_sin_pi, reduce_product, sin_pi, unit_phasor, Neumaier};

/// Frequencies ν_1..ν_k. A tuple is valid when every ν is non-zero and
/// strictly inside (-1/2, 1/2), and no two share a modulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FrequencyTuple {
    nus: Vec<f64>,
}

impl FrequencyTuple {
    /// Builds a tuple and checks all validity conditions.
    pub fn new(nus: Vec<f64>) -> Result<Self> {
        let t = Self::lenient(nus)?;
        t.validate()?;
        Ok(t)
    }

    /// Builds a tuple that may be degenerate (zero, Nyquist or repeated
    /// moduli). Only emptiness and the range `[-1/2, 1/2]` are checked.
    pub fn lenient(nus: Vec<f64>) -> Result<Self> {
        if nus.is_empty() {
            return Err(Error::Empty("frequency tuple"));
        }
        if let Some(&bad) = nus.iter().find(|nu| !nu.is_finite() || nu.abs() > 0.5) {
            return Err(Error::FrequencyOutOfRange(bad));
        }
        Ok(Self { nus })
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &nu) in self.nus.iter().enumerate() {
            if nu == 0.0 || nu.abs() >= 0.5 {
                return Err(Error::DegenerateFrequency {
                    index: i + 1,
                    value: nu,
                });
            }
        }
        for i in 0..self.nus.len() {
            for j in i + 1..self.nus.len() {
                if self.nus[i].abs() == self.nus[j].abs() {
                    return Err(Error::DegeneratePair(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn nus(&self) -> &[f64] {
        &self.nus
    }

    pub fn k(&self) -> usize {
        self.nus.len()
    }

    /// The phases 2ν_i and ν_i ± ν_j (i < j) whose Dirichlet means make up
    /// the off-limit part of C^(n).
    pub fn phase_combinations(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.nus.iter().map(|nu| 2.0 * nu).collect();
        for i in 0..self.nus.len() {
            for j in i + 1..self.nus.len() {
                out.push(self.nus[i] + self.nus[j]);
                out.push(self.nus[i] - self.nus[j]);
            }
        }
        out
    }

    /// Smallest distance from any phase combination to the integers.
    pub fn min_phase_gap(&self) -> f64 {
        self.phase_combinations()
            .into_iter()
            .map(|t| (t - t.round()).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(1/n) Σ_{j=1..n} e^{2πiθj}` with θ = hi + lo given as an unevaluated sum.
fn dirichlet_mean(hi: f64, lo: f64, n: usize) -> (f64, f64) {
    let t_hi = hi - hi.round();
    let t_lo = lo;
    let t = t_hi + t_lo;
    if t == 0.0 {
        return (1.0, 0.0);
    }
    let nf = n as f64;
    let mut numer = reduce_product(t_hi, nf);
    numer.turns += t_lo * nf;
    let mut phase = reduce_product(t_hi, nf + 1.0);
    phase.turns += t_lo * (nf + 1.0);
    let ratio = sin_pi(numer) / (nf * (std::f64::consts::PI * t).sin());
    let (c, s) = cos_sin_pi(phase);
    (ratio * c, ratio * s)
}

/// Exact sum `a + b` as `(hi, lo)`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// C^(n) from closed-form Dirichlet means; O(k²) independent of n.
pub fn covariance_matrix_closed_form(tuple: &FrequencyTuple, n: usize) -> Matrix {
    let nus = tuple.nus();
    let mut m = Matrix::zeros(2 * nus.len());
    for (l, &a) in nus.iter().enumerate() {
        for (lp, &b) in nus.iter().enumerate().skip(l) {
            let (sum_hi, sum_lo) = two_sum(a, b);
            let (diff_hi, diff_lo) = two_sum(a, -b);
            let (c_plus, s_plus) = dirichlet_mean(sum_hi, sum_lo, n);
            let (c_minus, s_minus) = dirichlet_mean(diff_hi, diff_lo, n);
            let block = [
                [0.5 * (c_minus + c_plus), 0.5 * (s_plus - s_minus)],
                [0.5 * (s_plus + s_minus), 0.5 * (c_minus - c_plus)],
            ];
            for (r, row) in block.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    m[(2 * l + r, 2 * lp + c)] = v;
                    m[(2 * lp + c, 2 * l + r)] = v;
                }
            }
        }
    }
    m
}

/// C^(n) by direct O(n k²) compensated summation of trigonometric products.
pub fn covariance_matrix_direct(tuple: &FrequencyTuple, n: usize) -> Matrix {
    let nus = tuple.nus();
    let dim = 2 * nus.len();
    let mut acc = vec![Neumaier::new(); dim * dim];
    let mut features = vec![0.0; dim];
    for j in 1..=n {
        for (l, &nu) in nus.iter().enumerate() {
            let (c, s) = unit_phasor(reduce_product(nu, j as f64).turns);
            features[2 * l] = c;
            features[2 * l + 1] = s;
        }
        for r in 0..dim {
            for c in r..dim {
                acc[r * dim + c].add(features[r] * features[c]);
            }
        }
    }
    let mut m = Matrix::zeros(dim);
    for r in 0..dim {
        for c in r..dim {
            let v = acc[r * dim + c].value() / n as f64;
            m[(r, c)] = v;
            m[(c, r)] = v;
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub n: usize,
    pub nus: Vec<f64>,
    /// C^(n), 2k x 2k, ordered (Re ν_1, Im-type ν_1, Re ν_2, ...).
    pub matrix: Matrix,
    /// Spectral norm of C^(n) - ½I.
    pub deviation: f64,
    /// Largest entry magnitude of C^(n) - ½I.
    pub offdiag_max: f64,
    /// [`deviation_bound`] for valid tuples, absent for degenerate ones.
    pub deviation_bound: Option<f64>,
    pub min_eigenvalue: f64,
    /// False for degenerate tuples, whose C^(n) does not tend to ½I.
    pub convergent: bool,
}

/// C^(n) for the tuple together with its distance to the limit ½·I.
///
/// With `strict`, degenerate tuples are rejected; otherwise they are computed
/// and tagged non-convergent.
pub fn covariance_exact(tuple: &FrequencyTuple, n: usize, strict: bool) -> Result<CovarianceReport> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    let validity = tuple.validate();
    if strict {
        validity.clone()?;
    }
    let matrix = covariance_matrix_closed_form(tuple, n);
    let diff = matrix.sub(&Matrix::scaled_identity(matrix.dim(), 0.5));
    let eig = matrix.symmetric_eigenvalues();
    Ok(CovarianceReport {
        n,
        nus: tuple.nus().to_vec(),
        deviation: diff.spectral_norm_symmetric(),
        offdiag_max: diff.max_abs(),
        deviation_bound: if validity.is_ok() {
            Some(deviation_bound(tuple, n)?)
        } else {
            None
        },
        min_eigenvalue: eig[0],
        convergent: validity.is_ok(),
        matrix,
    })
}

/// lim C^(n) = ½·I_{2k} for a valid tuple.
pub fn covariance_limit(tuple: &FrequencyTuple) -> Result<Matrix> {
    tuple.validate()?;
    Ok(Matrix::scaled_identity(2 * tuple.k(), 0.5))
}

fn dirichlet_envelope(theta: f64, n: usize) -> f64 {
    1.0 / (n as f64 * (std::f64::consts::PI * (theta - theta.round())).sin().abs())
}

/// Upper bound on both the entries and the spectral norm of C^(n) - ½I.
///
/// Each entry is at most `max_θ 1/(n|sin πθ|)` over θ ∈ {2ν_i, ν_i ± ν_j}.
/// For the spectral norm, each 2x2 block of C^(n) - ½I is half a scaled
/// rotation plus half a scaled reflection, so block row sums of those
/// envelopes bound it as well; the larger of the two bounds is returned.
pub fn deviation_bound(tuple: &FrequencyTuple, n: usize) -> Result<f64> {
    tuple.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    let entrywise = tuple
        .phase_combinations()
        .into_iter()
        .map(|t| dirichlet_envelope(t, n))
        .fold(0.0, f64::max);
    let nus = tuple.nus();
    let row_sum = nus
        .iter()
        .enumerate()
        .map(|(l, &a)| {
            let off: f64 = nus
                .iter()
                .enumerate()
                .filter(|&(lp, _)| lp != l)
                .map(|(_, &b)| 0.5 * (dirichlet_envelope(a - b, n) + dirichlet_envelope(a + b, n)))
                .sum();
            0.5 * dirichlet_envelope(2.0 * a, n) + off
        })
        .fold(0.0, f64::max);
    Ok(entrywise.max(row_sum))
}
