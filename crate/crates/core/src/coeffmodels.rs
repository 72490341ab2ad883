//! Standardized i.i.d. coefficient laws and reproducible realizations.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};

/// Raw distribution family. Every family is affinely standardized to mean 0
/// and variance 1 when wrapped in a [`CoefficientModel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// ±1 with probability 1/2 each.
    Rademacher,
    /// U(-1/2, 1/2) scaled by √12.
    UniformCentered,
    GaussianStd,
    /// Exp(1) - 1.
    ExponentialCentered,
    /// t_dof scaled by √((dof-2)/dof); requires dof > 3.
    StudentT { dof: f64 },
}

/// A zero-mean, unit-variance law with finite third absolute moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "Family")]
pub struct CoefficientModel {
    family: Family,
    student: Option<StudentT<f64>>,
}

impl From<CoefficientModel> for Family {
    fn from(m: CoefficientModel) -> Self {
        m.family
    }
}

impl CoefficientModel {
    pub fn new(family: Family) -> Result<Self> {
        let student = match family {
            Family::StudentT { dof } => {
                if !dof.is_finite() || dof <= 3.0 {
                    return Err(Error::InfiniteThirdMoment(dof));
                }
                Some(StudentT::new(dof).map_err(|e| Error::InvalidParameter {
                    name: "dof",
                    reason: e.to_string(),
                })?)
            }
            _ => None,
        };
        Ok(Self { family, student })
    }

    /// Builds a model from its config/CLI name. `dof` is only read for the
    /// Student-t family.
    pub fn from_name(name: &str, dof: Option<f64>) -> Result<Self> {
        let family = match name.to_ascii_lowercase().as_str() {
            "rademacher" => Family::Rademacher,
            "uniform" | "uniform_centered" => Family::UniformCentered,
            "gaussian" | "gaussian_std" | "normal" => Family::GaussianStd,
            "exponential" | "exponential_centered" => Family::ExponentialCentered,
            "student" | "student_t" | "t" => Family::StudentT {
                dof: dof.ok_or(Error::InvalidParameter {
                    name: "dof",
                    reason: "Student-t model needs a dof parameter".into(),
                })?,
            },
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        Self::new(family)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Rademacher => "rademacher",
            Family::UniformCentered => "uniform_centered",
            Family::GaussianStd => "gaussian_std",
            Family::ExponentialCentered => "exponential_centered",
            Family::StudentT { .. } => "student_t",
        }
    }

    /// E[A^4] of the standardized law, `None` when infinite (Student-t, dof ≤ 4).
    pub fn fourth_moment(&self) -> Option<f64> {
        match self.family {
            Family::Rademacher => Some(1.0),
            Family::UniformCentered => Some(9.0 / 5.0),
            Family::GaussianStd => Some(3.0),
            Family::ExponentialCentered => Some(9.0),
            Family::StudentT { dof } if dof > 4.0 => Some(3.0 * (dof - 2.0) / (dof - 4.0)),
            Family::StudentT { .. } => None,
        }
    }

    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        match self.family {
            Family::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Family::UniformCentered => (rng.random::<f64>() - 0.5) * 12f64.sqrt(),
            Family::GaussianStd => StandardNormal.sample(rng),
            Family::ExponentialCentered => {
                let e: f64 = Exp1.sample(rng);
                e - 1.0
            }
            Family::StudentT { dof } => {
                let t = self.student.expect("validated at construction").sample(rng);
                t * ((dof - 2.0) / dof).sqrt()
            }
        }
    }
}

/// One coefficient sequence a_1..a_n: a single outcome ω of the outer
/// probability space.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    coefficients: Vec<f64>,
    model: Option<CoefficientModel>,
    seed_path: Option<(u64, u64)>,
}

impl Realization {
    /// Wraps an explicit coefficient sequence.
    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Empty("realization"));
        }
        if let Some(i) = coefficients.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            coefficients,
            model: None,
            seed_path: None,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn model(&self) -> Option<&CoefficientModel> {
        self.model.as_ref()
    }

    /// `(seed, stream_id)` the sequence was drawn from, if any.
    pub fn seed_path(&self) -> Option<(u64, u64)> {
        self.seed_path
    }

    /// The first `n` coefficients as a realization of its own.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("prefix length {n} not in 1..={}", self.len()),
            });
        }
        Ok(Self {
            coefficients: self.coefficients[..n].to_vec(),
            model: self.model,
            seed_path: self.seed_path,
        })
    }
}

/// Draws `n` i.i.d. coefficients from `model` on stream `(seed, stream_id)`.
/// The same arguments always reproduce the same sequence bit for bit, and the
/// sequence for `n` is a prefix of the sequence for any larger `n`.
pub fn sample_coefficients(
    model: &CoefficientModel,
    n: usize,
    seed: u64,
    stream_id: u64,
) -> Result<Realization> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "at least one coefficient is required".into(),
        });
    }
    let mut rng = stream_rng(seed, stream_id);
    let coefficients = (0..n).map(|_| model.sample(&mut rng)).collect();
    Ok(Realization {
        coefficients,
        model: Some(*model),
        seed_path: Some((seed, stream_id)),
    })
}
