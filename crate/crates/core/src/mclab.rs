//! Monte Carlo experiments on the value distribution of â^n.
//!
//! Seed discipline: for master seed `s`, replicate `r` and schedule slot `i`
//!
//! * coefficients come from stream `(s, id(Coefficients, r, 0))`; the
//!   realization used at size n is the length-n prefix, so each replicate is
//!   one fixed coefficient sequence observed at growing n;
//! * the m frequencies come from `(s, id(Frequencies, r, i))`;
//! * the baseline G sample comes from `(s, id(Baseline, r, i))`.
//!
//! All streams are derived up front, so reports do not depend on the number
//! of worker threads or on scheduling order.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffmodels::{sample_coefficients, CoefficientModel};
use crate::covariance::FrequencyTuple;
use crate::empirical::{Empirical1d, Empirical2d};
use crate::error::{Error, FieldError, Result};
use crate::linalg::Matrix;
use crate::metrics::{
    dkw_radius, dkw_sample_size, kolmogorov_1d, mmd_to_target, quadrant_sup, Bandwidth, TargetGaussian,
};
use crate::numeric::{quantile_sorted, sorted_copy, Neumaier};
use crate::rng::{stream_id, stream_rng, Purpose};
use crate::spectral::{evaluate_at, fourier_sum_periodic, uniform_frequencies};

pub const SEED_DISCIPLINE: &str = "xoshiro256++ keyed by splitmix64(seed, stream_id); \
stream_id = purpose<<56 | replicate<<24 | slot; coefficients: purpose 1, slot 0 (prefix reused across n); \
frequencies: purpose 2, slot = schedule index; baseline: purpose 3, slot = schedule index";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    KolmogorovRe,
    KolmogorovIm,
    KolmogorovMod,
    Quadrant,
    Mmd(Bandwidth),
}

impl Metric {
    pub fn label(&self) -> String {
        match self {
            Metric::KolmogorovRe => "kolmogorov_re".into(),
            Metric::KolmogorovIm => "kolmogorov_im".into(),
            Metric::KolmogorovMod => "kolmogorov_mod".into(),
            Metric::Quadrant => "quadrant".into(),
            Metric::Mmd(Bandwidth::Fixed(h)) => format!("mmd(h={h})"),
            Metric::Mmd(Bandwidth::MedianHeuristic) => "mmd(h=median)".into(),
        }
    }

    /// Distance between a value cloud and G.
    pub fn distance(&self, cloud: &Empirical2d) -> Result<f64> {
        let g = TargetGaussian;
        Ok(match self {
            Metric::KolmogorovRe => kolmogorov_1d(&cloud.marginal(0), |x| g.component_cdf(x)),
            Metric::KolmogorovIm => kolmogorov_1d(&cloud.marginal(1), |x| g.component_cdf(x)),
            Metric::KolmogorovMod => kolmogorov_1d(&cloud.moduli(), |r| g.modulus_cdf(r)),
            Metric::Quadrant => quadrant_sup(cloud, &g),
            Metric::Mmd(bw) => mmd_to_target(cloud, &g, *bw)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub model: CoefficientModel,
    pub n_schedule: Vec<usize>,
    /// Frequencies sampled per (replicate, n).
    pub m: usize,
    /// Number of coefficient realizations ω.
    pub replicates: usize,
    pub metrics: Vec<Metric>,
    pub master_seed: u64,
    /// Also measure m i.i.d. draws from G itself.
    pub baseline: bool,
    /// Thresholds for exceedance fractions P̂{d >= ε}.
    pub epsilons: Vec<f64>,
    /// Requested (ε, δ) accuracy; m must then be at least the DKW size for (ε/2, δ/3).
    pub confidence: Option<(f64, f64)>,
}

impl ExperimentConfig {
    /// DKW sample size for the sampling half of an (ε, δ) budget.
    pub fn dkw_minimum_m(epsilon: f64, delta: f64) -> Result<usize> {
        Ok(dkw_sample_size(epsilon / 2.0, delta / 3.0)? as usize)
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<FieldError>> {
        let mut errors = Vec::new();
        if self.n_schedule.is_empty() {
            errors.push(FieldError::new("n_schedule", "n_schedule must not be empty"));
        }
        if self.n_schedule.contains(&0) {
            errors.push(FieldError::new("n_schedule", "n_schedule entries must be at least 1"));
        }
        if self.n_schedule.windows(2).any(|w| w[0] >= w[1]) {
            errors.push(FieldError::new("n_schedule", "n_schedule must be strictly increasing"));
        }
        if self.m == 0 {
            errors.push(FieldError::new("m", "m must be at least 1"));
        }
        if let Some((eps, delta)) = self.confidence {
            match Self::dkw_minimum_m(eps, delta) {
                Ok(min) if self.m < min => errors.push(FieldError::new(
                    "m",
                    format!("m = {} is below the DKW minimum {min} for epsilon = {eps}, delta = {delta}", self.m),
                )),
                Ok(_) => {}
                Err(e) => errors.push(FieldError::new("target", e.to_string())),
            }
        }
        if self.replicates == 0 {
            errors.push(FieldError::new("replicates", "replicates must be at least 1"));
        }
        if self.metrics.is_empty() {
            errors.push(FieldError::new("metrics", "at least one metric is required"));
        }
        for (i, metric) in self.metrics.iter().enumerate() {
            if let Metric::Mmd(Bandwidth::Fixed(h)) = metric {
                if !(*h > 0.0 && h.is_finite()) {
                    errors.push(FieldError::new(
                        format!("metrics[{i}].bandwidth"),
                        "bandwidth must be positive",
                    ));
                }
            }
        }
        for (i, eps) in self.epsilons.iter().enumerate() {
            if !(*eps > 0.0 && eps.is_finite()) {
                errors.push(FieldError::new(format!("epsilons[{i}]"), "epsilon must be positive"));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceStats {
    pub median: f64,
    pub q90: f64,
    pub q95: f64,
    pub max: f64,
}

impl DistanceStats {
    fn of(values: &[f64]) -> Self {
        let s = sorted_copy(values);
        Self {
            median: quantile_sorted(&s, 0.5),
            q90: quantile_sorted(&s, 0.9),
            q95: quantile_sorted(&s, 0.95),
            max: s[s.len() - 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exceedance {
    pub epsilon: f64,
    pub fraction: f64,
    pub baseline_fraction: Option<f64>,
}

fn exceedance_fraction(values: &[f64], epsilon: f64) -> f64 {
    values.iter().filter(|&&d| d >= epsilon).count() as f64 / values.len() as f64
}

impl Exceedance {
    fn measure(epsilon: f64, distances: &[f64], baseline: Option<&[f64]>) -> Self {
        Self {
            epsilon,
            fraction: exceedance_fraction(distances, epsilon),
            baseline_fraction: baseline.map(|b| exceedance_fraction(b, epsilon)),
        }
    }
}

/// Distances for one (n, metric) cell of the schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleEntry {
    pub n: usize,
    pub metric: String,
    /// One distance per replicate, in replicate order.
    pub distances: Vec<f64>,
    pub baseline: Option<Vec<f64>>,
    pub stats: DistanceStats,
    pub baseline_stats: Option<DistanceStats>,
    /// Exceedance at each configured ε, then at ε = 2 × baseline median when a baseline exists.
    pub exceedance: Vec<Exceedance>,
    /// The value cloud is still clearly separated from G at this n.
    pub non_gaussian_regime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSummary {
    pub metric: String,
    pub n_schedule: Vec<usize>,
    pub medians: Vec<f64>,
    pub baseline_medians: Option<Vec<f64>>,
    pub medians_strictly_decreasing: bool,
    /// Number of consecutive schedule pairs whose median does not decrease.
    pub inversions: usize,
    /// Exceedance at the largest n for ε = 2 × baseline median.
    pub final_exceedance: Option<Exceedance>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    pub seed_discipline: &'static str,
    pub entries: Vec<ScheduleEntry>,
    pub summaries: Vec<MetricSummary>,
}

impl ConvergenceReport {
    pub fn entry(&self, n: usize, metric: &str) -> Option<&ScheduleEntry> {
        self.entries.iter().find(|e| e.n == n && e.metric == metric)
    }

    pub fn summary(&self, metric: &str) -> Option<&MetricSummary> {
        self.summaries.iter().find(|s| s.metric == metric)
    }
}

/// Per replicate: distances[slot][metric] and baseline distances likewise.
type ReplicateDistances = (Vec<Vec<f64>>, Option<Vec<Vec<f64>>>);

fn run_replicate(config: &ExperimentConfig, r: usize) -> Result<ReplicateDistances> {
    let seed = config.master_seed;
    let n_max = *config.n_schedule.last().expect("validated");
    let realization = sample_coefficients(
        &config.model,
        n_max,
        seed,
        stream_id(Purpose::Coefficients, r as u64, 0),
    )?;
    let coefficients = realization.coefficients();
    let mut distances = Vec::with_capacity(config.n_schedule.len());
    let mut baseline = config.baseline.then(Vec::new);
    for (slot, &n) in config.n_schedule.iter().enumerate() {
        let nus = uniform_frequencies(config.m, seed, stream_id(Purpose::Frequencies, r as u64, slot as u64));
        let values = evaluate_at(&coefficients[..n], &nus);
        let cloud = Empirical2d::new(values.iter().map(|v| v.to_point()).collect())?;
        distances.push(
            config
                .metrics
                .iter()
                .map(|m| m.distance(&cloud))
                .collect::<Result<Vec<_>>>()?,
        );
        if let Some(b) = baseline.as_mut() {
            let reference =
                TargetGaussian.sample(config.m, seed, stream_id(Purpose::Baseline, r as u64, slot as u64));
            b.push(
                config
                    .metrics
                    .iter()
                    .map(|m| m.distance(&reference))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    Ok((distances, baseline))
}

/// Runs the convergence experiment on a pool of `workers` threads
/// (0 = rayon default). The report is identical for every worker count.
pub fn run_convergence(config: &ExperimentConfig, workers: usize) -> Result<ConvergenceReport> {
    config.validate().map_err(Error::Config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter {
            name: "workers",
            reason: e.to_string(),
        })?;
    let per_replicate: Vec<ReplicateDistances> = pool.install(|| {
        (0..config.replicates)
            .into_par_iter()
            .map(|r| run_replicate(config, r))
            .collect::<Result<Vec<_>>>()
    })?;

    let labels: Vec<String> = config.metrics.iter().map(Metric::label).collect();
    let mut entries = Vec::new();
    for (slot, &n) in config.n_schedule.iter().enumerate() {
        for (mi, label) in labels.iter().enumerate() {
            let distances: Vec<f64> = per_replicate.iter().map(|(d, _)| d[slot][mi]).collect();
            let baseline: Option<Vec<f64>> = config.baseline.then(|| {
                per_replicate
                    .iter()
                    .map(|(_, b)| b.as_ref().expect("baseline requested")[slot][mi])
                    .collect()
            });
            let stats = DistanceStats::of(&distances);
            let baseline_stats = baseline.as_deref().map(DistanceStats::of);
            let mut exceedance: Vec<Exceedance> = config
                .epsilons
                .iter()
                .map(|&eps| Exceedance::measure(eps, &distances, baseline.as_deref()))
                .collect();
            if let Some(bs) = baseline_stats {
                exceedance.push(Exceedance::measure(2.0 * bs.median, &distances, baseline.as_deref()));
            }
            let threshold = match baseline_stats {
                Some(bs) => 2.0 * bs.median,
                None => dkw_radius(config.m as u64, 0.01),
            };
            entries.push(ScheduleEntry {
                n,
                metric: label.clone(),
                non_gaussian_regime: stats.median > threshold,
                distances,
                baseline,
                stats,
                baseline_stats,
                exceedance,
            });
        }
    }

    let summaries = labels
        .iter()
        .map(|label| {
            let cells: Vec<&ScheduleEntry> = entries.iter().filter(|e| &e.metric == label).collect();
            let medians: Vec<f64> = cells.iter().map(|e| e.stats.median).collect();
            let inversions = medians.windows(2).filter(|w| w[1] >= w[0]).count();
            let last = cells.last().expect("non-empty schedule");
            MetricSummary {
                metric: label.clone(),
                n_schedule: config.n_schedule.clone(),
                baseline_medians: config
                    .baseline
                    .then(|| cells.iter().map(|e| e.baseline_stats.expect("baseline").median).collect()),
                medians_strictly_decreasing: inversions == 0,
                inversions,
                final_exceedance: last.baseline_stats.map(|bs| {
                    Exceedance::measure(2.0 * bs.median, &last.distances, last.baseline.as_deref())
                }),
                medians,
            }
        })
        .collect();

    Ok(ConvergenceReport {
        config: config.clone(),
        seed_discipline: SEED_DISCIPLINE,
        entries,
        summaries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointReport {
    pub n: usize,
    pub replicates: usize,
    pub nus: Vec<f64>,
    /// Empirical mean of (Re â(ν_1), Im â(ν_1), Re â(ν_2), ...).
    pub mean: Vec<f64>,
    pub covariance: Matrix,
    /// Spectral norm of the empirical covariance minus ½·I.
    pub deviation: f64,
    /// Kolmogorov distance of each coordinate to Normal(0, 1/2).
    pub kolmogorov: Vec<f64>,
    /// Largest |correlation| between coordinates of different frequencies.
    pub max_cross_correlation: f64,
}

/// Joint law of (Re, Im) of â^n at the frequencies of `tuple`, estimated
/// over `replicates` independent coefficient realizations.
pub fn joint_gaussianity(
    model: &CoefficientModel,
    tuple: &FrequencyTuple,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<JointReport> {
    tuple.validate()?;
    if replicates < 100 {
        return Err(Error::InvalidParameter {
            name: "replicates",
            reason: format!("at least 100 replicates are required, got {replicates}"),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    let dim = 2 * tuple.k();
    let samples: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let realization =
                sample_coefficients(model, n, seed, stream_id(Purpose::Coefficients, r as u64, 0))?;
            Ok(tuple
                .nus()
                .iter()
                .flat_map(|&nu| {
                    let v = fourier_sum_periodic(realization.coefficients(), nu);
                    [v.re, v.im]
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let rf = replicates as f64;
    let mean: Vec<f64> = (0..dim)
        .map(|c| samples.iter().map(|s| s[c]).collect::<Neumaier>().value() / rf)
        .collect();
    let mut covariance = Matrix::zeros(dim);
    for a in 0..dim {
        for b in a..dim {
            let v = samples
                .iter()
                .map(|s| (s[a] - mean[a]) * (s[b] - mean[b]))
                .collect::<Neumaier>()
                .value()
                / (rf - 1.0);
            covariance[(a, b)] = v;
            covariance[(b, a)] = v;
        }
    }
    let deviation = covariance
        .sub(&Matrix::scaled_identity(dim, 0.5))
        .spectral_norm_symmetric();
    let kolmogorov = (0..dim)
        .map(|c| {
            let marginal = Empirical1d::new(samples.iter().map(|s| s[c]).collect())?;
            Ok(kolmogorov_1d(&marginal, |x| TargetGaussian.component_cdf(x)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_cross_correlation: f64 = 0.0;
    for a in 0..dim {
        for b in a + 1..dim {
            if a / 2 != b / 2 {
                let corr = covariance[(a, b)] / (covariance[(a, a)] * covariance[(b, b)]).sqrt();
                max_cross_correlation = max_cross_correlation.max(corr.abs());
            }
        }
    }
    Ok(JointReport {
        n,
        replicates,
        nus: tuple.nus().to_vec(),
        mean,
        covariance,
        deviation,
        kolmogorov,
        max_cross_correlation,
    })
}

const TUPLE_RETRY_BUDGET: usize = 100;

/// k i.i.d. uniform frequencies on [-1/2, 1/2), redrawn in the (probability
/// zero) event that the tuple is degenerate at working precision.
pub fn frequency_tuple_sampler(k: usize, seed: u64) -> Result<FrequencyTuple> {
    if k == 0 {
        return Err(Error::Empty("frequency tuple"));
    }
    for attempt in 0..TUPLE_RETRY_BUDGET {
        let mut rng = stream_rng(seed, stream_id(Purpose::Tuples, attempt as u64, 0));
        let nus = (0..k).map(|_| rand::Rng::random::<f64>(&mut rng) - 0.5).collect();
        if let Ok(t) = FrequencyTuple::new(nus) {
            return Ok(t);
        }
    }
    Err(Error::RetryBudgetExhausted(TUPLE_RETRY_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffmodels::Family;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            model: CoefficientModel::new(Family::Rademacher).unwrap(),
            n_schedule: vec![16, 256],
            m: 200,
            replicates: 6,
            metrics: vec![Metric::Quadrant, Metric::KolmogorovMod, Metric::Mmd(Bandwidth::Fixed(1.0))],
            master_seed: 3,
            baseline: true,
            epsilons: vec![0.1],
            confidence: None,
        }
    }

    #[test]
    fn validation_names_each_field() {
        let mut c = small_config();
        c.n_schedule = vec![64, 16];
        c.replicates = 0;
        c.metrics = vec![Metric::Mmd(Bandwidth::Fixed(0.0))];
        let errs = c.validate().unwrap_err();
        let text: Vec<String> = errs.iter().map(ToString::to_string).collect();
        assert!(text.contains(&"n_schedule: n_schedule must be strictly increasing".to_string()));
        assert!(text.contains(&"replicates: replicates must be at least 1".to_string()));
        assert!(text.contains(&"metrics[0].bandwidth: bandwidth must be positive".to_string()));
    }

    #[test]
    fn confidence_target_sets_minimum_m() {
        let mut c = small_config();
        c.confidence = Some((0.1, 0.05));
        // dkw_sample_size(0.05, 0.05/3) = ceil(ln(120) / 0.005) = 958.
        assert_eq!(ExperimentConfig::dkw_minimum_m(0.1, 0.05).unwrap(), 958);
        assert!(c.validate().is_err());
        c.m = 958;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn report_shape() {
        let c = small_config();
        let rep = run_convergence(&c, 1).unwrap();
        assert_eq!(rep.entries.len(), 2 * 3);
        for e in &rep.entries {
            assert_eq!(e.distances.len(), 6);
            assert_eq!(e.baseline.as_ref().unwrap().len(), 6);
            assert!(e.distances.iter().all(|&d| d >= 0.0));
            assert_eq!(e.exceedance.len(), 2);
        }
        assert_eq!(rep.summaries.len(), 3);
        assert_eq!(rep.summaries[0].metric, "quadrant");
        assert_eq!(rep.summaries[2].metric, "mmd(h=1)");
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let c = small_config();
        let a = run_convergence(&c, 1).unwrap();
        let b = run_convergence(&c, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_coefficient_is_flagged_non_gaussian() {
        let mut c = small_config();
        c.n_schedule = vec![1];
        c.m = 300;
        let rep = run_convergence(&c, 1).unwrap();
        let e = rep.entry(1, "quadrant").unwrap();
        assert!(e.non_gaussian_regime);
        assert!(e.stats.median >= 0.2);
        c.baseline = false;
        let rep = run_convergence(&c, 1).unwrap();
        assert!(rep.entry(1, "quadrant").unwrap().non_gaussian_regime);
    }

    #[test]
    fn tuple_sampler_is_deterministic_and_valid() {
        let a = frequency_tuple_sampler(5, 17).unwrap();
        let b = frequency_tuple_sampler(5, 17).unwrap();
        assert_eq!(a, b);
        assert!(a.is_valid());
        let one = frequency_tuple_sampler(1, 2).unwrap();
        assert!(one.nus()[0] != 0.0 && one.nus()[0].abs() <= 0.5);
        assert!(frequency_tuple_sampler(0, 1).is_err());
    }

    #[test]
    fn joint_rejects_small_runs_and_degenerate_tuples() {
        let m = CoefficientModel::new(Family::GaussianStd).unwrap();
        let t = FrequencyTuple::new(vec![0.1, 0.2]).unwrap();
        assert!(joint_gaussianity(&m, &t, 64, 99, 1).is_err());
        let bad = FrequencyTuple::lenient(vec![0.1, -0.1]).unwrap();
        assert_eq!(
            joint_gaussianity(&m, &bad, 64, 200, 1).unwrap_err(),
            Error::DegeneratePair(1, 2)
        );
    }
}
