//! `summary.json` schema (version 1), written by `experiment` and read by `report`.

use fourier_clt::mclab::{ConvergenceReport, Exceedance};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub config_hash: String,
    pub model: String,
    pub m: usize,
    pub replicates: usize,
    pub master_seed: u64,
    pub baseline: bool,
    pub seed_discipline: String,
    pub metrics: Vec<MetricBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricBlock {
    pub metric: String,
    pub n_schedule: Vec<usize>,
    pub medians: Vec<f64>,
    pub baseline_medians: Option<Vec<f64>>,
    pub medians_strictly_decreasing: bool,
    pub inversions: usize,
    pub final_exceedance: Option<ExceedanceOut>,
    pub per_n: Vec<PerN>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerN {
    pub n: usize,
    pub median: f64,
    pub q90: f64,
    pub q95: f64,
    pub max: f64,
    pub baseline_median: Option<f64>,
    pub baseline_q90: Option<f64>,
    pub exceedance: Vec<ExceedanceOut>,
    pub non_gaussian_regime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceOut {
    pub epsilon: f64,
    pub fraction: f64,
    pub baseline_fraction: Option<f64>,
}

impl From<Exceedance> for ExceedanceOut {
    fn from(e: Exceedance) -> Self {
        Self {
            epsilon: e.epsilon,
            fraction: e.fraction,
            baseline_fraction: e.baseline_fraction,
        }
    }
}

impl Summary {
    pub fn from_report(report: &ConvergenceReport, config_hash: String) -> Self {
        let cfg = &report.config;
        let metrics = report
            .summaries
            .iter()
            .map(|s| MetricBlock {
                metric: s.metric.clone(),
                n_schedule: s.n_schedule.clone(),
                medians: s.medians.clone(),
                baseline_medians: s.baseline_medians.clone(),
                medians_strictly_decreasing: s.medians_strictly_decreasing,
                inversions: s.inversions,
                final_exceedance: s.final_exceedance.map(Into::into),
                per_n: report
                    .entries
                    .iter()
                    .filter(|e| e.metric == s.metric)
                    .map(|e| PerN {
                        n: e.n,
                        median: e.stats.median,
                        q90: e.stats.q90,
                        q95: e.stats.q95,
                        max: e.stats.max,
                        baseline_median: e.baseline_stats.map(|b| b.median),
                        baseline_q90: e.baseline_stats.map(|b| b.q90),
                        exceedance: e.exceedance.iter().copied().map(Into::into).collect(),
                        non_gaussian_regime: e.non_gaussian_regime,
                    })
                    .collect(),
            })
            .collect();
        Self {
            schema_version: crate::output::SCHEMA_VERSION,
            config_hash,
            model: cfg.model.name().to_string(),
            m: cfg.m,
            replicates: cfg.replicates,
            master_seed: cfg.master_seed,
            baseline: cfg.baseline,
            seed_discipline: report.seed_discipline.to_string(),
            metrics,
        }
    }
}
