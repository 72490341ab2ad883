//! Experiment config files (TOML).
//!
//! ```toml
//! master_seed = 7
//! n_schedule = [64, 256, 1024]      # strictly increasing
//! m = 500                           # optional when [target] is given
//! replicates = 20
//! baseline = true                   # default true
//! epsilons = [0.05]                 # default []
//!
//! [model]
//! family = "rademacher"             # rademacher | uniform_centered | gaussian_std
//!                                   # | exponential_centered | student_t
//! dof = 5.0                         # student_t only, must exceed 3
//!
//! [[metrics]]
//! kind = "quadrant"                 # kolmogorov_re | kolmogorov_im | kolmogorov_mod
//!                                   # | quadrant | mmd
//! [[metrics]]
//! kind = "mmd"
//! bandwidth = 1.0                   # positive number or "median"; default 1.0
//!
//! [target]                          # optional (epsilon, delta) request
//! epsilon = 0.1
//! delta = 0.05
//! ```

use fourier_clt::mclab::{ExperimentConfig, Metric};
use fourier_clt::metrics::Bandwidth;
use fourier_clt::{CoefficientModel, FieldError};
use toml::{Table, Value};

const TOP_LEVEL_KEYS: &[&str] = &[
    "master_seed",
    "n_schedule",
    "m",
    "replicates",
    "baseline",
    "epsilons",
    "model",
    "metrics",
    "target",
];

#[derive(Debug)]
pub enum ConfigError {
    Syntax(String),
    Schema(Vec<FieldError>),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Syntax(msg) => write!(f, "config is not valid TOML: {msg}"),
            ConfigError::Schema(errors) => {
                writeln!(f, "config schema violations:")?;
                for e in errors {
                    writeln!(f, "  {e}")?;
                }
                Ok(())
            }
        }
    }
}

struct Reader {
    errors: Vec<FieldError>,
}

impl Reader {
    fn fail(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(FieldError::new(path, message));
    }

    fn integer(&mut self, table: &Table, key: &str, path: &str) -> Option<i64> {
        match table.get(key) {
            None => None,
            Some(Value::Integer(i)) => Some(*i),
            Some(_) => {
                self.fail(path, "expected an integer");
                None
            }
        }
    }

    fn count(&mut self, table: &Table, key: &str, path: &str) -> Option<usize> {
        let i = self.integer(table, key, path)?;
        if i < 0 {
            self.fail(path, "must be non-negative");
            return None;
        }
        Some(i as usize)
    }

    fn float(&mut self, table: &Table, key: &str, path: &str) -> Option<f64> {
        match table.get(key) {
            None => None,
            Some(Value::Float(x)) => Some(*x),
            Some(Value::Integer(i)) => Some(*i as f64),
            Some(_) => {
                self.fail(path, "expected a number");
                None
            }
        }
    }

    fn require<T>(&mut self, value: Option<T>, table: &Table, key: &str, path: &str) -> Option<T> {
        if value.is_none() && !table.contains_key(key) {
            self.fail(path, "missing required field");
        }
        value
    }

    fn unknown_keys(&mut self, table: &Table, allowed: &[&str], prefix: &str) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                self.fail(path, "unknown field");
            }
        }
    }

    fn model(&mut self, root: &Table) -> Option<CoefficientModel> {
        let Some(value) = root.get("model") else {
            self.fail("model", "missing required field");
            return None;
        };
        let Value::Table(t) = value else {
            self.fail("model", "expected a table");
            return None;
        };
        self.unknown_keys(t, &["family", "dof"], "model");
        let family = match t.get("family") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                self.fail("model.family", "expected a string");
                return None;
            }
            None => {
                self.fail("model.family", "missing required field");
                return None;
            }
        };
        let dof = self.float(t, "dof", "model.dof");
        match CoefficientModel::from_name(&family, dof) {
            Ok(m) => Some(m),
            Err(e) => {
                self.fail("model", e.to_string());
                None
            }
        }
    }

    fn metrics(&mut self, root: &Table) -> Vec<Metric> {
        let Some(value) = root.get("metrics") else {
            self.fail("metrics", "missing required field");
            return Vec::new();
        };
        let Value::Array(items) = value else {
            self.fail("metrics", "expected an array of tables");
            return Vec::new();
        };
        let mut out = Vec::new();
        for (i, item) in items.iter().enumerate() {
            let path = format!("metrics[{i}]");
            let Value::Table(t) = item else {
                self.fail(path, "expected a table");
                continue;
            };
            self.unknown_keys(t, &["kind", "bandwidth"], &path);
            let kind = match t.get("kind") {
                Some(Value::String(s)) => s.as_str(),
                _ => {
                    self.fail(format!("{path}.kind"), "expected a metric name");
                    continue;
                }
            };
            let metric = match kind {
                "kolmogorov_re" => Metric::KolmogorovRe,
                "kolmogorov_im" => Metric::KolmogorovIm,
                "kolmogorov_mod" => Metric::KolmogorovMod,
                "quadrant" => Metric::Quadrant,
                "mmd" => match t.get("bandwidth") {
                    None => Metric::Mmd(Bandwidth::default()),
                    Some(Value::String(s)) if s == "median" => Metric::Mmd(Bandwidth::MedianHeuristic),
                    Some(Value::Float(h)) => Metric::Mmd(Bandwidth::Fixed(*h)),
                    Some(Value::Integer(h)) => Metric::Mmd(Bandwidth::Fixed(*h as f64)),
                    Some(_) => {
                        self.fail(format!("{path}.bandwidth"), "expected a number or \"median\"");
                        continue;
                    }
                },
                other => {
                    self.fail(format!("{path}.kind"), format!("unknown metric `{other}`"));
                    continue;
                }
            };
            if kind != "mmd" && t.contains_key("bandwidth") {
                self.fail(format!("{path}.bandwidth"), "only the mmd metric takes a bandwidth");
            }
            out.push(metric);
        }
        out
    }

    fn counts(&mut self, root: &Table, key: &str) -> Option<Vec<usize>> {
        let Value::Array(items) = root.get(key)? else {
            self.fail(key, "expected an array of integers");
            return None;
        };
        let mut out = Vec::new();
        for (i, v) in items.iter().enumerate() {
            match v {
                Value::Integer(x) if *x >= 0 => out.push(*x as usize),
                _ => self.fail(format!("{key}[{i}]"), "expected a non-negative integer"),
            }
        }
        Some(out)
    }

    fn floats(&mut self, root: &Table, key: &str) -> Option<Vec<f64>> {
        let Value::Array(items) = root.get(key)? else {
            self.fail(key, "expected an array of numbers");
            return None;
        };
        let mut out = Vec::new();
        for (i, v) in items.iter().enumerate() {
            match v {
                Value::Float(x) => out.push(*x),
                Value::Integer(x) => out.push(*x as f64),
                _ => self.fail(format!("{key}[{i}]"), "expected a number"),
            }
        }
        Some(out)
    }

    fn target(&mut self, root: &Table) -> Option<(f64, f64)> {
        let value = root.get("target")?;
        let Value::Table(t) = value else {
            self.fail("target", "expected a table");
            return None;
        };
        self.unknown_keys(t, &["epsilon", "delta"], "target");
        let eps = self.float(t, "epsilon", "target.epsilon");
        let eps = self.require(eps, t, "epsilon", "target.epsilon");
        let delta = self.float(t, "delta", "target.delta");
        let delta = self.require(delta, t, "delta", "target.delta");
        Some((eps?, delta?))
    }
}

/// Parses and validates a config. All schema violations are reported together.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let mut r = Reader { errors: Vec::new() };
    r.unknown_keys(&root, TOP_LEVEL_KEYS, "");

    let master_seed = r.integer(&root, "master_seed", "master_seed");
    let master_seed = r.require(master_seed, &root, "master_seed", "master_seed");
    let n_schedule = r.counts(&root, "n_schedule");
    let n_schedule = r.require(n_schedule, &root, "n_schedule", "n_schedule");
    let replicates = r.count(&root, "replicates", "replicates");
    let replicates = r.require(replicates, &root, "replicates", "replicates");
    let baseline = match root.get("baseline") {
        None => Some(true),
        Some(Value::Boolean(b)) => Some(*b),
        Some(_) => {
            r.fail("baseline", "expected a boolean");
            None
        }
    };
    let epsilons = r.floats(&root, "epsilons").unwrap_or_default();
    let model = r.model(&root);
    let metrics = r.metrics(&root);
    let confidence = r.target(&root);

    let m = match (r.count(&root, "m", "m"), confidence) {
        (Some(m), _) => Some(m),
        (None, Some((eps, delta))) if !root.contains_key("m") => {
            match ExperimentConfig::dkw_minimum_m(eps, delta) {
                Ok(m) => Some(m),
                Err(e) => {
                    r.fail("target", e.to_string());
                    None
                }
            }
        }
        (None, _) => {
            if !root.contains_key("m") {
                r.fail("m", "missing required field (or give [target] epsilon/delta)");
            }
            None
        }
    };

    if !r.errors.is_empty() {
        return Err(ConfigError::Schema(r.errors));
    }
    let config = ExperimentConfig {
        model: model.expect("checked"),
        n_schedule: n_schedule.expect("checked"),
        m: m.expect("checked"),
        replicates: replicates.expect("checked"),
        metrics,
        master_seed: master_seed.expect("checked") as u64,
        baseline: baseline.expect("checked"),
        epsilons,
        confidence,
    };
    config.validate().map_err(ConfigError::Schema)?;
    Ok(config)
}
