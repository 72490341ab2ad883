use std::fmt::Write as _;
use std::path::Path;

use fourier_clt::covariance::{covariance_exact, FrequencyTuple};
use fourier_clt::mclab::run_convergence;
use fourier_clt::oracles::{oracle_covariance, oracle_fourier_sum, oracle_mmd_terms};
use fourier_clt::rng::{stream_id, Purpose};
use fourier_clt::spectral::sample_value_distribution;
use fourier_clt::{sample_coefficients, CoefficientModel};
use serde::Serialize;

use crate::config::{parse_config, ConfigError};
use crate::output::{gnuplot_script, num, resolve_out_dir, series, CsvWriter, OutDir, RunManifest};
use crate::summary::Summary;
use crate::{CliError, CovarianceArgs, ExperimentArgs, OracleCommand, ReportArgs, SimulateArgs};

#[derive(Serialize)]
struct SimulateParams<'a> {
    model: &'a CoefficientModel,
    n: usize,
    m: usize,
    seed: u64,
    stream: u64,
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let model = CoefficientModel::from_name(&args.model, args.dof)?;
    let realization = sample_coefficients(
        &model,
        args.n,
        args.seed,
        stream_id(Purpose::Coefficients, args.stream, 0),
    )?;
    let sample = sample_value_distribution(
        &realization,
        args.m,
        args.seed,
        stream_id(Purpose::Frequencies, args.stream, 0),
    )?;

    let mut csv = CsvWriter::new(&["nu", "re", "im"]);
    for (nu, v) in sample.frequencies.iter().zip(&sample.values) {
        csv.row(&[num(*nu), num(v.re), num(v.im)]);
    }
    let params = SimulateParams {
        model: &model,
        n: args.n,
        m: args.m,
        seed: args.seed,
        stream: args.stream,
    };
    let manifest = RunManifest::start("simulate", &params, args.seed);
    let mut out = OutDir::create(resolve_out_dir(args.out))?;
    out.write("values.csv", &csv.finish())?;
    println!("wrote {} values to {}", args.m, out.path().join("values.csv").display());
    out.finish(manifest)
}

#[derive(Serialize)]
struct CovarianceParams<'a> {
    nus: &'a [f64],
    n_schedule: &'a [usize],
    strict: bool,
}

pub fn covariance(args: CovarianceArgs) -> Result<(), CliError> {
    let tuple = FrequencyTuple::lenient(args.nus.clone())?;
    let strict = !args.non_strict;
    if strict {
        tuple.validate()?;
    }
    let reports = args
        .n_schedule
        .iter()
        .map(|&n| covariance_exact(&tuple, n, strict))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = String::new();
    let _ = writeln!(table, "{:>12} {:>24} {:>24} {:>24}", "n", "deviation", "offdiag_max", "bound");
    for r in &reports {
        let bound = r.deviation_bound.map(num).unwrap_or_else(|| "-".into());
        let _ = writeln!(table, "{:>12} {:>24} {:>24} {:>24}", r.n, num(r.deviation), num(r.offdiag_max), bound);
    }
    if reports.iter().any(|r| !r.convergent) {
        let _ = writeln!(table, "tuple is degenerate: C^(n) does not converge to I/2");
    }
    print!("{table}");

    let params = CovarianceParams {
        nus: &args.nus,
        n_schedule: &args.n_schedule,
        strict,
    };
    let manifest = RunManifest::start("covariance", &params, 0);
    let mut out = OutDir::create(resolve_out_dir(args.out))?;
    out.write_json("covariance.json", &reports)?;
    if args.plot {
        let points = reports.iter().map(|r| (r.n as f64, r.deviation));
        out.write("covariance_deviation.dat", &series("n", "deviation", points))?;
        out.write(
            "covariance_deviation.gp",
            &gnuplot_script(
                "deviation of C^(n) from I/2",
                "n",
                "spectral norm",
                &[("covariance_deviation.dat".into(), "deviation".into())],
            ),
        )?;
    }
    out.finish(manifest)
}

fn config_error(e: ConfigError) -> CliError {
    CliError::Usage(e.to_string().trim_end().to_string())
}

pub fn experiment(args: ExperimentArgs, workers: usize) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let config = parse_config(&text).map_err(config_error)?;
    let manifest = RunManifest::start("experiment", &config, config.master_seed);
    let report = run_convergence(&config, workers)?;

    let mut csv = CsvWriter::new(&["n", "metric", "replicate", "distance", "is_baseline"]);
    for entry in &report.entries {
        for (r, d) in entry.distances.iter().enumerate() {
            csv.row(&[entry.n.to_string(), entry.metric.clone(), r.to_string(), num(*d), "0".into()]);
        }
        if let Some(baseline) = &entry.baseline {
            for (r, d) in baseline.iter().enumerate() {
                csv.row(&[entry.n.to_string(), entry.metric.clone(), r.to_string(), num(*d), "1".into()]);
            }
        }
    }
    let summary = Summary::from_report(&report, manifest.config_hash.clone());

    let mut out = OutDir::create(resolve_out_dir(args.out))?;
    out.write("convergence.csv", &csv.finish())?;
    out.write_json("summary.json", &summary)?;
    print!("{}", render_table(&[("run".to_string(), summary)]));
    out.finish(manifest)
}

fn slug(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}

fn load_summary(path: &Path) -> Result<Summary, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Runtime(format!(
            "{} is not a valid summary (line {}, column {}): {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Side-by-side median table, one section per metric.
fn render_table(runs: &[(String, Summary)]) -> String {
    let mut metrics: Vec<String> = Vec::new();
    for (_, s) in runs {
        for block in &s.metrics {
            if !metrics.contains(&block.metric) {
                metrics.push(block.metric.clone());
            }
        }
    }
    let mut text = String::new();
    for metric in metrics {
        let _ = writeln!(text, "metric: {metric}");
        let mut header = format!("{:>10}", "n");
        for (name, s) in runs {
            let _ = write!(header, " {:>14}", format!("{name}:median"));
            if s.baseline {
                let _ = write!(header, " {:>14}", format!("{name}:baseline"));
            }
        }
        let _ = writeln!(text, "{header}");
        let mut ns: Vec<usize> = runs
            .iter()
            .flat_map(|(_, s)| s.metrics.iter().filter(|b| b.metric == metric))
            .flat_map(|b| b.n_schedule.iter().copied())
            .collect();
        ns.sort_unstable();
        ns.dedup();
        for n in ns {
            let mut line = format!("{n:>10}");
            for (_, s) in runs {
                let cell = s
                    .metrics
                    .iter()
                    .find(|b| b.metric == metric)
                    .and_then(|b| b.per_n.iter().find(|p| p.n == n));
                let fmt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
                let _ = write!(line, " {:>14}", fmt(cell.map(|c| c.median)));
                if s.baseline {
                    let _ = write!(line, " {:>14}", fmt(cell.and_then(|c| c.baseline_median)));
                }
            }
            let _ = writeln!(text, "{line}");
        }
        for (name, s) in runs {
            if let Some(b) = s.metrics.iter().find(|b| b.metric == metric) {
                let _ = writeln!(
                    text,
                    "  {name}: medians strictly decreasing = {} (inversions: {})",
                    b.medians_strictly_decreasing, b.inversions
                );
            }
        }
        text.push('\n');
    }
    text
}

pub fn report(args: ReportArgs) -> Result<(), CliError> {
    let runs = args
        .summaries
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((format!("run{}", i + 1), load_summary(p)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let table = render_table(&runs);
    print!("{table}");

    let mut out = OutDir::create(resolve_out_dir(args.out))?;
    out.write("report.txt", &table)?;
    let mut plotted = Vec::new();
    for (name, s) in &runs {
        for block in &s.metrics {
            let file = format!("{}_{}.dat", slug(&block.metric), name);
            let points = block.n_schedule.iter().zip(&block.medians).map(|(&n, &m)| (n as f64, m));
            out.write(&file, &series("n", "median_distance", points))?;
            plotted.push((file, format!("{} {}", block.metric, name)));
            if let Some(bm) = &block.baseline_medians {
                let file = format!("{}_{}_baseline.dat", slug(&block.metric), name);
                let points = block.n_schedule.iter().zip(bm).map(|(&n, &m)| (n as f64, m));
                out.write(&file, &series("n", "baseline_median", points))?;
                plotted.push((file, format!("{} {} baseline", block.metric, name)));
            }
        }
    }
    out.write(
        "report.gp",
        &gnuplot_script("median distance to G", "n", "distance", &plotted),
    )?;
    let inputs: Vec<String> = args.summaries.iter().map(|p| p.display().to_string()).collect();
    let manifest = RunManifest::start("report", &inputs, 0);
    out.finish(manifest)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    println!("{text}");
    Ok(())
}

pub fn oracle(cmd: OracleCommand) -> Result<(), CliError> {
    match cmd {
        OracleCommand::Fourier { coeffs, nu } => {
            fourier_clt::spectral::fourier_sum_checked(&coeffs, nu)?;
            print_json(&oracle_fourier_sum(&coeffs, nu))
        }
        OracleCommand::Mmd { h, x, draws, seed } => {
            if !(h > 0.0) {
                return Err(CliError::Usage("bandwidth must be positive".into()));
            }
            if draws < 2 {
                return Err(CliError::Usage("draws must be at least 2".into()));
            }
            let points = x
                .iter()
                .map(|s| {
                    let parts: Vec<&str> = s.split(',').collect();
                    match parts.as_slice() {
                        [a, b] => Ok([
                            a.trim().parse().map_err(|_| CliError::Usage(format!("bad point `{s}`")))?,
                            b.trim().parse().map_err(|_| CliError::Usage(format!("bad point `{s}`")))?,
                        ]),
                        _ => Err(CliError::Usage(format!("point `{s}` must be x,y"))),
                    }
                })
                .collect::<Result<Vec<[f64; 2]>, _>>()?;
            print_json(&oracle_mmd_terms(h, &points, draws, seed))
        }
        OracleCommand::Covariance { nus, n } => {
            FrequencyTuple::lenient(nus.clone())?;
            if n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            print_json(&oracle_covariance(&nus, n))
        }
    }
}
