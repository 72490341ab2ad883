//! File emission: CSV with 17 significant digits, JSON, run manifests and
//! gnuplot-ready series files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "FCLT_OUT_DIR";

/// Round-trippable decimal with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("fclt-out"))
}

pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&root)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", root.display())))?;
        Ok(Self {
            root,
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.root.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Io(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Writes `manifest.json` listing everything written so far.
    pub fn finish(mut self, mut manifest: RunManifest) -> Result<(), CliError> {
        manifest.outputs = std::mem::take(&mut self.written);
        manifest.finished_unix = now_unix();
        self.write_json("manifest.json", &manifest)
    }
}

pub struct CsvWriter {
    text: String,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Seconds since the epoch; `SOURCE_DATE_EPOCH` overrides the clock so runs
/// can be byte-reproducible.
pub fn now_unix() -> u64 {
    if let Some(fixed) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return fixed;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    /// SHA-256 of the canonical JSON form of the run parameters.
    pub config_hash: String,
    pub master_seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn start<T: Serialize>(command: &'static str, canonical: &T, master_seed: u64) -> Self {
        let bytes = serde_json::to_vec(canonical).expect("config serializes");
        Self {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            config_hash: sha256_hex(&bytes),
            master_seed,
            started_unix: now_unix(),
            finished_unix: 0,
            outputs: Vec::new(),
        }
    }
}

/// Two-column series file: `# x y` header then one pair per line.
pub fn series(x_label: &str, y_label: &str, points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut text = format!("# {x_label} {y_label}\n");
    for (x, y) in points {
        let _ = writeln!(text, "{} {}", num(x), num(y));
    }
    text
}

/// A gnuplot script plotting the given series files on log-log axes.
pub fn gnuplot_script(title: &str, x_label: &str, y_label: &str, files: &[(String, String)]) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "set title \"{title}\"");
    let _ = writeln!(text, "set logscale xy");
    let _ = writeln!(text, "set xlabel \"{x_label}\"");
    let _ = writeln!(text, "set ylabel \"{y_label}\"");
    let plots: Vec<String> = files
        .iter()
        .map(|(file, label)| format!("\"{file}\" using 1:2 with linespoints title \"{label}\""))
        .collect();
    let _ = writeln!(text, "plot {}", plots.join(", \\\n     "));
    text
}
