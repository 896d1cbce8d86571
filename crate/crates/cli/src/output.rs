//! Result tables and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use netmimo::analytic::Provenance;
use netmimo::geometry::ClusterScheme;
use netmimo::zfbf::Direction;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Config, ExperimentSpec};
use crate::CliError;

pub const HEADER: [&str; 9] = [
    "experiment",
    "scheme",
    "direction",
    "bbar",
    "d",
    "provenance",
    "quantity",
    "value",
    "stderr",
];

/// One CSV row. `scheme` is `None` for the non-cooperative references; `d` is
/// the distance to the cluster center for location-specific disjoint rates.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub scheme: Option<ClusterScheme>,
    pub direction: Direction,
    pub bbar: f64,
    pub d: Option<f64>,
    pub provenance: Provenance,
    pub quantity: String,
    pub value: f64,
    pub stderr: Option<f64>,
}

/// `%.9g`: nine significant digits, exponent notation outside `[1e-5, 1e9)`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn scheme_label(s: Option<ClusterScheme>) -> &'static str {
    s.map(|s| s.label()).unwrap_or("none")
}

pub fn percentile_label(p: f64) -> String {
    if p.fract() == 0.0 {
        format!("p{:02}", p as u32)
    } else {
        format!("p{p}")
    }
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::io(path, e);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.as_str(),
            scheme_label(r.scheme),
            r.direction.label(),
            &sig9(r.bbar),
            &r.d.map(sig9).unwrap_or_default(),
            r.provenance.label(),
            &r.quantity,
            &sig9(r.value),
            &r.stderr.map(sig9).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| io(e.into_error()))?;
    fs::write(path, bytes).map_err(io)
}

/// Row as read back from a CSV file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub experiment: String,
    pub scheme: String,
    pub direction: String,
    pub bbar: f64,
    pub d: Option<f64>,
    pub provenance: String,
    pub quantity: String,
    pub value: f64,
    pub stderr: Option<f64>,
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Csv(format!("{}: {e}", path.display())))?;
    let headers = r
        .headers()
        .map_err(|e| CliError::Csv(format!("{}: {e}", path.display())))?;
    if headers.iter().ne(HEADER) {
        return Err(CliError::Csv(format!(
            "{}: unexpected header {:?}",
            path.display(),
            headers
        )));
    }
    r.deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .map_err(|e| CliError::Csv(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub spec: ExperimentSpec,
    pub file: PathBuf,
    pub rows: usize,
    pub sha256: String,
}

/// Run record: enough to reproduce every row of every table in the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_sha256: String,
    pub config: Config,
    pub experiments: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the canonical JSON form of a resolved configuration.
pub fn config_hash(c: &Config) -> String {
    sha256_hex(serde_json::to_string(c).expect("config serializes").as_bytes())
}

pub fn write_manifest(dir: &Path, m: &Manifest) -> Result<(), CliError> {
    let path = dir.join(MANIFEST_FILE);
    let mut f = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::to_writer_pretty(&mut f, m).map_err(|e| CliError::Json(e.to_string()))?;
    f.write_all(b"\n").map_err(|e| CliError::io(&path, e))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(2.394_123_456_78), "2.39412346");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-0.5), "-0.5");
        assert_eq!(sig9(123_456_789.0), "123456789");
        assert_eq!(sig9(1.234_567_891e9), "1.23456789e+09");
        assert_eq!(sig9(3.2e-12), "3.2e-12");
        assert_eq!(sig9(0.000_123_456_789_12), "0.000123456789");
        assert_eq!(sig9(0.0), "0");
    }

    #[test]
    fn percentile_labels() {
        assert_eq!(percentile_label(5.0), "p05");
        assert_eq!(percentile_label(50.0), "p50");
        assert_eq!(percentile_label(100.0), "p100");
        assert_eq!(percentile_label(2.5), "p2.5");
    }
}
