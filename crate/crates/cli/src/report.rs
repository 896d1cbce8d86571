//! Discrepancy report over a finished run directory.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::config::ExperimentId;
use crate::output::{read_csv, read_manifest, CsvRow};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementRow {
    pub scheme: String,
    pub direction: String,
    pub bbar: f64,
    pub provenance: String,
    pub analytic: f64,
    pub simulated: f64,
    pub stderr: f64,
    /// `(analytic − simulated) / simulated`.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormRow {
    pub direction: String,
    pub bbar: f64,
    pub area: f64,
    pub line: f64,
    pub rel_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxRow {
    pub direction: String,
    pub bbar: f64,
    pub exact: f64,
    pub beyond_r: f64,
    /// `(beyond_r − exact) / exact`.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub agreement: Vec<AgreementRow>,
    pub forms: Vec<FormRow>,
    pub approximation: Vec<ApproxRow>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn max_abs_rel_error(&self) -> Option<f64> {
        self.agreement.iter().map(|r| r.rel_error.abs()).reduce(f64::max)
    }
}

type Key = (String, String, u64);

fn index<'a>(rows: &'a [CsvRow], provenance: &str, quantity: &str) -> BTreeMap<Key, &'a CsvRow> {
    rows.iter()
        .filter(|r| r.provenance == provenance && r.quantity == quantity && r.d.is_none())
        .map(|r| ((r.scheme.clone(), r.direction.clone(), r.bbar.to_bits()), r))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b) / b
    }
}

/// Compare the tables of `run_dir`; at least one rate table must be present.
pub fn build(run_dir: &Path) -> Result<Report, CliError> {
    let manifest = read_manifest(run_dir)?;
    let table = |id: ExperimentId| -> Result<Option<Vec<CsvRow>>, CliError> {
        match manifest.experiments.iter().find(|e| e.spec.id == id) {
            Some(e) => Ok(Some(read_csv(&run_dir.join(&e.file))?)),
            None => Ok(None),
        }
    };
    let mut report = Report::default();
    let mut rate_rows = Vec::new();
    for id in [ExperimentId::UlRates, ExperimentId::DlRates] {
        match table(id)? {
            Some(rows) => rate_rows.extend(rows),
            None => report.notes.push(format!("{id} not in this run")),
        }
    }
    if rate_rows.is_empty() {
        return Err(CliError::Report(format!(
            "{} has neither {} nor {}; nothing to compare",
            run_dir.display(),
            ExperimentId::UlRates,
            ExperimentId::DlRates
        )));
    }
    let analytic = index(&rate_rows, "analytic", "mean_rate");
    for prov in ["montecarlo-poissonB", "montecarlo-fixedB"] {
        for (key, sim) in index(&rate_rows, prov, "mean_rate") {
            if let Some(a) = analytic.get(&key) {
                report.agreement.push(AgreementRow {
                    scheme: sim.scheme.clone(),
                    direction: sim.direction.clone(),
                    bbar: sim.bbar,
                    provenance: prov.into(),
                    analytic: a.value,
                    simulated: sim.value,
                    stderr: sim.stderr.unwrap_or(0.0),
                    rel_error: rel(a.value, sim.value),
                });
            }
        }
    }
    let line = index(&rate_rows, "analytic", "mean_rate_line_form");
    for (key, l) in line {
        if let Some(a) = analytic.get(&key) {
            report.forms.push(FormRow {
                direction: l.direction.clone(),
                bbar: l.bbar,
                area: a.value,
                line: l.value,
                rel_diff: rel(l.value, a.value),
            });
        }
    }
    match table(ExperimentId::InterferencePower)? {
        Some(rows) => {
            let exact = index(&rows, "montecarlo-poissonB", "mean_interference_power");
            for (key, approx) in index(&rows, "montecarlo-poissonB", "mean_interference_power_beyond_r") {
                if let Some(e) = exact.get(&key) {
                    report.approximation.push(ApproxRow {
                        direction: approx.direction.clone(),
                        bbar: approx.bbar,
                        exact: e.value,
                        beyond_r: approx.value,
                        rel_error: rel(approx.value, e.value),
                    });
                }
            }
        }
        None => report.notes.push(format!(
            "{} not in this run; interferer-radius approximation not evaluated",
            ExperimentId::InterferencePower
        )),
    }
    Ok(report)
}

fn pct(x: f64) -> String {
    format!("{:+.2}%", 100.0 * x)
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Analytic vs Monte Carlo mean rate (bits/s/Hz)")?;
        writeln!(
            f,
            "  {:<13} {:<4} {:>7}  {:<20} {:>10} {:>10} {:>9} {:>9}",
            "scheme", "dir", "B̄", "simulation", "analytic", "simulated", "stderr", "rel.err"
        )?;
        for r in &self.agreement {
            writeln!(
                f,
                "  {:<13} {:<4} {:>7.3}  {:<20} {:>10.4} {:>10.4} {:>9.4} {:>9}",
                r.scheme,
                r.direction,
                r.bbar,
                r.provenance,
                r.analytic,
                r.simulated,
                r.stderr,
                pct(r.rel_error)
            )?;
        }
        if let Some(m) = self.max_abs_rel_error() {
            writeln!(f, "  max |relative error|: {:.2}%", 100.0 * m)?;
        }
        writeln!(f)?;
        writeln!(f, "User-centric signal transform: area measure vs line measure")?;
        writeln!(
            f,
            "  {:<4} {:>7} {:>10} {:>10} {:>9}",
            "dir", "B̄", "area", "line", "diff"
        )?;
        for r in &self.forms {
            writeln!(
                f,
                "  {:<4} {:>7.3} {:>10.4} {:>10.4} {:>9}",
                r.direction,
                r.bbar,
                r.area,
                r.line,
                pct(r.rel_diff)
            )?;
        }
        writeln!(f)?;
        writeln!(f, "Interferers restricted to distance > R (user-centric, mean power)")?;
        writeln!(
            f,
            "  {:<4} {:>7} {:>12} {:>12} {:>9}",
            "dir", "B̄", "all", "beyond R", "rel.err"
        )?;
        for r in &self.approximation {
            writeln!(
                f,
                "  {:<4} {:>7.3} {:>12.4e} {:>12.4e} {:>9}",
                r.direction,
                r.bbar,
                r.exact,
                r.beyond_r,
                pct(r.rel_error)
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
