//! Run configuration.
//!
//! A run is described by a TOML file; every key is optional and an empty file
//! yields the reference setup (M = 4, K = 2, 40 dBm downlink beams, 23 dBm
//! uplink users, 20 MHz, −174 dBm/Hz noise with a 9 dB noise figure, 3 dB SINR
//! gap, 128.1 + 37.6·log₁₀(d/km) path loss, BS density of a 500 m hexagonal
//! grid).
//!
//! ```toml
//! seed = 7
//! trials = 2000
//! out = "runs/demo"
//!
//! [network]
//! isd_m = 500.0            # or bs_intensity = 4.6188e-6 (BS/m²)
//! antennas = 4
//! users_per_bs = 2
//! window_multiplier = 6.0
//!
//! [link_budget]
//! dl_beam_power_dbm = 40.0
//! sinr_gap_db = 3.0
//!
//! [sweep]
//! bbar = [1, 2, 4, 6, 8, 10]   # or radius_m = [...]
//! cdf_bbar = [2, 6, 10]
//! distribution_bbar = 6
//! large_bbar = [1, 2, 5, 10, 20, 50, 100]
//! percentiles = [5, 10, 50, 90, 95]
//! disjoint_nodes = 16
//!
//! [experiments.fig6_ul_rates]
//! trials = 500
//! bbar = [2, 4, 6]
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use netmimo::network::{intensity_from_isd, LinkBudget, NetworkParams, DEFAULT_BS_INTENSITY};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExperimentId {
    #[serde(rename = "fig4_signal_power")]
    SignalPower,
    #[serde(rename = "fig5_interference_power")]
    InterferencePower,
    #[serde(rename = "fig6_ul_rates")]
    UlRates,
    #[serde(rename = "fig7_dl_rates")]
    DlRates,
    #[serde(rename = "fig8_ul_cdf")]
    UlCdf,
    #[serde(rename = "fig9_dl_cdf")]
    DlCdf,
    #[serde(rename = "fig10_ul_large_cluster")]
    UlLargeCluster,
    #[serde(rename = "fig11_dl_large_cluster")]
    DlLargeCluster,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 8] = [
        ExperimentId::SignalPower,
        ExperimentId::InterferencePower,
        ExperimentId::UlRates,
        ExperimentId::DlRates,
        ExperimentId::UlCdf,
        ExperimentId::DlCdf,
        ExperimentId::UlLargeCluster,
        ExperimentId::DlLargeCluster,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::SignalPower => "fig4_signal_power",
            ExperimentId::InterferencePower => "fig5_interference_power",
            ExperimentId::UlRates => "fig6_ul_rates",
            ExperimentId::DlRates => "fig7_dl_rates",
            ExperimentId::UlCdf => "fig8_ul_cdf",
            ExperimentId::DlCdf => "fig9_dl_cdf",
            ExperimentId::UlLargeCluster => "fig10_ul_large_cluster",
            ExperimentId::DlLargeCluster => "fig11_dl_large_cluster",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.as_str() == s)
    }

    /// Whether the experiment runs the simulator (and so uses trials and seed).
    pub fn simulates(&self) -> bool {
        !matches!(self, ExperimentId::UlLargeCluster | ExperimentId::DlLargeCluster)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    pub out: PathBuf,
    pub network: NetworkConfig,
    pub link_budget: LinkBudget,
    pub sweep: SweepConfig,
    pub experiments: BTreeMap<String, ExperimentConfig>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            trials: 2000,
            out: PathBuf::from("runs/latest"),
            network: NetworkConfig::default(),
            link_budget: LinkBudget::default(),
            sweep: SweepConfig::default(),
            experiments: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    /// BS intensity in BS/m².
    pub bs_intensity: Option<f64>,
    /// Inter-site distance of the hexagonal grid with the same density, in meters.
    pub isd_m: Option<f64>,
    pub antennas: usize,
    pub users_per_bs: usize,
    pub window_multiplier: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            bs_intensity: None,
            isd_m: None,
            antennas: 4,
            users_per_bs: 2,
            window_multiplier: netmimo::montecarlo::DEFAULT_WINDOW_MULTIPLIER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Mean cluster sizes of the rate experiments.
    pub bbar: Option<Vec<f64>>,
    /// Cluster radii in meters, an alternative to `bbar`.
    pub radius_m: Option<Vec<f64>>,
    pub cdf_bbar: Vec<f64>,
    pub distribution_bbar: f64,
    pub large_bbar: Vec<f64>,
    pub percentiles: Vec<f64>,
    pub disjoint_nodes: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            bbar: None,
            radius_m: None,
            cdf_bbar: vec![2.0, 6.0, 10.0],
            distribution_bbar: 6.0,
            large_bbar: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            percentiles: (1..=99).map(f64::from).collect(),
            disjoint_nodes: netmimo::analytic::DEFAULT_DISJOINT_NODES,
        }
    }
}

pub const DEFAULT_RATE_BBAR: [f64; 6] = [1.0, 2.0, 4.0, 6.0, 8.0, 10.0];

/// Per-experiment overrides under `[experiments.<id>]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub skip: bool,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub bbar: Option<Vec<f64>>,
}

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column} ({path}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", format_issues(.0))]
    Invalid(Vec<Issue>),
}

fn format_issues(issues: &[Issue]) -> String {
    issues.iter().map(Issue::to_string).collect::<Vec<_>>().join("\n")
}

impl ConfigError {
    pub fn issues(&self) -> &[Issue] {
        match self {
            ConfigError::Invalid(v) => v,
            ConfigError::Parse { .. } => &[],
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|c| *c != '\n').count() + 1;
    (line, column)
}

/// Parse without semantic checks; unknown keys are rejected here.
pub fn parse(text: &str) -> Result<Config, ConfigError> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let (line, column) = inner.span().map(|s| line_column(text, s.start)).unwrap_or((0, 0));
        ConfigError::Parse {
            path,
            line,
            column,
            message: inner.message().to_string(),
        }
    })
}

/// Parse and check every constraint, returning the resolved configuration.
pub fn validate(text: &str) -> Result<Config, ConfigError> {
    parse(text)?.resolved()
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

fn check_list(issues: &mut Vec<Issue>, path: &str, xs: &[f64], what: &str, ascending: bool) {
    if xs.is_empty() {
        issues.push(Issue {
            path: path.into(),
            message: "list must not be empty".into(),
        });
    }
    for (i, x) in xs.iter().enumerate() {
        if !positive(*x) {
            issues.push(Issue {
                path: format!("{path}[{i}]"),
                message: format!("{what} must be positive and finite (got {x})"),
            });
        }
    }
    if ascending && xs.windows(2).any(|w| !(w[0] < w[1])) {
        issues.push(Issue {
            path: path.into(),
            message: "values must be strictly increasing".into(),
        });
    }
}

impl Config {
    pub fn bs_intensity(&self) -> f64 {
        match (self.network.bs_intensity, self.network.isd_m) {
            (Some(l), _) => l,
            (None, Some(isd)) => intensity_from_isd(isd),
            (None, None) => DEFAULT_BS_INTENSITY,
        }
    }

    /// All constraint violations, each with the path of the offending field.
    pub fn issues(&self) -> Vec<Issue> {
        let mut out = Vec::new();
        let mut push = |path: &str, message: &str| {
            out.push(Issue {
                path: path.into(),
                message: message.into(),
            })
        };
        if self.trials == 0 {
            push("trials", "at least one trial is required");
        }
        let n = &self.network;
        match (n.bs_intensity, n.isd_m) {
            (Some(_), Some(_)) => push("network", "set either bs_intensity or isd_m, not both"),
            (Some(l), None) if !positive(l) => push("network.bs_intensity", "BS intensity must be positive"),
            (None, Some(d)) if !positive(d) => push("network.isd_m", "inter-site distance must be positive"),
            _ => {}
        }
        if n.antennas == 0 {
            push("network.antennas", "at least one antenna is required");
        }
        if n.users_per_bs == 0 {
            push("network.users_per_bs", "at least one user per BS must be scheduled");
        }
        if n.users_per_bs >= n.antennas {
            push("network.users_per_bs", "loading factor must satisfy K < M");
        }
        if !(n.window_multiplier >= 2.0) || !n.window_multiplier.is_finite() {
            push("network.window_multiplier", "window multiplier must be at least 2");
        }
        let b = &self.link_budget;
        for (name, v) in [
            ("dl_beam_power_dbm", b.dl_beam_power_dbm),
            ("ul_user_power_dbm", b.ul_user_power_dbm),
            ("noise_psd_dbm_per_hz", b.noise_psd_dbm_per_hz),
            ("noise_figure_db", b.noise_figure_db),
            ("pathloss_intercept_db", b.pathloss_intercept_db),
        ] {
            if !v.is_finite() {
                push(&format!("link_budget.{name}"), "must be finite");
            }
        }
        if !positive(b.bandwidth_mhz) {
            push("link_budget.bandwidth_mhz", "bandwidth must be positive");
        }
        if !(b.sinr_gap_db >= 0.0) || !b.sinr_gap_db.is_finite() {
            push(
                "link_budget.sinr_gap_db",
                "SINR gap must be a finite non-negative dB value",
            );
        }
        if !(b.pathloss_slope_db > 20.0) || !b.pathloss_slope_db.is_finite() {
            push(
                "link_budget.pathloss_slope_db",
                "slope must exceed 20 dB/decade (path-loss exponent > 2)",
            );
        }
        let s = &self.sweep;
        match (&s.bbar, &s.radius_m) {
            (Some(_), Some(_)) => push("sweep", "set either bbar or radius_m, not both"),
            (Some(v), None) => check_list(&mut out, "sweep.bbar", v, "mean cluster size", true),
            (None, Some(v)) => check_list(&mut out, "sweep.radius_m", v, "cluster radius", true),
            (None, None) => {}
        }
        check_list(&mut out, "sweep.cdf_bbar", &s.cdf_bbar, "mean cluster size", true);
        check_list(&mut out, "sweep.large_bbar", &s.large_bbar, "mean cluster size", true);
        if !positive(s.distribution_bbar) {
            out.push(Issue {
                path: "sweep.distribution_bbar".into(),
                message: "mean cluster size must be positive and finite".into(),
            });
        }
        for (i, p) in s.percentiles.iter().enumerate() {
            if !(0.0..=100.0).contains(p) {
                out.push(Issue {
                    path: format!("sweep.percentiles[{i}]"),
                    message: format!("percentile must lie in [0, 100] (got {p})"),
                });
            }
        }
        if s.disjoint_nodes < 4 {
            out.push(Issue {
                path: "sweep.disjoint_nodes".into(),
                message: "at least 4 quadrature nodes are required".into(),
            });
        }
        for (key, e) in &self.experiments {
            let base = format!("experiments.{key}");
            if ExperimentId::parse(key).is_none() {
                let known: Vec<&str> = ExperimentId::ALL.iter().map(ExperimentId::as_str).collect();
                out.push(Issue {
                    path: base.clone(),
                    message: format!("unknown experiment; expected one of {}", known.join(", ")),
                });
            }
            if e.trials == Some(0) {
                out.push(Issue {
                    path: format!("{base}.trials"),
                    message: "at least one trial is required".into(),
                });
            }
            if let Some(v) = &e.bbar {
                check_list(&mut out, &format!("{base}.bbar"), v, "mean cluster size", true);
            }
        }
        out
    }

    /// Check the configuration and make every derived value explicit: the
    /// density as `bs_intensity` and the rate sweep as `bbar`.
    pub fn resolved(&self) -> Result<Config, ConfigError> {
        let issues = self.issues();
        if !issues.is_empty() {
            return Err(ConfigError::Invalid(issues));
        }
        let lambda = self.bs_intensity();
        let mut c = self.clone();
        c.network.bs_intensity = Some(lambda);
        c.network.isd_m = None;
        let bbar = match (&self.sweep.bbar, &self.sweep.radius_m) {
            (Some(v), _) => v.clone(),
            (None, Some(r)) => r.iter().map(|r| lambda * std::f64::consts::PI * r * r).collect(),
            (None, None) => DEFAULT_RATE_BBAR.to_vec(),
        };
        c.sweep.bbar = Some(bbar);
        c.sweep.radius_m = None;
        // the engines reject what the checks above did not anticipate
        if let Err(e) = c.params(1.0) {
            return Err(ConfigError::Invalid(vec![Issue {
                path: "network".into(),
                message: e.to_string(),
            }]));
        }
        Ok(c)
    }

    /// Engine parameters at mean cluster size `bbar`.
    pub fn params(&self, bbar: f64) -> netmimo::Result<NetworkParams> {
        NetworkParams::from_budget(
            self.bs_intensity(),
            bbar,
            self.network.antennas,
            self.network.users_per_bs,
            &self.link_budget,
        )
    }

    /// Fully specified experiments of a resolved configuration, in figure order.
    pub fn experiment_specs(&self) -> Vec<ExperimentSpec> {
        ExperimentId::ALL
            .into_iter()
            .filter_map(|id| {
                let o = self.experiments.get(id.as_str()).cloned().unwrap_or_default();
                if o.skip {
                    return None;
                }
                let s = &self.sweep;
                let default_bbar = match id {
                    ExperimentId::SignalPower | ExperimentId::InterferencePower => vec![s.distribution_bbar],
                    ExperimentId::UlRates | ExperimentId::DlRates => {
                        s.bbar.clone().unwrap_or_else(|| DEFAULT_RATE_BBAR.to_vec())
                    }
                    ExperimentId::UlCdf | ExperimentId::DlCdf => s.cdf_bbar.clone(),
                    ExperimentId::UlLargeCluster | ExperimentId::DlLargeCluster => s.large_bbar.clone(),
                };
                Some(ExperimentSpec {
                    id,
                    bbar: o.bbar.unwrap_or(default_bbar),
                    trials: o.trials.unwrap_or(self.trials),
                    seed: o.seed.unwrap_or(self.seed),
                    window_multiplier: self.network.window_multiplier,
                    percentiles: s.percentiles.clone(),
                    disjoint_nodes: s.disjoint_nodes,
                })
            })
            .collect()
    }
}

/// Everything one experiment needs besides the network parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    pub bbar: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub window_multiplier: f64,
    pub percentiles: Vec<f64>,
    pub disjoint_nodes: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_and_column_are_one_based() {
        assert_eq!(line_column("ab\ncd", 0), (1, 1));
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(ExperimentId::parse(id.as_str()), Some(id));
        }
        assert_eq!(ExperimentId::parse("fig3"), None);
    }
}
