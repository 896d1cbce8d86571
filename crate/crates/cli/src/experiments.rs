//! Figure analogues: which engines run at which points, and the rows they emit.

use std::collections::HashMap;

use netmimo::analytic::{
    baseline_rate, disjoint_rate_profile, ergodic_rate_with_form, Baseline, Provenance, SignalForm,
};
use netmimo::geometry::ClusterScheme;
use netmimo::montecarlo::{
    collect, run_baseline_trial, run_scheme, run_trials, ClusterCardinality, TrialConfig, TrialResult, UserRecord,
};
use netmimo::stats::EmpiricalStats;
use netmimo::zfbf::Direction;

use crate::config::{Config, ExperimentId, ExperimentSpec};
use crate::output::{percentile_label, Row};
use crate::CliError;

type Profile = Vec<(f64, f64, f64)>;
type SimKey = (u64, u64, usize, u64, ClusterCardinality, ClusterScheme);

/// Simulations and analytic evaluations shared between experiments of one
/// run (the uplink and downlink figures read the same trials).
#[derive(Default)]
pub struct Cache {
    sims: HashMap<SimKey, Vec<TrialResult>>,
    baselines: HashMap<(u64, usize, u64), Vec<TrialResult>>,
    rates: HashMap<(ClusterScheme, Direction, u64, SignalForm), f64>,
    profiles: HashMap<(Direction, u64, usize), Profile>,
    baseline_rates: HashMap<(Baseline, Direction), f64>,
}

struct Runner<'a> {
    config: &'a Config,
    spec: &'a ExperimentSpec,
    cache: &'a mut Cache,
    rows: Vec<Row>,
}

fn mean_with_se(samples: &[f64]) -> Result<(f64, f64), CliError> {
    let s = EmpiricalStats::from_samples(samples)?;
    Ok((s.mean, s.std_error))
}

impl<'a> Runner<'a> {
    fn trial_config(&self, bbar: f64, card: ClusterCardinality) -> Result<TrialConfig, CliError> {
        let mut c =
            TrialConfig::new(self.config.params(bbar)?, self.spec.trials, self.spec.seed).with_cardinality(card);
        c.window_multiplier = self.spec.window_multiplier;
        Ok(c)
    }

    fn simulate(
        &mut self,
        bbar: f64,
        card: ClusterCardinality,
        scheme: ClusterScheme,
    ) -> Result<&[TrialResult], CliError> {
        let key = (
            bbar.to_bits(),
            self.spec.seed,
            self.spec.trials,
            self.spec.window_multiplier.to_bits(),
            card,
            scheme,
        );
        if !self.cache.sims.contains_key(&key) {
            let cfg = self.trial_config(bbar, card)?;
            let results = run_scheme(&cfg, scheme)?;
            self.cache.sims.insert(key, results);
        }
        Ok(&self.cache.sims[&key])
    }

    fn simulate_baselines(&mut self) -> Result<&[TrialResult], CliError> {
        let key = (self.spec.seed, self.spec.trials, self.spec.window_multiplier.to_bits());
        if !self.cache.baselines.contains_key(&key) {
            // the references do not depend on the cluster size
            let cfg = self.trial_config(1.0, ClusterCardinality::PoissonB)?;
            let results = run_trials(cfg.n_trials, |i| run_baseline_trial(&cfg, i))?;
            self.cache.baselines.insert(key, results);
        }
        Ok(&self.cache.baselines[&key])
    }

    fn analytic_rate(
        &mut self,
        scheme: ClusterScheme,
        dir: Direction,
        bbar: f64,
        form: SignalForm,
    ) -> Result<f64, CliError> {
        let key = (scheme, dir, bbar.to_bits(), form);
        if let Some(v) = self.cache.rates.get(&key) {
            return Ok(*v);
        }
        let p = self.config.params(bbar)?;
        let v = match scheme {
            ClusterScheme::UserCentric => ergodic_rate_with_form(&p, scheme, dir, None, form)?,
            ClusterScheme::Disjoint => self.profile(dir, bbar)?.iter().map(|(_, w, c)| w * c).sum(),
        };
        self.cache.rates.insert(key, v);
        Ok(v)
    }

    fn profile(&mut self, dir: Direction, bbar: f64) -> Result<Profile, CliError> {
        let key = (dir, bbar.to_bits(), self.spec.disjoint_nodes);
        if !self.cache.profiles.contains_key(&key) {
            let p = self.config.params(bbar)?;
            let prof = disjoint_rate_profile(&p, dir, self.spec.disjoint_nodes)?;
            self.cache.profiles.insert(key, prof);
        }
        Ok(self.cache.profiles[&key].clone())
    }

    fn analytic_baseline(&mut self, b: Baseline, dir: Direction) -> Result<f64, CliError> {
        if let Some(v) = self.cache.baseline_rates.get(&(b, dir)) {
            return Ok(*v);
        }
        let v = baseline_rate(&self.config.params(1.0)?, b, dir)?;
        self.cache.baseline_rates.insert((b, dir), v);
        Ok(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        scheme: Option<ClusterScheme>,
        direction: Direction,
        bbar: f64,
        d: Option<f64>,
        provenance: Provenance,
        quantity: impl Into<String>,
        value: f64,
        stderr: Option<f64>,
    ) {
        self.rows.push(Row {
            experiment: self.spec.id.as_str().to_string(),
            scheme,
            direction,
            bbar,
            d,
            provenance,
            quantity: quantity.into(),
            value,
            stderr,
        });
    }

    /// Mean (with standard error) and the configured percentiles of one field.
    fn distribution(
        &mut self,
        samples: &[f64],
        scheme: Option<ClusterScheme>,
        dir: Direction,
        bbar: f64,
        prov: Provenance,
        name: &str,
    ) -> Result<(), CliError> {
        let st = EmpiricalStats::from_samples(samples)?;
        self.push(
            scheme,
            dir,
            bbar,
            None,
            prov,
            format!("mean_{name}"),
            st.mean,
            Some(st.std_error),
        );
        for p in self.spec.percentiles.clone() {
            self.push(
                scheme,
                dir,
                bbar,
                None,
                prov,
                format!("{name}_{}", percentile_label(p)),
                st.percentile(p)?,
                None,
            );
        }
        Ok(())
    }

    fn field(
        &mut self,
        bbar: f64,
        scheme: ClusterScheme,
        dir: Direction,
        f: impl Fn(&UserRecord) -> f64,
    ) -> Result<Vec<f64>, CliError> {
        let card = ClusterCardinality::PoissonB;
        let results = self.simulate(bbar, card, scheme)?;
        Ok(collect(results, dir, card.provenance(), f))
    }

    fn rates(&mut self, dir: Direction) -> Result<(), CliError> {
        let single = {
            let base = self.simulate_baselines()?;
            collect(base, dir, Provenance::SingleCell, |r| r.rate)
        };
        let (single_mean, single_se) = mean_with_se(&single)?;
        for bbar in self.spec.bbar.clone() {
            for form in [SignalForm::Area, SignalForm::Line] {
                let v = self.analytic_rate(ClusterScheme::UserCentric, dir, bbar, form)?;
                let q = match form {
                    SignalForm::Area => "mean_rate",
                    SignalForm::Line => "mean_rate_line_form",
                };
                self.push(
                    Some(ClusterScheme::UserCentric),
                    dir,
                    bbar,
                    None,
                    Provenance::Analytic,
                    q,
                    v,
                    None,
                );
            }
            let v = self.analytic_rate(ClusterScheme::Disjoint, dir, bbar, SignalForm::Area)?;
            self.push(
                Some(ClusterScheme::Disjoint),
                dir,
                bbar,
                None,
                Provenance::Analytic,
                "mean_rate",
                v,
                None,
            );
            for (d, _, c) in self.profile(dir, bbar)? {
                self.push(
                    Some(ClusterScheme::Disjoint),
                    dir,
                    bbar,
                    Some(d),
                    Provenance::Analytic,
                    "rate_at_offset",
                    c,
                    None,
                );
            }
            for card in [ClusterCardinality::FixedB, ClusterCardinality::PoissonB] {
                for scheme in ClusterScheme::BOTH {
                    let r = collect(self.simulate(bbar, card, scheme)?, dir, card.provenance(), |r| r.rate);
                    let (m, se) = mean_with_se(&r)?;
                    self.push(
                        Some(scheme),
                        dir,
                        bbar,
                        None,
                        card.provenance(),
                        "mean_rate",
                        m,
                        Some(se),
                    );
                }
            }
            self.push(
                None,
                dir,
                bbar,
                None,
                Provenance::SingleCell,
                "mean_rate",
                single_mean,
                Some(single_se),
            );
        }
        Ok(())
    }

    fn cdf(&mut self, dir: Direction) -> Result<(), CliError> {
        let prov = ClusterCardinality::PoissonB.provenance();
        for bbar in self.spec.bbar.clone() {
            for scheme in ClusterScheme::BOTH {
                let r = self.field(bbar, scheme, dir, |r| r.rate)?;
                self.distribution(&r, Some(scheme), dir, bbar, prov, "rate")?;
            }
        }
        Ok(())
    }

    fn powers(&mut self, interference: bool) -> Result<(), CliError> {
        let card = ClusterCardinality::PoissonB;
        let prov = card.provenance();
        for bbar in self.spec.bbar.clone() {
            for dir in Direction::BOTH {
                for scheme in ClusterScheme::BOTH {
                    if interference {
                        let v = self.field(bbar, scheme, dir, |r| r.interference_power)?;
                        self.distribution(&v, Some(scheme), dir, bbar, prov, "interference_power")?;
                    } else {
                        let v = self.field(bbar, scheme, dir, |r| r.signal_power)?;
                        self.distribution(&v, Some(scheme), dir, bbar, prov, "signal_power")?;
                    }
                }
                if interference {
                    // interferers restricted to those farther than R, as the analysis assumes
                    let results = self.simulate(bbar, card, ClusterScheme::UserCentric)?;
                    let approx: Vec<f64> = results
                        .iter()
                        .filter_map(|t| match dir {
                            Direction::Uplink => t.ul_interference_radius_approx,
                            Direction::Downlink => t.dl_interference_radius_approx,
                        })
                        .collect();
                    self.distribution(
                        &approx,
                        Some(ClusterScheme::UserCentric),
                        dir,
                        bbar,
                        prov,
                        "interference_power_beyond_r",
                    )?;
                }
            }
        }
        Ok(())
    }

    fn large_cluster(&mut self, dir: Direction) -> Result<(), CliError> {
        let single = self.analytic_baseline(Baseline::SingleCell, dir)?;
        let isolated = self.analytic_baseline(Baseline::IsolatedCell, dir)?;
        for bbar in self.spec.bbar.clone() {
            for scheme in ClusterScheme::BOTH {
                let v = self.analytic_rate(scheme, dir, bbar, SignalForm::Area)?;
                self.push(
                    Some(scheme),
                    dir,
                    bbar,
                    None,
                    Provenance::Analytic,
                    "mean_rate",
                    v,
                    None,
                );
            }
            self.push(None, dir, bbar, None, Provenance::SingleCell, "mean_rate", single, None);
            self.push(
                None,
                dir,
                bbar,
                None,
                Provenance::IsolatedCell,
                "mean_rate",
                isolated,
                None,
            );
        }
        Ok(())
    }
}

/// Rows of one experiment, reusing and filling `cache`.
pub fn run_experiment(config: &Config, spec: &ExperimentSpec, cache: &mut Cache) -> Result<Vec<Row>, CliError> {
    let mut r = Runner {
        config,
        spec,
        cache,
        rows: Vec::new(),
    };
    match spec.id {
        ExperimentId::SignalPower => r.powers(false)?,
        ExperimentId::InterferencePower => r.powers(true)?,
        ExperimentId::UlRates => r.rates(Direction::Uplink)?,
        ExperimentId::DlRates => r.rates(Direction::Downlink)?,
        ExperimentId::UlCdf => r.cdf(Direction::Uplink)?,
        ExperimentId::DlCdf => r.cdf(Direction::Downlink)?,
        ExperimentId::UlLargeCluster => r.large_cluster(Direction::Uplink)?,
        ExperimentId::DlLargeCluster => r.large_cluster(Direction::Downlink)?,
    }
    Ok(r.rows)
}
