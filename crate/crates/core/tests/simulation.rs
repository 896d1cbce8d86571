use netmimo::analytic::{baseline_rate, Baseline, Provenance, RateCurve};
use netmimo::geometry::ClusterScheme;
use netmimo::montecarlo::{
    rates, run_baselines, run_disjoint, run_user_centric, sweep_with, ClusterCardinality, SweepPlan, TrialConfig,
};
use netmimo::network::NetworkParams;
use netmimo::stats::{ks_one_sample, ks_two_sample, EmpiricalStats};
use netmimo::zfbf::Direction;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(bbar: f64, n: usize, seed: u64) -> TrialConfig {
    TrialConfig::new(NetworkParams::reference(bbar).unwrap(), n, seed)
}

#[test]
fn isolated_cell_simulation_agrees_with_exact_rate() {
    // no interference and no cluster approximation: the analysis is exact here
    let c = cfg(2.0, 3000, 99);
    let points = run_baselines(&c).unwrap();
    for dir in Direction::BOTH {
        let pt = points
            .iter()
            .find(|p| p.direction == dir && p.provenance == Provenance::IsolatedCell)
            .unwrap();
        let exact = baseline_rate(&c.params, Baseline::IsolatedCell, dir).unwrap();
        assert!(
            (pt.rate.mean - exact).abs() <= 4.0 * pt.rate.std_error,
            "{dir:?}: {} ± {} vs {exact}",
            pt.rate.mean,
            pt.rate.std_error
        );
    }
}

#[test]
fn single_cell_rate_is_below_isolated_cell_rate() {
    let p = NetworkParams::reference(2.0).unwrap();
    for dir in Direction::BOTH {
        let single = baseline_rate(&p, Baseline::SingleCell, dir).unwrap();
        let isolated = baseline_rate(&p, Baseline::IsolatedCell, dir).unwrap();
        assert!(0.0 < single && single < isolated);
    }
}

#[test]
fn same_seed_reproduces_trials_exactly() {
    for card in [ClusterCardinality::PoissonB, ClusterCardinality::FixedB] {
        let c = cfg(3.0, 6, 1234).with_cardinality(card);
        assert_eq!(run_user_centric(&c).unwrap(), run_user_centric(&c).unwrap());
        assert_eq!(run_disjoint(&c).unwrap(), run_disjoint(&c).unwrap());
    }
    let a = run_user_centric(&cfg(3.0, 6, 1)).unwrap();
    let b = run_user_centric(&cfg(3.0, 6, 2)).unwrap();
    assert_ne!(a, b);
}

#[test]
fn trials_do_not_depend_on_batch_size() {
    let short = run_user_centric(&cfg(2.0, 3, 8)).unwrap();
    let long = run_user_centric(&cfg(2.0, 7, 8)).unwrap();
    assert_eq!(short[..], long[..3]);
}

#[test]
fn intra_cluster_users_are_nulled() {
    for card in [ClusterCardinality::PoissonB, ClusterCardinality::FixedB] {
        let c = cfg(4.0, 40, 5).with_cardinality(card);
        for t in run_user_centric(&c)
            .unwrap()
            .iter()
            .chain(run_disjoint(&c).unwrap().iter())
        {
            assert!(t.zf_residual <= 1e-8, "{}", t.zf_residual);
        }
    }
}

#[test]
fn fixed_cardinality_clusters_have_the_requested_size() {
    let c = cfg(3.0, 20, 6).with_cardinality(ClusterCardinality::FixedB);
    for t in run_user_centric(&c).unwrap() {
        for r in &t.records {
            assert_eq!(r.cluster_size, 3);
        }
    }
}

#[test]
fn records_are_consistent() {
    let c = cfg(2.0, 30, 7);
    let p = &c.params;
    for t in run_user_centric(&c)
        .unwrap()
        .iter()
        .chain(run_disjoint(&c).unwrap().iter())
    {
        for r in &t.records {
            let noise = p.sigma2(r.direction);
            let sinr = r.signal_power / (r.interference_power + noise);
            assert!((r.sinr - sinr).abs() <= 1e-12 * sinr.max(1e-300));
            let rate = (r.sinr / p.sinr_gap).ln_1p() / std::f64::consts::LN_2;
            assert!((r.rate - rate).abs() <= 1e-12 * rate.max(1.0));
            assert!(r.cluster_size >= 1);
            assert_eq!(r.offset.is_some(), r.scheme == Some(ClusterScheme::Disjoint));
        }
    }
}

#[test]
fn sweep_keeps_requested_series() {
    let c = cfg(1.0, 5, 3);
    let plan = SweepPlan {
        schemes: vec![ClusterScheme::UserCentric],
        cardinalities: vec![ClusterCardinality::FixedB],
        baselines: true,
    };
    let res = sweep_with(&c, &[1.0, 2.0], &plan).unwrap();
    let curves = res.curves();
    // user-centric fixedB plus two baselines, each in both directions
    assert_eq!(curves.len(), 6);
    for cv in &curves {
        assert_eq!(cv.points.len(), 2);
    }
    let single = res.find(2.0, None, Direction::Uplink, Provenance::SingleCell).unwrap();
    let single1 = res.find(1.0, None, Direction::Uplink, Provenance::SingleCell).unwrap();
    assert_eq!(single.rate, single1.rate);
    assert!(res
        .find(
            2.0,
            Some(ClusterScheme::Disjoint),
            Direction::Uplink,
            Provenance::MonteCarloFixedB
        )
        .is_none());
    let ul = rates(
        &run_user_centric(&c).unwrap(),
        Direction::Uplink,
        Provenance::MonteCarloPoissonB,
    );
    assert_eq!(ul.len(), 5);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(run_user_centric(&cfg(2.0, 0, 1)).is_err());
    let mut c = cfg(2.0, 2, 1);
    c.window_multiplier = 1.0;
    assert!(run_disjoint(&c).is_err());
    let mut c = cfg(2.0, 2, 1);
    c.params.k = 4;
    assert!(run_user_centric(&c).is_err());
}

#[test]
fn ks_accepts_matching_and_rejects_shifted_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let a: Vec<f64> = (0..3000).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = (0..3000).map(|_| rng.random::<f64>()).collect();
    assert!(!ks_two_sample(&a, &b).unwrap().rejects_at(0.001));
    assert!(!ks_one_sample(&a, |x| x.clamp(0.0, 1.0)).unwrap().rejects_at(0.001));
    let shifted: Vec<f64> = b.iter().map(|x| x + 0.1).collect();
    assert!(ks_two_sample(&a, &shifted).unwrap().rejects_at(0.001));
}

#[test]
fn ks_false_rejection_rate_is_near_nominal() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let reps = 400;
    let rejected = (0..reps)
        .filter(|_| {
            let a: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
            let b: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
            ks_two_sample(&a, &b).unwrap().rejects_at(0.05)
        })
        .count();
    // binomial(400, 0.05): mean 20, sd ≈ 4.4
    assert!((5..=38).contains(&rejected), "{rejected}");
}

proptest! {
    #[test]
    fn percentiles_are_monotone_and_bracketed(v in prop::collection::vec(-1e6f64..1e6, 1..200), p in 0.0f64..100.0, q in 0.0f64..100.0) {
        let s = EmpiricalStats::from_samples(&v).unwrap();
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let (a, b) = (s.percentile(lo).unwrap(), s.percentile(hi).unwrap());
        prop_assert!(a <= b);
        prop_assert!(s.sorted()[0] <= a && b <= s.sorted()[s.n - 1]);
        // the interpolated value is at least the order statistic below it
        let below = ((s.n - 1) as f64 * hi / 100.0).floor() + 1.0;
        prop_assert!(s.cdf(b) >= below / s.n as f64);
        prop_assert!(s.sorted()[0] <= s.mean && s.mean <= s.sorted()[s.n - 1]);
    }

    #[test]
    fn curves_only_accept_increasing_points(xs in prop::collection::vec(0.1f64..100.0, 1..20)) {
        let mut c = RateCurve::new(None, Direction::Uplink, Provenance::Analytic);
        let mut last = f64::NEG_INFINITY;
        for x in xs {
            let ok = c.push(x, 1.0).is_ok();
            prop_assert_eq!(ok, x > last);
            if ok {
                last = x;
            }
        }
        prop_assert!(c.points.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn ks_statistic_is_symmetric(a in prop::collection::vec(-10f64..10.0, 1..60), b in prop::collection::vec(-10f64..10.0, 1..60)) {
        let x = ks_two_sample(&a, &b).unwrap();
        let y = ks_two_sample(&b, &a).unwrap();
        prop_assert!((x.statistic - y.statistic).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&x.statistic) && (0.0..=1.0).contains(&x.p_value));
    }
}
