mod oracle;

use netmimo::laplace::{LaplaceEval, LaplaceTag, Quantity};
use netmimo::special::{hyp2f1, p_integral, rate_from_laplace, Hyp2F1Args};
use netmimo::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHA: f64 = 3.76;

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn p_integral_matches_direct_quadrature_on_grid() {
    let mut worst = 0.0f64;
    for bbar in [1.0, 2.0, 6.0] {
        let shape = 1.0 / bbar;
        for &s in &logspace(-3.0, 15.0, 20) {
            for &l in &logspace(-2.0, 5.0, 20) {
                let got = p_integral(s, l, ALPHA, shape).unwrap();
                let want = oracle::p_integral(s, l, ALPHA, shape);
                let rel = (got - want).abs() / want;
                assert!(rel <= 1e-6, "s={s:e} l={l:e} B̄={bbar}: {got:e} vs {want:e}");
                worst = worst.max(rel);
            }
        }
    }
    eprintln!("worst relative error {worst:e}");
}

#[test]
fn p_integral_other_shapes() {
    // signal shape ϖ and the disjoint downlink shape K
    for shape in [2.0, 2.2, 2.5, 3.0] {
        for &s in &logspace(-2.0, 14.0, 9) {
            for l in [0.0, 0.5, 30.0, 4e3] {
                let got = p_integral(s, l, ALPHA, shape).unwrap();
                let want = oracle::p_integral(s, l, ALPHA, shape);
                assert!(
                    (got - want).abs() <= 1e-6 * want,
                    "k={shape} s={s:e} l={l}: {got:e} vs {want:e}"
                );
            }
        }
    }
}

#[test]
fn p_integral_vanishes_at_zero_argument() {
    assert_eq!(p_integral(0.0, 3.0, ALPHA, 0.5).unwrap(), 0.0);
}

#[test]
fn hyp2f1_matches_series_inside_half_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let a = rng.random_range(-3.0..3.0);
        let b = rng.random_range(-3.0..3.0);
        let c = rng.random_range(0.2..4.0);
        let z = rng.random_range(-0.4999..0.4999);
        let got = hyp2f1(Hyp2F1Args::new(a, b, c, z)).unwrap();
        let want = oracle::hyp2f1_series(a, b, c, z);
        assert!(
            (got - want).abs() <= 1e-10 * want.abs().max(1.0),
            "a={a} b={b} c={c} z={z}: {got} vs {want}"
        );
    }
}

#[test]
fn hyp2f1_elementary_cases_on_negative_axis() {
    for z in [-0.7f64, -2.0, -3.5, -40.0, -1e6] {
        // ₂F₁(1, 1; 2; z) = ln(1 − z)/(−z); the 1/z expansion is logarithmic
        // for integer b − a and is refused there
        let want = (-z).ln_1p() / -z;
        match hyp2f1(Hyp2F1Args::new(1.0, 1.0, 2.0, z)) {
            Ok(got) => assert!((got - want).abs() <= 1e-12 * want, "z={z}"),
            Err(Error::Degenerate(_)) => assert!(z < -3.0, "z={z}"),
            Err(e) => panic!("z={z}: {e}"),
        }
        // ₂F₁(a, b; b; z) = (1 − z)^{−a}
        let got = hyp2f1(Hyp2F1Args::new(0.3, 1.7, 1.7, z)).unwrap();
        let want = (1.0 - z).powf(-0.3);
        assert!((got - want).abs() <= 1e-12 * want, "z={z}");
        // ₂F₁(1/2, 1; 3/2; −x²) = arctan(x)/x
        let x = (-z).sqrt();
        let got = hyp2f1(Hyp2F1Args::new(0.5, 1.0, 1.5, z)).unwrap();
        let want = x.atan() / x;
        assert!((got - want).abs() <= 1e-12 * want, "z={z}");
    }
}

#[test]
fn hyp2f1_rejects_out_of_domain_arguments() {
    assert!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, 2.0, 0.75)).is_err());
    assert!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, -2.0, 0.1)).is_err());
}

#[test]
fn rate_identity_matches_direct_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let unit = LaplaceEval::unit(LaplaceTag::untagged(Quantity::Interference));
    for _ in 0..10 {
        let k = rng.random_range(0.3..8.0);
        let sigma2 = 10f64.powf(rng.random_range(-14.0..0.0));
        let theta = sigma2 * 10f64.powf(rng.random_range(-2.0..4.0));
        let sig = LaplaceEval::gamma(LaplaceTag::untagged(Quantity::Signal), k, theta);
        let got = rate_from_laplace(&sig, &unit, sigma2).unwrap();
        let want = oracle::gamma_log_rate(k, theta, sigma2);
        assert!(
            (got - want).abs() <= 1e-6 * want,
            "k={k} θ={theta:e} σ²={sigma2:e}: {got} vs {want}"
        );
    }
}

#[test]
fn rate_identity_with_deterministic_interference() {
    // a point mass ν = c only shifts the noise: E[ln(1 + ζ/(c + σ²))]
    let (k, theta, sigma2, c) = (2.2, 3.0, 0.5, 1.5);
    let sig = LaplaceEval::gamma(LaplaceTag::untagged(Quantity::Signal), k, theta);
    let itf = LaplaceEval::constant(LaplaceTag::untagged(Quantity::Interference), c);
    let got = rate_from_laplace(&sig, &itf, sigma2).unwrap();
    let want = oracle::gamma_log_rate(k, theta, sigma2 + c);
    assert!((got - want).abs() <= 1e-6 * want);
}

#[test]
fn rate_identity_with_gamma_interference_by_conditioning() {
    let (ks, ts, ki, ti, sigma2) = (2.0, 4.0, 0.7, 1.0, 0.3);
    let sig = LaplaceEval::gamma(LaplaceTag::untagged(Quantity::Signal), ks, ts);
    let itf = LaplaceEval::gamma(LaplaceTag::untagged(Quantity::Interference), ki, ti);
    let got = rate_from_laplace(&sig, &itf, sigma2).unwrap();
    // E over ν of the conditional expectation given ν, with ν on a Simpson grid
    let weight = |y: f64| (ki * y - y.exp()).exp();
    let (lo, hi) = (-50.0 / ki, (ki + 80.0f64).ln() + 1.0);
    let inner = |y: f64| oracle::gamma_log_rate_with(ks, ts, sigma2 + ti * y.exp(), 20_000);
    let num = oracle::simpson(|y| weight(y) * inner(y), lo, hi, 2000);
    let den = oracle::simpson(weight, lo, hi, 2000);
    let want = num / den;
    assert!((got - want).abs() <= 1e-5 * want, "{got} vs {want}");
}
