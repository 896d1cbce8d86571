mod oracle;

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use netmimo::gamma_approx::{moment_match, signal_mix_user_centric, GammaMix, GammaParams, GammaTerm};
use netmimo::propagation::PathLossModel;
use netmimo::stats::{ks_one_sample, EmpiricalStats};
use netmimo::zfbf::zf_beamformer;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma_lr;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn moment_match_preserves_first_two_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lists: Vec<Vec<GammaParams>> = (0..1000)
        .map(|_| {
            let n = rng.random_range(1..=30);
            (0..n)
                .map(|_| {
                    let k = 10f64.powf(rng.random_range(-1.5..1.5));
                    let theta = 10f64.powf(rng.random_range(-15.0..0.0));
                    GammaParams::new(k, theta).unwrap()
                })
                .collect()
        })
        .collect();
    let start = Instant::now();
    let matched: Vec<GammaParams> = lists.iter().map(|l| moment_match(l).unwrap()).collect();
    let elapsed = start.elapsed();
    for (l, g) in lists.iter().zip(&matched) {
        let mean: f64 = l.iter().map(|p| p.shape * p.scale).sum();
        let var: f64 = l.iter().map(|p| p.shape * p.scale * p.scale).sum();
        assert!(rel(g.shape * g.scale, mean) <= 1e-12);
        assert!(rel(g.shape * g.scale * g.scale, var) <= 1e-12);
    }
    assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
}

#[test]
fn moment_match_of_one_part_is_identity() {
    let g = GammaParams::new(2.2, 3e-9).unwrap();
    let m = moment_match(&[g]).unwrap();
    assert!(rel(m.shape, g.shape) < 1e-14 && rel(m.scale, g.scale) < 1e-14);
    assert!(moment_match(&[]).is_err());
}

#[test]
fn equal_scale_parts_add_shapes_exactly() {
    let parts: Vec<GammaParams> = (1..=5)
        .map(|i| GammaParams::new(i as f64 * 0.5, 2.0).unwrap())
        .collect();
    let m = moment_match(&parts).unwrap();
    assert!(rel(m.shape, 7.5) < 1e-14 && rel(m.scale, 2.0) < 1e-14);
}

proptest! {
    #[test]
    fn mixture_matched_moments(terms in prop::collection::vec((1e-12f64..1.0, 0.05f64..10.0), 1..25)) {
        let mix = GammaMix::new(terms.iter().map(|&(coefficient, shape)| GammaTerm { coefficient, shape }).collect()).unwrap();
        let g = mix.matched().unwrap();
        prop_assert!(rel(g.mean(), mix.mean()) <= 1e-12);
        prop_assert!(rel(g.variance(), mix.variance()) <= 1e-12);
        // Gamma transforms are log-convex; the mixture's transform lies between 0 and 1
        let s = 1.0 / mix.mean();
        let l = mix.ln_laplace(s);
        prop_assert!(l < 0.0 && l.is_finite());
    }
}

/// `‖(I − UUᴴ)h‖²` with `U` the left singular vectors of `a` above a relative threshold.
fn projected_energy(h: &DVector<Complex64>, a: &DMatrix<Complex64>) -> f64 {
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.max();
    let mut p = h.clone();
    for (j, sv) in svd.singular_values.iter().enumerate() {
        if *sv > 1e-10 * smax {
            let q = u.column(j);
            let c = q.dotc(h);
            p -= q * c;
        }
    }
    p.norm_squared()
}

#[test]
fn zero_forcing_nulls_and_normalizes() {
    let (m, k) = (4usize, 2usize);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut worst_residual = 0.0f64;
    for _ in 0..1000 {
        let b = rng.random_range(1..=6);
        let n = m * b;
        let others = k * b - 1;
        // per-BS path loss spreads the rows over many orders of magnitude
        let scales: Vec<f64> = (0..b).map(|_| 10f64.powf(rng.random_range(-13.0..-6.0))).collect();
        let row_scale = |i: usize| Complex64::new(scales[i / m].sqrt(), 0.0);
        let mut h = oracle::complex_gaussian_vector(&mut rng, n);
        let mut a = oracle::complex_gaussian_matrix(&mut rng, n, others);
        for i in 0..n {
            h[i] *= row_scale(i);
            for j in 0..others {
                a[(i, j)] *= row_scale(i);
            }
        }
        let w = zf_beamformer(&h, &a).unwrap();
        assert!((w.w.norm() - 1.0).abs() <= 1e-10);
        for col in a.column_iter() {
            let r = w.w.dotc(&col.clone_owned()).norm() / col.norm();
            worst_residual = worst_residual.max(r);
        }
        let want = projected_energy(&h, &a);
        assert!(rel(w.gain(&h), want) <= 1e-8);
    }
    assert!(worst_residual <= 1e-8, "{worst_residual:e}");
    assert!(start.elapsed().as_secs_f64() < 30.0);
}

#[test]
fn zero_forcing_tolerates_repeated_users() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = oracle::complex_gaussian_vector(&mut rng, 8);
    let base = oracle::complex_gaussian_matrix(&mut rng, 8, 3);
    let a = DMatrix::from_fn(8, 6, |i, j| base[(i, j % 3)]);
    let w = zf_beamformer(&h, &a).unwrap();
    for col in base.column_iter() {
        assert!(w.w.dotc(&col.clone_owned()).norm() <= 1e-10 * col.norm());
    }
    assert!(rel(w.gain(&h), projected_energy(&h, &base)) <= 1e-10);
}

#[test]
fn zero_forcing_without_interferers_is_matched_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = oracle::complex_gaussian_vector(&mut rng, 4);
    let w = zf_beamformer(&h, &DMatrix::zeros(4, 0)).unwrap();
    assert!(rel(w.gain(&h), h.norm_squared()) < 1e-14);
}

#[test]
fn zero_forcing_rejects_mismatched_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = oracle::complex_gaussian_vector(&mut rng, 4);
    let a = oracle::complex_gaussian_matrix(&mut rng, 8, 2);
    assert!(zf_beamformer(&h, &a).is_err());
}

#[test]
fn co_located_cluster_signal_has_the_modelled_gamma_law() {
    // B equidistant BSs: the ZF gain is β times a Γ(MB − KB + 1, 1) variable,
    // which is exactly the mixture the analysis assigns to such a cluster
    let (m, k) = (4usize, 2usize);
    let model = PathLossModel::new(0.39, 3.76).unwrap();
    let r = 120.0;
    let beta = model.path_loss(r).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for b in [1usize, 2, 3, 5] {
        let n = m * b;
        let dof = (m * b - k * b + 1) as f64;
        let amp = Complex64::new(beta.sqrt(), 0.0);
        let gains: Vec<f64> = (0..4000)
            .map(|_| {
                let h = oracle::complex_gaussian_vector(&mut rng, n) * amp;
                let a = oracle::complex_gaussian_matrix(&mut rng, n, k * b - 1) * amp;
                zf_beamformer(&h, &a).unwrap().gain(&h)
            })
            .collect();
        let mix = signal_mix_user_centric(&vec![r; b], &model, m, k, b as f64).unwrap();
        assert!(rel(mix.mean(), dof * beta) < 1e-12);
        let st = EmpiricalStats::from_samples(&gains).unwrap();
        assert!((st.mean - mix.mean()).abs() <= 4.0 * st.std_error, "B={b}");
        let ks = ks_one_sample(&gains, |x| gamma_lr(dof, x / beta)).unwrap();
        assert!(!ks.rejects_at(0.001), "B={b}: {ks:?}");
    }
}
