//! Reference computations that share no code with the library: plain
//! composite Simpson sums on fixed grids and the raw Gauss series.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `∫_l^∞ (1 − [1 + s(1 + r/d0)^{−α}]^{−k}) r dr / d0²`, summed in `y = ln(1 + r/d0)`.
pub fn p_integral(s: f64, lratio: f64, alpha: f64, k: f64) -> f64 {
    let u0 = 1.0 + lratio;
    let y0 = u0.ln();
    let knee = (s.ln() / alpha).max(y0);
    // the integrand decays like e^{(2−α)y} past the knee
    let y1 = knee + 60.0 / (alpha - 2.0);
    let f = |y: f64| {
        let u = y.exp();
        let x = s * (-alpha * y).exp();
        -(-k * x.ln_1p()).exp_m1() * (u - 1.0) * u
    };
    simpson(f, y0, y1, 40_000)
}

/// `₂F₁(a, b; c; z)` by direct summation.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..100_000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() && n > 10.0 {
            break;
        }
    }
    sum
}

/// `E[ln(1 + ζ/σ²)]` for `ζ ~ Γ(k, θ)`, by quadrature against the density in `y = ln(ζ/θ)`.
pub fn gamma_log_rate(k: f64, theta: f64, sigma2: f64) -> f64 {
    gamma_log_rate_with(k, theta, sigma2, 400_000)
}

pub fn gamma_log_rate_with(k: f64, theta: f64, sigma2: f64, n: usize) -> f64 {
    let lo = -50.0 / k;
    let hi = (k + 80.0).ln() + 1.0;
    let weight = |y: f64| (k * y - y.exp()).exp();
    let num = simpson(|y| weight(y) * (theta * y.exp() / sigma2).ln_1p(), lo, hi, n);
    let den = simpson(weight, lo, hi, n);
    num / den
}

pub fn complex_gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> DVector<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}

pub fn complex_gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}
