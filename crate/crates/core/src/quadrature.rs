//! Adaptive Gauss–Kronrod integration and Gauss–Legendre rules.

// node and weight tables are quoted as published
#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::invalid(
                "tolerance",
                "tolerances must be non-negative and not both zero",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

// 21-point Kronrod extension of the 10-point Gauss rule; odd indices are Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn gk21<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        fv1[j] = f1;
        fv2[j] = f2;
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let err = rescale_error((resk - resg) * half, resabs * half.abs(), resasc * half.abs());
    if !value.is_finite() {
        return Err(Error::NumericalFailure {
            operation: "quadrature",
            achieved: f64::INFINITY,
            requested: 0.0,
        });
    }
    Ok((value, err))
}

/// Adaptive bisection on `[a, b]` for an integrand that may itself fail.
pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(
            "limits",
            "finite limits required; use integrate_semi_infinite",
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk21(&mut f, a, b)?;
    let mut intervals = vec![(a, b, v, e)];
    let mut total = v;
    let mut total_err = e;
    let mut evals = 21;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if intervals.len() >= spec.max_subdivisions {
            return Err(Error::NumericalFailure {
                operation: "quadrature",
                achieved: total_err,
                requested: tol,
            });
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, v0, e0) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo.min(hi) && mid < lo.max(hi)) {
            // cannot bisect further in floating point; accept what we have
            intervals.push((lo, hi, v0, e0));
            return Err(Error::NumericalFailure {
                operation: "quadrature",
                achieved: total_err,
                requested: tol,
            });
        }
        let (v1, e1) = gk21(&mut f, lo, mid)?;
        let (v2, e2) = gk21(&mut f, mid, hi)?;
        evals += 42;
        total += v1 + v2 - v0;
        total_err += e1 + e2 - e0;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
        if intervals.len() % 16 == 0 {
            // refresh running sums to avoid drift
            total = intervals.iter().map(|i| i.2).sum();
            total_err = intervals.iter().map(|i| i.3).sum();
        }
    }
    let value: f64 = intervals.iter().map(|i| i.2).sum();
    Ok(QuadResult {
        value,
        abs_error: total_err,
        evaluations: evals,
    })
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    try_integrate(|x| Ok(f(x)), a, b, spec)
}

/// `∫_a^∞ f`, via `x = a + c·t/(1−t)` on `t ∈ [0, 1)`. The length scale `c`
/// should be of the order of the distance over which `f` changes.
pub fn try_integrate_semi_infinite<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::invalid("scale", "length scale must be positive"));
    }
    try_integrate(
        |t| {
            let one_minus = 1.0 - t;
            let x = a + c * t / one_minus;
            if !x.is_finite() {
                return Ok(0.0);
            }
            Ok(f(x)? * c / (one_minus * one_minus))
        },
        0.0,
        1.0,
        spec,
    )
}

pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    try_integrate_semi_infinite(|x| Ok(f(x)), a, c, spec)
}

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| v * h).collect())
}
