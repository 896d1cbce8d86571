//! Gauss hypergeometric function, chord lengths, the radial PPP tail integral
//! and the `ln(1+x)` integral identity that turns Laplace transforms into rates.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::laplace::LaplaceEval;
use crate::quadrature::{try_integrate, try_integrate_semi_infinite, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }
}

const SERIES_EPS: f64 = 1e-17;
const MAX_TERMS: usize = 20_000;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// `Σ_{n≥1}` of the Gauss series, i.e. `₂F₁ − 1`.
fn series_excess(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (term.abs() <= SERIES_EPS * (1.0 + sum).abs() && nf > (a.abs() + b.abs()).min(1e4)) {
            return Ok(sum);
        }
    }
    Err(Error::NumericalFailure {
        operation: "hyp2f1 series",
        achieved: term.abs(),
        requested: SERIES_EPS,
    })
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real `z ≤ 1/2`.
///
/// `|z| ≤ 1/2`: direct series. `−3 ≤ z < −1/2`: Pfaff transformation
/// `(1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))`, argument in `[1/3, 3/4]`.
/// `z < −3`: expansion in `1/z`; when `b − a` is an integer that expansion is
/// singular and [`Error::Degenerate`] is returned unless `c = a + 1`, where the
/// first branch terminates and the formula is regular.
pub fn hyp2f1(args: Hyp2F1Args) -> Result<f64> {
    hyp2f1_excess(args).map(|e| 1.0 + e)
}

/// `₂F₁(a, b; c; z) − 1`, accurate also when the function is close to 1.
pub fn hyp2f1_excess(args: Hyp2F1Args) -> Result<f64> {
    let Hyp2F1Args { a, b, c, z } = args;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || z.is_nan() {
        return Err(Error::invalid("hyp2f1", "parameters must be finite"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::invalid("c", "c must not be a non-positive integer"));
    }
    if z > 0.5 {
        return Err(Error::invalid("z", "argument must satisfy z <= 1/2"));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    if z >= -0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series_excess(a, b, c, z);
    }
    if z >= -3.0 {
        let w = z / (z - 1.0);
        let f = (1.0 - z).powf(-a) * (1.0 + series_excess(a, c - b, c, w)?);
        return Ok(f - 1.0);
    }
    let mz = -z;
    let zi = 1.0 / z;
    if ((c - a) - 1.0).abs() <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
        // ₂F₁(a, b; a+1; z)
        if is_nonpositive_integer(b - a) {
            return Err(Error::Degenerate(format!("b - a = {} with c = a + 1", b - a)));
        }
        let lead = gamma(1.0 + a) * gamma(b - a) * rgamma(b) * mz.powf(-a);
        let tail = a / (a - b) * mz.powf(-b) * (1.0 + series_excess(b, b - a, b - a + 1.0, zi)?);
        return Ok(lead + tail - 1.0);
    }
    if is_integer(b - a) {
        return Err(Error::Degenerate(format!(
            "b - a = {} is an integer in the 1/z expansion (a={a}, b={b}, c={c}, z={z})",
            b - a
        )));
    }
    let g_c = gamma(c);
    let t1 = g_c
        * gamma(b - a)
        * rgamma(b)
        * rgamma(c - a)
        * mz.powf(-a)
        * (1.0 + series_excess(a, a - c + 1.0, a - b + 1.0, zi)?);
    let t2 = g_c
        * gamma(a - b)
        * rgamma(a)
        * rgamma(c - b)
        * mz.powf(-b)
        * (1.0 + series_excess(b, b - c + 1.0, b - a + 1.0, zi)?);
    let f = t1 + t2;
    if !f.is_finite() {
        return Err(Error::Degenerate(format!(
            "1/z expansion overflowed (a={a}, b={b}, c={c}, z={z})"
        )));
    }
    Ok(f - 1.0)
}

/// Distance from a point at radius `r` inside a disk of radius `big_r` to the
/// disk boundary along direction `theta`, measured so that `theta = π/2` points
/// radially outward.
pub fn chord_length(r: f64, theta: f64, big_r: f64) -> Result<f64> {
    if !(big_r > 0.0) {
        return Err(Error::invalid("R", "disk radius must be positive"));
    }
    if !(r >= 0.0) || r > big_r {
        return Err(Error::invalid("r", "point must lie inside the disk (0 <= r <= R)"));
    }
    Ok(chord_unchecked(r, theta, big_r))
}

#[inline]
pub(crate) fn chord_unchecked(r: f64, theta: f64, big_r: f64) -> f64 {
    let c = theta.cos();
    let disc = (big_r - r * c) * (big_r + r * c);
    disc.max(0.0).sqrt() + r * theta.sin()
}

/// `1 − (1 + x)^{−k}` without cancellation for small `x`.
#[inline]
pub(crate) fn one_minus_pow(x: f64, k: f64) -> f64 {
    -(-k * x.ln_1p()).exp_m1()
}

fn validate_p_args(s: f64, lratio: f64, alpha: f64, shape: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::invalid("s", "must be finite and non-negative"));
    }
    if !(lratio >= 0.0) {
        return Err(Error::invalid("lratio", "must be non-negative"));
    }
    if !(alpha > 2.0) {
        return Err(Error::invalid("alpha", "path-loss exponent must exceed 2"));
    }
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(Error::invalid("shape", "Gamma shape must be positive"));
    }
    Ok(())
}

/// Radial tail of the PPP functional, in units of `d0²`:
///
/// `P(s, l/d0) = ∫_l^∞ (1 − [1 + s(1 + r/d0)^{−α}]^{−k}) r dr / d0²`.
///
/// With `u0 = 1 + l/d0` and `z = −s·u0^{−α}` this equals
/// `(u0²/2)[₂F₁(−2/α, k; 1−2/α; z) − 1] − u0[₂F₁(−1/α, k; 1−1/α; z) − 1]`.
/// `shape` is `k` (`1/B̄` for the shared interference, `K` for disjoint downlink,
/// `ϖ` for the signal).
pub fn p_integral(s: f64, lratio: f64, alpha: f64, shape: f64) -> Result<f64> {
    validate_p_args(s, lratio, alpha, shape)?;
    if s == 0.0 || lratio.is_infinite() {
        return Ok(0.0);
    }
    match p_integral_closed(s, lratio, alpha, shape) {
        Err(Error::Degenerate(_)) => p_integral_quadrature(s, lratio, alpha, shape, 1e-10),
        other => other,
    }
}

fn p_integral_closed(s: f64, lratio: f64, alpha: f64, k: f64) -> Result<f64> {
    let u0 = 1.0 + lratio;
    let z = -s * u0.powf(-alpha);
    let a2 = -2.0 / alpha;
    let a1 = -1.0 / alpha;
    let e2 = hyp2f1_excess(Hyp2F1Args::new(a2, k, 1.0 + a2, z))?;
    let e1 = hyp2f1_excess(Hyp2F1Args::new(a1, k, 1.0 + a1, z))?;
    let v = 0.5 * u0 * u0 * e2 - u0 * e1;
    Ok(v.max(0.0))
}

/// The defining radial integral of [`p_integral`], evaluated by adaptive quadrature.
pub fn p_integral_quadrature(s: f64, lratio: f64, alpha: f64, shape: f64, rel_tol: f64) -> Result<f64> {
    validate_p_args(s, lratio, alpha, shape)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    // integrate over u = 1 + r/d0 ∈ [u0, ∞); the integrand turns over near u ≈ s^{1/α}
    let u0 = 1.0 + lratio;
    let knee = s.powf(1.0 / alpha).max(u0);
    let spec = QuadratureSpec {
        abs_tol: 0.0,
        rel_tol,
        max_subdivisions: 500,
    };
    let f = |u: f64| Ok(one_minus_pow(s * u.powf(-alpha), shape) * (u - 1.0));
    let mut total = 0.0;
    if knee > u0 {
        total += try_integrate(f, u0, knee, &spec)
            .map_err(|e| e.in_operation("p_integral quadrature"))?
            .value;
    }
    total += try_integrate_semi_infinite(f, knee, knee, &spec)
        .map_err(|e| e.in_operation("p_integral quadrature"))?
        .value;
    Ok(total)
}

/// `∫_0^l (1 − [1 + s(1 + r/d0)^{−α}]^{−k}) r dr / d0²`, the disk counterpart of [`p_integral`].
pub fn disk_integral(s: f64, lratio: f64, alpha: f64, shape: f64) -> Result<f64> {
    let full = p_integral(s, 0.0, alpha, shape)?;
    let tail = p_integral(s, lratio, alpha, shape)?;
    Ok((full - tail).max(0.0))
}

/// Exponent `sσ²` beyond which the `e^{−sσ²}` factor is negligible (`e^{−40} ≈ 4e−18`).
pub const RATE_CUTOFF_EXPONENT: f64 = 40.0;

/// `E[ln(1 + ζ/(ν + σ²))]` in nats from the transforms of independent `ζ` and `ν`:
///
/// `∫_0^∞ e^{−sσ²}/s · L_ν(s) · (1 − L_ζ(s)) ds`.
///
/// The integral is taken in `t = ln s`, where the integrand behaves like
/// `e^t·E[ζ]` on the left and is cut off at `sσ² = RATE_CUTOFF_EXPONENT` on
/// the right. The left limit is found by stepping down in `t` until the
/// integrand falls below `1e−17` of its running maximum. Requires `σ² > 0`.
pub fn rate_from_laplace(signal: &LaplaceEval, interference: &LaplaceEval, sigma2: f64) -> Result<f64> {
    rate_from_laplace_with(signal, interference, sigma2, RATE_CUTOFF_EXPONENT, 1e-9)
}

pub fn rate_from_laplace_with(
    signal: &LaplaceEval,
    interference: &LaplaceEval,
    sigma2: f64,
    cutoff_exponent: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::invalid("sigma2", "noise power must be positive and finite"));
    }
    let integrand = |t: f64| -> Result<f64> {
        let s = t.exp();
        let ls = signal.ln_value(s)?;
        let gain = -ls.exp_m1();
        if gain == 0.0 {
            return Ok(0.0);
        }
        let ln = interference.ln_value(s)?;
        Ok((-s * sigma2 + ln).exp() * gain)
    };
    let t_hi = (cutoff_exponent / sigma2).ln();
    let mut t_lo = t_hi;
    let mut peak = 0.0f64;
    let mut prev = f64::INFINITY;
    let floor = f64::MIN_POSITIVE.ln() + 5.0;
    loop {
        let g = integrand(t_lo)?;
        peak = peak.max(g);
        if peak > 0.0 && g < 1e-17 * peak && g <= prev && t_lo < t_hi - 5.0 {
            break;
        }
        prev = g;
        t_lo -= 1.0;
        if t_lo < floor {
            if peak == 0.0 {
                return Ok(0.0);
            }
            break;
        }
    }
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol,
        max_subdivisions: 400,
    };
    let res = try_integrate(integrand, t_lo, t_hi, &spec).map_err(|e| e.in_operation("rate integral"))?;
    Ok(res.value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace::{LaplaceTag, Quantity};

    fn tag() -> LaplaceTag {
        LaplaceTag::untagged(Quantity::Signal)
    }

    #[test]
    fn elementary_values() {
        assert_eq!(hyp2f1(Hyp2F1Args::new(0.3, 1.2, 2.5, 0.0)).unwrap(), 1.0);
        for z in [-100.0, -2.0, -0.3, 0.4] {
            assert_eq!(hyp2f1(Hyp2F1Args::new(0.0, 1.2, 2.5, z)).unwrap(), 1.0);
        }
        assert!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, -2.0, 0.1)).is_err());
        assert!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, 2.0, 0.9)).is_err());
    }

    #[test]
    fn elementary_closed_forms() {
        // ₂F₁(1, 1; 2; z) = −ln(1−z)/z
        for z in [-0.3, -0.9, -2.5, -7.0, -1e4] {
            let f = hyp2f1(Hyp2F1Args::new(1.0, 1.0, 2.0, z));
            let exact = -(-z).ln_1p() / z;
            match f {
                Ok(v) => assert!((v - exact).abs() < 1e-12 * exact, "z={z}: {v} vs {exact}"),
                Err(Error::Degenerate(_)) => assert!(z < -3.0),
                Err(e) => panic!("{e}"),
            }
        }
        // ₂F₁(a, b; b; z) = (1−z)^{−a}
        for z in [-0.2, -1.5, -40.0] {
            let v = hyp2f1(Hyp2F1Args::new(0.37, 1.3, 1.3, z)).unwrap();
            assert!((v - (1.0 - z).powf(-0.37)).abs() < 1e-12 * v);
        }
        // c = a + 1 with integer b − a: ₂F₁(−1/2, 1/2; 1/2; z) = (1−z)^{1/2}
        let v = hyp2f1(Hyp2F1Args::new(-0.5, 0.5, 0.5, -50.0)).unwrap();
        assert!((v - 51f64.sqrt()).abs() < 1e-12 * v);
    }

    #[test]
    fn chord_examples() {
        for th in [0.0, 1.0, 3.0, -2.0] {
            assert!((chord_length(0.0, th, 5.0).unwrap() - 5.0).abs() < 1e-15);
        }
        assert!((chord_length(2.0, std::f64::consts::FRAC_PI_2, 5.0).unwrap() - 7.0).abs() < 1e-14);
        assert!((chord_length(5.0, -std::f64::consts::FRAC_PI_2, 5.0).unwrap()).abs() < 1e-14);
        assert!(chord_length(6.0, 0.0, 5.0).is_err());
    }

    #[test]
    fn p_integral_edges() {
        assert_eq!(p_integral(0.0, 3.0, 3.76, 0.5).unwrap(), 0.0);
        assert!(p_integral(-1.0, 3.0, 3.76, 0.5).is_err());
        assert!(p_integral(1.0, -3.0, 3.76, 0.5).is_err());
        assert!(p_integral(1.0, 3.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn deterministic_signal_rate() {
        let c = 3.5;
        let r = rate_from_laplace(&LaplaceEval::constant(tag(), c), &LaplaceEval::unit(tag()), 1.0).unwrap();
        assert!((r - c.ln_1p()).abs() < 1e-9 * c.ln_1p(), "{r}");
        let zero = rate_from_laplace(&LaplaceEval::unit(tag()), &LaplaceEval::unit(tag()), 1.0).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        let sig = LaplaceEval::gamma(tag(), 2.5, 1e-9);
        let itf = LaplaceEval::gamma(tag(), 4.0, 1e-12);
        let a = rate_from_laplace_with(&sig, &itf, 1e-11, RATE_CUTOFF_EXPONENT, 1e-10).unwrap();
        let b = rate_from_laplace_with(&sig, &itf, 1e-11, 2.0 * RATE_CUTOFF_EXPONENT, 1e-10).unwrap();
        assert!((a - b).abs() < 1e-9 * a);
    }
}
