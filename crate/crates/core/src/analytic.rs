//! Laplace transforms of signal and interference power under the PPP model and
//! the resulting ergodic rates for both clustering schemes and link directions.
//!
//! All transforms are returned as `ln L(s)`. Radial integrals use the closed
//! form of [`p_integral`]; only angular and outer radial integrals are numerical.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_approx::ShapeScaling;
use crate::geometry::ClusterScheme;
use crate::laplace::{LaplaceEval, LaplaceTag, Quantity};
use crate::network::NetworkParams;
use crate::quadrature::{gauss_legendre_on, try_integrate, try_integrate_semi_infinite, QuadratureSpec};
use crate::special::{chord_unchecked, disk_integral, one_minus_pow, p_integral, rate_from_laplace};
use crate::zfbf::Direction;

/// Tolerance of the angular and radial integrals inside every transform.
pub const INNER_REL_TOL: f64 = 1e-8;

fn inner_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 0.0,
        rel_tol: INNER_REL_TOL,
        max_subdivisions: 200,
    }
}

/// Which radial measure the user-centric signal transform integrates with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignalForm {
    /// PPP functional over the disk, `2πλ_b ∫_0^R (1 − ·) r dr`.
    Area,
    /// Radial line integral `2πλ_b ∫_0^R (1 − ·) dr` without the Jacobian.
    Line,
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::invalid("s", "must be finite and non-negative"));
    }
    Ok(())
}

fn check_offset(p: &NetworkParams, d: f64) -> Result<()> {
    if !(d >= 0.0) || d > p.radius * (1.0 + 1e-12) {
        return Err(Error::invalid("d", "user offset must satisfy 0 <= d <= R"));
    }
    Ok(())
}

fn varpi(p: &NetworkParams) -> Result<f64> {
    Ok(ShapeScaling::new(p.m, p.k, p.bbar())?.varpi)
}

/// `ln L_ζ(s)` for the user-centric signal.
pub fn ln_laplace_signal_user_centric(p: &NetworkParams, s: f64, form: SignalForm) -> Result<f64> {
    check_s(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let w = varpi(p)?;
    let (d0, alpha) = (p.model.d0, p.model.alpha);
    match form {
        SignalForm::Area => Ok(-2.0 * PI * p.lambda_b * d0 * d0 * disk_integral(s, p.radius / d0, alpha, w)?),
        SignalForm::Line => {
            let f = |r: f64| Ok(one_minus_pow(s * p.model.gain(r), w));
            // the integrand switches off around r ≈ d0·s^{1/α}
            let knee = (d0 * s.powf(1.0 / alpha)).clamp(0.0, p.radius);
            let mut v = 0.0;
            for (a, b) in [(0.0, knee), (knee, p.radius)] {
                if b > a {
                    v += try_integrate(f, a, b, &inner_spec())
                        .map_err(|e| e.in_operation("signal transform (line form)"))?
                        .value;
                }
            }
            Ok(-2.0 * PI * p.lambda_b * v)
        }
    }
}

/// `ln L_ν(s)` for the interference shared by the user-centric uplink and
/// downlink and the disjoint uplink: each cluster BS at radius `r₂` sees
/// interferers outside the cluster disk, reached along chords `l(r₂, θ)`.
pub fn ln_laplace_interference_shared(p: &NetworkParams, s: f64) -> Result<f64> {
    check_s(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let shape = ShapeScaling::new(p.m, p.k, p.bbar())?.interferer_shape;
    let (d0, alpha, big_r) = (p.model.d0, p.model.alpha, p.radius);
    let lu_d0sq = p.lambda_u() * d0 * d0;
    let spec = inner_spec();
    let angular = |r2: f64| -> Result<f64> {
        // l(r, π − θ) = l(r, θ): integrate over half the circle
        let v = try_integrate(
            |th| p_integral(s, chord_unchecked(r2, th, big_r) / d0, alpha, shape),
            -FRAC_PI_2,
            FRAC_PI_2,
            &spec,
        )
        .map_err(|e| e.in_operation("interference transform (angular)"))?;
        Ok(2.0 * v.value)
    };
    let radial = try_integrate(|r2| Ok(-(-lu_d0sq * angular(r2)?).exp_m1() * r2), 0.0, big_r, &spec)
        .map_err(|e| e.in_operation("interference transform (radial)"))?;
    Ok(-2.0 * PI * p.lambda_b * radial.value)
}

/// `ln L_ζ(s)` for a disjoint-cluster user at distance `d` from the cluster center.
pub fn ln_laplace_signal_disjoint(p: &NetworkParams, d: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    check_offset(p, d)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let w = varpi(p)?;
    let (d0, alpha, big_r) = (p.model.d0, p.model.alpha, p.radius);
    let d = d.min(big_r);
    if d == 0.0 {
        return ln_laplace_signal_user_centric(p, s, SignalForm::Area);
    }
    let v = try_integrate(
        |th| disk_integral(s, chord_unchecked(d, th, big_r) / d0, alpha, w),
        -FRAC_PI_2,
        FRAC_PI_2,
        &inner_spec(),
    )
    .map_err(|e| e.in_operation("disjoint signal transform"))?;
    Ok(-2.0 * p.lambda_b * d0 * d0 * v.value)
}

/// `ln L_ν(s)` for the disjoint downlink: all out-of-cluster BSs, shape `K`.
pub fn ln_laplace_interference_disjoint_dl(p: &NetworkParams, d: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    check_offset(p, d)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let (d0, alpha, big_r) = (p.model.d0, p.model.alpha, p.radius);
    let k = p.k as f64;
    let d = d.min(big_r);
    let v = try_integrate(
        |th| p_integral(s, chord_unchecked(d, th, big_r) / d0, alpha, k),
        -FRAC_PI_2,
        FRAC_PI_2,
        &inner_spec(),
    )
    .map_err(|e| e.in_operation("disjoint downlink interference transform"))?;
    Ok(-2.0 * p.lambda_b * d0 * d0 * v.value)
}

pub fn signal_user_centric(p: NetworkParams, direction: Direction, form: SignalForm) -> LaplaceEval<'static> {
    LaplaceEval::from_log(
        LaplaceTag::new(Quantity::Signal, ClusterScheme::UserCentric, direction),
        move |s| ln_laplace_signal_user_centric(&p, s, form),
    )
}

pub fn interference_shared(p: NetworkParams, scheme: ClusterScheme, direction: Direction) -> LaplaceEval<'static> {
    LaplaceEval::from_log(LaplaceTag::new(Quantity::Interference, scheme, direction), move |s| {
        ln_laplace_interference_shared(&p, s)
    })
}

pub fn signal_disjoint(p: NetworkParams, direction: Direction, d: f64) -> LaplaceEval<'static> {
    LaplaceEval::from_log(
        LaplaceTag::new(Quantity::Signal, ClusterScheme::Disjoint, direction).at_offset(d),
        move |s| ln_laplace_signal_disjoint(&p, d, s),
    )
}

pub fn interference_disjoint_dl(p: NetworkParams, d: f64) -> LaplaceEval<'static> {
    LaplaceEval::from_log(
        LaplaceTag::new(Quantity::Interference, ClusterScheme::Disjoint, Direction::Downlink).at_offset(d),
        move |s| ln_laplace_interference_disjoint_dl(&p, d, s),
    )
}

/// Signal and interference transforms for one cell of the scheme × direction table.
pub fn transforms(
    p: &NetworkParams,
    scheme: ClusterScheme,
    direction: Direction,
    d: Option<f64>,
    form: SignalForm,
) -> Result<(LaplaceEval<'static>, LaplaceEval<'static>)> {
    p.validate()?;
    match (scheme, d) {
        (ClusterScheme::UserCentric, None) => Ok((
            signal_user_centric(*p, direction, form),
            interference_shared(*p, scheme, direction),
        )),
        (ClusterScheme::Disjoint, Some(d)) => {
            check_offset(p, d)?;
            let interference = match direction {
                Direction::Uplink => interference_shared(*p, scheme, direction),
                Direction::Downlink => interference_disjoint_dl(*p, d),
            };
            Ok((signal_disjoint(*p, direction, d), interference))
        }
        (ClusterScheme::UserCentric, Some(_)) => {
            Err(Error::invalid("d", "user offset applies only to disjoint clustering"))
        }
        (ClusterScheme::Disjoint, None) => Err(Error::invalid("d", "disjoint clustering needs a user offset")),
    }
}

/// Ergodic rate in bits/s/Hz, `E[log2(1 + SINR/gap)]`.
pub fn ergodic_rate(p: &NetworkParams, scheme: ClusterScheme, direction: Direction, d: Option<f64>) -> Result<f64> {
    ergodic_rate_with_form(p, scheme, direction, d, SignalForm::Area)
}

pub fn ergodic_rate_with_form(
    p: &NetworkParams,
    scheme: ClusterScheme,
    direction: Direction,
    d: Option<f64>,
    form: SignalForm,
) -> Result<f64> {
    let (sig, itf) = transforms(p, scheme, direction, d, form)?;
    let sig = sig.scaled(1.0 / p.sinr_gap);
    Ok(rate_from_laplace(&sig, &itf, p.sigma2(direction))? / LN_2)
}

/// Default number of Gauss–Legendre nodes for the disjoint location average.
pub const DEFAULT_DISJOINT_NODES: usize = 16;

/// Location-specific rates `C(d)` at the Gauss–Legendre nodes on `[0, R]`.
pub fn disjoint_rate_profile(p: &NetworkParams, direction: Direction, n: usize) -> Result<Vec<(f64, f64, f64)>> {
    if n < 4 {
        return Err(Error::invalid("n_quad_points", "at least 4 nodes are required"));
    }
    p.validate()?;
    let (nodes, weights) = gauss_legendre_on(0.0, p.radius, n);
    let r2 = p.radius * p.radius;
    // the uplink interference does not depend on d
    let shared = match direction {
        Direction::Uplink => Some(interference_shared(*p, ClusterScheme::Disjoint, direction).memoized()),
        Direction::Downlink => None,
    };
    nodes
        .iter()
        .zip(&weights)
        .map(|(&d, &w)| {
            let sig = signal_disjoint(*p, direction, d).scaled(1.0 / p.sinr_gap);
            let nats = match &shared {
                Some(itf) => rate_from_laplace(&sig, itf, p.sigma2(direction))?,
                None => rate_from_laplace(&sig, &interference_disjoint_dl(*p, d), p.sigma2(direction))?,
            };
            Ok((d, w * 2.0 * d / r2, nats / LN_2))
        })
        .collect()
}

/// `∫_0^R (2d/R²) C(d) dd` by `n`-point Gauss–Legendre.
pub fn disjoint_average_rate(p: &NetworkParams, direction: Direction, n: usize) -> Result<f64> {
    Ok(disjoint_rate_profile(p, direction, n)?
        .iter()
        .map(|(_, w, c)| w * c)
        .sum())
}

/// Mean rate for the scheme: user-centric directly, disjoint averaged over the cluster.
pub fn mean_rate(p: &NetworkParams, scheme: ClusterScheme, direction: Direction) -> Result<f64> {
    match scheme {
        ClusterScheme::UserCentric => ergodic_rate(p, scheme, direction, None),
        ClusterScheme::Disjoint => disjoint_average_rate(p, direction, DEFAULT_DISJOINT_NODES),
    }
}

/// Non-cooperative references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Baseline {
    /// Nearest BS serves the user with ZF over its own `K` users; every other
    /// transmitter outside the serving distance interferes.
    SingleCell,
    /// Same serving link, no interference.
    IsolatedCell,
}

/// Analytic rate of a baseline, averaged over the nearest-BS distance `r₁`
/// (density `2πλ_b r e^{−λ_bπr²}`). Conditioned on `r₁`, the signal is
/// `β(r₁)·Γ(M−K+1, 1)`. Downlink interference comes from BSs beyond `r₁`
/// (shape `K`), uplink interference from users of intensity `λ_u` beyond `r₁`
/// of the serving BS (shape 1).
pub fn baseline_rate(p: &NetworkParams, baseline: Baseline, direction: Direction) -> Result<f64> {
    p.validate()?;
    let (d0, alpha) = (p.model.d0, p.model.alpha);
    let dof = (p.m - p.k + 1) as f64;
    let sigma2 = p.sigma2(direction);
    let conditional = |u: f64| -> Result<f64> {
        // u = λ_b π r₁² ~ Exp(1)
        let r1 = (u / (p.lambda_b * PI)).sqrt();
        let beta = p.model.gain(r1) / p.sinr_gap;
        let sig = LaplaceEval::gamma(LaplaceTag::untagged(Quantity::Signal), dof, beta);
        let tag = LaplaceTag::untagged(Quantity::Interference);
        let itf = match (baseline, direction) {
            (Baseline::IsolatedCell, _) => LaplaceEval::unit(tag),
            (Baseline::SingleCell, Direction::Downlink) => {
                let (lam, k) = (p.lambda_b, p.k as f64);
                LaplaceEval::from_log(tag, move |s| {
                    Ok(-2.0 * PI * lam * d0 * d0 * p_integral(s, r1 / d0, alpha, k)?)
                })
            }
            (Baseline::SingleCell, Direction::Uplink) => {
                let lam = p.lambda_u();
                LaplaceEval::from_log(tag, move |s| {
                    Ok(-2.0 * PI * lam * d0 * d0 * p_integral(s, r1 / d0, alpha, 1.0)?)
                })
            }
        };
        Ok((-u).exp() * rate_from_laplace(&sig, &itf, sigma2)? / LN_2)
    };
    let spec = QuadratureSpec {
        abs_tol: 0.0,
        rel_tol: 1e-7,
        max_subdivisions: 200,
    };
    Ok(try_integrate_semi_infinite(conditional, 0.0, 1.0, &spec)
        .map_err(|e| e.in_operation("baseline location average"))?
        .value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "analytic")]
    Analytic,
    #[serde(rename = "montecarlo-fixedB")]
    MonteCarloFixedB,
    #[serde(rename = "montecarlo-poissonB")]
    MonteCarloPoissonB,
    #[serde(rename = "single-cell")]
    SingleCell,
    #[serde(rename = "isolated-cell")]
    IsolatedCell,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::MonteCarloFixedB => "montecarlo-fixedB",
            Provenance::MonteCarloPoissonB => "montecarlo-poissonB",
            Provenance::SingleCell => "single-cell",
            Provenance::IsolatedCell => "isolated-cell",
        }
    }
}

/// Rate in bits/s/Hz indexed by mean cluster size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub scheme: Option<ClusterScheme>,
    pub direction: Direction,
    pub provenance: Provenance,
    pub points: Vec<(f64, f64)>,
}

impl RateCurve {
    pub fn new(scheme: Option<ClusterScheme>, direction: Direction, provenance: Provenance) -> Self {
        Self {
            scheme,
            direction,
            provenance,
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, bbar: f64, rate: f64) -> Result<()> {
        if let Some(&(last, _)) = self.points.last() {
            if !(bbar > last) {
                return Err(Error::invalid("bbar", "curve points must have strictly increasing B̄"));
            }
        }
        self.points.push((bbar, rate));
        Ok(())
    }

    pub fn rate_at(&self, bbar: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|(b, _)| (*b - bbar).abs() <= 1e-12 * bbar.abs().max(1.0))
            .map(|p| p.1)
    }
}

/// Analytic curve over `bbars` (ascending), keeping `λ_b` fixed and scaling `R`.
pub fn analytic_curve(
    base: &NetworkParams,
    scheme: ClusterScheme,
    direction: Direction,
    bbars: &[f64],
) -> Result<RateCurve> {
    let mut curve = RateCurve::new(Some(scheme), direction, Provenance::Analytic);
    for &b in bbars {
        let p = base.with_bbar(b)?;
        curve.push(b, mean_rate(&p, scheme, direction)?)?;
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(bbar: f64) -> NetworkParams {
        NetworkParams::reference(bbar).unwrap()
    }

    #[test]
    fn transforms_are_one_at_zero() {
        let p = params(4.0);
        assert_eq!(ln_laplace_signal_user_centric(&p, 0.0, SignalForm::Area).unwrap(), 0.0);
        assert_eq!(ln_laplace_interference_shared(&p, 0.0).unwrap(), 0.0);
        assert_eq!(ln_laplace_signal_disjoint(&p, 10.0, 0.0).unwrap(), 0.0);
        assert_eq!(ln_laplace_interference_disjoint_dl(&p, 10.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn concentric_disjoint_user_matches_user_centric() {
        let p = params(4.0);
        for s in [1e6, 1e9, 1e12] {
            let a = ln_laplace_signal_user_centric(&p, s, SignalForm::Area).unwrap();
            let b = ln_laplace_signal_disjoint(&p, 0.0, s).unwrap();
            let c = ln_laplace_signal_disjoint(&p, 1e-9 * p.radius, s).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs());
            assert!((a - c).abs() <= 1e-6 * a.abs(), "{a} {c}");
        }
    }

    #[test]
    fn offset_validation() {
        let p = params(2.0);
        assert!(ln_laplace_signal_disjoint(&p, 2.0 * p.radius, 1.0).is_err());
        assert!(transforms(&p, ClusterScheme::Disjoint, Direction::Uplink, None, SignalForm::Area).is_err());
        assert!(transforms(
            &p,
            ClusterScheme::UserCentric,
            Direction::Uplink,
            Some(1.0),
            SignalForm::Area
        )
        .is_err());
    }

    #[test]
    fn curve_ordering() {
        let mut c = RateCurve::new(None, Direction::Uplink, Provenance::Analytic);
        c.push(1.0, 2.0).unwrap();
        assert!(c.push(1.0, 3.0).is_err());
        c.push(2.0, 3.0).unwrap();
        assert_eq!(c.rate_at(2.0), Some(3.0));
    }
}
