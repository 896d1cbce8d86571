//! Gamma moment matching and the mixture representations of signal and
//! interference power used by the analytic engine.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ClusterScheme, Point2D};
use crate::laplace::{LaplaceEval, LaplaceTag, Quantity};
use crate::propagation::PathLossModel;
use crate::zfbf::Direction;

/// `Γ(k, θ)` with shape `k` and scale `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::invalid("shape", "must be positive and finite"));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::invalid("scale", "must be positive and finite"));
        }
        Ok(Self { shape, scale })
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    pub fn ln_laplace(&self, s: f64) -> f64 {
        -self.shape * (self.scale * s).ln_1p()
    }
}

/// Single Gamma with the mean and variance of the independent sum of `parts`.
pub fn moment_match(parts: &[GammaParams]) -> Result<GammaParams> {
    if parts.is_empty() {
        return Err(Error::invalid("parts", "at least one Gamma part is required"));
    }
    let mean: f64 = parts.iter().map(GammaParams::mean).sum();
    let var: f64 = parts.iter().map(GammaParams::variance).sum();
    GammaParams::new(mean * mean / var, var / mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaTerm {
    pub coefficient: f64,
    pub shape: f64,
}

/// `Σ βᵢ·Gᵢ` with independent `Gᵢ ~ Γ(shapeᵢ, 1)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GammaMix {
    pub terms: Vec<GammaTerm>,
}

impl GammaMix {
    pub fn new(terms: Vec<GammaTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.coefficient >= 0.0) || !t.coefficient.is_finite() {
                return Err(Error::invalid(
                    "coefficient",
                    "mixture coefficients must be non-negative",
                ));
            }
            if !(t.shape > 0.0) || !t.shape.is_finite() {
                return Err(Error::invalid("shape", "mixture shapes must be positive"));
            }
        }
        Ok(Self { terms })
    }

    fn uniform_shape(coefficients: impl IntoIterator<Item = f64>, shape: f64) -> Result<Self> {
        Self::new(
            coefficients
                .into_iter()
                .map(|coefficient| GammaTerm { coefficient, shape })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient * t.shape).sum()
    }

    pub fn variance(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient * t.coefficient * t.shape).sum()
    }

    pub fn ln_laplace(&self, s: f64) -> f64 {
        self.terms.iter().map(|t| -t.shape * (t.coefficient * s).ln_1p()).sum()
    }

    pub fn laplace_eval(&self, tag: LaplaceTag) -> LaplaceEval<'static> {
        let mix = self.clone();
        LaplaceEval::from_log(tag, move |s| Ok(mix.ln_laplace(s)))
    }

    /// One draw of the mixture.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.coefficient > 0.0)
            .map(|t| {
                Gamma::new(t.shape, t.coefficient)
                    .expect("validated parameters")
                    .sample(rng)
            })
            .sum()
    }

    /// Moment-matched single Gamma of the mixture.
    pub fn matched(&self) -> Result<GammaParams> {
        let parts: Vec<GammaParams> = self
            .terms
            .iter()
            .filter(|t| t.coefficient > 0.0)
            .map(|t| GammaParams::new(t.shape, t.coefficient))
            .collect::<Result<_>>()?;
        moment_match(&parts)
    }

    pub fn extend(&mut self, other: GammaMix) {
        self.terms.extend(other.terms);
    }
}

/// Shape parameters after the ZF projection, with `B` replaced by `B̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeScaling {
    /// `ϖ = (M·B̄ − K·B̄ + 1)/B̄`.
    pub varpi: f64,
    /// `1/B̄`.
    pub interferer_shape: f64,
}

impl ShapeScaling {
    pub fn new(m: usize, k: usize, bbar: f64) -> Result<Self> {
        if k >= m {
            return Err(Error::invalid("k", "loading factor must satisfy K < M"));
        }
        if !(bbar > 0.0) || !bbar.is_finite() {
            return Err(Error::invalid("bbar", "mean cluster size must be positive"));
        }
        let (m, k) = (m as f64, k as f64);
        Ok(Self {
            varpi: (m * bbar - k * bbar + 1.0) / bbar,
            interferer_shape: 1.0 / bbar,
        })
    }
}

fn gains(distances: &[f64], model: &PathLossModel) -> Result<Vec<f64>> {
    distances.iter().map(|&r| model.path_loss(r)).collect()
}

/// Serving-cluster signal power: one `Γ(ϖ, 1)` term per cluster BS.
pub fn signal_mix_user_centric(
    cluster_distances: &[f64],
    model: &PathLossModel,
    m: usize,
    k: usize,
    bbar: f64,
) -> Result<GammaMix> {
    let sc = ShapeScaling::new(m, k, bbar)?;
    if cluster_distances.is_empty() {
        return Err(Error::EmptyCluster);
    }
    GammaMix::uniform_shape(gains(cluster_distances, model)?, sc.varpi)
}

/// Interference from one user at the cluster's BSs (or, in the downlink, from
/// one interfering cluster at the typical user): one `Γ(1/B̄, 1)` term per BS.
pub fn interference_mix_ul(distances: &[f64], model: &PathLossModel, bbar: f64) -> Result<GammaMix> {
    if !(bbar > 0.0) || !bbar.is_finite() {
        return Err(Error::invalid("bbar", "mean cluster size must be positive"));
    }
    GammaMix::uniform_shape(gains(distances, model)?, 1.0 / bbar)
}

/// Disjoint downlink interference: one `Γ(K, 1)` term per out-of-cluster BS.
pub fn interference_mix_dl_disjoint(distances: &[f64], model: &PathLossModel, k: usize) -> Result<GammaMix> {
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    GammaMix::uniform_shape(gains(distances, model)?, k as f64)
}

/// Projected-channel form of the signal power for a cluster of `b` BSs: the
/// moment-matched `Γ(k₁, θ₁)` of `Σ Γ(M, β_b)` with shape scaled by `(M·b − K·b + 1)/(M·b)`.
pub fn projected_signal_gamma(
    cluster_distances: &[f64],
    model: &PathLossModel,
    m: usize,
    k: usize,
) -> Result<GammaParams> {
    if cluster_distances.is_empty() {
        return Err(Error::EmptyCluster);
    }
    if k >= m {
        return Err(Error::invalid("k", "loading factor must satisfy K < M"));
    }
    let parts: Vec<GammaParams> = gains(cluster_distances, model)?
        .into_iter()
        .map(|beta| GammaParams::new(m as f64, beta))
        .collect::<Result<_>>()?;
    let matched = moment_match(&parts)?;
    let b = cluster_distances.len() as f64;
    let (mf, kf) = (m as f64, k as f64);
    GammaParams::new(matched.shape * (mf * b - kf * b + 1.0) / (mf * b), matched.scale)
}

/// Gap between the projected single-Gamma form (actual `B`) and the `Γ(ϖ, 1)`
/// mixture (with `B̄`) for one cluster realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionDiscrepancy {
    pub projected: GammaParams,
    pub mixture_mean: f64,
    pub mixture_variance: f64,
    pub rel_mean_gap: f64,
    pub rel_variance_gap: f64,
    /// `max_s |L_projected(s) − L_mixture(s)|` over a logarithmic grid.
    pub max_laplace_gap: f64,
}

pub fn projection_form_discrepancy(
    cluster_distances: &[f64],
    model: &PathLossModel,
    m: usize,
    k: usize,
    bbar: f64,
) -> Result<ProjectionDiscrepancy> {
    let projected = projected_signal_gamma(cluster_distances, model, m, k)?;
    let mix = signal_mix_user_centric(cluster_distances, model, m, k, bbar)?;
    let (mm, mv) = (mix.mean(), mix.variance());
    let scale = 1.0 / mm;
    let max_laplace_gap = (-60..=60)
        .map(|i| {
            let s = scale * 10f64.powf(i as f64 / 10.0);
            (projected.ln_laplace(s).exp() - mix.ln_laplace(s).exp()).abs()
        })
        .fold(0.0, f64::max);
    Ok(ProjectionDiscrepancy {
        projected,
        mixture_mean: mm,
        mixture_variance: mv,
        rel_mean_gap: (projected.mean() - mm) / mm,
        rel_variance_gap: (projected.variance() - mv) / mv,
        max_laplace_gap,
    })
}

/// An interfering user together with the BSs of its own cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfererGeometry {
    pub position: Point2D,
    pub cluster_bs: Vec<Point2D>,
}

/// Geometry of one realization as seen by the user of interest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Geometry {
    pub model: PathLossModel,
    pub m: usize,
    pub k: usize,
    pub bbar: f64,
    pub user: Point2D,
    /// BSs of the user's cluster.
    pub serving_bs: Vec<Point2D>,
    /// Users outside the cluster.
    pub interferers: Vec<InterfererGeometry>,
    /// BSs outside the user's (disjoint) cluster.
    pub out_of_cluster_bs: Vec<Point2D>,
}

/// The signal or interference mixture for one cell of the scheme × direction table.
///
/// Uplink interference is the same expression under both schemes. User-centric
/// downlink interference sums over each interferer's own cluster with path loss
/// to the user; disjoint downlink interference sums over all out-of-cluster BSs
/// with shape `K`.
pub fn table1_distribution(
    scheme: ClusterScheme,
    direction: Direction,
    quantity: Quantity,
    g: &Table1Geometry,
) -> Result<GammaMix> {
    let dist_to_user = |pts: &[Point2D]| -> Vec<f64> { pts.iter().map(|b| b.dist(&g.user)).collect() };
    match (quantity, scheme, direction) {
        (Quantity::Signal, _, _) => signal_mix_user_centric(&dist_to_user(&g.serving_bs), &g.model, g.m, g.k, g.bbar),
        (Quantity::Interference, _, Direction::Uplink) => {
            let mut mix = GammaMix::default();
            for j in &g.interferers {
                let d: Vec<f64> = g.serving_bs.iter().map(|b| b.dist(&j.position)).collect();
                mix.extend(interference_mix_ul(&d, &g.model, g.bbar)?);
            }
            Ok(mix)
        }
        (Quantity::Interference, ClusterScheme::UserCentric, Direction::Downlink) => {
            let mut mix = GammaMix::default();
            for j in &g.interferers {
                mix.extend(interference_mix_ul(&dist_to_user(&j.cluster_bs), &g.model, g.bbar)?);
            }
            Ok(mix)
        }
        (Quantity::Interference, ClusterScheme::Disjoint, Direction::Downlink) => {
            interference_mix_dl_disjoint(&dist_to_user(&g.out_of_cluster_bs), &g.model, g.k)
        }
    }
}
