//! Zero-forcing beamformers and SINR bookkeeping for both link directions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::ChannelSet;

/// Relative singular-value threshold below which a direction of `H_{-i}` is
/// treated as numerically absent.
pub const RANK_TOL: f64 = 1e-10;

/// Projections shorter than this fraction of `‖h_ii‖` are reported as degenerate.
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "UL")]
    Uplink,
    #[serde(rename = "DL")]
    Downlink,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Uplink, Direction::Downlink];

    pub fn label(&self) -> &'static str {
        match self {
            Direction::Uplink => "UL",
            Direction::Downlink => "DL",
        }
    }
}

/// Unit-norm stacked beamformer.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    pub w: DVector<Complex64>,
}

impl Beamformer {
    /// `|wᴴh|²`.
    pub fn gain(&self, h: &DVector<Complex64>) -> f64 {
        self.w.dotc(h).norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrReport {
    pub signal_power: f64,
    pub interference_power: f64,
    pub noise_power: f64,
    pub sinr: f64,
    pub direction: Direction,
}

impl SinrReport {
    pub fn new(signal: f64, interference: f64, noise: f64, direction: Direction) -> Result<Self> {
        if !(noise >= 0.0) {
            return Err(Error::invalid("sigma2", "noise power must be non-negative"));
        }
        if !(signal >= 0.0) || !(interference >= 0.0) {
            return Err(Error::invalid("power", "signal and interference must be non-negative"));
        }
        let denom = interference + noise;
        let sinr = if denom > 0.0 {
            signal / denom
        } else if signal > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        Ok(Self {
            signal_power: signal,
            interference_power: interference,
            noise_power: noise,
            sinr,
            direction,
        })
    }

    /// `log2(1 + SINR/gap)` with the gap given as a linear factor.
    pub fn rate_bits(&self, sinr_gap: f64) -> f64 {
        (self.sinr / sinr_gap).ln_1p() / std::f64::consts::LN_2
    }
}

fn normalized(v: DVector<Complex64>) -> Result<Beamformer> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::DegenerateChannel);
    }
    Ok(Beamformer { w: v.unscale(n) })
}

/// Orthonormal basis of the numerical column space of `h`, by Gram–Schmidt
/// with one re-orthogonalization pass. A column whose residual falls below
/// [`RANK_TOL`] times the largest column norm adds no direction.
fn column_basis(h: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    let rows = h.nrows();
    let max_norm = h.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(h.ncols().min(rows));
    for c in h.column_iter() {
        if basis.len() == rows {
            break;
        }
        let mut v: Vec<Complex64> = c.iter().copied().collect();
        for _ in 0..2 {
            project_out(&basis, &mut v);
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > RANK_TOL * max_norm {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

/// `v ← v − Σ q (qᴴ v)` over orthonormal `basis`.
fn project_out(basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for q in basis {
        let coeff: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        for (x, a) in v.iter_mut().zip(q) {
            *x -= a * coeff;
        }
    }
}

/// Normalized projection of `h_ii` onto the orthogonal complement of the
/// columns of `h_minus`. Rank-deficient `h_minus` is handled by dropping
/// directions that add less than [`RANK_TOL`] relative to the largest column.
pub fn zf_beamformer(h_ii: &DVector<Complex64>, h_minus: &DMatrix<Complex64>) -> Result<Beamformer> {
    if h_minus.nrows() != h_ii.len() && h_minus.ncols() > 0 {
        return Err(Error::Dimension(format!(
            "h_ii has length {} but H_minus has {} rows",
            h_ii.len(),
            h_minus.nrows()
        )));
    }
    let scale = h_ii.norm();
    if !(scale > 0.0) {
        return Err(Error::DegenerateChannel);
    }
    if h_minus.ncols() == 0 {
        return normalized(h_ii.clone());
    }
    let q = column_basis(h_minus);
    let mut p: Vec<Complex64> = h_ii.iter().copied().collect();
    // second pass restores orthogonality lost to cancellation
    for _ in 0..2 {
        project_out(&q, &mut p);
    }
    let p = DVector::from_vec(p);
    if p.norm() <= DEGENERATE_TOL * scale {
        return Err(Error::DegenerateChannel);
    }
    normalized(p)
}

/// ZF beamformers for every column of `h` against all other columns.
///
/// Uses a single QR of `h` (`W = Q·R^{-H}`, columns normalized); if `h` is
/// numerically rank deficient each column falls back to [`zf_beamformer`].
pub fn joint_zf(h: &DMatrix<Complex64>) -> Result<Vec<Beamformer>> {
    let (n, u) = h.shape();
    if u == 0 {
        return Ok(Vec::new());
    }
    if u <= n {
        let qr = h.clone().qr();
        let r = qr.r();
        let diag: Vec<f64> = (0..u).map(|i| r[(i, i)].norm()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        if diag.iter().all(|d| *d > RANK_TOL * max) {
            let q = qr.q();
            if let Some(rinv) = r.solve_upper_triangular(&DMatrix::identity(u, u)) {
                let w = q * rinv.adjoint();
                let out: Result<Vec<_>> = w.column_iter().map(|c| normalized(c.clone_owned())).collect();
                if let Ok(out) = out {
                    return Ok(out);
                }
            }
        }
    }
    (0..u)
        .map(|j| {
            let others = h.clone().remove_column(j);
            zf_beamformer(&h.column(j).clone_owned(), &others)
        })
        .collect()
}

/// Uplink SINR of the typical user of `cs` with receive beamformer `w`.
pub fn ul_sinr<'a>(
    cs: &ChannelSet,
    w: &Beamformer,
    interferers: impl IntoIterator<Item = &'a DVector<Complex64>>,
    sigma2_u: f64,
) -> Result<SinrReport> {
    if w.w.len() != cs.h_ii.len() {
        return Err(Error::Dimension("beamformer length differs from h_ii".into()));
    }
    let mut interference = 0.0;
    for h in interferers {
        if h.len() != w.w.len() {
            return Err(Error::Dimension(
                "interferer channel length differs from beamformer".into(),
            ));
        }
        interference += w.gain(h);
    }
    SinrReport::new(w.gain(&cs.h_ii), interference, sigma2_u, Direction::Uplink)
}

/// Downlink SINR at the typical user: `own` is (h_ii, w_i); each interferer is
/// the channel from the interfering user's cluster to the typical user
/// together with that user's beamformer.
pub fn dl_sinr<'a>(
    interferers: impl IntoIterator<Item = (&'a DVector<Complex64>, &'a Beamformer)>,
    own: (&DVector<Complex64>, &Beamformer),
    sigma2_d: f64,
) -> Result<SinrReport> {
    let (h_ii, w_i) = own;
    if h_ii.len() != w_i.w.len() {
        return Err(Error::Dimension("own channel length differs from beamformer".into()));
    }
    let mut interference = 0.0;
    for (h, w) in interferers {
        if h.len() != w.w.len() {
            return Err(Error::Dimension(
                "interfering channel length differs from its beamformer".into(),
            ));
        }
        interference += w.gain(h);
    }
    SinrReport::new(w_i.gain(h_ii), interference, sigma2_d, Direction::Downlink)
}
