//! System-level simulation around a typical user.
//!
//! Each trial drops a BS PPP on a square window centered on the typical user
//! and schedules exactly `K` users per BS, uniformly in its Voronoi cell; the
//! typical user is one of its nearest BS's users. User-centric, disjoint and
//! single-cell trials with the same index see the same network and fading,
//! which makes the scheme comparisons paired.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{Baseline, Provenance, RateCurve};
use crate::error::{Error, Result};
use crate::geometry::{
    sample_ppp_with, uniform_in_polygon, voronoi_cell, ClusterScheme, HexIndex, HexPartition, Point2D, SpatialGrid,
    Window,
};
use crate::network::NetworkParams;
use crate::propagation::ChannelDraw;
use crate::stats::EmpiricalStats;
use crate::zfbf::{joint_zf, zf_beamformer, Beamformer, Direction, SinrReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClusterCardinality {
    /// Cluster sizes follow from the BS PPP (user-centric: BSs within `R`).
    PoissonB,
    /// Every cluster has `round(B̄)` BSs (user-centric: nearest BSs; disjoint:
    /// that many BSs dropped uniformly in each hexagon).
    FixedB,
}

impl ClusterCardinality {
    pub fn provenance(&self) -> Provenance {
        match self {
            ClusterCardinality::PoissonB => Provenance::MonteCarloPoissonB,
            ClusterCardinality::FixedB => Provenance::MonteCarloFixedB,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub params: NetworkParams,
    pub n_trials: usize,
    pub seed: u64,
    pub cardinality: ClusterCardinality,
    /// Window half-width in units of `max(R, 1/√(πλ_b))`.
    pub window_multiplier: f64,
}

pub const DEFAULT_WINDOW_MULTIPLIER: f64 = 6.0;

impl TrialConfig {
    pub fn new(params: NetworkParams, n_trials: usize, seed: u64) -> Self {
        Self {
            params,
            n_trials,
            seed,
            cardinality: ClusterCardinality::PoissonB,
            window_multiplier: DEFAULT_WINDOW_MULTIPLIER,
        }
    }

    pub fn with_cardinality(mut self, c: ClusterCardinality) -> Self {
        self.cardinality = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_trials == 0 {
            return Err(Error::invalid("n_trials", "at least one trial is required"));
        }
        if !(self.window_multiplier >= 2.0) || !self.window_multiplier.is_finite() {
            return Err(Error::invalid("window_multiplier", "must be at least 2"));
        }
        Ok(())
    }

    pub fn fixed_cluster_size(&self) -> usize {
        (self.params.bbar().round() as usize).max(1)
    }

    fn half_width(&self) -> f64 {
        let p = &self.params;
        let cell_scale = 1.0 / (std::f64::consts::PI * p.lambda_b).sqrt();
        self.window_multiplier * p.radius.max(cell_scale)
    }
}

/// One measured link of the typical user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserRecord {
    pub scheme: Option<ClusterScheme>,
    pub provenance: Provenance,
    pub direction: Direction,
    /// Distance to the serving cluster's center (disjoint only).
    pub offset: Option<f64>,
    pub cluster_size: usize,
    pub signal_power: f64,
    pub interference_power: f64,
    pub sinr: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub records: Vec<UserRecord>,
    /// Largest `|wᴴh_ij| / ‖h_ij‖` over the typical user's intra-cluster users.
    pub zf_residual: f64,
    /// Uplink and downlink interference restricted to interfering users
    /// farther than `R` from the typical user, the interferer set assumed by
    /// the analysis (user-centric, Poisson cluster sizes only).
    pub ul_interference_radius_approx: Option<f64>,
    pub dl_interference_radius_approx: Option<f64>,
}

impl TrialResult {
    pub fn record(&self, direction: Direction, provenance: Provenance) -> Option<&UserRecord> {
        self.records
            .iter()
            .find(|r| r.direction == direction && r.provenance == provenance)
    }
}

const TAG_NETWORK: u64 = 0x6e65_7477;
const TAG_FADING: u64 = 0x6661_6469;
const TAG_HEX: u64 = 0x6865_7821;
const TAG_FIXED_HEX: u64 = 0x6669_7865;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `tag` in trial `trial` under `master`.
pub fn stream_seed(master: u64, trial: usize, tag: u64) -> u64 {
    mix(mix(mix(master) ^ trial as u64) ^ tag)
}

fn stream(master: u64, trial: usize, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, trial, tag))
}

/// BSs, `K` scheduled users per BS, and the typical user.
struct Network {
    bs: Vec<Point2D>,
    users: Vec<Point2D>,
    k: usize,
    grid: SpatialGrid,
    typical: usize,
}

impl Network {
    fn build<R: Rng + ?Sized>(
        bs: Vec<Point2D>,
        window: Window,
        k: usize,
        typical_at: Point2D,
        rng: &mut R,
    ) -> Result<Self> {
        if bs.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let grid = SpatialGrid::new(&bs, &window);
        let mut users = Vec::with_capacity(bs.len() * k);
        for b in 0..bs.len() {
            let cell = voronoi_cell(&bs, &grid, b, &window);
            for _ in 0..k {
                users.push(if cell.len() >= 3 {
                    uniform_in_polygon(&cell, rng)
                } else {
                    bs[b]
                });
            }
        }
        let b0 = grid.nearest(&bs, &typical_at).ok_or(Error::EmptyNetwork)?;
        let typical = b0 * k;
        users[typical] = typical_at;
        Ok(Self {
            bs,
            users,
            k,
            grid,
            typical,
        })
    }

    fn serving(&self, u: usize) -> usize {
        u / self.k
    }

    fn users_of<'a>(&self, bs_set: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        let k = self.k;
        bs_set.iter().flat_map(move |&b| b * k..(b + 1) * k)
    }

    fn nearest_bs(&self, p: &Point2D) -> usize {
        self.grid.nearest(&self.bs, p).expect("non-empty network")
    }
}

#[derive(Debug, Clone, Copy)]
enum ClusterRule {
    Radius(f64),
    Nearest(usize),
}

impl ClusterRule {
    /// Sorted BS set; an empty disk falls back to the nearest BS.
    fn cluster(&self, net: &Network, p: &Point2D) -> Vec<usize> {
        let mut out = match *self {
            ClusterRule::Radius(r) => net.grid.within(&net.bs, p, r),
            ClusterRule::Nearest(n) => net.grid.k_nearest(&net.bs, p, n),
        };
        if out.is_empty() {
            out.push(net.nearest_bs(p));
        }
        out.sort_unstable();
        out
    }
}

struct LinkOutcome {
    ul: SinrReport,
    dl: SinrReport,
    cluster_size: usize,
    zf_residual: f64,
}

/// ZF beamformer of `user` over `bs_set` against the other users those BSs serve.
fn beamformer_for(
    net: &Network,
    draw: &ChannelDraw,
    bs_set: &[usize],
    user: usize,
) -> Result<(Beamformer, DVector<Complex64>, f64)> {
    let others: Vec<usize> = net.users_of(bs_set).filter(|&u| u != user).collect();
    let h = draw.stacked(bs_set, user);
    let h_minus = draw.stacked_matrix(bs_set, &others);
    let w = zf_beamformer(&h, &h_minus)?;
    let residual = h_minus
        .column_iter()
        .map(|c| w.w.dotc(&c).norm() / c.norm())
        .fold(0.0, f64::max);
    Ok((w, h, residual))
}

/// Uplink SINR and the part of the interference from users beyond `far` of the typical user.
fn ul_of(
    net: &Network,
    draw: &ChannelDraw,
    bs_set: &[usize],
    w: &Beamformer,
    h: &DVector<Complex64>,
    sigma2: f64,
    far: f64,
) -> Result<(SinrReport, f64)> {
    let in_set = |b: usize| bs_set.binary_search(&b).is_ok();
    let at = net.users[net.typical];
    let (mut all, mut beyond) = (0.0, 0.0);
    for u in (0..net.users.len()).filter(|&u| !in_set(net.serving(u))) {
        let g = w.gain(&draw.stacked(bs_set, u));
        all += g;
        if net.users[u].dist(&at) > far {
            beyond += g;
        }
    }
    Ok((SinrReport::new(w.gain(h), all, sigma2, Direction::Uplink)?, beyond))
}

fn draw_for<'a>(cfg: &TrialConfig, net: &'a Network, trial: usize) -> ChannelDraw<'a> {
    ChannelDraw {
        bs_points: &net.bs,
        user_points: &net.users,
        model: cfg.params.model,
        m: cfg.params.m,
        trial_seed: stream_seed(cfg.seed, trial, TAG_FADING),
    }
}

fn ppp_network(cfg: &TrialConfig, trial: usize) -> Result<Network> {
    let window = Window::centered_square(cfg.half_width())?;
    let mut rng = stream(cfg.seed, trial, TAG_NETWORK);
    let bs = sample_ppp_with(cfg.params.lambda_b, &window, &mut rng)?;
    Network::build(bs, window, cfg.params.k, Point2D::ORIGIN, &mut rng)
}

/// Typical-user links when every user clusters by `rule`. Downlink
/// interference comes from every user whose cluster does not contain the
/// typical user's serving BS.
fn user_centric_links(
    cfg: &TrialConfig,
    net: &Network,
    trial: usize,
    rule: ClusterRule,
) -> Result<(LinkOutcome, (f64, f64))> {
    let p = &cfg.params;
    let draw = draw_for(cfg, net, trial);
    let t = net.typical;
    let own = rule.cluster(net, &net.users[t]);
    let (w, h, zf_residual) = beamformer_for(net, &draw, &own, t)?;
    let (ul, ul_beyond) = ul_of(net, &draw, &own, &w, &h, p.sigma2_ul, p.radius)?;

    let b_t = net.serving(t);
    let (mut exact, mut approx) = (0.0, 0.0);
    for j in 0..net.users.len() {
        if j == t {
            continue;
        }
        let theta = rule.cluster(net, &net.users[j]);
        if theta.binary_search(&b_t).is_ok() {
            continue;
        }
        let (wj, _, _) = beamformer_for(net, &draw, &theta, j)?;
        let g = wj.gain(&draw.stacked(&theta, t));
        exact += g;
        if net.users[j].dist(&net.users[t]) > p.radius {
            approx += g;
        }
    }
    let dl = SinrReport::new(w.gain(&h), exact, p.sigma2_dl, Direction::Downlink)?;
    Ok((
        LinkOutcome {
            ul,
            dl,
            cluster_size: own.len(),
            zf_residual,
        },
        (ul_beyond, approx),
    ))
}

fn record(
    scheme: Option<ClusterScheme>,
    provenance: Provenance,
    offset: Option<f64>,
    cluster_size: usize,
    r: &SinrReport,
    gap: f64,
) -> UserRecord {
    UserRecord {
        scheme,
        provenance,
        direction: r.direction,
        offset,
        cluster_size,
        signal_power: r.signal_power,
        interference_power: r.interference_power,
        sinr: r.sinr,
        rate: r.rate_bits(gap),
    }
}

/// One user-centric trial: UL and DL records of the typical user at the window center.
pub fn run_user_centric_trial(cfg: &TrialConfig, trial: usize) -> Result<TrialResult> {
    cfg.validate()?;
    let net = ppp_network(cfg, trial)?;
    let rule = match cfg.cardinality {
        ClusterCardinality::PoissonB => ClusterRule::Radius(cfg.params.radius),
        ClusterCardinality::FixedB => ClusterRule::Nearest(cfg.fixed_cluster_size()),
    };
    let (out, approx) = user_centric_links(cfg, &net, trial, rule)?;
    let poisson = cfg.cardinality == ClusterCardinality::PoissonB;
    let prov = cfg.cardinality.provenance();
    let scheme = Some(ClusterScheme::UserCentric);
    let gap = cfg.params.sinr_gap;
    Ok(TrialResult {
        trial,
        records: vec![
            record(scheme, prov, None, out.cluster_size, &out.ul, gap),
            record(scheme, prov, None, out.cluster_size, &out.dl, gap),
        ],
        zf_residual: out.zf_residual,
        ul_interference_radius_approx: poisson.then_some(approx.0),
        dl_interference_radius_approx: poisson.then_some(approx.1),
    })
}

/// Non-cooperative trial on the user-centric network: each user is served by
/// its nearest BS alone. Records single-cell and isolated-cell (interference
/// removed) links in both directions.
pub fn run_baseline_trial(cfg: &TrialConfig, trial: usize) -> Result<TrialResult> {
    cfg.validate()?;
    let net = ppp_network(cfg, trial)?;
    let (out, _) = user_centric_links(cfg, &net, trial, ClusterRule::Nearest(1))?;
    let gap = cfg.params.sinr_gap;
    let mut records = Vec::with_capacity(4);
    for r in [out.ul, out.dl] {
        records.push(record(None, Provenance::SingleCell, None, 1, &r, gap));
        let iso = SinrReport::new(r.signal_power, 0.0, r.noise_power, r.direction)?;
        records.push(record(None, Provenance::IsolatedCell, None, 1, &iso, gap));
    }
    Ok(TrialResult {
        trial,
        records,
        zf_residual: out.zf_residual,
        ul_interference_radius_approx: None,
        dl_interference_radius_approx: None,
    })
}

/// Uniform point in hexagon `idx`.
fn uniform_in_hexagon<R: Rng + ?Sized>(part: &HexPartition, idx: HexIndex, rng: &mut R) -> Point2D {
    uniform_in_polygon(&part.vertices(idx), rng)
}

/// One disjoint trial. With Poisson cluster sizes the network is the one of
/// the user-centric trial with the same index and the hexagonal partition is
/// shifted uniformly, which leaves the typical user uniform within its
/// hexagon. With fixed sizes, `round(B̄)` BSs are dropped in every hexagon.
/// The typical user is served by the cluster of its nearest BS; the recorded
/// offset is its distance to that cluster's center.
pub fn run_disjoint_trial(cfg: &TrialConfig, trial: usize) -> Result<TrialResult> {
    cfg.validate()?;
    let p = &cfg.params;
    let mut part = HexPartition::from_disk_radius(p.radius)?;
    let net = match cfg.cardinality {
        ClusterCardinality::PoissonB => {
            let mut rng = stream(cfg.seed, trial, TAG_HEX);
            let shift = uniform_in_hexagon(&part, (0, 0), &mut rng);
            part.origin = Point2D::new(-shift.x, -shift.y);
            ppp_network(cfg, trial)?
        }
        ClusterCardinality::FixedB => {
            let mut rng = stream(cfg.seed, trial, TAG_FIXED_HEX);
            let half = cfg.half_width();
            let n = cfg.fixed_cluster_size();
            let reach = (half / part.lattice_pitch).ceil() as i64 + 2;
            let mut bs = Vec::new();
            for j in -reach..=reach {
                for i in -reach..=reach {
                    let c = part.center((i, j));
                    if c.x.abs() <= half && c.y.abs() <= half {
                        bs.extend((0..n).map(|_| uniform_in_hexagon(&part, (i, j), &mut rng)));
                    }
                }
            }
            let typical_at = uniform_in_hexagon(&part, (0, 0), &mut rng);
            let window = Window::centered_square(half + part.circumradius())?;
            Network::build(bs, window, p.k, typical_at, &mut rng)?
        }
    };

    let mut clusters: BTreeMap<HexIndex, Vec<usize>> = BTreeMap::new();
    for (b, pt) in net.bs.iter().enumerate() {
        clusters.entry(part.locate(pt)).or_default().push(b);
    }
    let t = net.typical;
    let own_idx = part.locate(&net.bs[net.serving(t)]);
    let own = &clusters[&own_idx];
    let offset = net.users[t].dist(&part.center(own_idx));

    let draw = draw_for(cfg, &net, trial);
    let (w, h, zf_residual) = beamformer_for(&net, &draw, own, t)?;
    let (ul, _) = ul_of(&net, &draw, own, &w, &h, p.sigma2_ul, p.radius)?;

    let mut interference = 0.0;
    for (idx, members) in &clusters {
        if *idx == own_idx {
            continue;
        }
        let users: Vec<usize> = net.users_of(members).collect();
        let beams = joint_zf(&draw.stacked_matrix(members, &users))?;
        let h_t = draw.stacked(members, t);
        interference += beams.iter().map(|b| b.gain(&h_t)).sum::<f64>();
    }
    let dl = SinrReport::new(w.gain(&h), interference, p.sigma2_dl, Direction::Downlink)?;

    let prov = cfg.cardinality.provenance();
    let scheme = Some(ClusterScheme::Disjoint);
    Ok(TrialResult {
        trial,
        records: vec![
            record(scheme, prov, Some(offset), own.len(), &ul, p.sinr_gap),
            record(scheme, prov, Some(offset), own.len(), &dl, p.sinr_gap),
        ],
        zf_residual,
        ul_interference_radius_approx: None,
        dl_interference_radius_approx: None,
    })
}

/// Run `n` independent trials in index order (in parallel when enabled).
pub fn run_trials<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub fn run_user_centric(cfg: &TrialConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    run_trials(cfg.n_trials, |i| run_user_centric_trial(cfg, i))
}

pub fn run_disjoint(cfg: &TrialConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    run_trials(cfg.n_trials, |i| run_disjoint_trial(cfg, i))
}

pub fn run_scheme(cfg: &TrialConfig, scheme: ClusterScheme) -> Result<Vec<TrialResult>> {
    match scheme {
        ClusterScheme::UserCentric => run_user_centric(cfg),
        ClusterScheme::Disjoint => run_disjoint(cfg),
    }
}

/// Values of `field` for every record matching `direction` and `provenance`, in trial order.
pub fn collect(
    results: &[TrialResult],
    direction: Direction,
    provenance: Provenance,
    field: impl Fn(&UserRecord) -> f64,
) -> Vec<f64> {
    results
        .iter()
        .filter_map(|r| r.record(direction, provenance))
        .map(field)
        .collect()
}

pub fn rates(results: &[TrialResult], direction: Direction, provenance: Provenance) -> Vec<f64> {
    collect(results, direction, provenance, |r| r.rate)
}

/// Statistics at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub bbar: f64,
    pub scheme: Option<ClusterScheme>,
    pub direction: Direction,
    pub provenance: Provenance,
    pub rate: EmpiricalStats,
    pub mean_signal: f64,
    pub mean_interference: f64,
}

fn summarize(
    bbar: f64,
    results: &[TrialResult],
    scheme: Option<ClusterScheme>,
    provenance: Provenance,
) -> Result<Vec<SweepPoint>> {
    Direction::BOTH
        .iter()
        .map(|&direction| {
            let recs: Vec<&UserRecord> = results.iter().filter_map(|r| r.record(direction, provenance)).collect();
            let n = recs.len().max(1) as f64;
            Ok(SweepPoint {
                bbar,
                scheme,
                direction,
                provenance,
                rate: EmpiricalStats::from_samples(&recs.iter().map(|r| r.rate).collect::<Vec<_>>())?,
                mean_signal: recs.iter().map(|r| r.signal_power).sum::<f64>() / n,
                mean_interference: recs.iter().map(|r| r.interference_power).sum::<f64>() / n,
            })
        })
        .collect()
}

/// Single-cell and isolated-cell statistics for `cfg`'s network.
pub fn run_baselines(cfg: &TrialConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let results = run_trials(cfg.n_trials, |i| run_baseline_trial(cfg, i))?;
    let bbar = cfg.params.bbar();
    let mut out = summarize(bbar, &results, None, Provenance::SingleCell)?;
    out.extend(summarize(bbar, &results, None, Provenance::IsolatedCell)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub schemes: Vec<ClusterScheme>,
    pub cardinalities: Vec<ClusterCardinality>,
    pub baselines: bool,
}

impl Default for SweepPlan {
    fn default() -> Self {
        Self {
            schemes: vec![ClusterScheme::UserCentric, ClusterScheme::Disjoint],
            cardinalities: vec![ClusterCardinality::PoissonB, ClusterCardinality::FixedB],
            baselines: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn curves(&self) -> Vec<RateCurve> {
        let mut by_key: BTreeMap<(Option<ClusterScheme>, Direction, Provenance), RateCurve> = BTreeMap::new();
        let mut pts: Vec<&SweepPoint> = self.points.iter().collect();
        pts.sort_by(|a, b| a.bbar.total_cmp(&b.bbar));
        for p in pts {
            let c = by_key
                .entry((p.scheme, p.direction, p.provenance))
                .or_insert_with(|| RateCurve::new(p.scheme, p.direction, p.provenance));
            // points are sorted and unique per key
            let _ = c.push(p.bbar, p.rate.mean);
        }
        by_key.into_values().collect()
    }

    pub fn find(
        &self,
        bbar: f64,
        scheme: Option<ClusterScheme>,
        direction: Direction,
        provenance: Provenance,
    ) -> Option<&SweepPoint> {
        self.points.iter().find(|p| {
            (p.bbar - bbar).abs() <= 1e-9 * bbar.max(1.0)
                && p.scheme == scheme
                && p.direction == direction
                && p.provenance == provenance
        })
    }
}

/// Monte Carlo rates over `bbars`, keeping `λ_b` and scaling `R`. The
/// non-cooperative baselines do not depend on `B̄`; they are simulated once
/// and repeated at every point.
pub fn sweep(cfg: &TrialConfig, bbars: &[f64]) -> Result<SweepResult> {
    sweep_with(cfg, bbars, &SweepPlan::default())
}

pub fn sweep_with(cfg: &TrialConfig, bbars: &[f64], plan: &SweepPlan) -> Result<SweepResult> {
    cfg.validate()?;
    if bbars.iter().any(|b| !(*b > 0.0)) {
        return Err(Error::invalid("bbar", "all mean cluster sizes must be positive"));
    }
    let mut points = Vec::new();
    let base = if plan.baselines {
        Some(run_baselines(cfg)?)
    } else {
        None
    };
    for &b in bbars {
        let params = cfg.params.with_bbar(b)?;
        for &card in &plan.cardinalities {
            let c = TrialConfig {
                params,
                cardinality: card,
                ..*cfg
            };
            for &scheme in &plan.schemes {
                let results = run_scheme(&c, scheme)?;
                points.extend(summarize(b, &results, Some(scheme), card.provenance())?);
            }
        }
        if let Some(base) = &base {
            points.extend(base.iter().cloned().map(|mut p| {
                p.bbar = b;
                p
            }));
        }
    }
    Ok(SweepResult { points })
}

/// Baseline label for a provenance, if it is one.
pub fn baseline_of(p: Provenance) -> Option<Baseline> {
    match p {
        Provenance::SingleCell => Some(Baseline::SingleCell),
        Provenance::IsolatedCell => Some(Baseline::IsolatedCell),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(bbar: f64) -> TrialConfig {
        TrialConfig::new(NetworkParams::reference(bbar).unwrap(), 4, 7)
    }

    #[test]
    fn trials_are_deterministic() {
        let c = cfg(2.0);
        assert_eq!(
            run_user_centric_trial(&c, 3).unwrap(),
            run_user_centric_trial(&c, 3).unwrap()
        );
        assert_eq!(run_disjoint_trial(&c, 3).unwrap(), run_disjoint_trial(&c, 3).unwrap());
    }

    #[test]
    fn zf_nulls_intra_cluster_users() {
        for card in [ClusterCardinality::PoissonB, ClusterCardinality::FixedB] {
            let c = cfg(3.0).with_cardinality(card);
            for t in 0..3 {
                assert!(run_user_centric_trial(&c, t).unwrap().zf_residual < 1e-8);
                assert!(run_disjoint_trial(&c, t).unwrap().zf_residual < 1e-8);
            }
        }
    }

    #[test]
    fn baseline_records() {
        let r = run_baseline_trial(&cfg(2.0), 0).unwrap();
        assert_eq!(r.records.len(), 4);
        for d in Direction::BOTH {
            let sc = r.record(d, Provenance::SingleCell).unwrap();
            let iso = r.record(d, Provenance::IsolatedCell).unwrap();
            assert_eq!(iso.interference_power, 0.0);
            assert!(iso.rate >= sc.rate);
        }
    }

    #[test]
    fn stream_seeds_differ() {
        assert_ne!(stream_seed(1, 0, TAG_NETWORK), stream_seed(1, 1, TAG_NETWORK));
        assert_ne!(stream_seed(1, 0, TAG_NETWORK), stream_seed(1, 0, TAG_FADING));
    }
}
