//! Distance-dependent path loss, Rayleigh fading and stacked cluster channels.
//!
//! Fading for a (BS, user) link is a pure function of `(trial_seed, bs, user)`,
//! so the uplink and downlink of a trial see the same realization.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::rngs::SmallRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Cluster, Deployment, Point2D};

/// `β(r) = (1 + r/d0)^(-α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub d0: f64,
    pub alpha: f64,
}

impl PathLossModel {
    pub fn new(d0: f64, alpha: f64) -> Result<Self> {
        if !(d0 > 0.0) || !d0.is_finite() {
            return Err(Error::invalid("d0", "reference distance must be positive"));
        }
        if !(alpha > 2.0) || !alpha.is_finite() {
            return Err(Error::invalid("alpha", "path-loss exponent must exceed 2"));
        }
        Ok(Self { d0, alpha })
    }

    /// Model matching a loss of `intercept_db + slope_db·log10(d / 1 km)` dB far from the origin.
    pub fn from_db_law(intercept_db: f64, slope_db: f64) -> Result<Self> {
        let alpha = slope_db / 10.0;
        let d0 = 1000.0 * 10f64.powf(-intercept_db / slope_db);
        Self::new(d0, alpha)
    }

    /// Path-loss gain at distance `r`; fails for negative or non-finite `r`.
    pub fn path_loss(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::invalid("r", "distance must be non-negative"));
        }
        Ok(self.gain(r))
    }

    #[inline]
    pub fn gain(&self, r: f64) -> f64 {
        (1.0 + r / self.d0).powf(-self.alpha)
    }

    pub fn gain_between(&self, a: &Point2D, b: &Point2D) -> f64 {
        self.gain(a.dist(b))
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the fading of link (bs, user) in a trial.
pub fn channel_seed(trial_seed: u64, bs: usize, user: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(trial_seed) ^ bs as u64) ^ (user as u64).rotate_left(32))
}

/// `M` i.i.d. CN(0, 1) entries.
pub fn fading_vector(m: usize, seed: u64) -> DVector<Complex64> {
    let mut rng = SmallRng::seed_from_u64(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_fn(m, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(s * re, s * im)
    })
}

/// `g = √β·f` for one BS–user link.
pub fn draw_channel(model: &PathLossModel, bs: Point2D, user: Point2D, m: usize, seed: u64) -> DVector<Complex64> {
    let amp = model.gain_between(&bs, &user).sqrt();
    fading_vector(m, seed) * Complex64::new(amp, 0.0)
}

/// Source of link channels for one trial.
#[derive(Debug, Clone, Copy)]
pub struct ChannelDraw<'a> {
    pub bs_points: &'a [Point2D],
    pub user_points: &'a [Point2D],
    pub model: PathLossModel,
    pub m: usize,
    pub trial_seed: u64,
}

impl ChannelDraw<'_> {
    pub fn link(&self, bs: usize, user: usize) -> DVector<Complex64> {
        draw_channel(
            &self.model,
            self.bs_points[bs],
            self.user_points[user],
            self.m,
            channel_seed(self.trial_seed, bs, user),
        )
    }

    /// Stacked channel `[g_b,user]_{b ∈ bs_set}` of length `M·|bs_set|`.
    pub fn stacked(&self, bs_set: &[usize], user: usize) -> DVector<Complex64> {
        let m = self.m;
        let mut out = DVector::zeros(m * bs_set.len());
        for (k, &b) in bs_set.iter().enumerate() {
            out.rows_mut(k * m, m).copy_from(&self.link(b, user));
        }
        out
    }

    /// Columns are the stacked channels of `users` over `bs_set`.
    pub fn stacked_matrix(&self, bs_set: &[usize], users: &[usize]) -> DMatrix<Complex64> {
        let mut h = DMatrix::zeros(self.m * bs_set.len(), users.len());
        for (c, &u) in users.iter().enumerate() {
            h.set_column(c, &self.stacked(bs_set, u));
        }
        h
    }
}

/// Stacked channels seen by the typical user's cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub typical_user: usize,
    pub cluster_bs: Vec<usize>,
    pub h_ii: DVector<Complex64>,
    /// Intra-cluster users other than the typical one, in column order of `h_minus`.
    pub intra_users: Vec<usize>,
    pub h_minus: DMatrix<Complex64>,
    /// `(user, h_ij)` for every user outside the cluster.
    pub inter: Vec<(usize, DVector<Complex64>)>,
}

/// Assemble the channels between `cluster` and all scheduled users.
///
/// `serving[u]` is the BS that schedules user `u`. Users served by a cluster
/// member are intra-cluster; columns of `H_{-i}` are ordered by serving BS
/// index, then user index.
pub fn build_channel_set(
    dep: &Deployment,
    cluster: &Cluster,
    serving: &[usize],
    typical_user: usize,
    model: &PathLossModel,
    m: usize,
    seed: u64,
) -> Result<ChannelSet> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    if m == 0 {
        return Err(Error::invalid("m", "antenna count must be at least 1"));
    }
    if serving.len() != dep.user_points.len() || typical_user >= serving.len() {
        return Err(Error::Dimension(format!(
            "{} serving entries for {} users (typical user {})",
            serving.len(),
            dep.user_points.len(),
            typical_user
        )));
    }
    let mut bs_set = cluster.member_bs.clone();
    bs_set.sort_unstable();
    bs_set.dedup();
    let in_cluster = |b: usize| bs_set.binary_search(&b).is_ok();
    if !in_cluster(serving[typical_user]) {
        return Err(Error::Dimension(
            "typical user's serving BS is not a cluster member".into(),
        ));
    }

    let mut intra: Vec<usize> = (0..serving.len())
        .filter(|&u| u != typical_user && in_cluster(serving[u]))
        .collect();
    intra.sort_by_key(|&u| (serving[u], u));

    let draw = ChannelDraw {
        bs_points: &dep.bs_points,
        user_points: &dep.user_points,
        model: *model,
        m,
        trial_seed: seed,
    };
    let h_ii = draw.stacked(&bs_set, typical_user);
    let h_minus = draw.stacked_matrix(&bs_set, &intra);
    let inter = (0..serving.len())
        .filter(|&u| u != typical_user && !in_cluster(serving[u]))
        .map(|u| (u, draw.stacked(&bs_set, u)))
        .collect();
    Ok(ChannelSet {
        typical_user,
        cluster_bs: bs_set,
        h_ii,
        intra_users: intra,
        h_minus,
        inter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ClusterScheme, Window};

    fn reference_model() -> PathLossModel {
        PathLossModel::from_db_law(128.1, 37.6).unwrap()
    }

    #[test]
    fn reference_points() {
        let m = PathLossModel::new(0.392, 3.76).unwrap();
        assert_eq!(m.path_loss(0.0).unwrap(), 1.0);
        assert!((m.path_loss(0.392).unwrap() - 2f64.powf(-3.76)).abs() < 1e-15);
        assert!(m.path_loss(-1.0).is_err());
        assert!(PathLossModel::new(0.0, 3.0).is_err());
        assert!(PathLossModel::new(1.0, 2.0).is_err());
    }

    #[test]
    fn db_law_round_trip() {
        let m = reference_model();
        assert!((m.d0 - 0.3918).abs() < 1e-3);
        assert!((m.alpha - 3.76).abs() < 1e-12);
        // printed reference distance vs the dB law at 1 km
        let printed = PathLossModel::new(0.3920, 3.76).unwrap();
        let db = -10.0 * printed.path_loss(1000.0).unwrap().log10();
        assert!((db - 128.1).abs() < 0.1, "{db}");
    }

    #[test]
    fn seeds_are_link_specific() {
        assert_eq!(channel_seed(1, 2, 3), channel_seed(1, 2, 3));
        assert_ne!(channel_seed(1, 2, 3), channel_seed(1, 3, 2));
        assert_ne!(channel_seed(1, 2, 3), channel_seed(2, 2, 3));
        let a = fading_vector(4, 9);
        assert_eq!(a, fading_vector(4, 9));
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn channel_set_dimensions() {
        let dep = Deployment {
            bs_points: vec![
                Point2D::new(0.0, 0.0),
                Point2D::new(50.0, 0.0),
                Point2D::new(900.0, 0.0),
            ],
            user_points: (0..6).map(|i| Point2D::new(10.0 * i as f64, 5.0)).collect(),
            window: Window::centered_square(1000.0).unwrap(),
            bs_intensity: 1e-6,
            user_intensity: 2e-6,
        };
        let serving = [0, 0, 1, 1, 2, 2];
        let cluster = Cluster {
            member_bs: vec![1, 0],
            center: dep.user_points[0],
            radius: 100.0,
            scheme: ClusterScheme::UserCentric,
        };
        let cs = build_channel_set(&dep, &cluster, &serving, 0, &reference_model(), 4, 7).unwrap();
        assert_eq!(cs.h_ii.len(), 8);
        assert_eq!(cs.h_minus.shape(), (8, 3));
        assert_eq!(cs.intra_users, vec![1, 2, 3]);
        assert_eq!(cs.inter.len(), 2);
        // block b of h_ij is the per-link draw
        let (u, h) = &cs.inter[1];
        let g = draw_channel(
            &reference_model(),
            dep.bs_points[1],
            dep.user_points[*u],
            4,
            channel_seed(7, 1, *u),
        );
        assert_eq!(h.rows(4, 4).clone_owned(), g);

        let single = Cluster {
            member_bs: vec![2],
            ..cluster.clone()
        };
        let serving1 = [0, 0, 1, 1, 2, 0];
        let cs = build_channel_set(&dep, &single, &serving1, 4, &reference_model(), 4, 7).unwrap();
        assert_eq!(cs.h_minus.ncols(), 0);
        let empty = Cluster {
            member_bs: vec![],
            ..cluster
        };
        assert_eq!(
            build_channel_set(&dep, &empty, &serving, 0, &reference_model(), 4, 7),
            Err(Error::EmptyCluster)
        );
    }
}
