//! Link budget, unit conversions and the parameter set shared by the analytic
//! engine and the simulator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::PathLossModel;
use crate::zfbf::Direction;

/// Hexagonal-equivalent BS density for a 500 m inter-site distance, in BS/m².
pub const DEFAULT_BS_INTENSITY: f64 = 4.618_802_153_517_006e-6;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Hexagonal-lattice BS density for a given inter-site distance.
pub fn intensity_from_isd(isd_m: f64) -> f64 {
    2.0 / (3f64.sqrt() * isd_m * isd_m)
}

/// Radio parameters at the system boundary, in engineering units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkBudget {
    pub dl_beam_power_dbm: f64,
    pub ul_user_power_dbm: f64,
    pub bandwidth_mhz: f64,
    pub noise_psd_dbm_per_hz: f64,
    pub noise_figure_db: f64,
    pub sinr_gap_db: f64,
    pub pathloss_intercept_db: f64,
    pub pathloss_slope_db: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            dl_beam_power_dbm: 40.0,
            ul_user_power_dbm: 23.0,
            bandwidth_mhz: 20.0,
            noise_psd_dbm_per_hz: -174.0,
            noise_figure_db: 9.0,
            sinr_gap_db: 3.0,
            pathloss_intercept_db: 128.1,
            pathloss_slope_db: 37.6,
        }
    }
}

/// Everything the engines need, in normalized linear units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearBudget {
    pub sigma2_ul: f64,
    pub sigma2_dl: f64,
    pub sinr_gap: f64,
    pub model: PathLossModel,
}

impl LinkBudget {
    /// Receiver noise power in dBm over the configured bandwidth.
    pub fn noise_dbm(&self) -> f64 {
        self.noise_psd_dbm_per_hz + linear_to_db(self.bandwidth_mhz * 1e6) + self.noise_figure_db
    }

    /// The single place where boundary units become engine units: noise powers
    /// normalized by the transmit power of each direction, the SINR gap as a
    /// linear factor and the path-loss law as `(d0, α)`.
    pub fn to_linear(&self) -> Result<LinearBudget> {
        if !(self.bandwidth_mhz > 0.0) {
            return Err(Error::invalid("bandwidth_mhz", "must be positive"));
        }
        if !(self.pathloss_slope_db > 20.0) {
            return Err(Error::invalid(
                "pathloss_slope_db",
                "must exceed 20 dB/decade (exponent > 2)",
            ));
        }
        let noise = self.noise_dbm();
        Ok(LinearBudget {
            sigma2_ul: db_to_linear(noise - self.ul_user_power_dbm),
            sigma2_dl: db_to_linear(noise - self.dl_beam_power_dbm),
            sinr_gap: db_to_linear(self.sinr_gap_db),
            model: PathLossModel::from_db_law(self.pathloss_intercept_db, self.pathloss_slope_db)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// BS intensity λ_b in BS/m².
    pub lambda_b: f64,
    /// Cluster radius R in meters.
    pub radius: f64,
    pub m: usize,
    pub k: usize,
    pub model: PathLossModel,
    pub sigma2_ul: f64,
    pub sigma2_dl: f64,
    /// Linear SINR gap; rates are `log2(1 + SINR/gap)`.
    pub sinr_gap: f64,
}

impl NetworkParams {
    pub fn from_budget(lambda_b: f64, bbar: f64, m: usize, k: usize, budget: &LinkBudget) -> Result<Self> {
        let lin = budget.to_linear()?;
        let p = Self {
            lambda_b,
            radius: radius_for_bbar(bbar, lambda_b)?,
            m,
            k,
            model: lin.model,
            sigma2_ul: lin.sigma2_ul,
            sigma2_dl: lin.sigma2_dl,
            sinr_gap: lin.sinr_gap,
        };
        p.validate()?;
        Ok(p)
    }

    /// Reference setup (M = 4, K = 2 and the default link budget) at the default density.
    pub fn reference(bbar: f64) -> Result<Self> {
        Self::from_budget(DEFAULT_BS_INTENSITY, bbar, 4, 2, &LinkBudget::default())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_b > 0.0) || !self.lambda_b.is_finite() {
            return Err(Error::invalid("lambda_b", "BS intensity must be positive"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::invalid("radius", "cluster radius must be positive"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k", "at least one user per BS must be scheduled"));
        }
        if self.k >= self.m {
            return Err(Error::invalid("k", "loading factor must satisfy K < M"));
        }
        if !(self.sigma2_ul > 0.0 && self.sigma2_dl > 0.0) {
            return Err(Error::invalid("sigma2", "noise powers must be positive"));
        }
        if !(self.sinr_gap >= 1.0) {
            return Err(Error::invalid("sinr_gap", "SINR gap must be at least 0 dB"));
        }
        PathLossModel::new(self.model.d0, self.model.alpha)?;
        Ok(())
    }

    /// Mean cluster size `B̄ = λ_b π R²`.
    pub fn bbar(&self) -> f64 {
        self.lambda_b * std::f64::consts::PI * self.radius * self.radius
    }

    pub fn lambda_u(&self) -> f64 {
        self.k as f64 * self.lambda_b
    }

    pub fn with_bbar(mut self, bbar: f64) -> Result<Self> {
        self.radius = radius_for_bbar(bbar, self.lambda_b)?;
        Ok(self)
    }

    pub fn sigma2(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Uplink => self.sigma2_ul,
            Direction::Downlink => self.sigma2_dl,
        }
    }
}

/// `R = √(B̄ / (λ_b π))`.
pub fn radius_for_bbar(bbar: f64, lambda_b: f64) -> Result<f64> {
    if !(bbar > 0.0) || !bbar.is_finite() {
        return Err(Error::invalid("bbar", "mean cluster size must be positive"));
    }
    if !(lambda_b > 0.0) {
        return Err(Error::invalid("lambda_b", "BS intensity must be positive"));
    }
    Ok((bbar / (lambda_b * std::f64::consts::PI)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_conversions() {
        let b = LinkBudget::default();
        assert!((b.noise_dbm() - (-91.9897)).abs() < 1e-3);
        let lin = b.to_linear().unwrap();
        assert!((linear_to_db(lin.sigma2_dl) - (-131.9897)).abs() < 1e-3);
        assert!((linear_to_db(lin.sigma2_ul) - (-114.9897)).abs() < 1e-3);
        assert!((lin.sinr_gap - 1.995_262_3).abs() < 1e-6);
        assert!((db_to_linear(linear_to_db(7.5)) - 7.5).abs() < 1e-12);
    }

    #[test]
    fn default_density_is_500m_hex() {
        assert!((intensity_from_isd(500.0) - DEFAULT_BS_INTENSITY).abs() < 1e-18);
    }

    #[test]
    fn bbar_round_trip_and_validation() {
        let p = NetworkParams::reference(6.0).unwrap();
        assert!((p.bbar() - 6.0).abs() < 1e-12);
        assert_eq!(p.lambda_u(), 2.0 * p.lambda_b);
        let mut bad = p;
        bad.k = 4;
        assert_eq!(
            bad.validate(),
            Err(Error::invalid("k", "loading factor must satisfy K < M"))
        );
        assert!(radius_for_bbar(-1.0, 1.0).is_err());
    }
}
