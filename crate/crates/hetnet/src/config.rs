//! JSON network configuration with dB/dBm fields, converted to linear on load.

use std::path::Path;

use hetnet_core::units::{db_to_linear, dbm_to_watts, deg_to_rad, free_space_intercept, noise_power_watts, THERMAL_NOISE_DBM_HZ};
use hetnet_core::{AntennaPattern, BallSpec, Band, FadingConfig, NetworkConfig, TierConfig};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaFile {
    pub main_db: f64,
    pub side_db: f64,
    pub beamwidth_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandFile {
    Mmwave,
    Microwave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallFile {
    pub radius_m: f64,
    pub los_prob: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    /// Defaults to the free-space loss at 1 m for the tier's carrier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_los_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_nlos_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierFile {
    pub density_per_m2: f64,
    pub tx_power_dbm: f64,
    #[serde(default)]
    pub bias_db: f64,
    pub balls: Vec<BallFile>,
    pub noise_figure_db: f64,
    #[serde(default)]
    pub static_power_w: f64,
    #[serde(default = "one")]
    pub amp_slope: f64,
    #[serde(default = "mmwave")]
    pub band: BandFile,
    /// Overrides the network carrier for this tier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_hz: Option<f64>,
    /// Overrides the network bandwidth for this tier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
}

fn one() -> f64 {
    1.0
}

fn mmwave() -> BandFile {
    BandFile::Mmwave
}

fn thermal() -> f64 {
    THERMAL_NOISE_DBM_HZ
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingFile {
    pub n_los: u32,
    pub n_nlos: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tiers: Vec<TierFile>,
    pub ue_density_per_m2: f64,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    #[serde(default = "thermal")]
    pub noise_psd_dbm_hz: f64,
    pub antenna: AntennaFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_antenna: Option<AntennaFile>,
    pub fading: FadingFile,
}

fn to_pattern(a: &AntennaFile) -> Result<AntennaPattern, Error> {
    Ok(AntennaPattern::new(
        db_to_linear(a.main_db),
        db_to_linear(a.side_db),
        deg_to_rad(a.beamwidth_deg),
    )?)
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }

    /// Converts to the linear-scale model and validates it.
    pub fn to_network(&self) -> Result<NetworkConfig, Error> {
        let pattern = to_pattern(&self.antenna)?;
        let mu_pattern = self.mu_antenna.as_ref().map(to_pattern).transpose()?;
        let tiers = self
            .tiers
            .iter()
            .map(|t| {
                let carrier = t.carrier_hz.unwrap_or(self.carrier_hz);
                let bandwidth = t.bandwidth_hz.unwrap_or(self.bandwidth_hz);
                let default_kappa = free_space_intercept(carrier);
                let band = match t.band {
                    BandFile::Mmwave => Band::MmWave,
                    BandFile::Microwave => Band::Microwave,
                };
                let bs_gain = match (band, &mu_pattern) {
                    (Band::Microwave, Some(mu)) => mu.main_gain,
                    _ => pattern.main_gain,
                };
                TierConfig {
                    density: t.density_per_m2,
                    tx_power: dbm_to_watts(t.tx_power_dbm),
                    bias: db_to_linear(t.bias_db),
                    balls: t
                        .balls
                        .iter()
                        .map(|b| BallSpec {
                            radius: b.radius_m,
                            los_prob: b.los_prob,
                            alpha_los: b.alpha_los,
                            alpha_nlos: b.alpha_nlos,
                            kappa_los: b.kappa_los_db.map_or(default_kappa, db_to_linear),
                            kappa_nlos: b.kappa_nlos_db.map_or(default_kappa, db_to_linear),
                        })
                        .collect(),
                    noise_power: noise_power_watts(self.noise_psd_dbm_hz, bandwidth, t.noise_figure_db),
                    static_power: t.static_power_w,
                    amp_slope: t.amp_slope,
                    band,
                    serving_gain: bs_gain * pattern.main_gain,
                    bandwidth: t.bandwidth_hz,
                }
            })
            .collect();
        let cfg = NetworkConfig {
            tiers,
            ue_density: self.ue_density_per_m2,
            bandwidth: self.bandwidth_hz,
            pattern,
            mu_pattern,
            fading: FadingConfig {
                n_los: self.fading.n_los,
                n_nlos: self.fading.n_nlos,
            },
        };
        Ok(cfg.validated()?)
    }
}


/// Loads and validates a configuration file.
pub fn load_network(path: &Path) -> Result<(ConfigFile, NetworkConfig), Error> {
    let file = ConfigFile::load(path)?;
    let cfg = file.to_network()?;
    Ok((file, cfg))
}

/// The bundled three-tier 28 GHz scenario.
pub const TABLE1_JSON: &str = include_str!("../data/table1.json");

/// The bundled microwave / mmWave hybrid scenario.
pub const HYBRID_JSON: &str = include_str!("../data/hybrid.json");

pub fn table1() -> NetworkConfig {
    ConfigFile::parse(TABLE1_JSON).and_then(|f| f.to_network()).expect("bundled table1.json is valid")
}

pub fn hybrid() -> NetworkConfig {
    ConfigFile::parse(HYBRID_JSON).and_then(|f| f.to_network()).expect("bundled hybrid.json is valid")
}
