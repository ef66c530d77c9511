//! Analytic coverage, association and energy-efficiency models for K-tier
//! heterogeneous millimeter-wave downlink networks.
//!
//! Base stations of each tier form a homogeneous Poisson point process. Links
//! are LOS, NLOS or in outage according to a D-ball blockage model, antennas
//! follow a sectored (main lobe / side lobe) pattern and small-scale fading is
//! Nakagami. The crate evaluates:
//!
//! * the path-loss intensity measures of each tier ([`intensity`]),
//! * biased association probabilities ([`association`]),
//! * SINR / SNR coverage, including the closed form for exponents (2, 4),
//!   beam-misalignment averaging and the hybrid microwave/mmWave network
//!   ([`coverage`]),
//! * rate coverage, area spectral efficiency and energy efficiency
//!   ([`metrics`]),
//! * and a drop-based simulator of the same system model ([`sim`]) used as an
//!   independent oracle for all of the above.
//!
//! Everything is linear scale internally; [`units`] holds the dB helpers.
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod association;
pub mod coverage;
mod error;
pub mod intensity;
pub mod metrics;
pub mod model;
pub mod quadrature;
pub mod sim;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use model::{
    AntennaPattern, Band, BallSpec, FadingConfig, LinkState, NetworkConfig, TierConfig,
};
