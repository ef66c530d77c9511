#![allow(dead_code)]

use hetnet_core::units::{db_to_linear, dbm_to_watts, free_space_intercept, noise_power_watts};
use hetnet_core::{AntennaPattern, BallSpec, Band, FadingConfig, NetworkConfig, TierConfig};
use proptest::prelude::*;

pub fn ball(radius: f64, los_prob: f64, kappa: f64) -> BallSpec {
    BallSpec {
        radius,
        los_prob,
        alpha_los: 2.0,
        alpha_nlos: 4.0,
        kappa_los: kappa,
        kappa_nlos: kappa,
    }
}

/// The three-tier 28 GHz reference network, built directly in linear units.
pub fn table1() -> NetworkConfig {
    let kappa = free_space_intercept(28e9);
    let noise = noise_power_watts(-174.0, 1e9, 10.0);
    let pattern = AntennaPattern::new(db_to_linear(10.0), db_to_linear(-10.0), 30f64.to_radians()).unwrap();
    let tier = |density: f64, dbm: f64, r: [f64; 2], beta: [f64; 2], p0: f64, slope: f64| TierConfig {
        density,
        tx_power: dbm_to_watts(dbm),
        bias: 1.0,
        balls: vec![ball(r[0], beta[0], kappa), ball(r[1], beta[1], kappa)],
        noise_power: noise,
        static_power: p0,
        amp_slope: slope,
        band: Band::MmWave,
        serving_gain: pattern.main_gain * pattern.main_gain,
        bandwidth: None,
    };
    NetworkConfig {
        tiers: vec![
            tier(1e-5, 53.0, [50.0, 200.0], [0.8, 0.2], 130.0, 4.0),
            tier(1e-4, 33.0, [40.0, 60.0], [1.0, 0.0], 10.0, 6.0),
            tier(5e-4, 23.0, [20.0, 40.0], [1.0, 0.0], 5.0, 8.0),
        ],
        ue_density: 1e-3,
        bandwidth: 1e9,
        pattern,
        mu_pattern: None,
        fading: FadingConfig { n_los: 3, n_nlos: 2 },
    }
    .validated()
    .unwrap()
}

prop_compose! {
    pub fn arb_ball()(step in 5.0..120.0f64, beta in 0.0..=1.0f64, al in 1.8..3.0f64, an in 2.5..5.0f64,
                      kl in 0.0..70.0f64, kn in 0.0..70.0f64) -> (f64, BallSpec) {
        (step, BallSpec { radius: 0.0, los_prob: beta, alpha_los: al, alpha_nlos: an,
                          kappa_los: db_to_linear(kl), kappa_nlos: db_to_linear(kn) })
    }
}

prop_compose! {
    pub fn arb_tier()(density in 1e-5..1e-3f64, power in 0.01..50.0f64, bias_db in -10.0..10.0f64,
                      balls in prop::collection::vec(arb_ball(), 1..=3), noise_dbm in -100.0..-60.0f64)
                      -> TierConfig {
        let mut r = 0.0;
        let balls = balls.into_iter().map(|(step, mut b)| { r += step; b.radius = r; b }).collect();
        TierConfig {
            density,
            tx_power: power,
            bias: db_to_linear(bias_db),
            balls,
            noise_power: dbm_to_watts(noise_dbm),
            static_power: 10.0,
            amp_slope: 4.0,
            band: Band::MmWave,
            serving_gain: 100.0,
            bandwidth: None,
        }
    }
}

prop_compose! {
    pub fn arb_network()(tiers in prop::collection::vec(arb_tier(), 1..=3), n_los in 1u32..=4, n_nlos in 1u32..=4,
                         theta in 0.1..std::f64::consts::TAU, main_db in 0.0..20.0f64) -> NetworkConfig {
        NetworkConfig {
            tiers,
            ue_density: 1e-3,
            bandwidth: 1e9,
            pattern: AntennaPattern::new(db_to_linear(main_db), 0.1, theta).unwrap(),
            mu_pattern: None,
            fading: FadingConfig { n_los, n_nlos },
        }
    }
}
