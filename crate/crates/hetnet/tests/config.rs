use hetnet::config::{hybrid, table1, ConfigFile, TABLE1_JSON};
use hetnet_core::metrics::EnergyReport;
use hetnet_core::model::LosProbability;
use hetnet_core::units::{dbm_to_watts, linear_to_db, watts_to_dbm};
use hetnet_core::{Band, LinkState};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn free_space_intercept_and_noise() {
    let cfg = table1();
    for t in &cfg.tiers {
        assert!(close(linear_to_db(t.balls[0].kappa_los), 61.39, 0.01));
        assert!(close(linear_to_db(t.balls[0].kappa_nlos), 61.39, 0.01));
        assert!(close(watts_to_dbm(t.noise_power), -74.0, 1e-9));
    }
}

#[test]
fn hybrid_microwave_tier() {
    let cfg = hybrid();
    let t = &cfg.tiers[0];
    assert_eq!(t.band, Band::Microwave);
    assert!(close(linear_to_db(t.balls[0].kappa_los), 38.47, 0.01));
    assert!(close(watts_to_dbm(t.noise_power), -91.0, 0.02));
    assert!(cfg.tiers[1..].iter().all(|t| t.band == Band::MmWave));
}

#[test]
fn sectored_gain_pmf() {
    let pmf = table1().pattern.gain_pmf();
    let want = [0.006944, 0.152778, 0.840278];
    for (a, w) in pmf.iter().zip(want) {
        assert!(close(a.prob, w, 1e-6), "{} vs {w}", a.prob);
    }
    assert!(close(pmf[0].gain, 100.0, 1e-9));
    assert!(close(pmf[1].gain, 1.0, 1e-12));
    assert!(close(pmf[2].gain, 0.01, 1e-14));
}

#[test]
fn los_probability_by_ball() {
    let cfg = table1();
    let macro_tier = &cfg.tiers[0];
    let p = |r| match macro_tier.los_probability(r) {
        LosProbability::Ball { los_prob, .. } => Some(los_prob),
        LosProbability::Outage => None,
    };
    assert_eq!(p(30.0), Some(0.8));
    assert_eq!(p(50.0), Some(0.2));
    assert_eq!(p(100.0), Some(0.2));
    assert_eq!(p(250.0), None);
    let kappa = macro_tier.balls[0].kappa_los;
    let pl = macro_tier.path_loss(0, LinkState::Los, 30.0).unwrap();
    assert!(close(pl / (kappa * 900.0), 1.0, 1e-12));
}

#[test]
fn energy_denominators() {
    let cfg = table1();
    let report = EnergyReport::from_coverage(&cfg, &[1.0; 3], &[1.0; 3]);
    let want = [
        (1e-5, 130.0 + 4.0 * dbm_to_watts(53.0)),
        (1e-4, 10.0 + 6.0 * dbm_to_watts(33.0)),
        (5e-4, 5.0 + 8.0 * dbm_to_watts(23.0)),
    ];
    for (t, (density, per_bs)) in report.tiers.iter().zip(want) {
        assert!(close(t.average_power, density * per_bs, 1e-12));
    }
}

#[test]
fn invalid_field_names_the_tier() {
    let mut file = ConfigFile::parse(TABLE1_JSON).unwrap();
    file.tiers[1].balls[0].los_prob = 1.5;
    let msg = file.to_network().unwrap_err().to_string();
    assert!(msg.contains("tier 2"), "{msg}");
    assert!(msg.contains("los_prob"), "{msg}");
}

#[test]
fn unknown_field_rejected() {
    let text = TABLE1_JSON.replacen("\"carrier_hz\"", "\"carier_hz\": 1, \"carrier_hz\"", 1);
    let err = ConfigFile::parse(&text).unwrap_err().to_string();
    assert!(err.contains("carier_hz"), "{err}");
}

#[test]
fn json_round_trip() {
    let file = ConfigFile::parse(TABLE1_JSON).unwrap();
    let again = ConfigFile::parse(&serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(file, again);
    assert_eq!(file.to_network().unwrap(), again.to_network().unwrap());
}
