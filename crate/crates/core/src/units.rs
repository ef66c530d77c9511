//! dB / linear conversions and the free-space conventions used by the
//! configuration layer.

use core::f64::consts::PI;

/// Speed of light used for the free-space intercept, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

/// Thermal noise power spectral density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * libm::log10(x)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

/// Free-space path loss at 1 m, `(4 pi f / c)^2`, as a linear loss (> 1 for
/// any carrier above ~24 MHz).
pub fn free_space_intercept(carrier_hz: f64) -> f64 {
    let k = 4.0 * PI * carrier_hz / SPEED_OF_LIGHT;
    k * k
}

/// Noise power in watts for `psd_dbm_hz + 10 log10(bandwidth) + noise_figure`.
pub fn noise_power_watts(psd_dbm_hz: f64, bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    dbm_to_watts(psd_dbm_hz + 10.0 * libm::log10(bandwidth_hz) + noise_figure_db)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        for db in [-174.0, -30.0, -10.0, 0.0, 3.0, 10.0, 53.0, 61.4] {
            let back = linear_to_db(db_to_linear(db));
            assert!((back - db).abs() <= 1e-12 * db.abs().max(1.0), "{db} -> {back}");
        }
    }

    #[test]
    fn dbm_reference_points() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(53.0) - 199.526_231_496_887_9).abs() < 1e-9);
        assert!((watts_to_dbm(0.2) - 23.010_299_956_639_81).abs() < 1e-12);
    }

    #[test]
    fn intercept_at_28ghz_is_about_61_4_db() {
        let db = linear_to_db(free_space_intercept(28e9));
        assert!((db - 61.39).abs() < 0.01, "{db}");
    }

    #[test]
    fn table_noise_row() {
        // -174 dBm/Hz + 90 dB + 10 dB = -74 dBm
        let n = noise_power_watts(THERMAL_NOISE_DBM_HZ, 1e9, 10.0);
        assert!((watts_to_dbm(n) + 74.0).abs() < 1e-9);
    }
}
