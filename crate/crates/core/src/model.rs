//! Configuration types, the sectored antenna-gain distribution and the D-ball
//! link-state / path-loss primitives shared by the analytic and simulated
//! paths. All quantities are linear scale (watts, linear gains, meters).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::special::MAX_FADING_ORDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkState {
    Los,
    Nlos,
    Outage,
}

impl LinkState {
    /// The two propagating states, in the order used for every per-state table.
    pub const PROPAGATING: [LinkState; 2] = [LinkState::Los, LinkState::Nlos];

    /// Index into `[LOS, NLOS]` tables; `None` for outage.
    pub fn index(self) -> Option<usize> {
        match self {
            LinkState::Los => Some(0),
            LinkState::Nlos => Some(1),
            LinkState::Outage => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LinkState::Los => "LOS",
            LinkState::Nlos => "NLOS",
            LinkState::Outage => "OUTAGE",
        }
    }
}

/// Two-level sectored antenna: gain `main_gain` over `beam_width` radians,
/// `side_gain` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub main_gain: f64,
    pub side_gain: f64,
    pub beam_width: f64,
}

/// One atom of a discrete gain distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainAtom {
    pub gain: f64,
    pub prob: f64,
}

impl AntennaPattern {
    pub fn new(main_gain: f64, side_gain: f64, beam_width: f64) -> Result<Self> {
        let p = AntennaPattern {
            main_gain,
            side_gain,
            beam_width,
        };
        p.validate("antenna")?;
        Ok(p)
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        if !(self.side_gain > 0.0 && self.side_gain.is_finite()) {
            return Err(invalid(None, field, format!("side-lobe gain must be positive, got {}", self.side_gain)));
        }
        if !(self.main_gain >= self.side_gain && self.main_gain.is_finite()) {
            return Err(invalid(
                None,
                field,
                format!("main-lobe gain {} below side-lobe gain {}", self.main_gain, self.side_gain),
            ));
        }
        if !(self.beam_width > 0.0 && self.beam_width <= 2.0 * PI) {
            return Err(invalid(None, field, format!("beam width {} outside (0, 2pi]", self.beam_width)));
        }
        Ok(())
    }

    /// Probability that a uniformly oriented beam covers a given direction.
    pub fn main_lobe_fraction(&self) -> f64 {
        self.beam_width / (2.0 * PI)
    }

    /// Gain between a uniformly oriented interferer and the receiver when
    /// both ends use this pattern: `(MM, q^2), (Mm, 2q(1-q)), (mm, (1-q)^2)`
    /// with `q = theta / 2pi`.
    pub fn gain_pmf(&self) -> [GainAtom; 3] {
        let q = self.main_lobe_fraction();
        let (big, small) = (self.main_gain, self.side_gain);
        [
            GainAtom {
                gain: big * big,
                prob: q * q,
            },
            GainAtom {
                gain: big * small,
                prob: 2.0 * q * (1.0 - q),
            },
            GainAtom {
                gain: small * small,
                prob: (1.0 - q) * (1.0 - q),
            },
        ]
    }

    /// Gain of the aligned link, `M * M`.
    pub fn aligned_gain(&self) -> f64 {
        self.main_gain * self.main_gain
    }
}

/// Gain pmf for a link whose two ends use different patterns (independent
/// uniform orientations). Reduces to [`AntennaPattern::gain_pmf`] when the
/// patterns coincide, except that `Mm` and `mM` stay separate atoms.
pub fn link_gain_pmf(bs: &AntennaPattern, ue: &AntennaPattern) -> Vec<GainAtom> {
    let (qb, qu) = (bs.main_lobe_fraction(), ue.main_lobe_fraction());
    let mut atoms = Vec::with_capacity(4);
    for (gb, pb) in [(bs.main_gain, qb), (bs.side_gain, 1.0 - qb)] {
        for (gu, pu) in [(ue.main_gain, qu), (ue.side_gain, 1.0 - qu)] {
            atoms.push(GainAtom {
                gain: gb * gu,
                prob: pb * pu,
            });
        }
    }
    atoms
}

/// Nakagami orders for LOS and NLOS links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FadingConfig {
    pub n_los: u32,
    pub n_nlos: u32,
}

impl FadingConfig {
    pub fn order(&self, state: LinkState) -> u32 {
        match state {
            LinkState::Los => self.n_los,
            LinkState::Nlos => self.n_nlos,
            LinkState::Outage => panic!("no fading order for the outage state"),
        }
    }

    /// Rayleigh fading on every link.
    pub fn rayleigh() -> Self {
        FadingConfig { n_los: 1, n_nlos: 1 }
    }
}

/// One annulus of the D-ball model: LOS with probability `los_prob` inside
/// `[previous radius, radius)`, each state with its own `kappa * r^alpha`
/// path-loss law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub radius: f64,
    pub los_prob: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub kappa_los: f64,
    pub kappa_nlos: f64,
}

impl BallSpec {
    pub fn alpha(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.alpha_los,
            LinkState::Nlos => self.alpha_nlos,
            LinkState::Outage => f64::NAN,
        }
    }

    pub fn kappa(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.kappa_los,
            LinkState::Nlos => self.kappa_nlos,
            LinkState::Outage => f64::NAN,
        }
    }

    /// Thinning weight of the state inside this ball: `beta` or `1 - beta`.
    pub fn weight(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.los_prob,
            LinkState::Nlos => 1.0 - self.los_prob,
            LinkState::Outage => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    MmWave,
    Microwave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierConfig {
    /// Base stations per square meter.
    pub density: f64,
    /// Transmit power, watts.
    pub tx_power: f64,
    /// Association bias, linear.
    pub bias: f64,
    /// Balls with strictly increasing radii; links beyond the last are in outage.
    pub balls: Vec<BallSpec>,
    /// Noise power, watts.
    pub noise_power: f64,
    /// Static power per base station, watts.
    pub static_power: f64,
    /// Power-amplifier slope (inverse efficiency).
    pub amp_slope: f64,
    pub band: Band,
    /// Antenna gain of the intended link (`MM`, or `M_mu * M` on microwave).
    pub serving_gain: f64,
    /// Bandwidth used by this tier when it differs from the network default, Hz.
    pub bandwidth: Option<f64>,
}

/// Result of looking up the ball that contains a distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosProbability {
    Ball { index: usize, los_prob: f64 },
    Outage,
}

impl TierConfig {
    pub fn outage_radius(&self) -> f64 {
        self.balls.last().map_or(0.0, |b| b.radius)
    }

    /// Index of the ball whose half-open annulus `[R_{d-1}, R_d)` contains `r`.
    pub fn ball_index(&self, r: f64) -> Option<usize> {
        self.balls.iter().position(|b| r < b.radius)
    }

    pub fn inner_radius(&self, d: usize) -> f64 {
        if d == 0 {
            0.0
        } else {
            self.balls[d - 1].radius
        }
    }

    pub fn los_probability(&self, r: f64) -> LosProbability {
        match self.ball_index(r) {
            Some(index) => LosProbability::Ball {
                index,
                los_prob: self.balls[index].los_prob,
            },
            None => LosProbability::Outage,
        }
    }

    /// `kappa_d^s * r^(alpha_d^s)` for ball `d` (zero-based) and state `s`.
    pub fn path_loss(&self, d: usize, state: LinkState, r: f64) -> Result<f64> {
        if state == LinkState::Outage {
            return Err(Error::Precondition("path loss is undefined in the outage state".into()));
        }
        let ball = self
            .balls
            .get(d)
            .ok_or_else(|| Error::Precondition(format!("ball index {d} out of range")))?;
        Ok(ball.kappa(state) * libm::pow(r, ball.alpha(state)))
    }

    /// Average biased received power scale `P * G * B` used by association.
    pub fn biased_power(&self) -> f64 {
        self.tx_power * self.serving_gain * self.bias
    }

    /// Expected number of base stations inside the outage radius.
    pub fn mean_count(&self) -> f64 {
        let r = self.outage_radius();
        PI * self.density * r * r
    }

    fn validate(&self, k: usize) -> Result<()> {
        let t = Some(k);
        let positive = |v: f64, field: &'static str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(t, field, format!("must be positive and finite, got {v}")))
            }
        };
        positive(self.density, "density")?;
        positive(self.tx_power, "tx_power")?;
        positive(self.bias, "bias")?;
        positive(self.noise_power, "noise_power")?;
        positive(self.serving_gain, "serving_gain")?;
        if let Some(w) = self.bandwidth {
            positive(w, "bandwidth")?;
        }
        if !(self.static_power >= 0.0 && self.static_power.is_finite()) {
            return Err(invalid(t, "static_power", format!("must be nonnegative, got {}", self.static_power)));
        }
        if !(self.amp_slope >= 1.0 && self.amp_slope.is_finite()) {
            return Err(invalid(t, "amp_slope", format!("must be at least 1, got {}", self.amp_slope)));
        }
        if self.balls.is_empty() {
            return Err(invalid(t, "balls", "at least one ball is required"));
        }
        let mut prev = 0.0;
        for (d, b) in self.balls.iter().enumerate() {
            if !(b.radius > prev && b.radius.is_finite()) {
                return Err(invalid(
                    t,
                    "balls.radius",
                    format!("radii must be positive and strictly increasing; ball {} has {} after {}", d + 1, b.radius, prev),
                ));
            }
            prev = b.radius;
            if !(0.0..=1.0).contains(&b.los_prob) {
                return Err(invalid(t, "balls.los_prob", format!("ball {}: {} is not a probability", d + 1, b.los_prob)));
            }
            for (v, field) in [
                (b.alpha_los, "balls.alpha_los"),
                (b.alpha_nlos, "balls.alpha_nlos"),
                (b.kappa_los, "balls.kappa_los"),
                (b.kappa_nlos, "balls.kappa_nlos"),
            ] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(t, field, format!("ball {}: must be positive, got {}", d + 1, v)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub tiers: Vec<TierConfig>,
    /// UEs per square meter.
    pub ue_density: f64,
    /// Default bandwidth, Hz.
    pub bandwidth: f64,
    /// mmWave pattern (base stations and UEs).
    pub pattern: AntennaPattern,
    /// Base-station pattern of the microwave tier in a hybrid network.
    pub mu_pattern: Option<AntennaPattern>,
    pub fading: FadingConfig,
}

impl NetworkConfig {
    /// Checks every invariant and returns the config unchanged.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tiers.is_empty() {
            return Err(invalid(None, "tiers", "at least one tier is required"));
        }
        if !(self.ue_density > 0.0 && self.ue_density.is_finite()) {
            return Err(invalid(None, "ue_density", format!("must be positive, got {}", self.ue_density)));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(invalid(None, "bandwidth", format!("must be positive, got {}", self.bandwidth)));
        }
        self.pattern.validate("antenna")?;
        if let Some(mu) = &self.mu_pattern {
            mu.validate("mu_antenna")?;
        }
        for (field, n) in [("fading.n_los", self.fading.n_los), ("fading.n_nlos", self.fading.n_nlos)] {
            if !(1..=MAX_FADING_ORDER).contains(&n) {
                return Err(invalid(None, field, format!("Nakagami order must be in 1..={MAX_FADING_ORDER}, got {n}")));
            }
        }
        for (k, t) in self.tiers.iter().enumerate() {
            t.validate(k)?;
        }
        if self.is_hybrid() {
            if self.tiers[0].band != Band::Microwave || self.tiers[1..].iter().any(|t| t.band != Band::MmWave) {
                return Err(invalid(
                    None,
                    "band",
                    "a hybrid network needs tier 1 on microwave and every other tier on mmWave",
                ));
            }
            if self.mu_pattern.is_none() {
                return Err(invalid(Some(0), "mu_antenna", "microwave tier requires a microwave antenna pattern"));
            }
        }
        Ok(())
    }

    pub fn num_tiers(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_hybrid(&self) -> bool {
        self.tiers.iter().any(|t| t.band == Band::Microwave)
    }

    /// Gain distribution of an interfering link from tier `j`.
    pub fn interferer_gain_pmf(&self, j: usize) -> Vec<GainAtom> {
        match (self.tiers[j].band, &self.mu_pattern) {
            (Band::Microwave, Some(mu)) => link_gain_pmf(mu, &self.pattern),
            _ => self.pattern.gain_pmf().to_vec(),
        }
    }

    /// Bandwidth of tier `k`, Hz.
    pub fn tier_bandwidth(&self, k: usize) -> f64 {
        self.tiers[k].bandwidth.unwrap_or(self.bandwidth)
    }

    /// Whether tier `j` interferes with UEs served by tier `k` (same band).
    pub fn interferes(&self, j: usize, k: usize) -> bool {
        self.tiers[j].band == self.tiers[k].band
    }

    pub fn max_outage_radius(&self) -> f64 {
        self.tiers.iter().map(TierConfig::outage_radius).fold(0.0, f64::max)
    }

    /// Probability that no base station of any tier is within its outage
    /// radius: `exp(-pi sum_k lambda_k R_kD^2)`.
    pub fn outage_probability(&self) -> f64 {
        libm::exp(-self.tiers.iter().map(TierConfig::mean_count).sum::<f64>())
    }

    /// Copy with every tier's bias replaced so `P_k G_k B_k` is the same for
    /// all tiers (smallest-path-loss association).
    pub fn with_path_loss_association(&self) -> Self {
        let mut cfg = self.clone();
        for t in &mut cfg.tiers {
            t.bias = 1.0 / (t.tx_power * t.serving_gain);
        }
        cfg
    }
}

/// A single-ball tier with one state law for both states; handy for tests
/// and toy scenarios.
pub fn simple_tier(density: f64, tx_power: f64, radius: f64, los_prob: f64, alpha_los: f64, alpha_nlos: f64) -> TierConfig {
    TierConfig {
        density,
        tx_power,
        bias: 1.0,
        balls: vec![BallSpec {
            radius,
            los_prob,
            alpha_los,
            alpha_nlos,
            kappa_los: 1.0,
            kappa_nlos: 1.0,
        }],
        noise_power: 1e-12,
        static_power: 0.0,
        amp_slope: 1.0,
        band: Band::MmWave,
        serving_gain: 1.0,
        bandwidth: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{db_to_linear, deg_to_rad};

    fn pattern_table() -> AntennaPattern {
        AntennaPattern::new(db_to_linear(10.0), db_to_linear(-10.0), deg_to_rad(30.0)).unwrap()
    }

    #[test]
    fn gain_pmf_full_beam() {
        let p = AntennaPattern::new(10.0, 1.0, 2.0 * PI).unwrap().gain_pmf();
        assert_eq!(p[0], GainAtom { gain: 100.0, prob: 1.0 });
        assert_eq!(p[1].prob, 0.0);
        assert_eq!(p[2].prob, 0.0);
    }

    #[test]
    fn gain_pmf_half_beam() {
        let p = AntennaPattern::new(10.0, 1.0, PI).unwrap().gain_pmf();
        let probs: Vec<f64> = p.iter().map(|a| a.prob).collect();
        assert_eq!(probs, [0.25, 0.5, 0.25]);
    }

    #[test]
    fn gain_pmf_thirty_degrees() {
        let p = pattern_table().gain_pmf();
        let q: f64 = 1.0 / 12.0;
        assert!((p[0].prob - q * q).abs() < 1e-15);
        assert!((p[1].prob - 2.0 * q * (1.0 - q)).abs() < 1e-15);
        assert!((p[2].prob - (1.0 - q) * (1.0 - q)).abs() < 1e-15);
        assert!((p[0].prob - 0.006_944).abs() < 1e-6);
        assert!((p[1].prob - 0.152_778).abs() < 1e-6);
        assert!((p[2].prob - 0.840_278).abs() < 1e-6);
        assert!((p[0].gain - 100.0).abs() < 1e-12);
        assert!((p[1].gain - 1.0).abs() < 1e-12);
        assert!((p[2].gain - 0.01).abs() < 1e-14);
    }

    #[test]
    fn mixed_pmf_matches_symmetric_pmf() {
        let p = pattern_table();
        let mixed = link_gain_pmf(&p, &p);
        let sym = p.gain_pmf();
        assert!((mixed[0].prob - sym[0].prob).abs() < 1e-15);
        assert!((mixed[1].prob + mixed[2].prob - sym[1].prob).abs() < 1e-15);
        assert!((mixed[3].prob - sym[2].prob).abs() < 1e-15);
    }

    #[test]
    fn antenna_invariants() {
        assert!(AntennaPattern::new(1.0, 2.0, 1.0).is_err());
        assert!(AntennaPattern::new(1.0, 0.0, 1.0).is_err());
        assert!(AntennaPattern::new(2.0, 1.0, 0.0).is_err());
        assert!(AntennaPattern::new(2.0, 1.0, 7.0).is_err());
    }

    fn two_ball_tier() -> TierConfig {
        let mut t = simple_tier(1e-5, 1.0, 50.0, 0.8, 2.0, 4.0);
        t.balls.push(BallSpec {
            radius: 200.0,
            los_prob: 0.2,
            ..t.balls[0]
        });
        t
    }

    #[test]
    fn los_probability_by_annulus() {
        let t = two_ball_tier();
        assert_eq!(t.los_probability(30.0), LosProbability::Ball { index: 0, los_prob: 0.8 });
        assert_eq!(t.los_probability(100.0), LosProbability::Ball { index: 1, los_prob: 0.2 });
        assert_eq!(t.los_probability(250.0), LosProbability::Outage);
        // half-open annuli: the boundary belongs to the outer ball
        assert_eq!(t.los_probability(50.0), LosProbability::Ball { index: 1, los_prob: 0.2 });
        assert_eq!(t.los_probability(200.0), LosProbability::Outage);
    }

    #[test]
    fn path_loss_values() {
        let t = simple_tier(1e-4, 1.0, 100.0, 1.0, 2.0, 4.0);
        assert_eq!(t.path_loss(0, LinkState::Los, 10.0).unwrap(), 100.0);
        assert_eq!(t.path_loss(0, LinkState::Nlos, 10.0).unwrap(), 10000.0);
        assert!(t.path_loss(0, LinkState::Outage, 10.0).is_err());
        assert!(t.path_loss(3, LinkState::Los, 10.0).is_err());
    }

    fn net(tiers: Vec<TierConfig>) -> NetworkConfig {
        NetworkConfig {
            tiers,
            ue_density: 1e-3,
            bandwidth: 1e9,
            pattern: pattern_table(),
            mu_pattern: None,
            fading: FadingConfig { n_los: 3, n_nlos: 2 },
        }
    }

    #[test]
    fn rejects_non_increasing_radii() {
        let mut t = two_ball_tier();
        t.balls[0].radius = 60.0;
        t.balls[1].radius = 40.0;
        let err = net(vec![t]).validate().unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { tier: Some(0), field: "balls.radius", .. }), "{err}");
    }

    #[test]
    fn rejects_bad_los_probability() {
        let mut t = two_ball_tier();
        t.balls[1].los_prob = 1.3;
        let err = net(vec![simple_tier(1e-4, 1.0, 10.0, 1.0, 2.0, 4.0), t]).validate().unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { tier: Some(1), field: "balls.los_prob", .. }));
        assert!(alloc::string::ToString::to_string(&err).starts_with("tier 2"));
    }

    #[test]
    fn rejects_other_violations() {
        assert!(net(vec![]).validate().is_err());
        let mut t = two_ball_tier();
        t.amp_slope = 0.5;
        assert!(net(vec![t]).validate().is_err());
        let mut n = net(vec![two_ball_tier()]);
        n.fading.n_los = 0;
        assert!(n.validate().is_err());
        let mut n = net(vec![two_ball_tier()]);
        n.tiers[0].band = Band::Microwave;
        assert!(n.validate().is_err(), "microwave tier without a microwave pattern");
        n.mu_pattern = Some(pattern_table());
        assert!(n.validate().is_ok());
        n.tiers.insert(0, two_ball_tier());
        assert!(n.validate().is_err(), "microwave tier must come first");
    }

    #[test]
    fn path_loss_association_equalizes_products() {
        let mut a = two_ball_tier();
        a.tx_power = 200.0;
        a.serving_gain = 100.0;
        let n = net(vec![a, two_ball_tier()]).with_path_loss_association();
        assert!((n.tiers[0].biased_power() - 1.0).abs() < 1e-15);
        assert!((n.tiers[1].biased_power() - 1.0).abs() < 1e-15);
    }
}
