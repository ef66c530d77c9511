//! Path-loss intensity measures of a tier.
//!
//! For tier `k` the path losses `{L_k(r)}` of its base stations form a Poisson
//! process on the half-line with mean measure
//! `Lambda_k([0, x)) = E[#{BS : L < x}]`. Thinning by link state splits it
//! into LOS and NLOS parts. All three and the density of each split are
//! closed-form piecewise expressions over the balls:
//!
//! ```text
//! Lambda_{k,s}([0,x)) = pi lambda_k sum_d w_d^s (clamp((x/kappa)^(2/alpha), R_{d-1}^2, R_d^2) - R_{d-1}^2)
//! Lambda'_{k,s}(x)    = 2 pi lambda_k sum_d w_d^s (x/kappa)^(2/alpha - 1) / (alpha kappa)
//!                       on kappa R_{d-1}^alpha < x < kappa R_d^alpha
//! ```
//!
//! where `w_d^LOS = beta_d`, `w_d^NLOS = 1 - beta_d` and `kappa`, `alpha` are
//! the ball's law for that state.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::model::{LinkState, TierConfig};

/// Evaluator for one tier's intensity measure and its LOS/NLOS split.
#[derive(Debug, Clone)]
pub struct IntensityMeasure<'a> {
    tier: &'a TierConfig,
    breakpoints: Vec<f64>,
}

impl<'a> IntensityMeasure<'a> {
    pub fn new(tier: &'a TierConfig) -> Self {
        IntensityMeasure {
            tier,
            breakpoints: breakpoints(tier),
        }
    }

    pub fn tier(&self) -> &TierConfig {
        self.tier
    }

    /// `Lambda_k([0, x))` for both states together.
    pub fn total(&self, x: f64) -> f64 {
        self.split(LinkState::Los, x) + self.split(LinkState::Nlos, x)
    }

    /// `Lambda_{k,s}([0, x))`; zero for the outage state.
    pub fn split(&self, state: LinkState, x: f64) -> f64 {
        if state == LinkState::Outage || x <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut inner = 0.0;
        for ball in &self.tier.balls {
            let w = ball.weight(state);
            let outer = ball.radius;
            if w > 0.0 {
                let r2 = libm::pow(x / ball.kappa(state), 2.0 / ball.alpha(state));
                let r2 = r2.clamp(inner * inner, outer * outer);
                acc += w * (r2 - inner * inner);
            }
            inner = outer;
        }
        PI * self.tier.density * acc
    }

    /// Density of `Lambda_{k,s}` with respect to path loss. Zero at and
    /// outside the ball boundaries (open-interval indicators). Balls with
    /// different laws may overlap in path loss; their densities add.
    pub fn density(&self, state: LinkState, x: f64) -> f64 {
        if state == LinkState::Outage || x <= 0.0 {
            return 0.0;
        }
        let mut inner = 0.0;
        let mut acc = 0.0;
        for ball in &self.tier.balls {
            let (kappa, alpha) = (ball.kappa(state), ball.alpha(state));
            let lo = kappa * libm::pow(inner, alpha);
            let hi = kappa * libm::pow(ball.radius, alpha);
            inner = ball.radius;
            let w = ball.weight(state);
            if w > 0.0 && lo < x && x < hi {
                acc += w * libm::pow(x / kappa, 2.0 / alpha - 1.0) / (alpha * kappa);
            }
        }
        2.0 * PI * self.tier.density * acc
    }

    /// Sorted, deduplicated positive path-loss values where the measure's
    /// density jumps.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Expected number of base stations with a usable link, `pi lambda R_D^2`.
    pub fn total_mass(&self) -> f64 {
        self.tier.mean_count()
    }

    /// Largest path loss carrying mass in state `s` (zero when the state has
    /// no mass at all).
    pub fn support_end(&self, state: LinkState) -> f64 {
        self.tier
            .balls
            .iter()
            .filter(|b| b.weight(state) > 0.0)
            .map(|b| b.kappa(state) * libm::pow(b.radius, b.alpha(state)))
            .fold(0.0, f64::max)
    }
}

pub fn lambda_total(tier: &TierConfig, x: f64) -> f64 {
    IntensityMeasure::new(tier).total(x)
}

pub fn lambda_split(tier: &TierConfig, state: LinkState, x: f64) -> f64 {
    IntensityMeasure::new(tier).split(state, x)
}

pub fn lambda_density(tier: &TierConfig, state: LinkState, x: f64) -> f64 {
    IntensityMeasure::new(tier).density(state, x)
}

/// Every ball-boundary path loss `kappa_d^s R^alpha` for both boundaries of
/// each ball and each state that carries mass in that ball, before
/// deduplication (zeros included).
pub fn breakpoint_candidates(tier: &TierConfig) -> Vec<f64> {
    let mut out = Vec::with_capacity(4 * tier.balls.len());
    let mut inner = 0.0;
    for ball in &tier.balls {
        for state in LinkState::PROPAGATING {
            if ball.weight(state) > 0.0 {
                let (kappa, alpha) = (ball.kappa(state), ball.alpha(state));
                out.push(kappa * libm::pow(inner, alpha));
                out.push(kappa * libm::pow(ball.radius, alpha));
            }
        }
        inner = ball.radius;
    }
    out
}

/// Positive candidates, sorted, with values equal to 1e-12 relative merged.
pub fn breakpoints(tier: &TierConfig) -> Vec<f64> {
    let mut v: Vec<f64> = breakpoint_candidates(tier).into_iter().filter(|x| *x > 0.0).collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    v
}
