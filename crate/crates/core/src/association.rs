//! Biased association: per-tier, per-state association probabilities, the
//! two-tier closed form, the large-radius share approximation and the mean
//! cell load.
//!
//! A UE joins the tier maximizing `P_j G_j B_j / L_min,j`. For a serving
//! path loss `l` in tier `k`, every tier `j` must have no base station below
//! `ratio_jk * l` with `ratio_jk = P_j G_j B_j / (P_k G_k B_k)`, which gives
//!
//! ```text
//! A_{k,s} = int Lambda'_{k,s}(l) exp(-sum_j Lambda_j([0, ratio_jk l))) dl.
//! ```
//!
//! The integral is evaluated ball by ball in the distance variable
//! (`l = kappa r^alpha`, `Lambda'(l) dl = 2 pi lambda w r dr`), split at the
//! distances where any tier's measure changes regime.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::intensity::IntensityMeasure;
use crate::model::{LinkState, NetworkConfig};
use crate::quadrature::{integrate_fn, Integral, Tolerance};

/// Absolute / relative targets for association integrals.
pub const ASSOCIATION_TOLERANCE: Tolerance = Tolerance::new(1e-9, 1e-7);

/// One ball of the serving tier in the distance variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServingSegment {
    pub ball: usize,
    pub r_inner: f64,
    pub r_outer: f64,
    pub kappa: f64,
    pub alpha: f64,
    /// `beta` or `1 - beta`.
    pub weight: f64,
}

impl ServingSegment {
    pub fn path_loss(&self, r: f64) -> f64 {
        self.kappa * libm::pow(r, self.alpha)
    }

    pub fn distance(&self, l: f64) -> f64 {
        libm::pow(l / self.kappa, 1.0 / self.alpha)
    }
}

/// Shared view of all tiers' intensity measures.
#[derive(Debug, Clone)]
pub struct NetworkIntensity<'a> {
    cfg: &'a NetworkConfig,
    measures: Vec<IntensityMeasure<'a>>,
}

impl<'a> NetworkIntensity<'a> {
    pub fn new(cfg: &'a NetworkConfig) -> Self {
        NetworkIntensity {
            cfg,
            measures: cfg.tiers.iter().map(IntensityMeasure::new).collect(),
        }
    }

    pub fn config(&self) -> &NetworkConfig {
        self.cfg
    }

    pub fn measure(&self, j: usize) -> &IntensityMeasure<'a> {
        &self.measures[j]
    }

    /// `P_j G_j B_j / (P_k G_k B_k)`.
    pub fn ratio(&self, j: usize, k: usize) -> f64 {
        self.cfg.tiers[j].biased_power() / self.cfg.tiers[k].biased_power()
    }

    /// `sum_j Lambda_j([0, ratio_jk l))`: the log-void probability of a
    /// stronger biased candidate when tier `k` serves at path loss `l`.
    pub fn void_exponent(&self, k: usize, l: f64) -> f64 {
        (0..self.measures.len())
            .map(|j| self.measures[j].total(self.ratio(j, k) * l))
            .sum()
    }

    /// Serving path losses (tier `k` frame) where some tier's measure has a
    /// breakpoint, i.e. `b / ratio_jk` for each breakpoint `b` of tier `j`.
    pub fn scaled_breakpoints(&self, k: usize) -> Vec<f64> {
        let mut v = Vec::new();
        for (j, m) in self.measures.iter().enumerate() {
            let ratio = self.ratio(j, k);
            v.extend(m.breakpoints().iter().map(|b| b / ratio));
        }
        v.sort_by(f64::total_cmp);
        v
    }

    /// Balls of tier `k` carrying mass in state `s`.
    pub fn serving_segments(&self, k: usize, state: LinkState) -> Vec<ServingSegment> {
        let tier = &self.cfg.tiers[k];
        tier.balls
            .iter()
            .enumerate()
            .filter(|(_, b)| b.weight(state) > 0.0)
            .map(|(d, b)| ServingSegment {
                ball: d,
                r_inner: tier.inner_radius(d),
                r_outer: b.radius,
                kappa: b.kappa(state),
                alpha: b.alpha(state),
                weight: b.weight(state),
            })
            .collect()
    }

    /// Breakpoints of the serving-tier integrand mapped onto the distance
    /// axis of `seg`.
    pub fn segment_breakpoints(&self, k: usize, seg: &ServingSegment) -> Vec<f64> {
        self.scaled_breakpoints(k)
            .into_iter()
            .map(|l| seg.distance(l))
            .filter(|r| *r > seg.r_inner && *r < seg.r_outer)
            .collect()
    }

    /// `A_{k,s}` with its quadrature diagnostics.
    pub fn association_integral(&self, k: usize, state: LinkState) -> Result<Integral> {
        if state == LinkState::Outage {
            return Err(Error::Precondition("association is defined for LOS and NLOS only".into()));
        }
        let lambda = self.cfg.tiers[k].density;
        let mut total = Integral::zero();
        for seg in self.serving_segments(k, state) {
            let scale = 2.0 * PI * lambda * seg.weight;
            let f = |r: f64| scale * r * libm::exp(-self.void_exponent(k, seg.path_loss(r)));
            let part = integrate_fn(f, seg.r_inner, seg.r_outer, self.segment_breakpoints(k, &seg), ASSOCIATION_TOLERANCE)?;
            total.value += part.value;
            total.error += part.error;
            total.converged &= part.converged;
            total.evaluations += part.evaluations;
        }
        Ok(total)
    }
}

/// `A[k][s]` for every tier and state plus the outage probability.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationTable {
    /// Indexed `[tier][LOS = 0, NLOS = 1]`.
    pub entries: Vec<[f64; 2]>,
    pub outage_prob: f64,
    /// Summed quadrature error estimate over all entries.
    pub error_estimate: f64,
}

impl AssociationTable {
    pub fn get(&self, k: usize, state: LinkState) -> f64 {
        state.index().map_or(0.0, |i| self.entries[k][i])
    }

    /// `A_k = A_{k,LOS} + A_{k,NLOS}`.
    pub fn tier(&self, k: usize) -> f64 {
        self.entries[k][0] + self.entries[k][1]
    }

    /// Sum of all entries plus the outage probability; one for an exact table.
    pub fn completeness(&self) -> f64 {
        self.entries.iter().map(|e| e[0] + e[1]).sum::<f64>() + self.outage_prob
    }
}

/// Probability that the typical UE is served by a state-`s` base station of
/// tier `k` (zero-based).
pub fn association_prob(cfg: &NetworkConfig, k: usize, state: LinkState) -> Result<f64> {
    cfg.validate()?;
    check_tier(cfg, k)?;
    NetworkIntensity::new(cfg).association_integral(k, state)?.require_converged()
}

pub fn association_table(cfg: &NetworkConfig) -> Result<AssociationTable> {
    cfg.validate()?;
    let net = NetworkIntensity::new(cfg);
    let mut entries = Vec::with_capacity(cfg.num_tiers());
    let mut error_estimate = 0.0;
    for k in 0..cfg.num_tiers() {
        let mut row = [0.0; 2];
        for (i, s) in LinkState::PROPAGATING.into_iter().enumerate() {
            let r = net.association_integral(k, s)?;
            error_estimate += r.error;
            row[i] = r.require_converged()?;
        }
        entries.push(row);
    }
    Ok(AssociationTable {
        entries,
        outage_prob: cfg.outage_probability(),
        error_estimate,
    })
}

fn check_tier(cfg: &NetworkConfig, k: usize) -> Result<()> {
    if k >= cfg.num_tiers() {
        return Err(Error::Precondition(format!("tier index {} out of range (K = {})", k + 1, cfg.num_tiers())));
    }
    Ok(())
}

/// Two-tier closed form for one fully-LOS ball per tier with `alpha = 2`.
/// Returns `(A_{1,LOS}, A_{2,LOS})`.
///
/// The products `P G B` enter divided by each tier's LOS intercept so tiers
/// with different `kappa` are handled; with a common `kappa` this is the
/// textbook expression.
pub fn association_closed_form_2tier(cfg: &NetworkConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if cfg.num_tiers() != 2 {
        return Err(Error::Precondition(format!("closed form needs exactly 2 tiers, got {}", cfg.num_tiers())));
    }
    for (k, t) in cfg.tiers.iter().enumerate() {
        if t.balls.len() != 1 || t.balls[0].los_prob != 1.0 || t.balls[0].alpha_los != 2.0 {
            return Err(Error::Precondition(format!(
                "tier {}: closed form needs a single all-LOS ball with alpha = 2",
                k + 1
            )));
        }
    }
    let q: Vec<f64> = cfg.tiers.iter().map(|t| t.biased_power() / t.balls[0].kappa_los).collect();
    let lam: Vec<f64> = cfg.tiers.iter().map(|t| t.density).collect();
    let r2: Vec<f64> = cfg.tiers.iter().map(|t| t.balls[0].radius * t.balls[0].radius).collect();
    let s = lam[0] * q[0] + lam[1] * q[1];
    let both = libm::exp(-PI * (lam[0] * r2[0] + lam[1] * r2[1]));
    let one = |k: usize, o: usize| {
        let share = lam[k] * q[k] / s;
        if q[k] / q[o] * r2[o] > r2[k] {
            share * (1.0 - libm::exp(-PI * r2[k] * s / q[k]))
        } else {
            let e = libm::exp(-PI * r2[o] * s / q[o]);
            share * (1.0 - e) + e - both
        }
    };
    Ok((one(0, 1), one(1, 0)))
}

/// Large-radius limit `lambda_k P_k G_k B_k / sum_j lambda_j P_j G_j B_j`.
pub fn association_approx(cfg: &NetworkConfig, k: usize) -> Result<f64> {
    check_tier(cfg, k)?;
    let share = |t: &crate::model::TierConfig| t.density * t.biased_power();
    let total: f64 = cfg.tiers.iter().map(share).sum();
    Ok(share(&cfg.tiers[k]) / total)
}

/// Mean number of UEs sharing a tier-`k` base station,
/// `1 + 1.28 lambda_u A_k / lambda_k`.
pub fn mean_load(cfg: &NetworkConfig, table: &AssociationTable, k: usize) -> f64 {
    1.0 + 1.28 * cfg.ue_density * table.tier(k) / cfg.tiers[k].density
}
