//! SINR / SNR coverage of the typical UE.
//!
//! Conditioned on association with a state-`s` base station of tier `k` at
//! path loss `l`, the serving fading `h ~ Gamma(N_s, 1/N_s)` must exceed
//! `Gamma_k l (sigma_k^2 + I) / (P_k G_0)`. The gamma tail is replaced by the
//! Alzer form `sum_n (-1)^(n+1) C(N_s, n) exp(-n eta_s x)`, and each
//! exponential averages over the interference through its Laplace
//! transform. Interferers of tier `j` in state `s'` sit beyond the exclusion
//! path loss `ratio_jk l`; with gain atoms `(G, p_G)` their contribution to
//! the exponent is
//!
//! ```text
//! sum_G p_G int_{ratio_jk l}^inf Psi(N_s', u P_j G / (t N_s')) Lambda'_{j,s'}(t) dt,
//! u = n eta_s Gamma_k l / (P_k G_0).
//! ```
//!
//! Summing `P_C^{k,s} A_{k,s}` over tiers and states gives the network
//! coverage. Dropping the interference leaves the noise-limited form, which
//! has an erf closed form when every LOS exponent is 2 and every NLOS
//! exponent is 4. Hybrid networks keep interference inside each band.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::PI;

use crate::association::{association_table, AssociationTable, NetworkIntensity, ServingSegment};
use crate::error::{Error, Result};
use crate::model::{GainAtom, LinkState, NetworkConfig};
use crate::quadrature::{integrate_fn, Integral, Tolerance};
use crate::special::{alzer_weights, erf, erfcx, eta, psi};

/// Lower limit of the interferer integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExclusionZone {
    /// `P_j G_j B_j / (P_k G_k B_k) * l`, consistent with the association rule.
    WithGains,
    /// `P_j B_j / (P_k B_k) * l`.
    WithoutGains,
}

impl ExclusionZone {
    pub fn label(self) -> &'static str {
        match self {
            ExclusionZone::WithGains => "with_gains",
            ExclusionZone::WithoutGains => "without_gains",
        }
    }
}

/// Which evaluation produced a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Full SINR with interference Laplace transforms.
    Sinr,
    /// Noise-limited, single quadrature.
    Snr,
    /// Noise-limited erf closed form (exponents 2 and 4).
    SnrClosedForm,
    /// Gain-mixture over beam misalignment.
    BeamError,
    /// Microwave / mmWave network with per-band interference.
    Hybrid,
    MonteCarlo,
}

impl Formula {
    pub fn label(self) -> &'static str {
        match self {
            Formula::Sinr => "sinr",
            Formula::Snr => "snr",
            Formula::SnrClosedForm => "snr_closed_form",
            Formula::BeamError => "beam_error",
            Formula::Hybrid => "hybrid",
            Formula::MonteCarlo => "monte_carlo",
        }
    }
}

/// Requested coverage computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageMode {
    SinrFull,
    SnrOnly,
    ClosedForm24,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageOptions {
    pub interference: bool,
    pub exclusion: ExclusionZone,
    /// Serving-link gain `G_0` for every tier; defaults to each tier's
    /// intended-link gain.
    pub serving_gain: Option<f64>,
    pub inner_tolerance: Tolerance,
    pub outer_tolerance: Tolerance,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            interference: true,
            exclusion: ExclusionZone::WithGains,
            serving_gain: None,
            inner_tolerance: Tolerance::new(1e-8, 1e-8),
            outer_tolerance: Tolerance::new(1e-7, 1e-7),
        }
    }
}

impl CoverageOptions {
    pub fn snr() -> Self {
        CoverageOptions {
            interference: false,
            ..Self::default()
        }
    }
}

/// Coverage at one threshold vector, split by serving tier and state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageBreakdown {
    /// Per-tier thresholds, linear.
    pub thresholds: Vec<f64>,
    /// `P_C^{k,s} * A_{k,s}`, indexed `[tier][LOS = 0, NLOS = 1]`.
    pub joint: Vec<[f64; 2]>,
    pub association: AssociationTable,
    pub error_estimate: f64,
    pub converged: bool,
}

impl CoverageBreakdown {
    pub fn total(&self) -> f64 {
        self.joint.iter().map(|j| j[0] + j[1]).sum()
    }

    /// `P_C^{k,s}`: coverage conditioned on being served in `(k, s)`.
    pub fn conditional(&self, k: usize, state: LinkState) -> f64 {
        let i = match state.index() {
            Some(i) => i,
            None => return 0.0,
        };
        let a = self.association.entries[k][i];
        if a > 0.0 {
            (self.joint[k][i] / a).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    /// `P_C^k`: coverage conditioned on being served by tier `k`.
    pub fn tier_conditional(&self, k: usize) -> f64 {
        let a = self.association.tier(k);
        if a > 0.0 {
            ((self.joint[k][0] + self.joint[k][1]) / a).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    /// `P_C^k * A_k`.
    pub fn tier_joint(&self, k: usize) -> f64 {
        self.joint[k][0] + self.joint[k][1]
    }

    fn mix(parts: &[(f64, &CoverageBreakdown)]) -> CoverageBreakdown {
        let first = parts[0].1;
        let mut out = CoverageBreakdown {
            thresholds: first.thresholds.clone(),
            joint: vec![[0.0; 2]; first.joint.len()],
            association: first.association.clone(),
            error_estimate: 0.0,
            converged: true,
        };
        for (w, b) in parts {
            for (o, j) in out.joint.iter_mut().zip(&b.joint) {
                o[0] += w * j[0];
                o[1] += w * j[1];
            }
            out.error_estimate += w * b.error_estimate;
            out.converged &= b.converged;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveragePoint {
    /// Common threshold (linear) or, for rate curves, the rate threshold.
    pub x: f64,
    pub probability: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub breakdown: Option<CoverageBreakdown>,
}

/// Ordered `(threshold, probability)` pairs tagged with their formula.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCurve {
    pub formula: Formula,
    pub points: Vec<CoveragePoint>,
}

impl CoverageCurve {
    pub fn from_breakdowns(formula: Formula, xs: &[f64], parts: Vec<CoverageBreakdown>) -> Self {
        let points = xs
            .iter()
            .zip(parts)
            .map(|(&x, b)| CoveragePoint {
                x,
                probability: b.total(),
                error_estimate: b.error_estimate,
                converged: b.converged,
                breakdown: Some(b),
            })
            .collect();
        CoverageCurve { formula, points }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.probability).collect()
    }
}

/// Numerical engine for the coverage integrals of one configuration.
pub struct CoverageEvaluator<'a> {
    net: NetworkIntensity<'a>,
    opts: CoverageOptions,
    pmfs: Vec<Vec<GainAtom>>,
    association: AssociationTable,
}

impl<'a> CoverageEvaluator<'a> {
    pub fn new(cfg: &'a NetworkConfig, opts: CoverageOptions) -> Result<Self> {
        let association = association_table(cfg)?;
        Ok(Self::with_association(cfg, opts, association))
    }

    /// Reuses a precomputed association table (it does not depend on the
    /// thresholds or the serving gain).
    pub fn with_association(cfg: &'a NetworkConfig, opts: CoverageOptions, association: AssociationTable) -> Self {
        let pmfs = (0..cfg.num_tiers()).map(|j| cfg.interferer_gain_pmf(j)).collect();
        CoverageEvaluator {
            net: NetworkIntensity::new(cfg),
            opts,
            pmfs,
            association,
        }
    }

    pub fn association(&self) -> &AssociationTable {
        &self.association
    }

    fn cfg(&self) -> &NetworkConfig {
        self.net.config()
    }

    fn serving_gain(&self, k: usize) -> f64 {
        self.opts.serving_gain.unwrap_or(self.cfg().tiers[k].serving_gain)
    }

    fn exclusion_ratio(&self, j: usize, k: usize) -> f64 {
        let t = &self.cfg().tiers;
        match self.opts.exclusion {
            ExclusionZone::WithGains => self.net.ratio(j, k),
            ExclusionZone::WithoutGains => (t[j].tx_power * t[j].bias) / (t[k].tx_power * t[k].bias),
        }
    }

    /// Interference exponent from state-`s_int` interferers of tier `j`
    /// beyond path loss `lower`, for Laplace argument `u`.
    fn interferer_exponent(&self, j: usize, s_int: LinkState, u: f64, lower: f64, ok: &Cell<bool>) -> Result<(f64, f64)> {
        let cfg = self.cfg();
        let order = cfg.fading.order(s_int);
        let tier = &cfg.tiers[j];
        let scaled: Vec<(f64, f64)> = self.pmfs[j]
            .iter()
            .filter(|a| a.prob > 0.0)
            .map(|a| (a.prob, u * tier.tx_power * a.gain / order as f64))
            .collect();
        let mut value = 0.0;
        let mut error = 0.0;
        for seg in self.net.serving_segments(j, s_int) {
            let r_lo = seg.r_inner.max(seg.distance(lower));
            if r_lo >= seg.r_outer {
                continue;
            }
            let f = |r: f64| {
                let loss = seg.path_loss(r);
                r * scaled.iter().map(|(p, c)| p * psi(order, c / loss)).sum::<f64>()
            };
            let part = integrate_fn(f, r_lo, seg.r_outer, [], self.opts.inner_tolerance)?;
            if !part.converged {
                ok.set(false);
            }
            let scale = 2.0 * PI * tier.density * seg.weight;
            value += scale * part.value;
            error += scale * part.error;
        }
        Ok((value, error))
    }

    /// Interference term for one interferer tier/state (`A` for LOS, `B`
    /// for NLOS) at Alzer index `n` (1-based), serving path loss `l`, serving
    /// tier `k` in state `s_serv` and serving gain `g0`.
    #[allow(clippy::too_many_arguments)]
    pub fn interference_term(
        &self,
        j: usize,
        s_int: LinkState,
        k: usize,
        s_serv: LinkState,
        n: u32,
        gamma: f64,
        l: f64,
        g0: f64,
    ) -> Result<f64> {
        let cfg = self.cfg();
        let u = n as f64 * eta(cfg.fading.order(s_serv)) * gamma * l / (cfg.tiers[k].tx_power * g0);
        let ok = Cell::new(true);
        let (v, e) = self.interferer_exponent(j, s_int, u, self.exclusion_ratio(j, k) * l, &ok)?;
        if ok.get() {
            Ok(v)
        } else {
            Err(Error::NotConverged {
                value: v,
                error_estimate: e,
            })
        }
    }

    fn outer_breakpoints(&self, k: usize, seg: &ServingSegment) -> Vec<f64> {
        let mut v = self.net.segment_breakpoints(k, seg);
        if self.opts.interference && self.opts.exclusion == ExclusionZone::WithoutGains {
            for j in 0..self.cfg().num_tiers() {
                let ratio = self.exclusion_ratio(j, k);
                v.extend(
                    self.net
                        .measure(j)
                        .breakpoints()
                        .iter()
                        .map(|b| seg.distance(b / ratio))
                        .filter(|r| *r > seg.r_inner && *r < seg.r_outer),
                );
            }
        }
        v
    }

    /// `P_C^{k,s}(Gamma) * A_{k,s}` by quadrature.
    pub fn joint_term(&self, k: usize, state: LinkState, gamma: f64) -> Result<Integral> {
        let cfg = self.cfg();
        let tier = &cfg.tiers[k];
        let order = cfg.fading.order(state);
        let eta_s = eta(order);
        let weights = alzer_weights(order);
        let g0 = self.serving_gain(k);
        let noise = gamma * tier.noise_power / (tier.tx_power * g0);
        let u_unit = gamma / (tier.tx_power * g0);
        let interferers: Vec<usize> = (0..cfg.num_tiers()).filter(|&j| cfg.interferes(j, k)).collect();
        let ok = Cell::new(true);
        let failure: Cell<Option<Error>> = Cell::new(None);
        let mut total = Integral::zero();
        for seg in self.net.serving_segments(k, state) {
            let scale = 2.0 * PI * tier.density * seg.weight;
            let f = |r: f64| {
                let l = seg.path_loss(r);
                let void = self.net.void_exponent(k, l);
                let mut sum = 0.0;
                for (i, w) in weights.iter().enumerate() {
                    let nf = (i + 1) as f64 * eta_s;
                    let mut exponent = nf * noise * l;
                    if self.opts.interference {
                        let u = nf * u_unit * l;
                        for &j in &interferers {
                            let lower = self.exclusion_ratio(j, k) * l;
                            for s_int in LinkState::PROPAGATING {
                                match self.interferer_exponent(j, s_int, u, lower, &ok) {
                                    Ok((v, _)) => exponent += v,
                                    Err(e) => failure.set(Some(e)),
                                }
                            }
                        }
                    }
                    sum += w * libm::exp(-exponent);
                }
                scale * r * libm::exp(-void) * sum
            };
            let part = integrate_fn(f, seg.r_inner, seg.r_outer, self.outer_breakpoints(k, &seg), self.opts.outer_tolerance)?;
            if let Some(e) = failure.take() {
                return Err(e);
            }
            total.value += part.value;
            total.error += part.error;
            total.converged &= part.converged;
            total.evaluations += part.evaluations;
        }
        total.converged &= ok.get();
        Ok(total)
    }

    /// Coverage for per-tier thresholds `gammas` (linear, one per tier).
    pub fn evaluate(&self, gammas: &[f64]) -> Result<CoverageBreakdown> {
        let cfg = self.cfg();
        check_thresholds(cfg, gammas)?;
        let mut joint = Vec::with_capacity(cfg.num_tiers());
        let mut error_estimate = 0.0;
        let mut converged = true;
        for (k, &gamma) in gammas.iter().enumerate() {
            let mut row = [0.0; 2];
            for (i, s) in LinkState::PROPAGATING.into_iter().enumerate() {
                let r = self.joint_term(k, s, gamma)?;
                row[i] = r.value;
                error_estimate += r.error;
                converged &= r.converged;
            }
            joint.push(row);
        }
        Ok(CoverageBreakdown {
            thresholds: gammas.to_vec(),
            joint,
            association: self.association.clone(),
            error_estimate,
            converged,
        })
    }

    /// Noise-limited coverage through the erf closed form. Requires LOS
    /// exponent 2 and NLOS exponent 4 on every ball of every tier.
    pub fn evaluate_closed_form(&self, gammas: &[f64]) -> Result<CoverageBreakdown> {
        let cfg = self.cfg();
        check_thresholds(cfg, gammas)?;
        require_exponents_2_4(cfg)?;
        let mut joint = Vec::with_capacity(cfg.num_tiers());
        for (k, &gamma) in gammas.iter().enumerate() {
            let mut row = [0.0; 2];
            for (i, s) in LinkState::PROPAGATING.into_iter().enumerate() {
                row[i] = self.closed_form_term(k, s, gamma);
            }
            joint.push(row);
        }
        Ok(CoverageBreakdown {
            thresholds: gammas.to_vec(),
            joint,
            association: self.association.clone(),
            error_estimate: 0.0,
            converged: true,
        })
    }

    // Substituting l = x^2 makes every exponent a quadratic a x^2 + c x + d
    // between consecutive breakpoints: LOS laws (alpha 2) contribute to the
    // x^2 coefficient, NLOS laws (alpha 4) to the linear one.
    fn closed_form_term(&self, k: usize, state: LinkState, gamma: f64) -> f64 {
        let cfg = self.cfg();
        let tier = &cfg.tiers[k];
        let order = cfg.fading.order(state);
        let eta_s = eta(order);
        let weights = alzer_weights(order);
        let noise = gamma * tier.noise_power / (tier.tx_power * self.serving_gain(k));
        let mut total = 0.0;
        for seg in self.net.serving_segments(k, state) {
            let x_lo = libm::sqrt(seg.path_loss(seg.r_inner));
            let x_hi = libm::sqrt(seg.path_loss(seg.r_outer));
            let mut edges: Vec<f64> = self
                .net
                .segment_breakpoints(k, &seg)
                .into_iter()
                .map(|r| libm::sqrt(seg.path_loss(r)))
                .collect();
            edges.insert(0, x_lo);
            edges.push(x_hi);
            // LOS: Lambda' dl = (2 pi lambda w / kappa) x dx; NLOS: (pi lambda w / sqrt(kappa)) dx
            let (prefactor, linear_measure) = match state {
                LinkState::Los => (2.0 * PI * tier.density * seg.weight / seg.kappa, true),
                _ => (PI * tier.density * seg.weight / libm::sqrt(seg.kappa), false),
            };
            for w in edges.windows(2) {
                let (x0, x1) = (w[0], w[1]);
                if x1 <= x0 {
                    continue;
                }
                let (b, c, d) = self.void_coefficients(k, 0.5 * (x0 + x1));
                for (i, wn) in weights.iter().enumerate() {
                    let a = (i + 1) as f64 * eta_s * noise + b;
                    let piece = if linear_measure {
                        gaussian_first_moment(a, c, d, x0, x1)
                    } else {
                        gaussian_mass(a, c, d, x0, x1)
                    };
                    total += wn * prefactor * piece;
                }
            }
        }
        total
    }

    /// Coefficients `(b, c, d)` with `sum_j Lambda_j(ratio_jk x^2) = b x^2 + c x + d`
    /// on the regime containing `x`.
    fn void_coefficients(&self, k: usize, x: f64) -> (f64, f64, f64) {
        let cfg = self.cfg();
        let (mut b, mut c, mut d) = (0.0, 0.0, 0.0);
        for (j, tier) in cfg.tiers.iter().enumerate() {
            let ratio = self.net.ratio(j, k);
            let y = ratio * x * x;
            let mut inner: f64 = 0.0;
            for ball in &tier.balls {
                for s in LinkState::PROPAGATING {
                    let w = ball.weight(s);
                    if w == 0.0 {
                        continue;
                    }
                    let (kappa, alpha) = (ball.kappa(s), ball.alpha(s));
                    let lo = kappa * libm::pow(inner, alpha);
                    let hi = kappa * libm::pow(ball.radius, alpha);
                    let m = PI * tier.density * w;
                    if y >= hi {
                        d += m * (ball.radius * ball.radius - inner * inner);
                    } else if y > lo {
                        d -= m * inner * inner;
                        if s == LinkState::Los {
                            b += m * ratio / kappa;
                        } else {
                            c += m * libm::sqrt(ratio / kappa);
                        }
                    }
                }
                inner = ball.radius;
            }
        }
        (b, c, d)
    }
}

/// `int_{x0}^{x1} exp(-(a x^2 + c x + d)) dx` for `a > 0`, `c >= 0`, `x0 >= 0`.
pub fn gaussian_mass(a: f64, c: f64, d: f64, x0: f64, x1: f64) -> f64 {
    let sa = libm::sqrt(a);
    let g = |x: f64| a * x * x + c * x + d;
    let z = |x: f64| sa * x + c / (2.0 * sa);
    libm::sqrt(PI) / (2.0 * sa) * (libm::exp(-g(x0)) * erfcx(z(x0)) - libm::exp(-g(x1)) * erfcx(z(x1)))
}

/// `int_{x0}^{x1} x exp(-(a x^2 + c x + d)) dx` for `a > 0`, `c >= 0`, `x0 >= 0`.
pub fn gaussian_first_moment(a: f64, c: f64, d: f64, x0: f64, x1: f64) -> f64 {
    let g = |x: f64| a * x * x + c * x + d;
    (libm::exp(-g(x0)) - libm::exp(-g(x1))) / (2.0 * a) - c / (2.0 * a) * gaussian_mass(a, c, d, x0, x1)
}

fn check_thresholds(cfg: &NetworkConfig, gammas: &[f64]) -> Result<()> {
    if gammas.len() != cfg.num_tiers() {
        return Err(Error::Precondition(format!(
            "expected {} per-tier thresholds, got {}",
            cfg.num_tiers(),
            gammas.len()
        )));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
        return Err(Error::Precondition(format!("thresholds must be positive and finite, got {g}")));
    }
    Ok(())
}

fn require_exponents_2_4(cfg: &NetworkConfig) -> Result<()> {
    for (k, t) in cfg.tiers.iter().enumerate() {
        for (d, b) in t.balls.iter().enumerate() {
            if b.alpha_los != 2.0 || b.alpha_nlos != 4.0 {
                return Err(Error::Precondition(format!(
                    "closed form needs LOS/NLOS exponents 2/4; tier {} ball {} has {}/{}",
                    k + 1,
                    d + 1,
                    b.alpha_los,
                    b.alpha_nlos
                )));
            }
        }
    }
    Ok(())
}

fn curve(cfg: &NetworkConfig, thresholds: &[f64], opts: CoverageOptions, formula: Formula) -> Result<CoverageCurve> {
    cfg.validate()?;
    let ev = CoverageEvaluator::new(cfg, opts)?;
    let parts = thresholds
        .iter()
        .map(|&g| {
            let gammas = vec![g; cfg.num_tiers()];
            if formula == Formula::SnrClosedForm {
                ev.evaluate_closed_form(&gammas)
            } else {
                ev.evaluate(&gammas)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageCurve::from_breakdowns(formula, thresholds, parts))
}

/// Full SINR coverage over a grid of common thresholds (linear).
pub fn sinr_coverage(cfg: &NetworkConfig, thresholds: &[f64], exclusion: ExclusionZone) -> Result<CoverageCurve> {
    let opts = CoverageOptions {
        exclusion,
        ..CoverageOptions::default()
    };
    curve(cfg, thresholds, opts, Formula::Sinr)
}

/// Noise-limited coverage by quadrature.
pub fn snr_coverage(cfg: &NetworkConfig, thresholds: &[f64]) -> Result<CoverageCurve> {
    curve(cfg, thresholds, CoverageOptions::snr(), Formula::Snr)
}

/// Noise-limited coverage through the erf closed form.
pub fn snr_coverage_closed_form(cfg: &NetworkConfig, thresholds: &[f64]) -> Result<CoverageCurve> {
    curve(cfg, thresholds, CoverageOptions::snr(), Formula::SnrClosedForm)
}

/// Hybrid microwave / mmWave network coverage; interference stays within
/// each band while association competes across all tiers.
pub fn hybrid_coverage(cfg: &NetworkConfig, thresholds: &[f64], exclusion: ExclusionZone) -> Result<CoverageCurve> {
    cfg.validate()?;
    if !cfg.is_hybrid() {
        return Err(Error::Precondition("hybrid coverage needs tier 1 on the microwave band".into()));
    }
    let opts = CoverageOptions {
        exclusion,
        ..CoverageOptions::default()
    };
    curve(cfg, thresholds, opts, Formula::Hybrid)
}

/// `F = P(|eps| <= theta / 2)` for a zero-mean Gaussian pointing error with
/// standard deviation `sigma` (radians).
pub fn alignment_probability(beam_width: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        1.0
    } else {
        erf(beam_width / (2.0 * core::f64::consts::SQRT_2 * sigma))
    }
}

/// Serving-gain distribution under misalignment on both ends:
/// `(MM, F^2), (Mm, 2F(1-F)), (mm, (1-F)^2)`.
pub fn misaligned_gain_pmf(cfg: &NetworkConfig, sigma: f64) -> [GainAtom; 3] {
    let p = &cfg.pattern;
    let f = alignment_probability(p.beam_width, sigma);
    [
        GainAtom {
            gain: p.main_gain * p.main_gain,
            prob: f * f,
        },
        GainAtom {
            gain: p.main_gain * p.side_gain,
            prob: 2.0 * f * (1.0 - f),
        },
        GainAtom {
            gain: p.side_gain * p.side_gain,
            prob: (1.0 - f) * (1.0 - f),
        },
    ]
}

/// Coverage averaged over the misaligned serving gain. `base` selects the
/// conditional formula (`SinrFull`, `SnrOnly` or `ClosedForm24`).
pub fn coverage_with_beam_error(
    cfg: &NetworkConfig,
    thresholds: &[f64],
    sigma: f64,
    base: CoverageMode,
    exclusion: ExclusionZone,
) -> Result<CoverageCurve> {
    cfg.validate()?;
    if !(sigma >= 0.0) {
        return Err(Error::Precondition(format!("beam error deviation must be nonnegative, got {sigma}")));
    }
    let association = association_table(cfg)?;
    let atoms = misaligned_gain_pmf(cfg, sigma);
    let mut per_gain = Vec::new();
    for atom in atoms.iter() {
        let opts = CoverageOptions {
            interference: matches!(base, CoverageMode::SinrFull | CoverageMode::Hybrid),
            exclusion,
            serving_gain: Some(atom.gain),
            ..CoverageOptions::default()
        };
        let ev = CoverageEvaluator::with_association(cfg, opts, association.clone());
        let parts = thresholds
            .iter()
            .map(|&g| {
                let gammas = vec![g; cfg.num_tiers()];
                if atom.prob == 0.0 {
                    // weight zero: skip the integrals, keep the shape
                    Ok(CoverageBreakdown {
                        thresholds: gammas,
                        joint: vec![[0.0; 2]; cfg.num_tiers()],
                        association: association.clone(),
                        error_estimate: 0.0,
                        converged: true,
                    })
                } else if base == CoverageMode::ClosedForm24 {
                    ev.evaluate_closed_form(&gammas)
                } else {
                    ev.evaluate(&gammas)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        per_gain.push(parts);
    }
    let mixed = (0..thresholds.len())
        .map(|i| {
            let parts: Vec<(f64, &CoverageBreakdown)> = atoms.iter().zip(&per_gain).map(|(a, p)| (a.prob, &p[i])).collect();
            CoverageBreakdown::mix(&parts)
        })
        .collect();
    Ok(CoverageCurve::from_breakdowns(Formula::BeamError, thresholds, mixed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simple_tier, AntennaPattern, BallSpec, FadingConfig, TierConfig};

    fn net(tiers: Vec<TierConfig>, fading: FadingConfig) -> NetworkConfig {
        NetworkConfig {
            tiers,
            ue_density: 1e-3,
            bandwidth: 1e9,
            pattern: AntennaPattern::new(10.0, 0.1, 0.5).unwrap(),
            mu_pattern: None,
            fading,
        }
    }

    fn tier(density: f64, power: f64) -> TierConfig {
        let mut t = simple_tier(density, power, 40.0, 0.9, 2.0, 4.0);
        t.balls.push(BallSpec {
            radius: 120.0,
            los_prob: 0.3,
            ..t.balls[0]
        });
        t.noise_power = 1e-4;
        t.serving_gain = 100.0;
        t
    }

    #[test]
    fn gaussian_pieces_match_quadrature() {
        for (a, c, d, x0, x1) in [(0.3, 0.0, 0.1, 0.0, 4.0), (2.0, 1.5, -0.2, 0.3, 1.1), (1e-3, 0.02, 0.0, 10.0, 90.0)] {
            let m = integrate_fn(|x| libm::exp(-(a * x * x + c * x + d)), x0, x1, [], Tolerance::new(1e-14, 1e-13)).unwrap();
            let f = integrate_fn(|x| x * libm::exp(-(a * x * x + c * x + d)), x0, x1, [], Tolerance::new(1e-14, 1e-13)).unwrap();
            assert!((gaussian_mass(a, c, d, x0, x1) - m.value).abs() < 1e-11 * m.value.max(1.0));
            assert!((gaussian_first_moment(a, c, d, x0, x1) - f.value).abs() < 1e-10 * f.value.max(1.0));
        }
    }

    #[test]
    fn zero_threshold_limit_is_non_outage() {
        let cfg = net(vec![tier(1e-4, 1.0), tier(3e-4, 0.1)], FadingConfig { n_los: 3, n_nlos: 2 });
        let curve = sinr_coverage(&cfg, &[1e-9], ExclusionZone::WithGains).unwrap();
        let expected = 1.0 - cfg.outage_probability();
        assert!((curve.points[0].probability - expected).abs() < 1e-6);
    }

    #[test]
    fn snr_equals_sinr_with_interference_disabled() {
        let cfg = net(vec![tier(1e-4, 1.0), tier(3e-4, 0.1)], FadingConfig { n_los: 2, n_nlos: 1 });
        let ev = CoverageEvaluator::new(
            &cfg,
            CoverageOptions {
                interference: false,
                ..CoverageOptions::default()
            },
        )
        .unwrap();
        let a = ev.evaluate(&[2.0, 2.0]).unwrap().total();
        let b = snr_coverage(&cfg, &[2.0]).unwrap().points[0].probability;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn interference_term_vanishes() {
        let cfg = net(vec![tier(1e-4, 1.0)], FadingConfig { n_los: 2, n_nlos: 2 });
        let ev = CoverageEvaluator::new(&cfg, CoverageOptions::default()).unwrap();
        let g0 = cfg.tiers[0].serving_gain;
        let t = ev.interference_term(0, LinkState::Los, 0, LinkState::Los, 1, 0.0, 1e3, g0).unwrap();
        assert_eq!(t, 0.0);
        let mut sparse = cfg.clone();
        sparse.tiers[0].density = 1e-12;
        let ev = CoverageEvaluator::new(&sparse, CoverageOptions::default()).unwrap();
        let t = ev.interference_term(0, LinkState::Nlos, 0, LinkState::Los, 1, 10.0, 1e3, g0).unwrap();
        assert!(t < 1e-9);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let cfg = net(vec![tier(1e-4, 1.0), tier(3e-4, 0.1)], FadingConfig { n_los: 3, n_nlos: 2 });
        let th = [0.01, 1.0, 10.0, 1e3];
        let q = snr_coverage(&cfg, &th).unwrap();
        let c = snr_coverage_closed_form(&cfg, &th).unwrap();
        for (a, b) in q.points.iter().zip(&c.points) {
            assert!((a.probability - b.probability).abs() < 1e-6, "{} vs {}", a.probability, b.probability);
        }
    }

    #[test]
    fn closed_form_rejects_other_exponents() {
        let mut t = tier(1e-4, 1.0);
        t.balls[1].alpha_nlos = 3.5;
        let cfg = net(vec![t], FadingConfig::rayleigh());
        assert!(snr_coverage_closed_form(&cfg, &[1.0]).is_err());
    }

    #[test]
    fn beam_error_limits() {
        let cfg = net(vec![tier(1e-4, 1.0)], FadingConfig { n_los: 2, n_nlos: 1 });
        let th = [1.0];
        let perfect = snr_coverage(&cfg, &th).unwrap().points[0].probability;
        let zero = coverage_with_beam_error(&cfg, &th, 0.0, CoverageMode::SnrOnly, ExclusionZone::WithGains).unwrap();
        assert!((zero.points[0].probability - perfect).abs() < 1e-12);
        let huge = coverage_with_beam_error(&cfg, &th, 1e6, CoverageMode::SnrOnly, ExclusionZone::WithGains).unwrap();
        let p = cfg.pattern;
        let ev = CoverageEvaluator::new(
            &cfg,
            CoverageOptions {
                serving_gain: Some(p.side_gain * p.side_gain),
                ..CoverageOptions::snr()
            },
        )
        .unwrap();
        let worst = ev.evaluate(&[1.0]).unwrap().total();
        assert!((huge.points[0].probability - worst).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_thresholds() {
        let cfg = net(vec![tier(1e-4, 1.0)], FadingConfig::rayleigh());
        let ev = CoverageEvaluator::new(&cfg, CoverageOptions::snr()).unwrap();
        assert!(ev.evaluate(&[0.0]).is_err());
        assert!(ev.evaluate(&[1.0, 1.0]).is_err());
    }
}
