//! Rate coverage, area spectral efficiency and energy efficiency.

use alloc::format;
use alloc::vec::Vec;

use crate::association::{mean_load, AssociationTable};
use crate::coverage::{CoverageBreakdown, CoverageCurve, CoverageEvaluator, CoverageOptions, Formula};
use crate::error::{Error, Result};
use crate::model::NetworkConfig;

/// SINR threshold equivalent to rate `rho` on tier `k`: `2^(rho N_k / W_k) - 1`,
/// with the mean load `N_k` used as a real number.
pub fn equivalent_threshold(cfg: &NetworkConfig, table: &AssociationTable, k: usize, rho: f64) -> f64 {
    let load = mean_load(cfg, table, k);
    libm::exp2(rho * load / cfg.tier_bandwidth(k)) - 1.0
}

fn check_rates(cfg: &NetworkConfig, rates: &[f64]) -> Result<()> {
    if rates.len() != cfg.num_tiers() {
        return Err(Error::Precondition(format!(
            "expected {} per-tier rates, got {}",
            cfg.num_tiers(),
            rates.len()
        )));
    }
    if let Some(r) = rates.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(Error::Precondition(format!("rate thresholds must be positive and finite, got {r}")));
    }
    Ok(())
}

/// Rate coverage for per-tier rate thresholds (bits/s):
/// `sum_k P_C^k(2^(rho_k N_k / W_k) - 1) A_k`.
pub fn rate_coverage_at(ev: &CoverageEvaluator<'_>, cfg: &NetworkConfig, rates: &[f64]) -> Result<CoverageBreakdown> {
    check_rates(cfg, rates)?;
    let gammas: Vec<f64> = rates
        .iter()
        .enumerate()
        .map(|(k, &rho)| equivalent_threshold(cfg, ev.association(), k, rho))
        .collect();
    ev.evaluate(&gammas)
}

/// Rate coverage over a grid of common rate thresholds (bits/s).
pub fn rate_coverage(cfg: &NetworkConfig, rates: &[f64], opts: CoverageOptions) -> Result<CoverageCurve> {
    cfg.validate()?;
    let ev = CoverageEvaluator::new(cfg, opts)?;
    let parts = rates
        .iter()
        .map(|&rho| rate_coverage_at(&ev, cfg, &alloc::vec![rho; cfg.num_tiers()]))
        .collect::<Result<Vec<_>>>()?;
    let formula = if opts.interference { Formula::Sinr } else { Formula::Snr };
    Ok(CoverageCurve::from_breakdowns(formula, rates, parts))
}

/// `tau_k = lambda_k P_C^k log2(1 + Gamma_k)` for a given conditional coverage.
pub fn spectral_efficiency_term(density: f64, conditional_coverage: f64, gamma: f64) -> f64 {
    density * conditional_coverage * libm::log2(1.0 + gamma)
}

/// Area spectral efficiency of tier `k` (bps/Hz/m^2) at threshold `gamma`.
pub fn area_spectral_efficiency(cfg: &NetworkConfig, k: usize, gamma: f64, opts: CoverageOptions) -> Result<f64> {
    cfg.validate()?;
    if k >= cfg.num_tiers() {
        return Err(Error::Precondition(format!("tier index {k} out of range")));
    }
    let ev = CoverageEvaluator::new(cfg, opts)?;
    let mut gammas = alloc::vec![1.0; cfg.num_tiers()];
    gammas[k] = gamma;
    let b = ev.evaluate(&gammas)?;
    Ok(spectral_efficiency_term(cfg.tiers[k].density, b.tier_conditional(k), gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierEnergy {
    /// Conditional coverage `P_C^k`.
    pub coverage: f64,
    /// `tau_k`, bps/Hz/m^2.
    pub spectral_efficiency: f64,
    /// `lambda_k (P_0k + Delta_k P_k)`, W/m^2.
    pub average_power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub tiers: Vec<TierEnergy>,
    /// Total area spectral efficiency over total area power, bps/Hz/W.
    pub efficiency: f64,
}

impl EnergyReport {
    /// Builds the report from per-tier conditional coverages.
    pub fn from_coverage(cfg: &NetworkConfig, coverage: &[f64], gammas: &[f64]) -> Self {
        let tiers: Vec<TierEnergy> = cfg
            .tiers
            .iter()
            .zip(coverage.iter().zip(gammas))
            .map(|(t, (&pc, &g))| TierEnergy {
                coverage: pc,
                spectral_efficiency: spectral_efficiency_term(t.density, pc, g),
                average_power: t.density * (t.static_power + t.amp_slope * t.tx_power),
            })
            .collect();
        let mut report = EnergyReport { tiers, efficiency: 0.0 };
        report.efficiency = report.total_spectral_efficiency() / report.total_power();
        report
    }

    pub fn total_spectral_efficiency(&self) -> f64 {
        self.tiers.iter().map(|t| t.spectral_efficiency).sum()
    }

    pub fn total_power(&self) -> f64 {
        self.tiers.iter().map(|t| t.average_power).sum()
    }
}

/// Energy efficiency at per-tier thresholds `gammas`.
pub fn energy_efficiency(cfg: &NetworkConfig, gammas: &[f64], opts: CoverageOptions) -> Result<EnergyReport> {
    cfg.validate()?;
    let ev = CoverageEvaluator::new(cfg, opts)?;
    let b = ev.evaluate(gammas)?;
    Ok(energy_report(cfg, &b))
}

/// Energy report from an evaluated coverage breakdown.
pub fn energy_report(cfg: &NetworkConfig, b: &CoverageBreakdown) -> EnergyReport {
    let coverage: Vec<f64> = (0..cfg.num_tiers()).map(|k| b.tier_conditional(k)).collect();
    EnergyReport::from_coverage(cfg, &coverage, &b.thresholds)
}
