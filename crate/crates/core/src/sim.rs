//! Drop-based Monte Carlo simulator.
//!
//! Each drop places Poisson base stations of every tier in a disc around the
//! typical UE at the origin, marks each one LOS/NLOS by the annulus it falls
//! in (outage beyond the outer radius), associates by maximum biased
//! received power and draws Nakagami fading and random interferer gains.
//! The generator for drop `i` is ChaCha8 keyed by `(seed, i)`, so results do
//! not depend on how drops are split into chunks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};

use crate::association::{association_table, mean_load};
use crate::error::{invalid, Error, Result};
use crate::model::{AntennaPattern, Band, GainAtom, LinkState, LosProbability, NetworkConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub drops: u64,
    /// Radius of the sampling disc, m.
    pub window_radius: f64,
    pub seed: u64,
    pub parallel_chunks: usize,
}

impl SimConfig {
    /// Window equal to the largest outage radius, one chunk.
    pub fn new(cfg: &NetworkConfig, drops: u64, seed: u64) -> Self {
        SimConfig {
            drops,
            window_radius: cfg.max_outage_radius(),
            seed,
            parallel_chunks: 1,
        }
    }

    pub fn validate(&self, cfg: &NetworkConfig) -> Result<()> {
        if self.drops == 0 {
            return Err(invalid(None, "drops", "must be at least 1"));
        }
        if !(self.window_radius >= cfg.max_outage_radius()) || !self.window_radius.is_finite() {
            return Err(invalid(
                None,
                "window_radius",
                format!("{} is below the largest outage radius {}", self.window_radius, cfg.max_outage_radius()),
            ));
        }
        if self.parallel_chunks == 0 {
            return Err(invalid(None, "parallel_chunks", "must be at least 1"));
        }
        Ok(())
    }

    /// Drop index ranges for each chunk, in order.
    pub fn chunks(&self) -> Vec<Range<u64>> {
        let n = self.parallel_chunks as u64;
        (0..n)
            .map(|c| (self.drops * c / n)..(self.drops * (c + 1) / n))
            .filter(|r| !r.is_empty())
            .collect()
    }
}

/// Per-drop switches.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DropOptions {
    /// Compute SINR without interference (SINR equals SNR).
    pub disable_interference: bool,
    /// Standard deviation (radians) of the Gaussian pointing error on each
    /// end of the serving link.
    pub beam_error_sigma: Option<f64>,
}

/// One base station as seen from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledStation {
    pub tier: usize,
    pub distance: f64,
    pub state: LinkState,
    pub path_loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DropResult {
    /// Serving tier and state; `None` in outage.
    pub associated: Option<(usize, LinkState)>,
    pub serving_path_loss: f64,
    pub serving_gain: f64,
    pub sinr: f64,
    pub snr: f64,
    /// Bits/s; zero in outage.
    pub rate: f64,
}

impl DropResult {
    fn outage() -> Self {
        DropResult {
            associated: None,
            serving_path_loss: f64::INFINITY,
            serving_gain: 0.0,
            sinr: 0.0,
            snr: 0.0,
            rate: 0.0,
        }
    }
}

/// RNG for drop `index`.
pub fn drop_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_gain<R: Rng + ?Sized>(pmf: &[GainAtom], rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for a in pmf {
        acc += a.prob;
        if u < acc {
            return a.gain;
        }
    }
    // rounding in the cumulative sum
    pmf.iter().rev().find(|a| a.prob > 0.0).map_or(0.0, |a| a.gain)
}

/// Precomputed per-configuration state for running drops.
pub struct Simulator<'a> {
    cfg: &'a NetworkConfig,
    sim: SimConfig,
    loads: Vec<f64>,
    pmfs: Vec<Vec<GainAtom>>,
    fading: [Gamma<f64>; 2],
    counts: Vec<Poisson<f64>>,
}

impl<'a> Simulator<'a> {
    pub fn new(cfg: &'a NetworkConfig, sim: SimConfig) -> Result<Self> {
        cfg.validate()?;
        sim.validate(cfg)?;
        let table = association_table(cfg)?;
        let loads = (0..cfg.num_tiers()).map(|k| mean_load(cfg, &table, k)).collect();
        let gamma = |n: u32| Gamma::new(n as f64, 1.0 / n as f64).map_err(|e| Error::Precondition(format!("{e}")));
        let area = core::f64::consts::PI * sim.window_radius * sim.window_radius;
        let counts = cfg
            .tiers
            .iter()
            .map(|t| Poisson::new(t.density * area).map_err(|e| Error::Precondition(format!("{e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Simulator {
            cfg,
            sim,
            loads,
            pmfs: (0..cfg.num_tiers()).map(|j| cfg.interferer_gain_pmf(j)).collect(),
            fading: [gamma(cfg.fading.n_los)?, gamma(cfg.fading.n_nlos)?],
            counts,
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        self.cfg
    }

    pub fn sim_config(&self) -> &SimConfig {
        &self.sim
    }

    /// Mean load `N_k` used for per-drop rates.
    pub fn loads(&self) -> &[f64] {
        &self.loads
    }

    /// Samples every tier's base stations inside the window; stations in
    /// outage are dropped.
    pub fn sample_stations<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<SampledStation> {
        let mut out = Vec::new();
        for (k, tier) in self.cfg.tiers.iter().enumerate() {
            let n = self.counts[k].sample(rng) as u64;
            for _ in 0..n {
                let u: f64 = rng.random();
                let r = self.sim.window_radius * libm::sqrt(u);
                let los: f64 = rng.random();
                if let LosProbability::Ball { index, los_prob } = tier.los_probability(r) {
                    let state = if los < los_prob { LinkState::Los } else { LinkState::Nlos };
                    let b = &tier.balls[index];
                    out.push(SampledStation {
                        tier: k,
                        distance: r,
                        state,
                        path_loss: b.kappa(state) * libm::pow(r, b.alpha(state)),
                    });
                }
            }
        }
        out
    }

    /// Index of the serving station by maximum `P_k G_k B_k / L`.
    pub fn associate(&self, stations: &[SampledStation]) -> Option<usize> {
        let score = |s: &SampledStation| self.cfg.tiers[s.tier].biased_power() / s.path_loss;
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in stations.iter().enumerate() {
            let v = score(s);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best.map(|(i, _)| i)
    }

    fn misaligned_gain<R: Rng + ?Sized>(&self, k: usize, sigma: f64, rng: &mut R) -> f64 {
        let normal = Normal::new(0.0, sigma).unwrap_or_else(|_| Normal::new(0.0, 0.0).unwrap());
        let side = |p: &AntennaPattern, rng: &mut R| {
            let e: f64 = normal.sample(rng);
            if libm::fabs(e) <= p.beam_width / 2.0 {
                p.main_gain
            } else {
                p.side_gain
            }
        };
        let bs = match (self.cfg.tiers[k].band, &self.cfg.mu_pattern) {
            (Band::Microwave, Some(mu)) => *mu,
            _ => self.cfg.pattern,
        };
        side(&bs, rng) * side(&self.cfg.pattern, rng)
    }

    /// Realizes drop `index`.
    pub fn drop(&self, index: u64, opts: DropOptions) -> DropResult {
        let mut rng = drop_rng(self.sim.seed, index);
        let stations = self.sample_stations(&mut rng);
        let Some(serving) = self.associate(&stations) else {
            return DropResult::outage();
        };
        let s = stations[serving];
        let k = s.tier;
        let tier = &self.cfg.tiers[k];
        let state_idx = |st: LinkState| st.index().unwrap_or(1);
        let h = self.fading[state_idx(s.state)].sample(&mut rng);
        let mut interference = 0.0;
        for (i, o) in stations.iter().enumerate() {
            if i == serving || !self.cfg.interferes(o.tier, k) {
                continue;
            }
            let g = sample_gain(&self.pmfs[o.tier], &mut rng);
            let hi = self.fading[state_idx(o.state)].sample(&mut rng);
            interference += self.cfg.tiers[o.tier].tx_power * g * hi / o.path_loss;
        }
        let g0 = match opts.beam_error_sigma {
            Some(sigma) => self.misaligned_gain(k, sigma, &mut rng),
            None => tier.serving_gain,
        };
        let signal = tier.tx_power * g0 * h / s.path_loss;
        let snr = signal / tier.noise_power;
        let sinr = if opts.disable_interference {
            snr
        } else {
            signal / (tier.noise_power + interference)
        };
        DropResult {
            associated: Some((k, s.state)),
            serving_path_loss: s.path_loss,
            serving_gain: g0,
            sinr,
            snr,
            rate: self.cfg.tier_bandwidth(k) / self.loads[k] * libm::log2(1.0 + sinr),
        }
    }

    /// Runs the drops in `range` into a fresh tally.
    pub fn run_range(&self, range: Range<u64>, opts: DropOptions, grid: &TallyGrid) -> Tally {
        let mut tally = Tally::new(self.cfg.num_tiers(), grid);
        for i in range {
            tally.record(&self.drop(i, opts), grid);
        }
        tally
    }

    /// Runs every chunk sequentially and merges the tallies.
    pub fn run(&self, opts: DropOptions, grid: &TallyGrid) -> Tally {
        let mut total = Tally::new(self.cfg.num_tiers(), grid);
        for r in self.sim.chunks() {
            total.merge(&self.run_range(r, opts, grid));
        }
        total
    }
}

/// Thresholds a tally counts against.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TallyGrid {
    /// Linear SINR / SNR thresholds.
    pub thresholds: Vec<f64>,
    /// Rate thresholds, bits/s.
    pub rates: Vec<f64>,
}

/// Integer counts over drops; merging is exact and order-independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub drops: u64,
    pub outage: u64,
    pub association: Vec<[u64; 2]>,
    pub sinr_covered: Vec<u64>,
    pub snr_covered: Vec<u64>,
    pub rate_covered: Vec<u64>,
}

/// Monte Carlo estimate with binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn binomial(hits: u64, n: u64) -> Self {
        if n == 0 {
            return Estimate { value: 0.0, stderr: 0.0 };
        }
        let p = hits as f64 / n as f64;
        Estimate {
            value: p,
            stderr: libm::sqrt(p * (1.0 - p) / n as f64),
        }
    }
}

impl Tally {
    pub fn new(tiers: usize, grid: &TallyGrid) -> Self {
        Tally {
            drops: 0,
            outage: 0,
            association: vec![[0; 2]; tiers],
            sinr_covered: vec![0; grid.thresholds.len()],
            snr_covered: vec![0; grid.thresholds.len()],
            rate_covered: vec![0; grid.rates.len()],
        }
    }

    pub fn record(&mut self, d: &DropResult, grid: &TallyGrid) {
        self.drops += 1;
        let Some((k, s)) = d.associated else {
            self.outage += 1;
            return;
        };
        if let Some(i) = s.index() {
            self.association[k][i] += 1;
        }
        for (i, &t) in grid.thresholds.iter().enumerate() {
            self.sinr_covered[i] += (d.sinr > t) as u64;
            self.snr_covered[i] += (d.snr > t) as u64;
        }
        for (i, &r) in grid.rates.iter().enumerate() {
            self.rate_covered[i] += (d.rate > r) as u64;
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.drops += other.drops;
        self.outage += other.outage;
        for (a, b) in self.association.iter_mut().zip(&other.association) {
            a[0] += b[0];
            a[1] += b[1];
        }
        for (a, b) in [
            (&mut self.sinr_covered, &other.sinr_covered),
            (&mut self.snr_covered, &other.snr_covered),
            (&mut self.rate_covered, &other.rate_covered),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn association(&self, k: usize, state: LinkState) -> Estimate {
        let hits = state.index().map_or(self.outage, |i| self.association[k][i]);
        Estimate::binomial(hits, self.drops)
    }

    pub fn outage(&self) -> Estimate {
        Estimate::binomial(self.outage, self.drops)
    }

    pub fn sinr_coverage(&self) -> Vec<Estimate> {
        self.sinr_covered.iter().map(|&c| Estimate::binomial(c, self.drops)).collect()
    }

    pub fn snr_coverage(&self) -> Vec<Estimate> {
        self.snr_covered.iter().map(|&c| Estimate::binomial(c, self.drops)).collect()
    }

    pub fn rate_coverage(&self) -> Vec<Estimate> {
        self.rate_covered.iter().map(|&c| Estimate::binomial(c, self.drops)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simple_tier, FadingConfig};

    fn cfg(density: f64) -> NetworkConfig {
        let mut t = simple_tier(density, 1.0, 50.0, 0.7, 2.0, 4.0);
        t.noise_power = 1e-6;
        NetworkConfig {
            tiers: vec![t],
            ue_density: 1e-3,
            bandwidth: 1e9,
            pattern: AntennaPattern::new(10.0, 0.1, 0.5).unwrap(),
            mu_pattern: None,
            fading: FadingConfig::rayleigh(),
        }
    }

    #[test]
    fn chunks_cover_all_drops() {
        let c = cfg(1e-4);
        let mut s = SimConfig::new(&c, 103, 1);
        s.parallel_chunks = 7;
        let ch = s.chunks();
        assert_eq!(ch.first().unwrap().start, 0);
        assert_eq!(ch.last().unwrap().end, 103);
        assert!(ch.windows(2).all(|w| w[0].end == w[1].start));
    }

    #[test]
    fn chunking_does_not_change_results() {
        let c = cfg(3e-4);
        let grid = TallyGrid {
            thresholds: vec![0.1, 1.0, 10.0],
            rates: vec![1e8],
        };
        let mut s = SimConfig::new(&c, 500, 9);
        let one = Simulator::new(&c, s).unwrap().run(DropOptions::default(), &grid);
        s.parallel_chunks = 6;
        let six = Simulator::new(&c, s).unwrap().run(DropOptions::default(), &grid);
        assert_eq!(one, six);
    }

    #[test]
    fn sinr_never_exceeds_snr() {
        let c = cfg(1e-3);
        let sim = Simulator::new(&c, SimConfig::new(&c, 200, 3)).unwrap();
        for i in 0..200 {
            let d = sim.drop(i, DropOptions::default());
            assert!(d.sinr <= d.snr);
            assert!(d.rate >= 0.0);
            let quiet = sim.drop(
                i,
                DropOptions {
                    disable_interference: true,
                    ..DropOptions::default()
                },
            );
            assert_eq!(quiet.sinr, quiet.snr);
        }
    }

    #[test]
    fn rejects_small_window() {
        let c = cfg(1e-4);
        let mut s = SimConfig::new(&c, 10, 0);
        s.window_radius = 10.0;
        assert!(Simulator::new(&c, s).is_err());
        s.window_radius = 50.0;
        s.drops = 0;
        assert!(Simulator::new(&c, s).is_err());
    }

    #[test]
    fn gain_sampler_respects_pmf() {
        let pmf = [
            GainAtom { gain: 1.0, prob: 0.0 },
            GainAtom { gain: 2.0, prob: 1.0 },
        ];
        let mut rng = drop_rng(0, 0);
        for _ in 0..100 {
            assert_eq!(sample_gain(&pmf, &mut rng), 2.0);
        }
    }
}
