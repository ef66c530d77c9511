//! Named experiments: sweeps over thresholds, gains, biases, misalignment,
//! rates and densities, written as one CSV per curve plus `manifest.json`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use hetnet_core::association::association_table;
use hetnet_core::coverage::{CoverageBreakdown, CoverageEvaluator, CoverageMode, CoverageOptions, ExclusionZone};
use hetnet_core::metrics::{energy_report, equivalent_threshold};
use hetnet_core::sim::{DropOptions, Estimate, SimConfig, TallyGrid};
use hetnet_core::units::{db_to_linear, deg_to_rad};
use hetnet_core::{LinkState, NetworkConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{BallFile, ConfigFile};
use crate::{mc, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Experiment {
    SinrVsSnr,
    GainSweep,
    BallParams,
    BiasSweep,
    BeamError,
    Rate,
    Energy,
    AssocVsBias,
    HybridBias,
    HybridDensity,
}

/// Analytic path for coverage curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Sinr,
    Snr,
    Closed24,
}

impl Mode {
    fn coverage_mode(self) -> CoverageMode {
        match self {
            Mode::Sinr => CoverageMode::SinrFull,
            Mode::Snr => CoverageMode::SnrOnly,
            Mode::Closed24 => CoverageMode::ClosedForm24,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Mode::Sinr => "sinr",
            Mode::Snr => "snr",
            Mode::Closed24 => "closed24",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    #[default]
    WithGains,
    WithoutGains,
}

impl From<Exclusion> for ExclusionZone {
    fn from(e: Exclusion) -> Self {
        match e {
            Exclusion::WithGains => ExclusionZone::WithGains,
            Exclusion::WithoutGains => ExclusionZone::WithoutGains,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallVariant {
    pub label: String,
    /// Ball lists, one per tier.
    pub tiers: Vec<Vec<BallFile>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityVariant {
    pub label: String,
    /// Per-tier density multipliers.
    pub multipliers: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid {
    pub threshold_db: Vec<f64>,
    pub bias_db: Vec<f64>,
    /// 1-based tiers the bias applies to.
    pub bias_tiers: Vec<usize>,
    pub sigma_be_deg: Vec<f64>,
    pub main_gain_db: Vec<f64>,
    pub rate_gbps: Vec<f64>,
    /// Microcell (tier 1) density multipliers.
    pub density_multipliers: Vec<f64>,
    pub density_variants: Vec<DensityVariant>,
    pub ball_variants: Vec<BallVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSpec {
    pub drops: u64,
    pub seed: u64,
    #[serde(default)]
    pub window_radius_m: Option<f64>,
    #[serde(default)]
    pub parallel_chunks: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Relative paths resolve against the scenario file's directory.
    pub config: PathBuf,
    pub experiment: Experiment,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub monte_carlo: Option<MonteCarloSpec>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub exclusion_zone: Exclusion,
    #[serde(default)]
    pub mode: Mode,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
        let mut s: Scenario = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if s.config.is_relative() {
            s.config = base.join(&s.config);
        }
        if s.output_dir.is_relative() {
            s.output_dir = base.join(&s.output_dir);
        }
        Ok(s)
    }

    /// Checks that the grid keys the experiment needs are present.
    pub fn validate(&self, cfg: &NetworkConfig) -> Result<(), Error> {
        let g = &self.grid;
        let need = |ok: bool, key: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Scenario(format!("{:?} needs a nonempty `{key}` grid", self.experiment)))
            }
        };
        use Experiment::*;
        match self.experiment {
            SinrVsSnr => need(!g.threshold_db.is_empty(), "threshold_db")?,
            GainSweep => {
                need(!g.threshold_db.is_empty(), "threshold_db")?;
                need(!g.main_gain_db.is_empty(), "main_gain_db")?;
            }
            BallParams => {
                need(!g.threshold_db.is_empty(), "threshold_db")?;
                need(!g.ball_variants.is_empty(), "ball_variants")?;
                if let Some(v) = g.ball_variants.iter().find(|v| v.tiers.len() != cfg.num_tiers()) {
                    return Err(Error::Scenario(format!(
                        "ball variant `{}` lists {} tiers, config has {}",
                        v.label,
                        v.tiers.len(),
                        cfg.num_tiers()
                    )));
                }
            }
            BiasSweep | AssocVsBias | Energy => need(!g.bias_db.is_empty(), "bias_db")?,
            BeamError => {
                need(!g.threshold_db.is_empty(), "threshold_db")?;
                need(!g.sigma_be_deg.is_empty(), "sigma_be_deg")?;
            }
            Rate => need(!g.rate_gbps.is_empty(), "rate_gbps")?,
            HybridBias => {
                need(!g.threshold_db.is_empty(), "threshold_db")?;
                need(!g.bias_db.is_empty(), "bias_db")?;
            }
            HybridDensity => {
                need(!g.threshold_db.is_empty(), "threshold_db")?;
                need(!g.density_multipliers.is_empty(), "density_multipliers")?;
            }
        }
        if matches!(self.experiment, HybridBias | HybridDensity) && !cfg.is_hybrid() {
            return Err(Error::Scenario("hybrid experiments need tier 1 on the microwave band".into()));
        }
        if let Some(t) = g.bias_tiers.iter().find(|&&t| t == 0 || t > cfg.num_tiers()) {
            return Err(Error::Scenario(format!("bias tier {t} out of range")));
        }
        if let Some(v) = g.density_variants.iter().find(|v| v.multipliers.len() != cfg.num_tiers()) {
            return Err(Error::Scenario(format!("density variant `{}` needs one multiplier per tier", v.label)));
        }
        if let Some(mc) = &self.monte_carlo {
            if mc.drops == 0 {
                return Err(Error::Scenario("monte_carlo.drops must be at least 1".into()));
            }
        }
        Ok(())
    }
}

/// One emitted point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub analytic: f64,
    pub error: f64,
    pub converged: bool,
    pub monte_carlo: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub x_label: &'static str,
    pub rows: Vec<Row>,
}

impl Curve {
    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "analytic", "error", "converged", "monte_carlo", "mc_stderr"])?;
        for r in &self.rows {
            let (m, s) = r.monte_carlo.map_or((String::new(), String::new()), |e| (e.value.to_string(), e.stderr.to_string()));
            w.write_record([r.x.to_string(), r.analytic.to_string(), r.error.to_string(), r.converged.to_string(), m, s])?;
        }
        w.flush().map_err(|e| Error::Io(path.display().to_string(), e))?;
        Ok(())
    }

    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| !r.converged).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceRecord {
    pub inner_abs: f64,
    pub inner_rel: f64,
    pub outer_abs: f64,
    pub outer_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub file: String,
    pub x: String,
    pub points: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub experiment: Experiment,
    pub config: String,
    pub config_sha256: String,
    pub mode: String,
    pub exclusion_zone: String,
    pub tolerances: ToleranceRecord,
    pub monte_carlo: Option<MonteCarloSpec>,
    pub curves: Vec<CurveRecord>,
    pub wall_time_s: f64,
}

/// Result of a run; `flagged` counts non-converged analytic points.
pub struct RunOutput {
    pub manifest: Manifest,
    pub curves: Vec<Curve>,
    pub flagged: usize,
}

struct Runner<'a> {
    scenario: &'a Scenario,
    opts: CoverageOptions,
}

fn row_from(x: f64, r: hetnet_core::Result<CoverageBreakdown>, value: impl Fn(&CoverageBreakdown) -> f64) -> Row {
    match r {
        Ok(b) => Row {
            x,
            analytic: value(&b),
            error: b.error_estimate,
            converged: b.converged,
            monte_carlo: None,
        },
        Err(_) => Row {
            x,
            analytic: f64::NAN,
            error: f64::NAN,
            converged: false,
            monte_carlo: None,
        },
    }
}

fn set_bias(cfg: &mut NetworkConfig, tiers: &[usize], db: f64) {
    for &t in tiers {
        cfg.tiers[t - 1].bias = db_to_linear(db);
    }
}

impl Runner<'_> {
    fn options(&self, mode: Mode) -> CoverageOptions {
        CoverageOptions {
            interference: mode == Mode::Sinr,
            ..self.opts
        }
    }

    fn sim(&self, cfg: &NetworkConfig) -> Option<SimConfig> {
        self.scenario.monte_carlo.as_ref().map(|m| {
            let mut s = SimConfig::new(cfg, m.drops, m.seed);
            if let Some(w) = m.window_radius_m {
                s.window_radius = w;
            }
            s.parallel_chunks = m.parallel_chunks.unwrap_or_else(|| mc::default_chunks(m.drops));
            s
        })
    }

    /// Coverage over the threshold grid, with Monte Carlo columns when
    /// configured.
    fn threshold_curve(&self, name: String, cfg: &NetworkConfig, mode: Mode, sigma: Option<f64>) -> Result<Curve, Error> {
        let db = &self.scenario.grid.threshold_db;
        let lin: Vec<f64> = db.iter().map(|&d| db_to_linear(d)).collect();
        let mut rows: Vec<Row> = match sigma {
            Some(s) => {
                let curve = hetnet_core::coverage::coverage_with_beam_error(cfg, &lin, s, mode.coverage_mode(), self.opts.exclusion)?;
                curve
                    .points
                    .into_iter()
                    .zip(db)
                    .map(|(p, &x)| Row {
                        x,
                        analytic: p.probability,
                        error: p.error_estimate,
                        converged: p.converged,
                        monte_carlo: None,
                    })
                    .collect()
            }
            None => {
                let ev = CoverageEvaluator::new(cfg, self.options(mode))?;
                if mode == Mode::Closed24 {
                    // surfaces the exponent precondition before the sweep
                    ev.evaluate_closed_form(&vec![1.0; cfg.num_tiers()])?;
                }
                db.par_iter()
                    .zip(&lin)
                    .map(|(&x, &g)| {
                        let gammas = vec![g; cfg.num_tiers()];
                        let r = if mode == Mode::Closed24 {
                            ev.evaluate_closed_form(&gammas)
                        } else {
                            ev.evaluate(&gammas)
                        };
                        row_from(x, r, CoverageBreakdown::total)
                    })
                    .collect()
            }
        };
        if let Some(sim) = self.sim(cfg) {
            let grid = TallyGrid {
                thresholds: lin,
                rates: Vec::new(),
            };
            let opts = DropOptions {
                disable_interference: false,
                beam_error_sigma: sigma,
            };
            let tally = mc::run(cfg, sim, opts, &grid)?;
            let est = if mode == Mode::Sinr { tally.sinr_coverage() } else { tally.snr_coverage() };
            for (r, e) in rows.iter_mut().zip(est) {
                r.monte_carlo = Some(e);
            }
        }
        Ok(Curve {
            name,
            x_label: "threshold_db",
            rows,
        })
    }

    fn bias_tiers(&self, cfg: &NetworkConfig, default_last_only: bool) -> Vec<usize> {
        let g = &self.scenario.grid;
        if !g.bias_tiers.is_empty() {
            g.bias_tiers.clone()
        } else if default_last_only {
            vec![cfg.num_tiers()]
        } else {
            (2..=cfg.num_tiers()).collect()
        }
    }

    fn fixed_threshold(&self) -> f64 {
        db_to_linear(self.scenario.grid.threshold_db.first().copied().unwrap_or(0.0))
    }

    fn curves(&self, cfg: &NetworkConfig) -> Result<Vec<Curve>, Error> {
        let g = &self.scenario.grid;
        let mode = self.scenario.mode;
        let mut out = Vec::new();
        match self.scenario.experiment {
            Experiment::SinrVsSnr => {
                for k in 1..=cfg.num_tiers() {
                    let mut c = cfg.clone();
                    c.tiers.truncate(k);
                    out.push(self.threshold_curve(format!("sinr_k{k}"), &c, Mode::Sinr, None)?);
                    out.push(self.threshold_curve(format!("snr_k{k}"), &c, Mode::Snr, None)?);
                }
            }
            Experiment::GainSweep => {
                for &m in &g.main_gain_db {
                    let mut c = cfg.clone();
                    c.pattern.main_gain = db_to_linear(m);
                    if c.pattern.main_gain < c.pattern.side_gain {
                        return Err(Error::Scenario(format!("main gain {m} dB is below the side lobe")));
                    }
                    for t in c.tiers.iter_mut() {
                        t.serving_gain = c.pattern.main_gain * c.pattern.main_gain;
                    }
                    out.push(self.threshold_curve(format!("gain_{m}db"), &c, mode, None)?);
                }
            }
            Experiment::BallParams => {
                out.push(self.threshold_curve("default".into(), cfg, mode, None)?);
                for v in &g.ball_variants {
                    let mut file = ConfigFile::load(&self.scenario.config)?;
                    for (t, balls) in file.tiers.iter_mut().zip(&v.tiers) {
                        t.balls = balls.clone();
                    }
                    let c = file.to_network()?;
                    out.push(self.threshold_curve(v.label.clone(), &c, mode, None)?);
                }
            }
            Experiment::BeamError => {
                for &s in &g.sigma_be_deg {
                    out.push(self.threshold_curve(format!("sigma_{s}deg"), cfg, mode, Some(deg_to_rad(s)))?);
                }
            }
            Experiment::BiasSweep | Experiment::AssocVsBias => {
                let tiers = self.bias_tiers(cfg, false);
                let gamma = self.fixed_threshold();
                let with_coverage = self.scenario.experiment == Experiment::BiasSweep;
                let points: Vec<(f64, NetworkConfig)> = g
                    .bias_db
                    .iter()
                    .map(|&b| {
                        let mut c = cfg.clone();
                        set_bias(&mut c, &tiers, b);
                        (b, c)
                    })
                    .collect();
                let tables = points
                    .par_iter()
                    .map(|(_, c)| association_table(c))
                    .collect::<hetnet_core::Result<Vec<_>>>()?;
                for k in 0..cfg.num_tiers() {
                    let rows = points
                        .iter()
                        .zip(&tables)
                        .map(|((b, _), t)| Row {
                            x: *b,
                            analytic: t.tier(k),
                            error: t.error_estimate,
                            converged: true,
                            monte_carlo: None,
                        })
                        .collect();
                    out.push(Curve {
                        name: format!("association_tier{}", k + 1),
                        x_label: "bias_db",
                        rows,
                    });
                }
                if with_coverage {
                    let opts = self.options(mode);
                    let rows = points
                        .par_iter()
                        .map(|(b, c)| {
                            let r = CoverageEvaluator::new(c, opts).and_then(|ev| {
                                let gammas = vec![gamma; c.num_tiers()];
                                if mode == Mode::Closed24 {
                                    ev.evaluate_closed_form(&gammas)
                                } else {
                                    ev.evaluate(&gammas)
                                }
                            });
                            row_from(*b, r, CoverageBreakdown::total)
                        })
                        .collect();
                    out.push(Curve {
                        name: "coverage".into(),
                        x_label: "bias_db",
                        rows,
                    });
                }
                if self.scenario.monte_carlo.is_some() {
                    let grid = TallyGrid {
                        thresholds: vec![gamma],
                        rates: Vec::new(),
                    };
                    for (i, (_, c)) in points.iter().enumerate() {
                        let tally = mc::run(c, self.sim(c).expect("monte carlo configured"), DropOptions::default(), &grid)?;
                        for k in 0..cfg.num_tiers() {
                            let hits: u64 = tally.association[k].iter().sum();
                            out[k].rows[i].monte_carlo = Some(Estimate::binomial(hits, tally.drops));
                        }
                        if with_coverage {
                            let est = if mode == Mode::Sinr { tally.sinr_coverage() } else { tally.snr_coverage() };
                            out[cfg.num_tiers()].rows[i].monte_carlo = Some(est[0]);
                        }
                    }
                }
            }
            Experiment::Rate => {
                let ev = CoverageEvaluator::new(cfg, self.options(Mode::Sinr))?;
                let rates: Vec<f64> = g.rate_gbps.iter().map(|r| r * 1e9).collect();
                let parts: Vec<hetnet_core::Result<CoverageBreakdown>> = rates
                    .par_iter()
                    .map(|&rho| {
                        let gammas: Vec<f64> = (0..cfg.num_tiers())
                            .map(|k| equivalent_threshold(cfg, ev.association(), k, rho))
                            .collect();
                        ev.evaluate(&gammas)
                    })
                    .collect();
                let mut total = Vec::new();
                let mut per_tier = vec![Vec::new(); cfg.num_tiers()];
                for (&x, p) in g.rate_gbps.iter().zip(parts) {
                    for (k, rows) in per_tier.iter_mut().enumerate() {
                        rows.push(row_from(x, p.clone(), |b| b.tier_joint(k)));
                    }
                    total.push(row_from(x, p, CoverageBreakdown::total));
                }
                if let Some(sim) = self.sim(cfg) {
                    let grid = TallyGrid {
                        thresholds: Vec::new(),
                        rates,
                    };
                    let tally = mc::run(cfg, sim, DropOptions::default(), &grid)?;
                    for (r, e) in total.iter_mut().zip(tally.rate_coverage()) {
                        r.monte_carlo = Some(e);
                    }
                }
                out.push(Curve {
                    name: "rate_coverage".into(),
                    x_label: "rate_gbps",
                    rows: total,
                });
                for (k, rows) in per_tier.into_iter().enumerate() {
                    out.push(Curve {
                        name: format!("rate_coverage_tier{}", k + 1),
                        x_label: "rate_gbps",
                        rows,
                    });
                }
            }
            Experiment::Energy => {
                let tiers = self.bias_tiers(cfg, true);
                let gamma = self.fixed_threshold();
                let variants = if g.density_variants.is_empty() {
                    vec![DensityVariant {
                        label: "default".into(),
                        multipliers: vec![1.0; cfg.num_tiers()],
                    }]
                } else {
                    g.density_variants.clone()
                };
                let opts = self.options(if mode == Mode::Sinr { Mode::Sinr } else { Mode::Snr });
                for v in &variants {
                    let rows = g
                        .bias_db
                        .par_iter()
                        .map(|&b| {
                            let mut c = cfg.clone();
                            for (t, m) in c.tiers.iter_mut().zip(&v.multipliers) {
                                t.density *= m;
                            }
                            set_bias(&mut c, &tiers, b);
                            let r = CoverageEvaluator::new(&c, opts).and_then(|ev| ev.evaluate(&vec![gamma; c.num_tiers()]));
                            row_from(b, r, |br| energy_report(&c, br).efficiency)
                        })
                        .collect();
                    out.push(Curve {
                        name: format!("energy_{}", v.label),
                        x_label: "bias_db",
                        rows,
                    });
                }
            }
            Experiment::HybridBias => {
                let tiers = self.bias_tiers(cfg, false);
                for &b in &g.bias_db {
                    let mut c = cfg.clone();
                    set_bias(&mut c, &tiers, b);
                    out.push(self.threshold_curve(format!("bias_{b}db"), &c, mode, None)?);
                }
            }
            Experiment::HybridDensity => {
                for &m in &g.density_multipliers {
                    let mut c = cfg.clone();
                    c.tiers[0].density *= m;
                    out.push(self.threshold_curve(format!("density_x{m}"), &c, mode, None)?);
                }
            }
        }
        Ok(out)
    }
}

/// Overrides applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub exclusion_zone: Option<Exclusion>,
    pub output_dir: Option<PathBuf>,
}

/// Runs a scenario and writes its CSVs and manifest.
pub fn run(mut scenario: Scenario, overrides: &Overrides) -> Result<RunOutput, Error> {
    let start = Instant::now();
    if let Some(m) = overrides.mode {
        scenario.mode = m;
    }
    if let Some(e) = overrides.exclusion_zone {
        scenario.exclusion_zone = e;
    }
    if let Some(o) = &overrides.output_dir {
        scenario.output_dir = o.clone();
    }
    let bytes = std::fs::read(&scenario.config).map_err(|e| Error::Io(scenario.config.display().to_string(), e))?;
    let cfg = ConfigFile::parse(&String::from_utf8_lossy(&bytes))?.to_network()?;
    scenario.validate(&cfg)?;
    let opts = CoverageOptions {
        exclusion: scenario.exclusion_zone.into(),
        ..CoverageOptions::default()
    };
    let runner = Runner { scenario: &scenario, opts };
    let curves = runner.curves(&cfg)?;
    std::fs::create_dir_all(&scenario.output_dir).map_err(|e| Error::Io(scenario.output_dir.display().to_string(), e))?;
    let mut records = Vec::new();
    for c in &curves {
        let file = format!("{}.csv", c.name);
        c.write_csv(&scenario.output_dir.join(&file))?;
        records.push(CurveRecord {
            file,
            x: c.x_label.into(),
            points: c.rows.len(),
            flagged: c.flagged(),
        });
    }
    let flagged = records.iter().map(|r| r.flagged).sum();
    let manifest = Manifest {
        name: scenario.name.clone(),
        experiment: scenario.experiment,
        config: scenario.config.display().to_string(),
        config_sha256: hex::encode(Sha256::digest(&bytes)),
        mode: scenario.mode.label().into(),
        exclusion_zone: ExclusionZone::from(scenario.exclusion_zone).label().into(),
        tolerances: ToleranceRecord {
            inner_abs: opts.inner_tolerance.abs,
            inner_rel: opts.inner_tolerance.rel,
            outer_abs: opts.outer_tolerance.abs,
            outer_rel: opts.outer_tolerance.rel,
        },
        monte_carlo: scenario.monte_carlo.clone(),
        curves: records,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let path = scenario.output_dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").map_err(|e| Error::Io(path.display().to_string(), e))?;
    Ok(RunOutput { manifest, curves, flagged })
}

/// Association probabilities per tier and state, for reports.
pub fn association_rows(cfg: &NetworkConfig) -> Result<Vec<(usize, LinkState, f64)>, Error> {
    let t = association_table(cfg)?;
    Ok((0..cfg.num_tiers())
        .flat_map(|k| LinkState::PROPAGATING.into_iter().map(move |s| (k, s)))
        .map(|(k, s)| (k, s, t.get(k, s)))
        .collect())
}
