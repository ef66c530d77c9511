use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hetnet::scenario::{self, Exclusion, Mode, Overrides, Scenario};
use hetnet::{load_network, mc, Error};
use hetnet_core::association::{association_table, mean_load};
use hetnet_core::sim::{DropOptions, SimConfig, TallyGrid};
use hetnet_core::units::{db_to_linear, linear_to_db, watts_to_dbm};
use hetnet_core::LinkState;

#[derive(Parser)]
#[command(name = "hetnet", version, about = "Coverage analysis for K-tier mmWave cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write CSVs plus manifest.json.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        exclusion_zone: Option<Exclusion>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Output directory (defaults to the scenario's `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a network configuration and print derived quantities.
    Validate { config: PathBuf },
    /// Monte Carlo association and coverage for a configuration.
    Mc {
        config: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        drops: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated SINR thresholds, dB.
        #[arg(long, value_delimiter = ',', default_values_t = [-10.0, 0.0, 10.0])]
        threshold_db: Vec<f64>,
        /// Beam misalignment standard deviation, degrees.
        #[arg(long)]
        sigma_be_deg: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Sinr)]
        mode: Mode,
        /// Write a per-drop CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn validate(path: PathBuf) -> Result<(), Error> {
    let (_, cfg) = load_network(&path)?;
    let table = association_table(&cfg)?;
    println!("{}: {} tier(s), valid", path.display(), cfg.num_tiers());
    for (k, t) in cfg.tiers.iter().enumerate() {
        println!(
            "tier {}: {:?}, density {:e}/m^2, power {:.1} dBm, bias {:.1} dB, noise {:.1} dBm, kappa {:.2} dB, load {:.3}",
            k + 1,
            t.band,
            t.density,
            watts_to_dbm(t.tx_power),
            linear_to_db(t.bias),
            watts_to_dbm(t.noise_power),
            linear_to_db(t.balls[0].kappa_los),
            mean_load(&cfg, &table, k),
        );
        for s in LinkState::PROPAGATING {
            println!("  association {}: {:.6}", s.label(), table.get(k, s));
        }
    }
    println!("outage: {:.6}", table.outage_prob);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn monte_carlo(
    path: PathBuf,
    drops: u64,
    seed: u64,
    threshold_db: Vec<f64>,
    sigma_be_deg: Option<f64>,
    mode: Mode,
    trace: Option<PathBuf>,
) -> Result<(), Error> {
    let (_, cfg) = load_network(&path)?;
    let mut sim = SimConfig::new(&cfg, drops, seed);
    sim.parallel_chunks = mc::default_chunks(drops);
    let opts = DropOptions {
        disable_interference: mode != Mode::Sinr,
        beam_error_sigma: sigma_be_deg.map(f64::to_radians),
    };
    let grid = TallyGrid {
        thresholds: threshold_db.iter().map(|&d| db_to_linear(d)).collect(),
        rates: Vec::new(),
    };
    let tally = mc::run(&cfg, sim, opts, &grid)?;
    println!("kind,tier,state,value,stderr");
    for k in 0..cfg.num_tiers() {
        for s in LinkState::PROPAGATING {
            let e = tally.association(k, s);
            println!("association,{},{},{},{}", k + 1, s.label(), e.value, e.stderr);
        }
    }
    let o = tally.outage();
    println!("association,,outage,{},{}", o.value, o.stderr);
    for (d, e) in threshold_db.iter().zip(tally.sinr_coverage()) {
        println!("coverage_db_{d},,,{},{}", e.value, e.stderr);
    }
    if let Some(p) = trace {
        let f = File::create(&p).map_err(|e| Error::Io(p.display().to_string(), e))?;
        mc::write_trace(&cfg, sim, opts, BufWriter::new(f))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario: path,
            exclusion_zone,
            mode,
            out,
        } => Scenario::load(&path).and_then(|s| {
            let overrides = Overrides {
                mode,
                exclusion_zone,
                output_dir: out,
            };
            let run = scenario::run(s, &overrides)?;
            for c in &run.manifest.curves {
                println!("{} ({} points)", c.file, c.points);
            }
            if run.flagged > 0 {
                eprintln!("{} point(s) did not converge; see the `converged` column", run.flagged);
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }),
        Command::Validate { config } => validate(config).map(|_| ExitCode::SUCCESS),
        Command::Mc {
            config,
            drops,
            seed,
            threshold_db,
            sigma_be_deg,
            mode,
            trace,
        } => monte_carlo(config, drops, seed, threshold_db, sigma_be_deg, mode, trace).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
