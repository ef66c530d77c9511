//! Parallel Monte Carlo on top of the core simulator.

use std::io::Write;

use hetnet_core::sim::{DropOptions, DropResult, SimConfig, Simulator, Tally, TallyGrid};
use hetnet_core::NetworkConfig;
use rayon::prelude::*;

use crate::Error;

/// Runs all chunks on the rayon pool. Tallies are integer counts, so the
/// result matches the sequential run exactly.
pub fn run(cfg: &NetworkConfig, sim: SimConfig, opts: DropOptions, grid: &TallyGrid) -> Result<Tally, Error> {
    let simulator = Simulator::new(cfg, sim)?;
    let parts: Vec<Tally> = sim
        .chunks()
        .into_par_iter()
        .map(|r| simulator.run_range(r, opts, grid))
        .collect();
    let mut total = Tally::new(cfg.num_tiers(), grid);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

/// Chunk count for the current pool: a few chunks per worker.
pub fn default_chunks(drops: u64) -> usize {
    let want = 4 * rayon::current_num_threads() as u64;
    want.min(drops).max(1) as usize
}

/// Writes one CSV row per drop: `drop_id, tier, state, path_loss, sinr_db,
/// snr_db, rate_bps`. Tiers are 1-based; outage rows leave the tier empty.
pub fn write_trace<W: Write>(cfg: &NetworkConfig, sim: SimConfig, opts: DropOptions, out: W) -> Result<(), Error> {
    let simulator = Simulator::new(cfg, sim)?;
    let rows: Vec<DropResult> = (0..sim.drops).into_par_iter().map(|i| simulator.drop(i, opts)).collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["drop_id", "tier", "state", "path_loss", "sinr_db", "snr_db", "rate_bps"])?;
    for (i, d) in rows.iter().enumerate() {
        let (tier, state) = match d.associated {
            Some((k, s)) => ((k + 1).to_string(), s.label()),
            None => (String::new(), "outage"),
        };
        let db = |x: f64| if x > 0.0 { format!("{}", 10.0 * x.log10()) } else { String::new() };
        w.write_record([
            i.to_string(),
            tier,
            state.to_string(),
            d.serving_path_loss.to_string(),
            db(d.sinr),
            db(d.snr),
            d.rate.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io("trace".into(), e))?;
    Ok(())
}
