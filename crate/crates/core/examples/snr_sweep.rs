//! Received SNR against panel size, carrier and strategy.

use ris_gbsm::experiments::{run_config_sweep, ConfigSweepSetup};

fn main() -> ris_gbsm::Result<()> {
    let full = std::env::args().any(|a| a == "--full-scale");
    let setup = ConfigSweepSetup::reference(full);
    let r = run_config_sweep(&setup)?;
    for f in [3.0, 6.0] {
        println!("{f} GHz");
        for &n in &setup.sides {
            let cells: Vec<String> = r
                .rows
                .iter()
                .filter(|x| x.freq_ghz == f && x.n_side == n)
                .map(|x| format!("{} {:8.2}", x.strategy, x.snr_db))
                .collect();
            println!("  {n:>3}x{n:<3} {}", cells.join("  "));
        }
    }
    Ok(())
}
