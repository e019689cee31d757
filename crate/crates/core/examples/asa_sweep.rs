//! Mean SNR against Tx-RIS arrival spread for both phase models.

use ris_gbsm::element::PhaseModel;
use ris_gbsm::experiments::{mean_snr, run_asa_sweep, AsaSweepSetup};

fn main() -> ris_gbsm::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let setup = AsaSweepSetup::reference(seed);
    let r = run_asa_sweep(&setup)?;
    println!("{} seeds, master seed {seed}", setup.seeds);
    for &asa in &setup.asa_deg {
        let i = mean_snr(&r.rows, asa, PhaseModel::IdealPhase).unwrap();
        let n = mean_snr(&r.rows, asa, PhaseModel::NonIdeal).unwrap();
        println!("ASA {asa:>4} deg: ideal {i:8.2} dB  non-ideal {n:8.2} dB  gap {:.3} dB", i - n);
    }
    Ok(())
}
