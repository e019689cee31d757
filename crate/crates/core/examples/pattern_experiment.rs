//! Ideal versus non-ideal pattern of the Reference panel.

use ris_gbsm::element::PhaseModel;
use ris_gbsm::experiments::{run_pattern_experiment, PatternSetup};

fn main() -> ris_gbsm::Result<()> {
    let setup = PatternSetup::reference();
    let ideal = setup.target_gain_db(PhaseModel::IdealPhase)?;
    let non = setup.target_gain_db(PhaseModel::NonIdeal)?;
    for (i, pair) in ["vv", "vh", "hv", "hh"].iter().enumerate() {
        println!("{pair}: non-ideal minus ideal at target {:+.3} dB", non[i] - ideal[i]);
    }
    let r = run_pattern_experiment(&setup)?;
    let csv = r.to_csv();
    println!("{} rows; first lines:", r.rows.len());
    csv.lines().take(4).for_each(|l| println!("  {l}"));
    Ok(())
}
