//! Draw Tx-RIS sub-channels and summarise their statistics.

use ris_gbsm::gbsm::{circular_std, generate_subchannel, rms_delay_spread, LinkState, ScenarioConfig};
use ris_gbsm::geometry::Position3;

fn main() -> ris_gbsm::Result<()> {
    let tx = Position3::new(0.0, 0.0, 10.0);
    let ris = Position3::new(-15.0, 15.0, 6.0);
    for state in [LinkState::Los, LinkState::Nlos] {
        let mut cfg = ScenarioConfig::new(6e9, state);
        cfg.seed = 11;
        let s = generate_subchannel(&cfg, tx, ris, &mut cfg.rng())?;
        let p: Vec<f64> = s.paths().map(|r| r.power).collect();
        let t: Vec<f64> = s.paths().map(|r| r.delay).collect();
        println!(
            "{state}: {} paths, PL {:.1} dB, LOS power {:.3}, rms DS {:.1} ns, ASA {:.1} deg",
            s.path_count(),
            s.path_loss_db,
            s.los_ray.map_or(0.0, |r| r.power),
            rms_delay_spread(&p, &t) * 1e9,
            circular_std(s.rays.iter().map(|r| r.arrival.azimuth())).to_degrees(),
        );
    }
    Ok(())
}
