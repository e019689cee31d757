//! One cascade realisation: taps, narrowband response and SNR.

use ris_gbsm::cascade::{compose_cir, transfer_function, AntennaElement, RisSetup};
use ris_gbsm::element::{ElementGeometry, PhaseModel};
use ris_gbsm::experiments::{snr, LinkBudget, Site};
use ris_gbsm::gbsm::{generate_subchannel, los_subchannel, LinkState, ScenarioConfig};
use ris_gbsm::panel::{PanelConfig, Strategy};

fn main() -> ris_gbsm::Result<()> {
    let site = Site::reference();
    let el = ElementGeometry::for_frequency(0.0156, 0.0156, 6e9)?;
    let panel = PanelConfig::new(32, 32, 0.0247, el, site.ris_pose)?;
    let (din, dout) = site.local_directions()?;
    let mask = Strategy::Optimal.mask(&panel, din, dout)?;

    let mut cfg = ScenarioConfig::new(6e9, LinkState::Nlos);
    cfg.seed = 5;
    let s1 = generate_subchannel(&cfg, site.tx, site.ris(), &mut cfg.rng())?;
    let s2 = los_subchannel(&cfg, site.ris(), site.rx)?;
    let ant = [AntennaElement::isotropic_vertical()];

    for model in PhaseModel::ALL {
        let ch = compose_cir(&s1, &s2, RisSetup { panel: &panel, mask: &mask, model }, &ant, &ant)?;
        let taps = ch.taps(0, 0)?;
        let strongest = taps.iter().max_by(|a, b| a.amp.norm().total_cmp(&b.amp.norm())).unwrap();
        let h = transfer_function(&ch, 6e9, 0, 0)?;
        println!(
            "{:>9}: {} taps, strongest at {:.1} ns, PL {:.1} dB, SNR {:.2} dB",
            model.as_str(),
            taps.len(),
            strongest.delay * 1e9,
            ch.path_loss_db,
            snr(&LinkBudget::reference(ch.path_loss_db), h),
        );
    }
    Ok(())
}
