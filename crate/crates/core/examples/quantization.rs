//! Gain at the target for continuous, 1/2/3-bit and specular masks.

use ris_gbsm::element::{ElementGeometry, PhaseModel};
use ris_gbsm::geometry::{Pose, SphericalAngle};
use ris_gbsm::panel::{gain_db, panel_pattern, PanelConfig, Strategy};

fn main() -> ris_gbsm::Result<()> {
    let el = ElementGeometry::for_frequency(0.0156, 0.0156, 6e9)?;
    let panel = PanelConfig::new(32, 32, 0.0247, el, Pose::identity())?;
    let inc = SphericalAngle::from_degrees(60.0, 90.0)?;
    let target = SphericalAngle::from_degrees(30.0, 0.0)?;

    let reference = {
        let m = Strategy::Optimal.mask(&panel, inc.direction(), target.direction())?;
        gain_db(panel_pattern(&panel, &m, inc, target, PhaseModel::IdealPhase)?.vv)
    };
    for s in [Strategy::Optimal, Strategy::Quantized(3), Strategy::Quantized(2), Strategy::OneBit, Strategy::Specular] {
        let m = s.mask(&panel, inc.direction(), target.direction())?;
        let row: Vec<String> = PhaseModel::ALL
            .iter()
            .map(|&model| {
                let g = gain_db(panel_pattern(&panel, &m, inc, target, model)?.vv) - reference;
                Ok(format!("{}: {g:7.2} dB", model.as_str()))
            })
            .collect::<ris_gbsm::Result<_>>()?;
        println!("{:>9}  {}", s.label(), row.join("   "));
    }
    Ok(())
}
