//! Steer a 32x32 panel and locate the beam along the steering plane.

use ris_gbsm::element::{ElementGeometry, PhaseModel};
use ris_gbsm::geometry::{Pose, SphericalAngle};
use ris_gbsm::panel::{pattern_cut, strategy_optimal, CutSpec, PanelConfig};

fn main() -> ris_gbsm::Result<()> {
    let el = ElementGeometry::for_frequency(0.0156, 0.0156, 6e9)?;
    let panel = PanelConfig::new(32, 32, 0.0247, el, Pose::identity())?;
    let inc = SphericalAngle::from_degrees(60.0, 90.0)?;
    let cut = CutSpec::Zenith { azimuth_deg: 0.0, start_deg: -89.0, stop_deg: 89.0, step_deg: 0.5 };

    for target in [-40.0, -15.0, 0.0, 20.0, 45.0] {
        let dir = SphericalAngle::from_degrees(f64::abs(target), if target < 0.0 { 180.0 } else { 0.0 })?;
        let mask = strategy_optimal(&panel, inc.direction(), dir.direction());
        let c = pattern_cut(&panel, &mask, inc, cut, PhaseModel::IdealPhase)?;
        println!("target {target:>6.1} deg -> vv peak at {:>6.1} deg", c.argmax(0).unwrap_or(f64::NAN));
    }
    Ok(())
}
