//! Effective reflection under oblique incidence and the four polarization
//! components of one element.

use ris_gbsm::element::{
    effective_reflection, element_pattern_matrix, ElementGeometry, PhaseModel, ReflectionCoefficient,
};
use ris_gbsm::geometry::SphericalAngle;

fn main() -> ris_gbsm::Result<()> {
    let r = ReflectionCoefficient::from_phase(90f64.to_radians());
    println!("preset phase 90 deg");
    for theta in [0.0, 30.0, 45.0, 60.0, 75.0] {
        let eff = effective_reflection(r, f64::to_radians(theta))?;
        println!("  incidence {theta:>4} deg -> effective phase {:7.2} deg", eff.phase().to_degrees());
    }

    let geom = ElementGeometry::for_frequency(0.0156, 0.0156, 6e9)?;
    let inc = SphericalAngle::from_degrees(60.0, 90.0)?;
    let out = SphericalAngle::from_degrees(30.0, 0.0)?;
    for model in PhaseModel::ALL {
        let f = element_pattern_matrix(&geom, inc, out, r, model)?;
        println!("{:>9}: |vv| {:.3e}  |vh| {:.3e}  |hv| {:.3e}  |hh| {:.3e}",
            model.as_str(), f.vv.norm(), f.vh.norm(), f.hv.norm(), f.hh.norm());
    }
    Ok(())
}
