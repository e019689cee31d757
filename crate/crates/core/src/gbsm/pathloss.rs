//! UMi street-canyon path loss (3GPP TR 38.901, Table 7.4.1-1).
//!
//! ```text
//! PL1      = 32.4 + 21 log10(d3D) + 20 log10(fc)
//! PL2      = 32.4 + 40 log10(d3D) + 20 log10(fc) - 9.5 log10(d'BP^2 + (hBS - hUT)^2)
//! PL_LOS   = PL1 for d2D <= d'BP, PL2 beyond
//! PL'_NLOS = 35.3 log10(d3D) + 22.4 + 21.3 log10(fc) - 0.3 (hUT - 1.5)
//! PL_NLOS  = max(PL_LOS, PL'_NLOS)
//! d'BP     = 4 h'BS h'UT fc / c,  h' = h - 1 m
//! ```
//!
//! `fc` in GHz, distances in meters. Effective heights `h'` are floored at
//! 0.1 m so the breakpoint stays positive for sites near the ground.

use crate::element::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::geometry::Position3;

use super::{LinkState, Scenario};

const MIN_EFFECTIVE_HEIGHT: f64 = 0.1;

/// Heights and distance entering the formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub distance_3d: f64,
    pub bs_height: f64,
    pub ut_height: f64,
}

impl LinkGeometry {
    /// The higher end plays the base-station role.
    pub fn between(a: Position3, b: Position3) -> Self {
        Self {
            distance_3d: a.distance(&b),
            bs_height: a.z.max(b.z),
            ut_height: a.z.min(b.z),
        }
    }

    fn distance_2d(&self) -> f64 {
        let dh = self.bs_height - self.ut_height;
        (self.distance_3d * self.distance_3d - dh * dh).max(0.0).sqrt()
    }
}

pub(crate) fn umi_path_loss(
    scenario: Scenario,
    state: LinkState,
    carrier_hz: f64,
    link: LinkGeometry,
) -> Result<f64> {
    match scenario {
        Scenario::UmiStreetCanyon => {}
    }
    if !(link.distance_3d >= 1.0) {
        return Err(Error::invalid(
            "distance",
            format!("{} m is below the 1 m minimum", link.distance_3d),
        ));
    }
    if !(carrier_hz > 0.0) {
        return Err(Error::invalid("carrier", "must be positive"));
    }
    let fc = carrier_hz / 1e9;
    let d3 = link.distance_3d;
    let h_bs = (link.bs_height - 1.0).max(MIN_EFFECTIVE_HEIGHT);
    let h_ut = (link.ut_height - 1.0).max(MIN_EFFECTIVE_HEIGHT);
    let d_bp = 4.0 * h_bs * h_ut * carrier_hz / SPEED_OF_LIGHT;

    let los = if link.distance_2d() <= d_bp {
        32.4 + 21.0 * d3.log10() + 20.0 * fc.log10()
    } else {
        let dh = link.bs_height - link.ut_height;
        32.4 + 40.0 * d3.log10() + 20.0 * fc.log10() - 9.5 * (d_bp * d_bp + dh * dh).log10()
    };
    Ok(match state {
        LinkState::Los => los,
        LinkState::Nlos => {
            let nlos =
                35.3 * d3.log10() + 22.4 + 21.3 * fc.log10() - 0.3 * (link.ut_height - 1.5);
            los.max(nlos)
        }
    })
}

/// Path loss of the cascade in dB: the linear losses multiply.
pub fn cascade_path_loss(tx_ris_db: f64, ris_rx_db: f64) -> f64 {
    tx_ris_db + ris_rx_db
}
