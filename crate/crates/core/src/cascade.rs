//! Tx-RIS-Rx cascade impulse response.
//!
//! For every ray pair and antenna pair `(p, q)`:
//!
//! ```text
//! a = sqrt(P1 P2) F_rx,p^T  X2  F_ris(in, out)  X1  F_tx,q  exp(j k (r_rx . d_p + r_tx . d_q))
//! tau = tau1 + tau2
//! ```
//!
//! `F_ris` maps the incident (v, h) field onto the reflected one, so its
//! rows are output polarizations: `[[F_vv, F_hv], [F_vh, F_hh]]`. Path loss
//! is kept out of the taps.

use std::f64::consts::TAU;
use std::ops::Mul;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::element::PhaseModel;
use crate::error::{Error, Result};
use crate::gbsm::{cascade_path_loss, Ray, SubChannel};
use crate::geometry::{Position3, SphericalAngle};
use crate::panel::{PanelConfig, PanelEvaluator, PanelPatternValue, PhaseMask};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2x2 complex matrix, `m[row][col]` with index 0 = v and 1 = h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationMatrix(pub [[Complex64; 2]; 2]);

impl PolarizationMatrix {
    pub const IDENTITY: PolarizationMatrix = PolarizationMatrix([[ONE, ZERO], [ZERO, ONE]]);

    pub fn diagonal(v: Complex64, h: Complex64) -> Self {
        Self([[v, ZERO], [ZERO, h]])
    }

    /// Reflection matrix of a panel response: column = incident
    /// polarization, row = reflected polarization.
    pub fn from_pattern(f: &PanelPatternValue) -> Self {
        Self([[f.vv, f.hv], [f.vh, f.hh]])
    }

    pub fn apply(&self, x: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * x[0] + m[0][1] * x[1],
            m[1][0] * x[0] + m[1][1] * x[1],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_finite())
    }
}

impl Mul for PolarizationMatrix {
    type Output = PolarizationMatrix;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

/// Random-phase cross-polarization matrix of a ray.
///
/// The LOS ray carries no leakage and uses the `diag(e^{jphi}, -e^{jphi})`
/// convention with its geometric phase.
pub fn xpr_matrix(ray: &Ray) -> PolarizationMatrix {
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let [vv, vh, hv, hh] = ray.phases;
    if ray.is_los() {
        return PolarizationMatrix::diagonal(e(vv), -e(hh));
    }
    let leak = if ray.xpr.is_infinite() {
        0.0
    } else {
        (1.0 / ray.xpr).sqrt()
    };
    PolarizationMatrix([[e(vv), leak * e(vh)], [leak * e(hv), e(hh)]])
}

/// Field pattern `(F_v, F_h)` of an antenna element.
#[derive(Debug, Clone, Copy)]
pub enum AntennaPattern {
    Isotropic { v: Complex64, h: Complex64 },
    Custom(fn(SphericalAngle) -> [Complex64; 2]),
}

impl AntennaPattern {
    pub const VERTICAL: AntennaPattern = AntennaPattern::Isotropic { v: ONE, h: ZERO };
    pub const HORIZONTAL: AntennaPattern = AntennaPattern::Isotropic { v: ZERO, h: ONE };

    pub fn gain(&self, angle: SphericalAngle) -> [Complex64; 2] {
        match self {
            AntennaPattern::Isotropic { v, h } => [*v, *h],
            AntennaPattern::Custom(f) => f(angle),
        }
    }
}

/// One array element; `position` is the offset from the link endpoint.
#[derive(Debug, Clone, Copy)]
pub struct AntennaElement {
    pub position: Position3,
    pub pattern: AntennaPattern,
}

impl AntennaElement {
    pub fn isotropic_vertical() -> Self {
        Self {
            position: Position3::ORIGIN,
            pattern: AntennaPattern::VERTICAL,
        }
    }

    /// Uniform linear array along `axis` with the given spacing, centred
    /// on the endpoint.
    pub fn linear_array(count: usize, spacing: f64, axis: [f64; 3], pattern: AntennaPattern) -> Vec<Self> {
        let mid = (count as f64 - 1.0) / 2.0;
        (0..count)
            .map(|i| {
                let s = (i as f64 - mid) * spacing;
                AntennaElement {
                    position: Position3::new(axis[0] * s, axis[1] * s, axis[2] * s),
                    pattern,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirTap {
    pub delay: f64,
    pub amp: Complex64,
}

/// Cascade taps per antenna pair plus the cascade path loss.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeChannel {
    pub num_rx: usize,
    pub num_tx: usize,
    pub carrier_hz: f64,
    pub path_loss_db: f64,
    /// Indexed `p * num_tx + q`; within a pair, taps run over sub1 paths
    /// (outer) and sub2 paths (inner), LOS first.
    taps: Vec<Vec<CirTap>>,
}

impl CascadeChannel {
    pub fn taps(&self, p: usize, q: usize) -> Result<&[CirTap]> {
        if p >= self.num_rx || q >= self.num_tx {
            return Err(Error::AntennaIndex { p, q });
        }
        Ok(&self.taps[p * self.num_tx + q])
    }

    /// Total tap power of a pair, `sum |a|^2`.
    pub fn pair_power(&self, p: usize, q: usize) -> Result<f64> {
        Ok(self.taps(p, q)?.iter().map(|t| t.amp.norm_sqr()).sum())
    }
}

/// RIS configuration as seen by the cascade.
#[derive(Debug, Clone, Copy)]
pub struct RisSetup<'a> {
    pub panel: &'a PanelConfig,
    pub mask: &'a PhaseMask,
    pub model: PhaseModel,
}

fn same_point(a: Position3, b: Position3) -> bool {
    a.distance(&b) <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

/// Builds the cascade from the Tx-RIS and RIS-Rx sub-channels.
///
/// Rays reaching the back of the panel, or leaving through it, contribute
/// zero-amplitude taps so the tap layout stays `|rays1| x |rays2|`.
pub fn compose_cir(
    sub1: &SubChannel,
    sub2: &SubChannel,
    ris: RisSetup<'_>,
    tx: &[AntennaElement],
    rx: &[AntennaElement],
) -> Result<CascadeChannel> {
    let pose = &ris.panel.pose;
    if !same_point(sub1.end, pose.origin) {
        return Err(Error::FrameMismatch(format!(
            "Tx-RIS link ends at {:?}, RIS is at {:?}",
            sub1.end, pose.origin
        )));
    }
    if !same_point(sub2.start, pose.origin) {
        return Err(Error::FrameMismatch(format!(
            "RIS-Rx link starts at {:?}, RIS is at {:?}",
            sub2.start, pose.origin
        )));
    }
    if sub1.path_count() == 0 || sub2.path_count() == 0 {
        return Err(Error::EmptySubChannel);
    }
    if tx.is_empty() || rx.is_empty() {
        return Err(Error::invalid("antennas", "need at least one Tx and one Rx element"));
    }
    ris.panel.validate()?;

    let k = TAU * sub1.carrier_hz / crate::element::SPEED_OF_LIGHT;
    let rays1: Vec<&Ray> = sub1.paths().collect();
    let rays2: Vec<&Ray> = sub2.paths().collect();

    // Rx side: per sub2 ray, the reflection exit in the panel frame, the
    // Rx field vectors and array phases.
    let exits: Vec<Option<SphericalAngle>> = rays2
        .iter()
        .map(|r| front_side(pose.to_local(r.departure.direction()).angles()))
        .collect();
    let chi2: Vec<PolarizationMatrix> = rays2.iter().map(|r| xpr_matrix(r)).collect();
    let rx_terms: Vec<Vec<[Complex64; 2]>> = rays2
        .iter()
        .map(|r| antenna_terms(rx, r.arrival, k))
        .collect();

    let per_ray1: Vec<Result<Vec<Vec<CirTap>>>> = rays1
        .par_iter()
        .map(|r1| {
            let incidence = front_side(pose.to_local(r1.arrival.direction()).angles());
            let eval = incidence
                .map(|inc| PanelEvaluator::new(ris.panel, ris.mask, inc, ris.model))
                .transpose()?;
            let chi1 = xpr_matrix(r1);
            let tx_terms = antenna_terms(tx, r1.departure, k);
            // taps[pair][j] for this sub1 ray
            let mut out = vec![Vec::with_capacity(rays2.len()); rx.len() * tx.len()];
            for (j, r2) in rays2.iter().enumerate() {
                let delay = r1.delay + r2.delay;
                let m = match (&eval, exits[j]) {
                    (Some(e), Some(exit)) => {
                        Some(chi2[j] * PolarizationMatrix::from_pattern(&e.evaluate(exit)?) * chi1)
                    }
                    _ => None,
                };
                let scale = (r1.power * r2.power).sqrt();
                for (p, frx) in rx_terms[j].iter().enumerate() {
                    for (q, ftx) in tx_terms.iter().enumerate() {
                        let amp = match m {
                            Some(m) => {
                                let y = m.apply(*ftx);
                                scale * (frx[0] * y[0] + frx[1] * y[1])
                            }
                            None => ZERO,
                        };
                        out[p * tx.len() + q].push(CirTap { delay, amp });
                    }
                }
            }
            Ok(out)
        })
        .collect();

    let mut taps = vec![Vec::with_capacity(rays1.len() * rays2.len()); rx.len() * tx.len()];
    for block in per_ray1 {
        for (pair, chunk) in taps.iter_mut().zip(block?) {
            pair.extend(chunk);
        }
    }

    Ok(CascadeChannel {
        num_rx: rx.len(),
        num_tx: tx.len(),
        carrier_hz: sub1.carrier_hz,
        path_loss_db: cascade_path_loss(sub1.path_loss_db, sub2.path_loss_db),
        taps,
    })
}

fn front_side(a: SphericalAngle) -> Option<SphericalAngle> {
    (a.zenith() < std::f64::consts::FRAC_PI_2).then_some(a)
}

/// Antenna field vectors with the array phase folded in.
fn antenna_terms(elems: &[AntennaElement], angle: SphericalAngle, k: f64) -> Vec<[Complex64; 2]> {
    let r = angle.direction();
    elems
        .iter()
        .map(|e| {
            let w = Complex64::from_polar(1.0, k * r.dot_position(&e.position));
            let [v, h] = e.pattern.gain(angle);
            [v * w, h * w]
        })
        .collect()
}

/// Narrowband response `H = sum a exp(-j 2 pi f tau)` of one antenna pair.
pub fn transfer_function(ch: &CascadeChannel, freq: f64, p: usize, q: usize) -> Result<Complex64> {
    Ok(ch
        .taps(p, q)?
        .iter()
        .map(|t| t.amp * Complex64::from_polar(1.0, -TAU * freq * t.delay))
        .sum())
}
