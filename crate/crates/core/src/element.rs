//! Single-element response of the RIS under oblique incidence.
//!
//! A preset reflection coefficient `R` is only realized at normal incidence.
//! For incidence zenith `t` the element actually applies
//!
//! ```text
//! R_eff = ((1 + R) cos t - (1 - R)) / ((1 + R) cos t + (1 - R))
//! ```
//!
//! which keeps `|R_eff| = 1` but bends its phase towards 0 or pi. The element
//! then re-radiates through an equivalent electric current scaled by
//! `(R_eff - 1)` and a magnetic current scaled by `(R_eff + 1)`. For
//! vertically polarized incidence the two outgoing polarization components are
//!
//! ```text
//! f_vv = P sinc(X) sinc(Y) [ A_vv R_eff + B_vv ]
//! f_vh = P sinc(X) sinc(Y) [ A_vh R_eff + B_vh ]
//!
//! P    = -j a b sqrt(mu eps) / (2 lambda)
//! X    = (pi a / lambda) sin(t_out) cos(p_out)
//! Y    = (pi b / lambda) sin(t_out) sin(p_out)
//!
//! A_vv =  ct_i st_i ct_o st_o - ct_i cp_i ct_o sp_o - sp_i sp_o + sp_i cp_o
//! B_vv = -ct_i st_i ct_o st_o + ct_i cp_i ct_o sp_o - sp_i sp_o + sp_i cp_o
//! A_vh =  ct_i sp_i sp_o + ct_i cp_i cp_o - cp_i ct_o sp_o - sp_i ct_o sp_o
//! B_vh = -ct_i sp_i sp_o - ct_i cp_i cp_o - cp_i ct_o sp_o - sp_i ct_o sp_o
//! ```
//!
//! with `ct_i = cos(t_in)`, `sp_o = sin(p_out)` and so on, all angles in the
//! panel's local frame. The leading `ct_i st_i ct_o st_o` product of the vv
//! terms is kept as published; [`VV_LEADING_TERM`] switches it to the
//! `ct_i st_i ct_o sp_o` variant.
//!
//! # Horizontal incidence
//!
//! No closed form is published for horizontally polarized incidence. We use
//! field duality: the incident polarization is rotated by 90 degrees, which
//! maps `(cos p_in, sin p_in) -> (-sin p_in, cos p_in)` in the incidence
//! factors, and the electric/magnetic current roles swap, so the current
//! scalings `(R_eff - 1)` and `(R_eff + 1)` trade places. In bracket form that
//! is `[A R_eff - B]` with `A`, `B` evaluated at the rotated incidence
//! azimuth:
//!
//! ```text
//! f_hv = P sinc(X) sinc(Y) [ A_vv' R_eff - B_vv' ]
//! f_hh = P sinc(X) sinc(Y) [ A_vh' R_eff - B_vh' ]
//! ```
//!
//! Absolute levels carry `sqrt(mu0 eps0) = 1/c` in SI units, so only relative
//! levels (between models, strategies, directions) are meaningful.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SphericalAngle;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

const UNIT_MODULUS_TOL: f64 = 1e-9;

/// Which leading product enters the vv brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VvLeadingTerm {
    /// `cos t_in sin t_in cos t_out sin t_out`, as published.
    AsPrinted,
    /// `cos t_in sin t_in cos t_out sin p_out`.
    SinPhiOut,
}

pub const VV_LEADING_TERM: VvLeadingTerm = VvLeadingTerm::AsPrinted;

/// Unit-modulus complex reflection coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoefficient(Complex64);

impl ReflectionCoefficient {
    pub const ONE: ReflectionCoefficient = ReflectionCoefficient(Complex64::new(1.0, 0.0));
    pub const MINUS_ONE: ReflectionCoefficient = ReflectionCoefficient(Complex64::new(-1.0, 0.0));

    pub fn new(value: Complex64) -> Result<Self> {
        let m = value.norm();
        if !m.is_finite() || (m - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::NotUnitModulus(m));
        }
        Ok(Self(value))
    }

    /// `exp(j phase)`.
    pub fn from_phase(phase: f64) -> Self {
        Self(Complex64::from_polar(1.0, phase))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// Phase in `(-pi, pi]`.
    pub fn phase(&self) -> f64 {
        self.0.arg()
    }
}

/// Physical description of one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    /// Element length `a` (m).
    pub length: f64,
    /// Element width `b` (m).
    pub width: f64,
    pub wavelength: f64,
    pub permeability: f64,
    pub permittivity: f64,
}

impl ElementGeometry {
    /// Vacuum permeability and permittivity.
    pub fn new(length: f64, width: f64, wavelength: f64) -> Result<Self> {
        let g = Self {
            length,
            width,
            wavelength,
            permeability: VACUUM_PERMEABILITY,
            permittivity: VACUUM_PERMITTIVITY,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn for_frequency(length: f64, width: f64, frequency: f64) -> Result<Self> {
        if !(frequency > 0.0) {
            return Err(Error::invalid("frequency", "must be positive"));
        }
        Self::new(length, width, SPEED_OF_LIGHT / frequency)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("length", self.length),
            ("width", self.width),
            ("wavelength", self.wavelength),
            ("permeability", self.permeability),
            ("permittivity", self.permittivity),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// `-j a b sqrt(mu eps) / (2 lambda)`.
    pub fn prefactor(&self) -> Complex64 {
        let m = self.length * self.width * (self.permeability * self.permittivity).sqrt()
            / (2.0 * self.wavelength);
        Complex64::new(0.0, -m)
    }
}

/// Whether the oblique-incidence phase distortion is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseModel {
    NonIdeal,
    IdealPhase,
}

impl PhaseModel {
    pub const ALL: [PhaseModel; 2] = [PhaseModel::NonIdeal, PhaseModel::IdealPhase];

    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseModel::NonIdeal => "non-ideal",
            PhaseModel::IdealPhase => "ideal",
        }
    }

    /// Coefficient the element actually applies for the given incidence.
    pub fn applied(
        &self,
        preset: ReflectionCoefficient,
        zenith_in: f64,
    ) -> Result<ReflectionCoefficient> {
        match self {
            PhaseModel::NonIdeal => effective_reflection(preset, zenith_in),
            PhaseModel::IdealPhase => {
                check_incidence(zenith_in)?;
                Ok(preset)
            }
        }
    }
}

impl std::str::FromStr for PhaseModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "non-ideal" | "nonideal" => Ok(PhaseModel::NonIdeal),
            "ideal" => Ok(PhaseModel::IdealPhase),
            other => Err(format!("unknown model `{other}` (expected non-ideal|ideal)")),
        }
    }
}

/// The four polarization-coupled gains. `vh` is the horizontal output
/// excited by vertical input.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ElementPatternValue {
    pub vv: Complex64,
    pub vh: Complex64,
    pub hv: Complex64,
    pub hh: Complex64,
}

impl ElementPatternValue {
    pub fn is_finite(&self) -> bool {
        [self.vv, self.vh, self.hv, self.hh]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn to_array(self) -> [Complex64; 4] {
        [self.vv, self.vh, self.hv, self.hh]
    }
}

fn check_incidence(zenith_in: f64) -> Result<()> {
    if !(0.0..FRAC_PI_2).contains(&zenith_in) {
        return Err(Error::GrazingIncidence(zenith_in));
    }
    Ok(())
}

fn check_exit(zenith_out: f64) -> Result<()> {
    if !(0.0..FRAC_PI_2).contains(&zenith_out) {
        return Err(Error::BackSideExit(zenith_out));
    }
    Ok(())
}

/// Reflection coefficient realized by an element preset to `preset` when
/// illuminated from zenith `zenith_in` (front side only).
pub fn effective_reflection(
    preset: ReflectionCoefficient,
    zenith_in: f64,
) -> Result<ReflectionCoefficient> {
    check_incidence(zenith_in)?;
    Ok(ReflectionCoefficient(effective_reflection_raw(
        preset.0,
        zenith_in.cos(),
    )))
}

pub(crate) fn effective_reflection_raw(r: Complex64, cos_in: f64) -> Complex64 {
    let plus = (1.0 + r) * cos_in;
    let minus = 1.0 - r;
    (plus - minus) / (plus + minus)
}

/// `sin(x) / x`, 1 at the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0
    } else {
        x.sin() / x
    }
}

#[derive(Debug, Clone, Copy)]
struct Trig {
    ct_i: f64,
    st_i: f64,
    cp_i: f64,
    sp_i: f64,
    ct_o: f64,
    st_o: f64,
    cp_o: f64,
    sp_o: f64,
}

impl Trig {
    fn new(incidence: SphericalAngle, exit: SphericalAngle) -> Self {
        let (st_i, ct_i) = incidence.zenith().sin_cos();
        let (sp_i, cp_i) = incidence.azimuth().sin_cos();
        let (st_o, ct_o) = exit.zenith().sin_cos();
        let (sp_o, cp_o) = exit.azimuth().sin_cos();
        Self {
            ct_i,
            st_i,
            cp_i,
            sp_i,
            ct_o,
            st_o,
            cp_o,
            sp_o,
        }
    }

    /// Incident polarization rotated by 90 degrees.
    fn rotated_incidence(self) -> Self {
        Self {
            cp_i: -self.sp_i,
            sp_i: self.cp_i,
            ..self
        }
    }

    /// `(A_vv, B_vv, A_vh, B_vh)`.
    fn brackets(&self, lead: VvLeadingTerm) -> [f64; 4] {
        let Trig {
            ct_i,
            st_i,
            cp_i,
            sp_i,
            ct_o,
            st_o,
            cp_o,
            sp_o,
        } = *self;
        let lead = match lead {
            VvLeadingTerm::AsPrinted => ct_i * st_i * ct_o * st_o,
            VvLeadingTerm::SinPhiOut => ct_i * st_i * ct_o * sp_o,
        };
        let a_vv = lead - ct_i * cp_i * ct_o * sp_o - sp_i * sp_o + sp_i * cp_o;
        let b_vv = -lead + ct_i * cp_i * ct_o * sp_o - sp_i * sp_o + sp_i * cp_o;
        let a_vh = ct_i * sp_i * sp_o + ct_i * cp_i * cp_o - cp_i * ct_o * sp_o - sp_i * ct_o * sp_o;
        let b_vh =
            -(ct_i * sp_i * sp_o + ct_i * cp_i * cp_o + cp_i * ct_o * sp_o + sp_i * ct_o * sp_o);
        [a_vv, b_vv, a_vh, b_vh]
    }
}

/// Angle-dependent part of the element pattern, separated from the applied
/// reflection coefficient.
///
/// Every component is `scale * (a[i] * R + b[i])`, so a sum over elements
/// only needs `sum(R * phasor)` and `sum(phasor)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PatternTerms {
    pub scale: Complex64,
    /// Coefficients of `R_eff`, in vv, vh, hv, hh order.
    pub a: [f64; 4],
    /// `R_eff`-independent coefficients, same order.
    pub b: [f64; 4],
}

impl PatternTerms {
    pub fn new(
        geom: &ElementGeometry,
        incidence: SphericalAngle,
        exit: SphericalAngle,
    ) -> Result<Self> {
        check_incidence(incidence.zenith())?;
        check_exit(exit.zenith())?;
        let trig = Trig::new(incidence, exit);
        let [a_vv, b_vv, a_vh, b_vh] = trig.brackets(VV_LEADING_TERM);
        let [a_hv, b_hv, a_hh, b_hh] = trig.rotated_incidence().brackets(VV_LEADING_TERM);

        let k_half = PI / geom.wavelength;
        let x = k_half * geom.length * trig.st_o * trig.cp_o;
        let y = k_half * geom.width * trig.st_o * trig.sp_o;
        let scale = geom.prefactor() * sinc(x) * sinc(y);

        Ok(Self {
            scale,
            a: [a_vv, a_vh, a_hv, a_hh],
            b: [b_vv, b_vh, -b_hv, -b_hh],
        })
    }

    pub fn combine(&self, sum_r: Complex64, sum_one: Complex64) -> ElementPatternValue {
        let c = |i: usize| self.scale * (sum_r * self.a[i] + sum_one * self.b[i]);
        ElementPatternValue {
            vv: c(0),
            vh: c(1),
            hv: c(2),
            hh: c(3),
        }
    }
}

/// `(f_vv, f_vh)` for vertically polarized incidence, using the
/// oblique-incidence coefficient.
pub fn element_pattern_v(
    geom: &ElementGeometry,
    incidence: SphericalAngle,
    exit: SphericalAngle,
    preset: ReflectionCoefficient,
) -> Result<(Complex64, Complex64)> {
    let v = element_pattern_matrix(geom, incidence, exit, preset, PhaseModel::NonIdeal)?;
    Ok((v.vv, v.vh))
}

/// `(f_hv, f_hh)` for horizontally polarized incidence (duality form, see
/// module docs).
pub fn element_pattern_h(
    geom: &ElementGeometry,
    incidence: SphericalAngle,
    exit: SphericalAngle,
    preset: ReflectionCoefficient,
) -> Result<(Complex64, Complex64)> {
    let v = element_pattern_matrix(geom, incidence, exit, preset, PhaseModel::NonIdeal)?;
    Ok((v.hv, v.hh))
}

/// All four gains. [`PhaseModel::IdealPhase`] feeds the preset coefficient
/// straight into the pattern.
pub fn element_pattern_matrix(
    geom: &ElementGeometry,
    incidence: SphericalAngle,
    exit: SphericalAngle,
    preset: ReflectionCoefficient,
    model: PhaseModel,
) -> Result<ElementPatternValue> {
    let terms = PatternTerms::new(geom, incidence, exit)?;
    let applied = model.applied(preset, incidence.zenith())?;
    Ok(terms.combine(applied.value(), Complex64::new(1.0, 0.0)))
}
