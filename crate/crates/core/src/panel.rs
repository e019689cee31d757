//! Panel geometry, phase-mask strategies and full-panel pattern synthesis.
//!
//! The panel response is the element response summed over the grid with the
//! plane-wave phase of both the incident and the outgoing direction:
//!
//! ```text
//! F_*(in, out) = sum_{x,y} f_*(in, out; R_xy) exp(j k r_in . d_xy) exp(j k r_out . d_xy)
//! ```
//!
//! `r_in` points from the panel towards the source, `r_out` towards the
//! observer, both in the panel's local frame.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::element::{
    effective_reflection_raw, element_pattern_matrix, ElementGeometry, ElementPatternValue,
    PatternTerms, PhaseModel, ReflectionCoefficient,
};
use crate::error::{Error, Result};
use crate::geometry::{element_position, grid_offset, Direction3, Pose, Position3, SphericalAngle};

pub type PanelPatternValue = ElementPatternValue;

/// Geometry and placement of a rectangular RIS.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelConfig {
    pub size_x: usize,
    pub size_y: usize,
    /// Center-to-center element spacing (m).
    pub spacing: f64,
    pub element: ElementGeometry,
    pub pose: Pose,
}

impl PanelConfig {
    pub fn new(
        size_x: usize,
        size_y: usize,
        spacing: f64,
        element: ElementGeometry,
        pose: Pose,
    ) -> Result<Self> {
        let cfg = Self {
            size_x,
            size_y,
            spacing,
            element,
            pose,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size_x == 0 || self.size_y == 0 {
            return Err(Error::invalid("panel size", "needs at least one element per side"));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::invalid("spacing", "must be positive"));
        }
        self.element.validate()?;
        if self.spacing < self.element.length.max(self.element.width) {
            return Err(Error::invalid(
                "spacing",
                format!(
                    "{} m is smaller than the element ({} x {} m)",
                    self.spacing, self.element.length, self.element.width
                ),
            ));
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.size_x * self.size_y
    }

    pub fn wavelength(&self) -> f64 {
        self.element.wavelength
    }

    /// Local position of element `(x, y)`, 1-based.
    pub fn element_position(&self, x: usize, y: usize) -> Result<Position3> {
        element_position(x, y, self.size_x, self.size_y, self.spacing)
    }
}

/// Per-element preset reflection coefficients, stored with `y` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMask {
    size_x: usize,
    size_y: usize,
    coefficients: Vec<ReflectionCoefficient>,
}

impl PhaseMask {
    pub fn uniform(size_x: usize, size_y: usize, value: ReflectionCoefficient) -> Self {
        Self {
            size_x,
            size_y,
            coefficients: vec![value; size_x * size_y],
        }
    }

    /// Builds a mask from a function of the 1-based grid index.
    pub fn from_fn(
        size_x: usize,
        size_y: usize,
        mut f: impl FnMut(usize, usize) -> ReflectionCoefficient,
    ) -> Self {
        let mut coefficients = Vec::with_capacity(size_x * size_y);
        for x in 1..=size_x {
            for y in 1..=size_y {
                coefficients.push(f(x, y));
            }
        }
        Self {
            size_x,
            size_y,
            coefficients,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.size_x, self.size_y)
    }

    pub fn get(&self, x: usize, y: usize) -> Result<ReflectionCoefficient> {
        if x == 0 || y == 0 || x > self.size_x || y > self.size_y {
            return Err(Error::GridIndex {
                x,
                y,
                size_x: self.size_x,
                size_y: self.size_y,
            });
        }
        Ok(self.coefficients[(x - 1) * self.size_y + (y - 1)])
    }

    pub fn coefficients(&self) -> &[ReflectionCoefficient] {
        &self.coefficients
    }

    pub fn map(&self, f: impl Fn(ReflectionCoefficient) -> ReflectionCoefficient) -> Self {
        Self {
            size_x: self.size_x,
            size_y: self.size_y,
            coefficients: self.coefficients.iter().copied().map(f).collect(),
        }
    }

    fn check_against(&self, cfg: &PanelConfig) -> Result<()> {
        if (self.size_x, self.size_y) != (cfg.size_x, cfg.size_y) {
            return Err(Error::MaskDimensions {
                mask_x: self.size_x,
                mask_y: self.size_y,
                panel_x: cfg.size_x,
                panel_y: cfg.size_y,
            });
        }
        Ok(())
    }
}

/// Operating strategy of the panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Continuous phases that co-phase the (in, out) pair.
    Optimal,
    /// Optimal phases snapped to {1, -1} by the sign of the real part.
    OneBit,
    /// Optimal phases snapped to the nearest of `2^N` states.
    Quantized(u32),
    /// All elements at 1.
    Specular,
}

impl Strategy {
    pub fn mask(&self, cfg: &PanelConfig, dir_in: Direction3, dir_out: Direction3) -> Result<PhaseMask> {
        match *self {
            Strategy::Optimal => Ok(strategy_optimal(cfg, dir_in, dir_out)),
            Strategy::OneBit => Ok(strategy_1bit(&strategy_optimal(cfg, dir_in, dir_out))),
            Strategy::Quantized(bits) => {
                quantize_nbit(&strategy_optimal(cfg, dir_in, dir_out), bits)
            }
            Strategy::Specular => Ok(strategy_specular(cfg)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Strategy::Optimal => "optimal".into(),
            Strategy::OneBit => "1bit".into(),
            Strategy::Quantized(n) => format!("{n}bit"),
            Strategy::Specular => "specular".into(),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "optimal" => Ok(Strategy::Optimal),
            "1bit" => Ok(Strategy::OneBit),
            "specular" => Ok(Strategy::Specular),
            other => other
                .strip_suffix("bit")
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&n| n >= 1)
                .map(Strategy::Quantized)
                .ok_or_else(|| {
                    format!("unknown strategy `{other}` (expected optimal|1bit|<N>bit|specular)")
                }),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// `R_xy = exp(-j k (r_in + r_out) . d_xy)`: every element's plane-wave phase
/// for the pair is cancelled.
pub fn strategy_optimal(cfg: &PanelConfig, dir_in: Direction3, dir_out: Direction3) -> PhaseMask {
    let k = cfg.element.wavenumber();
    let ux = dir_in.x() + dir_out.x();
    let uy = dir_in.y() + dir_out.y();
    PhaseMask::from_fn(cfg.size_x, cfg.size_y, |x, y| {
        let px = grid_offset(x, cfg.size_x) * cfg.spacing;
        let py = grid_offset(y, cfg.size_y) * cfg.spacing;
        ReflectionCoefficient::from_phase(-k * (ux * px + uy * py))
    })
}

/// 1 where the real part is non-negative, -1 otherwise.
pub fn strategy_1bit(continuous: &PhaseMask) -> PhaseMask {
    continuous.map(|r| {
        if r.value().re >= 0.0 {
            ReflectionCoefficient::ONE
        } else {
            ReflectionCoefficient::MINUS_ONE
        }
    })
}

pub fn strategy_specular(cfg: &PanelConfig) -> PhaseMask {
    PhaseMask::uniform(cfg.size_x, cfg.size_y, ReflectionCoefficient::ONE)
}

/// The `2^bits` available states `exp(-j 2 pi k / 2^bits)`.
pub fn phase_states(bits: u32) -> Result<Vec<ReflectionCoefficient>> {
    let n = state_count(bits)?;
    Ok((0..n)
        .map(|k| ReflectionCoefficient::from_phase(-2.0 * PI * k as f64 / n as f64))
        .collect())
}

fn state_count(bits: u32) -> Result<u64> {
    if bits == 0 || bits > 32 {
        return Err(Error::invalid("bits", format!("{bits} outside 1..=32")));
    }
    Ok(1u64 << bits)
}

/// Snaps each entry to the nearest available state by phase distance.
pub fn quantize_nbit(continuous: &PhaseMask, bits: u32) -> Result<PhaseMask> {
    let n = state_count(bits)?;
    let step = 2.0 * PI / n as f64;
    Ok(continuous.map(|r| {
        let k = (-r.phase() / step).round().rem_euclid(n as f64);
        ReflectionCoefficient::from_phase(-k * step)
    }))
}

/// Coefficients the elements apply for incidence zenith `zenith_in`.
fn applied_coefficients(mask: &PhaseMask, zenith_in: f64, model: PhaseModel) -> Vec<Complex64> {
    let cos_in = zenith_in.cos();
    mask.coefficients
        .iter()
        .map(|r| match model {
            PhaseModel::NonIdeal => effective_reflection_raw(r.value(), cos_in),
            PhaseModel::IdealPhase => r.value(),
        })
        .collect()
}

/// Row and column plane-wave phasors `exp(j k u . d)` for `u = r_in + r_out`.
fn axis_phasors(cfg: &PanelConfig, ux: f64, n: usize) -> Vec<Complex64> {
    let k = cfg.element.wavenumber();
    (1..=n)
        .map(|i| Complex64::from_polar(1.0, k * ux * grid_offset(i, n) * cfg.spacing))
        .collect()
}

/// Panel response for one (incidence, exit) pair, both in the local frame.
///
/// The element pattern is affine in the applied coefficient and the
/// plane-wave phase factorizes over rows and columns, so only two grid sums
/// are formed.
pub fn panel_pattern(
    cfg: &PanelConfig,
    mask: &PhaseMask,
    incidence: SphericalAngle,
    exit: SphericalAngle,
    model: PhaseModel,
) -> Result<PanelPatternValue> {
    mask.check_against(cfg)?;
    let terms = PatternTerms::new(&cfg.element, incidence, exit)?;
    let applied = applied_coefficients(mask, incidence.zenith(), model);
    Ok(sum_with_applied(cfg, &applied, &terms, incidence, exit))
}

fn sum_with_applied(
    cfg: &PanelConfig,
    applied: &[Complex64],
    terms: &PatternTerms,
    incidence: SphericalAngle,
    exit: SphericalAngle,
) -> PanelPatternValue {
    let r_in = incidence.direction();
    let r_out = exit.direction();
    let ex = axis_phasors(cfg, r_in.x() + r_out.x(), cfg.size_x);
    let ey = axis_phasors(cfg, r_in.y() + r_out.y(), cfg.size_y);

    let sum_ey: Complex64 = ey.iter().sum();
    let mut sum_r = Complex64::new(0.0, 0.0);
    let mut sum_ex = Complex64::new(0.0, 0.0);
    for (row, px) in applied.chunks_exact(cfg.size_y).zip(&ex) {
        let inner: Complex64 = row.iter().zip(&ey).map(|(r, py)| r * py).sum();
        sum_r += inner * px;
        sum_ex += px;
    }
    terms.combine(sum_r, sum_ex * sum_ey)
}

/// Direct double sum of per-element patterns; reference for
/// [`panel_pattern`].
pub fn panel_pattern_naive(
    cfg: &PanelConfig,
    mask: &PhaseMask,
    incidence: SphericalAngle,
    exit: SphericalAngle,
    model: PhaseModel,
) -> Result<PanelPatternValue> {
    mask.check_against(cfg)?;
    let k = cfg.element.wavenumber();
    let r_in = incidence.direction();
    let r_out = exit.direction();
    let mut acc = PanelPatternValue::default();
    for x in 1..=cfg.size_x {
        for y in 1..=cfg.size_y {
            let d = cfg.element_position(x, y)?;
            let f = element_pattern_matrix(&cfg.element, incidence, exit, mask.get(x, y)?, model)?;
            let w = Complex64::from_polar(1.0, k * r_in.dot_position(&d))
                * Complex64::from_polar(1.0, k * r_out.dot_position(&d));
            acc.vv += f.vv * w;
            acc.vh += f.vh * w;
            acc.hv += f.hv * w;
            acc.hh += f.hh * w;
        }
    }
    Ok(acc)
}

/// Panel response for a fixed incidence, reused across many exits.
pub struct PanelEvaluator<'a> {
    cfg: &'a PanelConfig,
    incidence: SphericalAngle,
    applied: Vec<Complex64>,
}

impl<'a> PanelEvaluator<'a> {
    pub fn new(
        cfg: &'a PanelConfig,
        mask: &PhaseMask,
        incidence: SphericalAngle,
        model: PhaseModel,
    ) -> Result<Self> {
        mask.check_against(cfg)?;
        // validates the incidence zenith
        model.applied(ReflectionCoefficient::ONE, incidence.zenith())?;
        Ok(Self {
            cfg,
            incidence,
            applied: applied_coefficients(mask, incidence.zenith(), model),
        })
    }

    pub fn evaluate(&self, exit: SphericalAngle) -> Result<PanelPatternValue> {
        let terms = PatternTerms::new(&self.cfg.element, self.incidence, exit)?;
        Ok(sum_with_applied(
            self.cfg,
            &self.applied,
            &terms,
            self.incidence,
            exit,
        ))
    }
}

/// Polarization pairs in pattern order (input, output).
pub const POLARIZATION_PAIRS: [(char, char); 4] = [('v', 'v'), ('v', 'h'), ('h', 'v'), ('h', 'h')];

/// One-dimensional slice through exit space, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutSpec {
    /// Sweep the exit zenith at fixed azimuth. Negative zeniths fall in the
    /// opposite half-plane (azimuth + 180 degrees).
    Zenith {
        azimuth_deg: f64,
        start_deg: f64,
        stop_deg: f64,
        step_deg: f64,
    },
    /// Sweep the exit azimuth at fixed zenith.
    Azimuth {
        zenith_deg: f64,
        start_deg: f64,
        stop_deg: f64,
        step_deg: f64,
    },
}

impl CutSpec {
    /// Swept angle values and the matching exit directions.
    pub fn samples(&self) -> Result<Vec<(f64, SphericalAngle)>> {
        let (start, stop, step) = match *self {
            CutSpec::Zenith {
                start_deg,
                stop_deg,
                step_deg,
                ..
            }
            | CutSpec::Azimuth {
                start_deg,
                stop_deg,
                step_deg,
                ..
            } => (start_deg, stop_deg, step_deg),
        };
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::invalid("step_deg", format!("{step} outside (0, 1]")));
        }
        if !(start.is_finite() && stop.is_finite()) || start > stop {
            return Err(Error::EmptyCut);
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let v = start + i as f64 * step;
                let angle = match *self {
                    CutSpec::Zenith { azimuth_deg, .. } => {
                        let az = if v < 0.0 { azimuth_deg + 180.0 } else { azimuth_deg };
                        SphericalAngle::from_degrees(v.abs(), az)?
                    }
                    CutSpec::Azimuth { zenith_deg, .. } => {
                        SphericalAngle::from_degrees(zenith_deg, v)?
                    }
                };
                Ok((v, angle))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutPoint {
    pub angle_deg: f64,
    /// Gains in [`POLARIZATION_PAIRS`] order, dB relative to the cut peak.
    pub gain_db: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternCut {
    pub points: Vec<CutPoint>,
    /// Absolute `20 log10 |F|` of the largest value in the cut.
    pub peak_db: f64,
}

impl PatternCut {
    /// Swept angle where the given pair peaks.
    pub fn argmax(&self, pair: usize) -> Option<f64> {
        self.points
            .iter()
            .max_by(|a, b| a.gain_db[pair].total_cmp(&b.gain_db[pair]))
            .map(|p| p.angle_deg)
    }
}

pub fn gain_db(value: Complex64) -> f64 {
    20.0 * value.norm().log10()
}

/// Pattern along a cut, normalized to the largest gain over all pairs.
pub fn pattern_cut(
    cfg: &PanelConfig,
    mask: &PhaseMask,
    incidence: SphericalAngle,
    cut: CutSpec,
    model: PhaseModel,
) -> Result<PatternCut> {
    let samples = cut.samples()?;
    if samples.is_empty() {
        return Err(Error::EmptyCut);
    }
    let eval = PanelEvaluator::new(cfg, mask, incidence, model)?;
    let raw: Vec<(f64, [f64; 4])> = samples
        .par_iter()
        .map(|&(v, exit)| {
            let f = eval.evaluate(exit)?;
            Ok((v, f.to_array().map(gain_db)))
        })
        .collect::<Result<_>>()?;
    let peak_db = raw
        .iter()
        .flat_map(|(_, g)| g.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    let points = raw
        .into_iter()
        .map(|(angle_deg, g)| CutPoint {
            angle_deg,
            gain_db: g.map(|x| x - peak_db),
        })
        .collect();
    Ok(PatternCut { points, peak_db })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::direction_from_angles;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn panel(n: usize) -> PanelConfig {
        let g = ElementGeometry::new(0.0156, 0.0156, 0.05).unwrap();
        PanelConfig::new(n, n, 0.0247, g, Pose::identity()).unwrap()
    }

    fn deg(t: f64, p: f64) -> SphericalAngle {
        SphericalAngle::from_degrees(t, p).unwrap()
    }

    fn rel_err(a: PanelPatternValue, b: PanelPatternValue) -> f64 {
        let scale = b.to_array().iter().map(|c| c.norm()).fold(0.0, f64::max);
        a.to_array()
            .iter()
            .zip(b.to_array())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
            / scale
    }

    #[test]
    fn config_validation() {
        let g = ElementGeometry::new(0.0156, 0.0156, 0.05).unwrap();
        assert!(PanelConfig::new(0, 4, 0.0247, g, Pose::identity()).is_err());
        assert!(PanelConfig::new(4, 4, 0.01, g, Pose::identity()).is_err());
        assert!(PanelConfig::new(4, 4, -1.0, g, Pose::identity()).is_err());
    }

    #[test]
    fn optimal_mask_is_all_ones_for_normal_pair() {
        let m = strategy_optimal(&panel(8), Direction3::Z, Direction3::Z);
        assert!(m.coefficients().iter().all(|r| (r.value() - 1.0).norm() < 1e-15));
    }

    #[test]
    fn optimal_mask_single_element() {
        let din = deg(60.0, 0.0).direction();
        let dout = deg(30.0, 180.0).direction();
        let m = strategy_optimal(&panel(1), din, dout);
        assert_eq!(m.coefficients(), &[ReflectionCoefficient::ONE]);
    }

    #[test]
    fn optimal_mask_aligns_phasors() {
        let cfg = panel(7);
        let din = deg(50.0, 20.0).direction();
        let dout = deg(25.0, 250.0).direction();
        let m = strategy_optimal(&cfg, din, dout);
        let k = cfg.element.wavenumber();
        let mut sum = Complex64::new(0.0, 0.0);
        for x in 1..=7 {
            for y in 1..=7 {
                let d = cfg.element_position(x, y).unwrap();
                sum += m.get(x, y).unwrap().value()
                    * Complex64::from_polar(1.0, k * (din.dot_position(&d) + dout.dot_position(&d)));
            }
        }
        assert!((sum.norm() - 49.0).abs() < 1e-12);
    }

    #[test]
    fn one_bit_rule() {
        let m = PhaseMask::from_fn(1, 3, |_, y| match y {
            1 => ReflectionCoefficient::from_phase(-PI / 4.0),
            2 => ReflectionCoefficient::from_phase(-3.0 * PI / 4.0),
            _ => ReflectionCoefficient::new(Complex64::new(0.0, 1.0)).unwrap(),
        });
        let q = strategy_1bit(&m);
        let vals: Vec<f64> = q.coefficients().iter().map(|r| r.value().re).collect();
        assert_eq!(vals, vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn nbit_quantization() {
        let m = PhaseMask::uniform(1, 1, ReflectionCoefficient::from_phase(-PI / 4.0));
        assert_eq!(quantize_nbit(&m, 1).unwrap().coefficients()[0], ReflectionCoefficient::ONE);
        let m = PhaseMask::uniform(1, 1, ReflectionCoefficient::from_phase(-0.9 * PI / 2.0));
        let q = quantize_nbit(&m, 2).unwrap().coefficients()[0];
        assert!((q.value() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(quantize_nbit(&m, 0).is_err());
    }

    #[test]
    fn eight_bit_error_bound_against_codebook() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = PhaseMask::from_fn(16, 16, |_, _| {
            ReflectionCoefficient::from_phase(rng.random_range(-PI..PI))
        });
        let q = quantize_nbit(&m, 8).unwrap();
        let book = phase_states(8).unwrap();
        for (orig, snapped) in m.coefficients().iter().zip(q.coefficients()) {
            // exhaustive nearest state
            let dist = |s: &ReflectionCoefficient| (s.value() * orig.value().conj()).arg().abs();
            let best = book.iter().map(dist).fold(f64::INFINITY, f64::min);
            let got = dist(snapped);
            assert!(got <= PI / 256.0 + 1e-12);
            assert!((got - best).abs() < 1e-12);
        }
    }

    #[test]
    fn one_bit_quantizer_matches_sign_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = PhaseMask::from_fn(20, 20, |_, _| {
            ReflectionCoefficient::from_phase(rng.random_range(-PI..PI))
        });
        let a = quantize_nbit(&m, 1).unwrap();
        let b = strategy_1bit(&m);
        for ((o, x), y) in m.coefficients().iter().zip(a.coefficients()).zip(b.coefficients()) {
            if o.value().re.abs() > 1e-12 {
                assert!((x.value() - y.value()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn specular_mask_survives_oblique_incidence() {
        let cfg = panel(4);
        let m = strategy_specular(&cfg);
        let applied = applied_coefficients(&m, 1.2, PhaseModel::NonIdeal);
        assert!(applied.iter().all(|r| *r == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn single_element_panel_equals_element() {
        let cfg = panel(1);
        let m = PhaseMask::uniform(1, 1, ReflectionCoefficient::from_phase(0.4));
        let (inc, out) = (deg(40.0, 10.0), deg(20.0, 200.0));
        let f = panel_pattern(&cfg, &m, inc, out, PhaseModel::NonIdeal).unwrap();
        let e = element_pattern_matrix(&cfg.element, inc, out, m.coefficients()[0], PhaseModel::NonIdeal).unwrap();
        assert!(rel_err(f, e) < 1e-14);
    }

    #[test]
    fn broadside_coherence() {
        let cfg = panel(6);
        let m = PhaseMask::uniform(6, 6, ReflectionCoefficient::from_phase(1.0));
        let (inc, out) = (deg(0.0, 0.0), deg(0.0, 0.0));
        let f = panel_pattern(&cfg, &m, inc, out, PhaseModel::NonIdeal).unwrap();
        let e = element_pattern_matrix(&cfg.element, inc, out, m.coefficients()[0], PhaseModel::NonIdeal).unwrap();
        for (a, b) in f.to_array().iter().zip(e.to_array()) {
            assert!((a.norm() - 36.0 * b.norm()).abs() <= 1e-12 * 36.0 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn mask_dimension_mismatch() {
        let cfg = panel(4);
        let m = PhaseMask::uniform(3, 4, ReflectionCoefficient::ONE);
        assert!(matches!(
            panel_pattern(&cfg, &m, deg(0.0, 0.0), deg(0.0, 0.0), PhaseModel::IdealPhase),
            Err(Error::MaskDimensions { .. })
        ));
    }

    #[test]
    fn factorized_sum_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let nx = rng.random_range(1..12);
            let ny = rng.random_range(1..12);
            let g = ElementGeometry::new(0.0156, 0.0156, 0.05).unwrap();
            let cfg = PanelConfig::new(nx, ny, 0.0247, g, Pose::identity()).unwrap();
            let m = PhaseMask::from_fn(nx, ny, |_, _| {
                ReflectionCoefficient::from_phase(rng.random_range(-PI..PI))
            });
            let inc = deg(rng.random_range(0.0..85.0), rng.random_range(0.0..360.0));
            let out = deg(rng.random_range(0.0..85.0), rng.random_range(0.0..360.0));
            for model in PhaseModel::ALL {
                let a = panel_pattern(&cfg, &m, inc, out, model).unwrap();
                let b = panel_pattern_naive(&cfg, &m, inc, out, model).unwrap();
                assert!(rel_err(a, b) < 1e-9);
            }
        }
    }

    #[test]
    fn small_panel_steers_to_target() {
        // 4x4, optimal mask steering to (30, 0); grid search over a 1 degree
        // exit grid in the steering plane. Incidence comes from the
        // orthogonal plane.
        let cfg = panel(4);
        let din = deg(30.0, 90.0).direction();
        let target = deg(30.0, 0.0);
        let m = strategy_optimal(&cfg, din, direction_from_angles(target));
        let cut = CutSpec::Zenith {
            azimuth_deg: 0.0,
            start_deg: -89.0,
            stop_deg: 89.0,
            step_deg: 1.0,
        };
        let c = pattern_cut(&cfg, &m, deg(30.0, 90.0), cut, PhaseModel::IdealPhase).unwrap();
        let peak = c.argmax(0).unwrap();
        assert!((peak - 30.0).abs() <= 1.0, "peak at {peak}");
    }

    #[test]
    fn specular_cut_peaks_broadside() {
        let cfg = panel(16);
        let m = strategy_specular(&cfg);
        let cut = CutSpec::Zenith {
            azimuth_deg: 90.0,
            start_deg: -89.0,
            stop_deg: 89.0,
            step_deg: 0.5,
        };
        let c = pattern_cut(&cfg, &m, deg(0.0, 90.0), cut, PhaseModel::NonIdeal).unwrap();
        let best = c.points.iter().flat_map(|p| p.gain_db).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, 0.0);
        assert_eq!(c.argmax(2).unwrap(), 0.0);
    }

    #[test]
    fn unit_mask_models_give_identical_cuts() {
        let cfg = panel(8);
        let m = strategy_specular(&cfg);
        let cut = CutSpec::Azimuth {
            zenith_deg: 40.0,
            start_deg: 0.0,
            stop_deg: 359.0,
            step_deg: 1.0,
        };
        let a = pattern_cut(&cfg, &m, deg(50.0, 30.0), cut, PhaseModel::NonIdeal).unwrap();
        let b = pattern_cut(&cfg, &m, deg(50.0, 30.0), cut, PhaseModel::IdealPhase).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cut_validation() {
        let bad = CutSpec::Zenith {
            azimuth_deg: 0.0,
            start_deg: 10.0,
            stop_deg: 0.0,
            step_deg: 1.0,
        };
        assert!(matches!(bad.samples(), Err(Error::EmptyCut)));
        let coarse = CutSpec::Zenith {
            azimuth_deg: 0.0,
            start_deg: 0.0,
            stop_deg: 10.0,
            step_deg: 2.0,
        };
        assert!(coarse.samples().is_err());
        let ok = CutSpec::Zenith {
            azimuth_deg: 0.0,
            start_deg: -1.0,
            stop_deg: 1.0,
            step_deg: 0.5,
        };
        assert_eq!(ok.samples().unwrap().len(), 5);
    }

    #[test]
    fn translation_only_rotates_the_response() {
        // shifting every element by a common offset multiplies F by
        // exp(j k (r_in + r_out) . offset)
        let cfg = panel(5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = PhaseMask::from_fn(5, 5, |_, _| {
            ReflectionCoefficient::from_phase(rng.random_range(-PI..PI))
        });
        let (inc, out) = (deg(35.0, 60.0), deg(15.0, 300.0));
        let base = panel_pattern(&cfg, &m, inc, out, PhaseModel::NonIdeal).unwrap();
        let offset = Position3::new(0.013, -0.021, 0.0);
        let k = cfg.element.wavenumber();
        let (ri, ro) = (inc.direction(), out.direction());
        let mut shifted = PanelPatternValue::default();
        for x in 1..=5 {
            for y in 1..=5 {
                let d = cfg.element_position(x, y).unwrap() + offset;
                let f = element_pattern_matrix(&cfg.element, inc, out, m.get(x, y).unwrap(), PhaseModel::NonIdeal).unwrap();
                let w = Complex64::from_polar(1.0, k * (ri.dot_position(&d) + ro.dot_position(&d)));
                shifted.vv += f.vv * w;
                shifted.vh += f.vh * w;
                shifted.hv += f.hv * w;
                shifted.hh += f.hh * w;
            }
        }
        let rot = Complex64::from_polar(1.0, k * (ri.dot_position(&offset) + ro.dot_position(&offset)));
        for (s, b) in shifted.to_array().iter().zip(base.to_array()) {
            assert!((s - b * rot).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn response_bounded_by_sum_of_magnitudes() {
        let cfg = panel(6);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let m = PhaseMask::from_fn(6, 6, |_, _| {
                ReflectionCoefficient::from_phase(rng.random_range(-PI..PI))
            });
            let inc = deg(rng.random_range(0.0..80.0), rng.random_range(0.0..360.0));
            let out = deg(rng.random_range(0.0..80.0), rng.random_range(0.0..360.0));
            let f = panel_pattern(&cfg, &m, inc, out, PhaseModel::NonIdeal).unwrap();
            let mut bound = [0.0f64; 4];
            for x in 1..=6 {
                for y in 1..=6 {
                    let e = element_pattern_matrix(&cfg.element, inc, out, m.get(x, y).unwrap(), PhaseModel::NonIdeal).unwrap();
                    for (b, v) in bound.iter_mut().zip(e.to_array()) {
                        *b += v.norm();
                    }
                }
            }
            for (v, b) in f.to_array().iter().zip(bound) {
                assert!(v.norm() <= b * (1.0 + 1e-12));
            }
        }
    }
}
