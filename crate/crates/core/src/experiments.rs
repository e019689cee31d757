//! The three numerical studies and the SNR link budget.
//!
//! ```text
//! SNR = P0 + 20 log10 |H| - PL_cascade - N0      (dB / dBm)
//! ```
//!
//! Absolute levels carry the element prefactor (which contains `1/c`), so
//! only differences between strategies, models and sweep points mean
//! anything.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cascade::{compose_cir, transfer_function, AntennaElement, RisSetup};
use crate::element::{ElementGeometry, PhaseModel, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::gbsm::{generate_subchannel, los_subchannel, LinkState, ScenarioConfig};
use crate::geometry::{Direction3, Pose, Position3, SphericalAngle};
use crate::panel::{gain_db, pattern_cut, CutSpec, PanelConfig, PanelEvaluator, Strategy, POLARIZATION_PAIRS};

/// Reference panel, carrier and link budget.
pub mod defaults {
    pub const SIZE: usize = 32;
    pub const ELEMENT_A: f64 = 0.0156;
    pub const ELEMENT_B: f64 = 0.0156;
    pub const SPACING: f64 = 0.0247;
    pub const CARRIER_HZ: f64 = 6e9;
    pub const TX_POWER_DBM: f64 = 43.0;
    pub const NOISE_DBM: f64 = -117.0;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    pub cascade_pl_db: f64,
}

impl LinkBudget {
    pub fn reference(cascade_pl_db: f64) -> Self {
        Self {
            tx_power_dbm: defaults::TX_POWER_DBM,
            noise_dbm: defaults::NOISE_DBM,
            cascade_pl_db,
        }
    }
}

/// Received SNR in dB; `-inf` when the channel vanishes.
pub fn snr(budget: &LinkBudget, h: Complex64) -> f64 {
    let mag = h.norm();
    if mag == 0.0 {
        return f64::NEG_INFINITY;
    }
    budget.tx_power_dbm + 20.0 * mag.log10() - budget.cascade_pl_db - budget.noise_dbm
}

/// A CSV-serialisable result row.
pub trait CsvRow {
    const HEADER: &'static str;
    fn write_csv(&self, out: &mut String);
}

/// Rows plus the provenance needed to reproduce them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<R> {
    pub rows: Vec<R>,
    pub seed: u64,
    pub config_hash: String,
}

impl<R: CsvRow> SweepResult<R> {
    fn new(rows: Vec<R>, seed: u64) -> Self {
        Self {
            rows,
            seed,
            config_hash: String::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(R::HEADER);
        out.push('\n');
        for r in &self.rows {
            r.write_csv(&mut out);
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub strategy: Strategy,
    pub model: PhaseModel,
    pub pol_in: char,
    pub pol_out: char,
    pub theta_out_deg: f64,
    pub gain_db: f64,
}

impl CsvRow for PatternRow {
    const HEADER: &'static str = "strategy,model,pol_in,pol_out,theta_out_deg,gain_db";

    fn write_csv(&self, out: &mut String) {
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            self.strategy,
            self.model.as_str(),
            self.pol_in,
            self.pol_out,
            self.theta_out_deg,
            self.gain_db
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrRow {
    pub freq_ghz: f64,
    pub n_side: usize,
    pub strategy: Strategy,
    pub snr_db: f64,
}

impl CsvRow for SnrRow {
    const HEADER: &'static str = "freq_ghz,n_side,strategy,snr_db";

    fn write_csv(&self, out: &mut String) {
        let _ = write!(out, "{},{},{},{}", self.freq_ghz, self.n_side, self.strategy, self.snr_db);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsaRow {
    pub asa_deg: f64,
    pub model: PhaseModel,
    pub seed: u64,
    pub snr_db: f64,
}

impl CsvRow for AsaRow {
    const HEADER: &'static str = "asa_deg,model,seed,snr_db";

    fn write_csv(&self, out: &mut String) {
        let _ = write!(out, "{},{},{},{}", self.asa_deg, self.model.as_str(), self.seed, self.snr_db);
    }
}

/// Element size and spacing as fractions of the wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalSize {
    pub a: f64,
    pub b: f64,
    pub spacing: f64,
}

impl ElectricalSize {
    /// Physical sizes at `freq_hz` expressed in wavelengths.
    pub fn from_physical(a: f64, b: f64, spacing: f64, freq_hz: f64) -> Self {
        let lam = SPEED_OF_LIGHT / freq_hz;
        Self {
            a: a / lam,
            b: b / lam,
            spacing: spacing / lam,
        }
    }

    pub fn panel(&self, side: usize, freq_hz: f64, pose: Pose) -> Result<PanelConfig> {
        let lam = SPEED_OF_LIGHT / freq_hz;
        let el = ElementGeometry::for_frequency(self.a * lam, self.b * lam, freq_hz)?;
        PanelConfig::new(side, side, self.spacing * lam, el, pose)
    }
}

/// Positions of the three nodes and the orientation of the RIS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub tx: Position3,
    pub rx: Position3,
    pub ris_pose: Pose,
}

impl Site {
    /// Street-level layout of the configuration study; the RIS faces +x so
    /// both ends are in front of it.
    pub fn reference() -> Self {
        Self {
            tx: Position3::new(0.0, 0.0, 10.0),
            rx: Position3::new(-10.0, 30.0, 2.0),
            ris_pose: Pose::new(
                Position3::new(-15.0, 15.0, 6.0),
                0.0,
                std::f64::consts::FRAC_PI_2,
                0.0,
            ),
        }
    }

    pub fn ris(&self) -> Position3 {
        self.ris_pose.origin
    }

    /// Panel-frame directions towards Tx and towards Rx.
    pub fn local_directions(&self) -> Result<(Direction3, Direction3)> {
        let p = &self.ris_pose;
        Ok((
            p.to_local(Direction3::between(self.ris(), self.tx)?),
            p.to_local(Direction3::between(self.ris(), self.rx)?),
        ))
    }
}

/// Single incident ray on a panel, cut through exit zenith.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSetup {
    pub panel: PanelConfig,
    pub strategy: Strategy,
    /// Incidence and steering target in the panel frame.
    pub incidence: SphericalAngle,
    pub target: SphericalAngle,
    pub cut: CutSpec,
    pub models: Vec<PhaseModel>,
}

impl PatternSetup {
    /// Reference panel lit from 60 degrees off normal in the y-z plane and
    /// steered to 30 degrees in the x-z plane; the cut follows the
    /// steering plane.
    pub fn reference() -> Self {
        let el = ElementGeometry::for_frequency(defaults::ELEMENT_A, defaults::ELEMENT_B, defaults::CARRIER_HZ)
            .expect("table values are valid");
        let panel = PanelConfig::new(defaults::SIZE, defaults::SIZE, defaults::SPACING, el, Pose::identity())
            .expect("table values are valid");
        Self {
            panel,
            strategy: Strategy::Optimal,
            incidence: SphericalAngle::from_degrees(60.0, 90.0).expect("valid"),
            target: SphericalAngle::from_degrees(30.0, 0.0).expect("valid"),
            cut: CutSpec::Zenith {
                azimuth_deg: 0.0,
                start_deg: -89.0,
                stop_deg: 89.0,
                step_deg: 0.5,
            },
            models: PhaseModel::ALL.to_vec(),
        }
    }

    fn mask(&self) -> Result<crate::panel::PhaseMask> {
        self.strategy
            .mask(&self.panel, self.incidence.direction(), self.target.direction())
    }

    /// `20 log10 |F|` per polarization pair at the exact target direction.
    pub fn target_gain_db(&self, model: PhaseModel) -> Result<[f64; 4]> {
        let mask = self.mask()?;
        let eval = PanelEvaluator::new(&self.panel, &mask, self.incidence, model)?;
        Ok(eval.evaluate(self.target)?.to_array().map(gain_db))
    }
}

/// Pattern cuts for every model and polarization pair, in dB relative to
/// the strongest value over all models so the gap between them survives.
pub fn run_pattern_experiment(setup: &PatternSetup) -> Result<SweepResult<PatternRow>> {
    let mask = setup.mask()?;
    let cuts = setup
        .models
        .iter()
        .map(|&m| pattern_cut(&setup.panel, &mask, setup.incidence, setup.cut, m).map(|c| (m, c)))
        .collect::<Result<Vec<_>>>()?;
    let peak = cuts.iter().map(|(_, c)| c.peak_db).fold(f64::NEG_INFINITY, f64::max);
    let mut rows = Vec::new();
    for (model, cut) in &cuts {
        for (pair, &(pol_in, pol_out)) in POLARIZATION_PAIRS.iter().enumerate() {
            for pt in &cut.points {
                rows.push(PatternRow {
                    strategy: setup.strategy,
                    model: *model,
                    pol_in,
                    pol_out,
                    theta_out_deg: pt.angle_deg,
                    gain_db: pt.gain_db[pair] + cut.peak_db - peak,
                });
            }
        }
    }
    Ok(SweepResult::new(rows, 0))
}

/// Deterministic LOS-LOS links over a grid of carriers, panel sides and
/// strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSweepSetup {
    pub site: Site,
    pub freqs_hz: Vec<f64>,
    pub sides: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub model: PhaseModel,
    pub element: ElectricalSize,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    /// Scenario template; carrier and link state are overridden.
    pub scenario: ScenarioConfig,
}

impl ConfigSweepSetup {
    pub fn reference(full_scale: bool) -> Self {
        let mut sides = vec![1, 2, 4, 8, 16, 32, 64];
        if full_scale {
            sides.push(100);
        }
        Self {
            site: Site::reference(),
            freqs_hz: vec![3e9, 6e9],
            sides,
            strategies: vec![Strategy::Optimal, Strategy::OneBit, Strategy::Specular],
            model: PhaseModel::NonIdeal,
            element: ElectricalSize::from_physical(
                defaults::ELEMENT_A,
                defaults::ELEMENT_B,
                defaults::SPACING,
                defaults::CARRIER_HZ,
            ),
            tx_power_dbm: defaults::TX_POWER_DBM,
            noise_dbm: defaults::NOISE_DBM,
            scenario: ScenarioConfig::new(defaults::CARRIER_HZ, LinkState::Los),
        }
    }
}

fn los_snr(setup: &ConfigSweepSetup, freq: f64, side: usize, strategy: Strategy) -> Result<f64> {
    let site = &setup.site;
    let mut cfg = setup.scenario.clone();
    cfg.carrier_hz = freq;
    cfg.link_state = LinkState::Los;
    let s1 = los_subchannel(&cfg, site.tx, site.ris())?;
    let s2 = los_subchannel(&cfg, site.ris(), site.rx)?;
    let panel = setup.element.panel(side, freq, site.ris_pose)?;
    let (din, dout) = site.local_directions()?;
    let mask = strategy.mask(&panel, din, dout)?;
    let ant = [AntennaElement::isotropic_vertical()];
    let ch = compose_cir(
        &s1,
        &s2,
        RisSetup {
            panel: &panel,
            mask: &mask,
            model: setup.model,
        },
        &ant,
        &ant,
    )?;
    let h = transfer_function(&ch, freq, 0, 0)?;
    let budget = LinkBudget {
        tx_power_dbm: setup.tx_power_dbm,
        noise_dbm: setup.noise_dbm,
        cascade_pl_db: ch.path_loss_db,
    };
    Ok(snr(&budget, h))
}

/// SNR per (carrier, side, strategy), rows in that nesting order.
pub fn run_config_sweep(setup: &ConfigSweepSetup) -> Result<SweepResult<SnrRow>> {
    let grid: Vec<(f64, usize, Strategy)> = setup
        .freqs_hz
        .iter()
        .flat_map(|&f| {
            setup
                .sides
                .iter()
                .flat_map(move |&n| setup.strategies.iter().map(move |&s| (f, n, s)))
        })
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(f, n, s)| {
            Ok(SnrRow {
                freq_ghz: f / 1e9,
                n_side: n,
                strategy: s,
                snr_db: los_snr(setup, f, n, s)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::new(rows, 0))
}

/// Stochastic Tx-RIS link with swept arrival spread, deterministic LOS
/// RIS-Rx link, optimal steering towards the two LOS directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AsaSweepSetup {
    pub site: Site,
    pub panel: PanelConfig,
    pub asa_deg: Vec<f64>,
    pub seeds: u64,
    pub models: Vec<PhaseModel>,
    pub strategy: Strategy,
    /// Tx-RIS scenario; its seed is the master seed, its ASA is swept.
    pub tx_ris: ScenarioConfig,
    /// Stochastic RIS-Rx link; `None` keeps a single deterministic LOS ray.
    pub ris_rx: Option<ScenarioConfig>,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
}

impl AsaSweepSetup {
    pub fn reference(seed: u64) -> Self {
        let site = Site::reference();
        let el = ElementGeometry::for_frequency(defaults::ELEMENT_A, defaults::ELEMENT_B, defaults::CARRIER_HZ)
            .expect("table values are valid");
        let panel = PanelConfig::new(defaults::SIZE, defaults::SIZE, defaults::SPACING, el, site.ris_pose)
            .expect("table values are valid");
        let mut tx_ris = ScenarioConfig::new(defaults::CARRIER_HZ, LinkState::Nlos);
        tx_ris.seed = seed;
        Self {
            site,
            panel,
            asa_deg: vec![1.0, 5.0, 10.0],
            seeds: 100,
            models: PhaseModel::ALL.to_vec(),
            strategy: Strategy::Optimal,
            tx_ris,
            ris_rx: None,
            tx_power_dbm: defaults::TX_POWER_DBM,
            noise_dbm: defaults::NOISE_DBM,
        }
    }
}

/// Stream offset of the RIS-Rx draws, keeping them apart from Tx-RIS.
const RIS_RX_STREAM: u64 = 1 << 32;

/// Per-seed SNR for every (ASA, model). Seed index `i` draws from stream
/// `i` of the master seed at every ASA, so samples are paired across ASA
/// values and across models.
pub fn run_asa_sweep(setup: &AsaSweepSetup) -> Result<SweepResult<AsaRow>> {
    if setup.seeds == 0 {
        return Err(Error::invalid("seeds", "need at least one seed"));
    }
    let site = &setup.site;
    if setup.panel.pose != site.ris_pose {
        return Err(Error::FrameMismatch("panel pose differs from the site's RIS pose".into()));
    }
    let carrier = setup.tx_ris.carrier_hz;
    let los2 = los_subchannel(&setup.tx_ris, site.ris(), site.rx)?;
    let (din, dout) = site.local_directions()?;
    let mask = setup.strategy.mask(&setup.panel, din, dout)?;
    let ant = [AntennaElement::isotropic_vertical()];

    let grid: Vec<(f64, u64)> = setup
        .asa_deg
        .iter()
        .flat_map(|&a| (0..setup.seeds).map(move |s| (a, s)))
        .collect();
    let blocks = grid
        .par_iter()
        .map(|&(asa, seed)| {
            let mut cfg = setup.tx_ris.clone();
            cfg.lsp.asa_deg = asa;
            let s1 = generate_subchannel(&cfg, site.tx, site.ris(), &mut cfg.rng_for(seed))?;
            let s2 = match &setup.ris_rx {
                None => los2.clone(),
                Some(c) => {
                    let mut c = c.clone();
                    c.seed = setup.tx_ris.seed;
                    generate_subchannel(&c, site.ris(), site.rx, &mut c.rng_for(RIS_RX_STREAM + seed))?
                }
            };
            setup
                .models
                .iter()
                .map(|&model| {
                    let ch = compose_cir(
                        &s1,
                        &s2,
                        RisSetup {
                            panel: &setup.panel,
                            mask: &mask,
                            model,
                        },
                        &ant,
                        &ant,
                    )?;
                    let budget = LinkBudget {
                        tx_power_dbm: setup.tx_power_dbm,
                        noise_dbm: setup.noise_dbm,
                        cascade_pl_db: ch.path_loss_db,
                    };
                    Ok(AsaRow {
                        asa_deg: asa,
                        model,
                        seed,
                        snr_db: snr(&budget, transfer_function(&ch, carrier, 0, 0)?),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    // (asa, model, seed) order
    let mut rows = Vec::with_capacity(blocks.len() * setup.models.len());
    for (ai, _) in setup.asa_deg.iter().enumerate() {
        for mi in 0..setup.models.len() {
            for s in 0..setup.seeds as usize {
                rows.push(blocks[ai * setup.seeds as usize + s][mi].clone());
            }
        }
    }
    Ok(SweepResult::new(rows, setup.tx_ris.seed))
}

/// Mean SNR in dB over the rows matching `(asa, model)`.
pub fn mean_snr(rows: &[AsaRow], asa_deg: f64, model: PhaseModel) -> Option<f64> {
    let v: Vec<f64> = rows
        .iter()
        .filter(|r| r.asa_deg == asa_deg && r.model == model)
        .map(|r| r.snr_db)
        .collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}
