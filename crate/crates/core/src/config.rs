//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! ris.size_x = 32
//! sites.tx = 0, 0, 10
//! sweep.strategies = optimal, 1bit, specular
//! ```
//!
//! One `section.key = value` per line; omitted keys keep their defaults
//! (the reference setup). Unknown or repeated keys are errors, and every
//! error carries the line it came from.

use std::collections::HashMap;
use std::str::FromStr;

use crate::element::{ElementGeometry, PhaseModel};
use crate::error::{Error, Result};
use crate::experiments::{
    defaults, AsaSweepSetup, ConfigSweepSetup, ElectricalSize, PatternSetup, Site,
};
use crate::gbsm::{LargeScaleParams, LinkState, Scenario, ScenarioConfig};
use crate::geometry::{Pose, Position3, SphericalAngle};
use crate::panel::{CutSpec, PanelConfig, Strategy};

#[derive(Debug, Clone, PartialEq)]
pub struct RisParams {
    pub size_x: usize,
    pub size_y: usize,
    pub element_a: f64,
    pub element_b: f64,
    pub spacing: f64,
    pub position: Position3,
    pub bearing_deg: f64,
    pub downtilt_deg: f64,
    pub slant_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub name: Scenario,
    pub tx_ris_state: LinkState,
    pub ris_rx_state: LinkState,
    pub clusters: usize,
    pub rays: usize,
    pub ds_ns: f64,
    pub asa_deg: f64,
    pub asd_deg: f64,
    pub zsa_deg: f64,
    pub zsd_deg: f64,
    pub sf_db: f64,
    pub k_db: f64,
    pub xpr_mean_db: f64,
    pub xpr_std_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternParams {
    pub theta_in_deg: f64,
    pub phi_in_deg: f64,
    pub target_theta_deg: f64,
    pub target_phi_deg: f64,
    pub step_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub freqs_ghz: Vec<f64>,
    pub sides: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub asa_deg: Vec<f64>,
    pub seeds: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ris: RisParams,
    pub carrier_hz: f64,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    pub tx: Position3,
    pub rx: Position3,
    pub strategy: Strategy,
    pub model: PhaseModel,
    pub scenario: ScenarioParams,
    pub pattern: PatternParams,
    pub sweep: SweepParams,
    pub seed: u64,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let site = Site::reference();
        let lsp = LargeScaleParams::default();
        Self {
            ris: RisParams {
                size_x: defaults::SIZE,
                size_y: defaults::SIZE,
                element_a: defaults::ELEMENT_A,
                element_b: defaults::ELEMENT_B,
                spacing: defaults::SPACING,
                position: site.ris(),
                bearing_deg: 0.0,
                downtilt_deg: 90.0,
                slant_deg: 0.0,
            },
            carrier_hz: defaults::CARRIER_HZ,
            tx_power_dbm: defaults::TX_POWER_DBM,
            noise_dbm: defaults::NOISE_DBM,
            tx: site.tx,
            rx: site.rx,
            strategy: Strategy::Optimal,
            model: PhaseModel::NonIdeal,
            scenario: ScenarioParams {
                name: Scenario::UmiStreetCanyon,
                tx_ris_state: LinkState::Nlos,
                ris_rx_state: LinkState::Los,
                clusters: 5,
                rays: 20,
                ds_ns: lsp.delay_spread * 1e9,
                asa_deg: lsp.asa_deg,
                asd_deg: lsp.asd_deg,
                zsa_deg: lsp.zsa_deg,
                zsd_deg: lsp.zsd_deg,
                sf_db: lsp.shadow_fading_db,
                k_db: lsp.k_factor_db,
                xpr_mean_db: 8.0,
                xpr_std_db: 3.0,
            },
            pattern: PatternParams {
                theta_in_deg: 60.0,
                phi_in_deg: 90.0,
                target_theta_deg: 30.0,
                target_phi_deg: 0.0,
                step_deg: 0.5,
            },
            sweep: SweepParams {
                freqs_ghz: vec![3.0, 6.0],
                sides: vec![1, 2, 4, 8, 16, 32, 64],
                strategies: vec![Strategy::Optimal, Strategy::OneBit, Strategy::Specular],
                asa_deg: vec![1.0, 5.0, 10.0],
                seeds: 100,
            },
            seed: 0,
            out_dir: "out".into(),
        }
    }
}

fn parse_num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse::<T>()
        .map_err(|_| format!("`{v}` is not a valid {}", std::any::type_name::<T>()))
}

fn parse_list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, String> {
    v.split(',').map(|s| parse_num(s.trim())).collect()
}

fn parse_with<T, E: ToString>(v: &str, f: impl Fn(&str) -> std::result::Result<T, E>) -> std::result::Result<T, String> {
    f(v).map_err(|e| e.to_string())
}

fn parse_position(v: &str) -> std::result::Result<Position3, String> {
    match parse_list::<f64>(v)?.as_slice() {
        &[x, y, z] => Ok(Position3::new(x, y, z)),
        other => Err(format!("expected `x, y, z`, got {} values", other.len())),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn pos(p: Position3) -> String {
    format!("{}, {}, {}", p.x, p.y, p.z)
}

impl RunConfig {
    /// Every key with its value, in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let (r, s, p, w) = (&self.ris, &self.scenario, &self.pattern, &self.sweep);
        vec![
            ("ris.size_x", r.size_x.to_string()),
            ("ris.size_y", r.size_y.to_string()),
            ("ris.element_a", r.element_a.to_string()),
            ("ris.element_b", r.element_b.to_string()),
            ("ris.spacing", r.spacing.to_string()),
            ("ris.position", pos(r.position)),
            ("ris.bearing_deg", r.bearing_deg.to_string()),
            ("ris.downtilt_deg", r.downtilt_deg.to_string()),
            ("ris.slant_deg", r.slant_deg.to_string()),
            ("carrier.freq_hz", self.carrier_hz.to_string()),
            ("link.tx_power_dbm", self.tx_power_dbm.to_string()),
            ("link.noise_dbm", self.noise_dbm.to_string()),
            ("sites.tx", pos(self.tx)),
            ("sites.rx", pos(self.rx)),
            ("run.strategy", self.strategy.to_string()),
            ("run.model", self.model.as_str().to_string()),
            ("scenario.name", s.name.to_string()),
            ("scenario.tx_ris_state", s.tx_ris_state.to_string()),
            ("scenario.ris_rx_state", s.ris_rx_state.to_string()),
            ("scenario.clusters", s.clusters.to_string()),
            ("scenario.rays", s.rays.to_string()),
            ("scenario.ds_ns", s.ds_ns.to_string()),
            ("scenario.asa_deg", s.asa_deg.to_string()),
            ("scenario.asd_deg", s.asd_deg.to_string()),
            ("scenario.zsa_deg", s.zsa_deg.to_string()),
            ("scenario.zsd_deg", s.zsd_deg.to_string()),
            ("scenario.sf_db", s.sf_db.to_string()),
            ("scenario.k_db", s.k_db.to_string()),
            ("scenario.xpr_mean_db", s.xpr_mean_db.to_string()),
            ("scenario.xpr_std_db", s.xpr_std_db.to_string()),
            ("pattern.theta_in_deg", p.theta_in_deg.to_string()),
            ("pattern.phi_in_deg", p.phi_in_deg.to_string()),
            ("pattern.target_theta_deg", p.target_theta_deg.to_string()),
            ("pattern.target_phi_deg", p.target_phi_deg.to_string()),
            ("pattern.step_deg", p.step_deg.to_string()),
            ("sweep.freqs_ghz", join(&w.freqs_ghz)),
            ("sweep.sides", join(&w.sides)),
            ("sweep.strategies", join(&w.strategies)),
            ("sweep.asa_deg", join(&w.asa_deg)),
            ("sweep.seeds", w.seeds.to_string()),
            ("run.seed", self.seed.to_string()),
            ("run.out_dir", self.out_dir.clone()),
        ]
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        let (r, s, p, w) = (&mut self.ris, &mut self.scenario, &mut self.pattern, &mut self.sweep);
        match key {
            "ris.size_x" => r.size_x = parse_num(v)?,
            "ris.size_y" => r.size_y = parse_num(v)?,
            "ris.element_a" => r.element_a = parse_num(v)?,
            "ris.element_b" => r.element_b = parse_num(v)?,
            "ris.spacing" => r.spacing = parse_num(v)?,
            "ris.position" => r.position = parse_position(v)?,
            "ris.bearing_deg" => r.bearing_deg = parse_num(v)?,
            "ris.downtilt_deg" => r.downtilt_deg = parse_num(v)?,
            "ris.slant_deg" => r.slant_deg = parse_num(v)?,
            "carrier.freq_hz" => self.carrier_hz = parse_num(v)?,
            "link.tx_power_dbm" => self.tx_power_dbm = parse_num(v)?,
            "link.noise_dbm" => self.noise_dbm = parse_num(v)?,
            "sites.tx" => self.tx = parse_position(v)?,
            "sites.rx" => self.rx = parse_position(v)?,
            "run.strategy" => self.strategy = parse_with(v, Strategy::from_str)?,
            "run.model" => self.model = parse_with(v, PhaseModel::from_str)?,
            "scenario.name" => s.name = parse_with(v, Scenario::from_str)?,
            "scenario.tx_ris_state" => s.tx_ris_state = parse_with(v, LinkState::from_str)?,
            "scenario.ris_rx_state" => s.ris_rx_state = parse_with(v, LinkState::from_str)?,
            "scenario.clusters" => s.clusters = parse_num(v)?,
            "scenario.rays" => s.rays = parse_num(v)?,
            "scenario.ds_ns" => s.ds_ns = parse_num(v)?,
            "scenario.asa_deg" => s.asa_deg = parse_num(v)?,
            "scenario.asd_deg" => s.asd_deg = parse_num(v)?,
            "scenario.zsa_deg" => s.zsa_deg = parse_num(v)?,
            "scenario.zsd_deg" => s.zsd_deg = parse_num(v)?,
            "scenario.sf_db" => s.sf_db = parse_num(v)?,
            "scenario.k_db" => s.k_db = parse_num(v)?,
            "scenario.xpr_mean_db" => s.xpr_mean_db = parse_num(v)?,
            "scenario.xpr_std_db" => s.xpr_std_db = parse_num(v)?,
            "pattern.theta_in_deg" => p.theta_in_deg = parse_num(v)?,
            "pattern.phi_in_deg" => p.phi_in_deg = parse_num(v)?,
            "pattern.target_theta_deg" => p.target_theta_deg = parse_num(v)?,
            "pattern.target_phi_deg" => p.target_phi_deg = parse_num(v)?,
            "pattern.step_deg" => p.step_deg = parse_num(v)?,
            "sweep.freqs_ghz" => w.freqs_ghz = parse_list(v)?,
            "sweep.sides" => w.sides = parse_list(v)?,
            "sweep.strategies" => w.strategies = parse_list(v)?,
            "sweep.asa_deg" => w.asa_deg = parse_list(v)?,
            "sweep.seeds" => w.seeds = parse_num(v)?,
            "run.seed" => self.seed = parse_num(v)?,
            "run.out_dir" => self.out_dir = v.to_string(),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Canonical text form; parses back to an equal config.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    /// Checks every invariant; the error names the offending key.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        fn positive(key: &'static str, v: f64) -> std::result::Result<(), (&'static str, String)> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((key, format!("must be positive, got {v}")))
            }
        }
        fn finite(key: &'static str, v: f64) -> std::result::Result<(), (&'static str, String)> {
            if v.is_finite() {
                Ok(())
            } else {
                Err((key, format!("must be finite, got {v}")))
            }
        }
        let r = &self.ris;
        if r.size_x == 0 {
            return Err(("ris.size_x", "must be at least 1".into()));
        }
        if r.size_y == 0 {
            return Err(("ris.size_y", "must be at least 1".into()));
        }
        positive("ris.element_a", r.element_a)?;
        positive("ris.element_b", r.element_b)?;
        positive("ris.spacing", r.spacing)?;
        if r.spacing < r.element_a.max(r.element_b) {
            return Err(("ris.spacing", "elements would overlap".into()));
        }
        for (k, v) in [
            ("ris.bearing_deg", r.bearing_deg),
            ("ris.downtilt_deg", r.downtilt_deg),
            ("ris.slant_deg", r.slant_deg),
            ("link.tx_power_dbm", self.tx_power_dbm),
            ("link.noise_dbm", self.noise_dbm),
            ("scenario.sf_db", self.scenario.sf_db),
            ("scenario.k_db", self.scenario.k_db),
            ("scenario.xpr_mean_db", self.scenario.xpr_mean_db),
        ] {
            finite(k, v)?;
        }
        positive("carrier.freq_hz", self.carrier_hz)?;
        for (k, p) in [("ris.position", r.position), ("sites.tx", self.tx), ("sites.rx", self.rx)] {
            if !p.is_finite() {
                return Err((k, "non-finite coordinate".into()));
            }
        }
        if self.tx.distance(&r.position) < 1.0 {
            return Err(("sites.tx", "must be at least 1 m from the RIS".into()));
        }
        if self.rx.distance(&r.position) < 1.0 {
            return Err(("sites.rx", "must be at least 1 m from the RIS".into()));
        }
        if let Strategy::Quantized(b) = self.strategy {
            if b > 16 {
                return Err(("run.strategy", "at most 16 bits".into()));
            }
        }
        let s = &self.scenario;
        if s.clusters == 0 {
            return Err(("scenario.clusters", "must be at least 1".into()));
        }
        if s.rays == 0 {
            return Err(("scenario.rays", "must be at least 1".into()));
        }
        positive("scenario.ds_ns", s.ds_ns)?;
        positive("scenario.asa_deg", s.asa_deg)?;
        positive("scenario.asd_deg", s.asd_deg)?;
        positive("scenario.zsa_deg", s.zsa_deg)?;
        positive("scenario.zsd_deg", s.zsd_deg)?;
        if !(s.xpr_std_db >= 0.0 && s.xpr_std_db.is_finite()) {
            return Err(("scenario.xpr_std_db", "must be finite and >= 0".into()));
        }
        let p = &self.pattern;
        for (k, v) in [
            ("pattern.theta_in_deg", p.theta_in_deg),
            ("pattern.target_theta_deg", p.target_theta_deg),
        ] {
            if !(0.0..90.0).contains(&v) {
                return Err((k, format!("{v} outside [0, 90)")));
            }
        }
        finite("pattern.phi_in_deg", p.phi_in_deg)?;
        finite("pattern.target_phi_deg", p.target_phi_deg)?;
        if !(p.step_deg > 0.0 && p.step_deg <= 1.0) {
            return Err(("pattern.step_deg", format!("{} outside (0, 1]", p.step_deg)));
        }
        let w = &self.sweep;
        if w.freqs_ghz.is_empty() || w.freqs_ghz.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
            return Err(("sweep.freqs_ghz", "need one or more positive values".into()));
        }
        if w.sides.is_empty() || w.sides.contains(&0) {
            return Err(("sweep.sides", "need one or more sides >= 1".into()));
        }
        if w.strategies.is_empty() {
            return Err(("sweep.strategies", "need at least one strategy".into()));
        }
        if w.asa_deg.is_empty() || w.asa_deg.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(("sweep.asa_deg", "need one or more positive values".into()));
        }
        if w.seeds == 0 {
            return Err(("sweep.seeds", "must be at least 1".into()));
        }
        if self.out_dir.is_empty() {
            return Err(("run.out_dir", "must not be empty".into()));
        }
        Ok(())
    }

    pub fn pose(&self) -> Pose {
        let r = &self.ris;
        Pose::new(
            r.position,
            r.bearing_deg.to_radians(),
            r.downtilt_deg.to_radians(),
            r.slant_deg.to_radians(),
        )
    }

    pub fn site(&self) -> Site {
        Site {
            tx: self.tx,
            rx: self.rx,
            ris_pose: self.pose(),
        }
    }

    pub fn panel(&self, pose: Pose) -> Result<PanelConfig> {
        let r = &self.ris;
        let el = ElementGeometry::for_frequency(r.element_a, r.element_b, self.carrier_hz)?;
        PanelConfig::new(r.size_x, r.size_y, r.spacing, el, pose)
    }

    pub fn scenario_config(&self, state: LinkState) -> ScenarioConfig {
        let s = &self.scenario;
        let mut cfg = ScenarioConfig::new(self.carrier_hz, state);
        cfg.scenario = s.name;
        cfg.clusters = s.clusters;
        cfg.rays_per_cluster = s.rays;
        cfg.lsp = LargeScaleParams {
            delay_spread: s.ds_ns * 1e-9,
            asa_deg: s.asa_deg,
            zsa_deg: s.zsa_deg,
            asd_deg: s.asd_deg,
            zsd_deg: s.zsd_deg,
            shadow_fading_db: s.sf_db,
            k_factor_db: s.k_db,
        };
        cfg.xpr_mean_db = s.xpr_mean_db;
        cfg.xpr_std_db = s.xpr_std_db;
        cfg.seed = self.seed;
        cfg
    }

    /// Panel in its own frame, lit and steered as configured.
    pub fn pattern_setup(&self) -> Result<PatternSetup> {
        let p = &self.pattern;
        Ok(PatternSetup {
            panel: self.panel(Pose::identity())?,
            strategy: self.strategy,
            incidence: SphericalAngle::from_degrees(p.theta_in_deg, p.phi_in_deg)?,
            target: SphericalAngle::from_degrees(p.target_theta_deg, p.target_phi_deg)?,
            cut: CutSpec::Zenith {
                azimuth_deg: p.target_phi_deg,
                start_deg: -89.0,
                stop_deg: 89.0,
                step_deg: p.step_deg,
            },
            models: PhaseModel::ALL.to_vec(),
        })
    }

    /// `full_scale` appends a 100-element side when not already listed.
    pub fn config_sweep_setup(&self, full_scale: bool) -> ConfigSweepSetup {
        let r = &self.ris;
        let mut sides = self.sweep.sides.clone();
        if full_scale && !sides.contains(&100) {
            sides.push(100);
        }
        ConfigSweepSetup {
            site: self.site(),
            freqs_hz: self.sweep.freqs_ghz.iter().map(|f| f * 1e9).collect(),
            sides,
            strategies: self.sweep.strategies.clone(),
            model: self.model,
            element: ElectricalSize::from_physical(r.element_a, r.element_b, r.spacing, self.carrier_hz),
            tx_power_dbm: self.tx_power_dbm,
            noise_dbm: self.noise_dbm,
            scenario: self.scenario_config(LinkState::Los),
        }
    }

    pub fn asa_sweep_setup(&self) -> Result<AsaSweepSetup> {
        let site = self.site();
        Ok(AsaSweepSetup {
            site,
            panel: self.panel(site.ris_pose)?,
            asa_deg: self.sweep.asa_deg.clone(),
            seeds: self.sweep.seeds,
            models: PhaseModel::ALL.to_vec(),
            strategy: self.strategy,
            tx_ris: self.scenario_config(self.scenario.tx_ris_state),
            ris_rx: match self.scenario.ris_rx_state {
                LinkState::Los => None,
                LinkState::Nlos => Some(self.scenario_config(LinkState::Nlos)),
            },
            tx_power_dbm: self.tx_power_dbm,
            noise_dbm: self.noise_dbm,
        })
    }
}

/// Parses and validates a config; omitted keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            message: format!("expected `key = value`, got `{body}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(prev) = seen.insert(key.to_string(), line) {
            return Err(Error::Config {
                line,
                message: format!("`{key}` already set on line {prev}"),
            });
        }
        cfg.set(key, value).map_err(|message| Error::Config {
            line,
            message: format!("{key}: {message}"),
        })?;
    }
    cfg.validate().map_err(|(key, message)| Error::Config {
        line: seen.get(key).copied().unwrap_or(0),
        message: format!("{key}: {message}"),
    })?;
    Ok(cfg)
}
