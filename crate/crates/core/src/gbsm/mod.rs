//! Stochastic sub-channels for the Tx-RIS and RIS-Rx links.
//!
//! A simplified 38.901 drop: large-scale parameters are supplied by the
//! user (no cross-correlation maps, no sub-cluster splitting), small-scale
//! parameters are drawn from a single ChaCha8 stream in a fixed order:
//! delays, cluster shadowing, departure angles, arrival angles, XPR,
//! initial phases.

mod pathloss;
mod sampling;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::geometry::{Direction3, Position3, SphericalAngle};

pub use pathloss::{cascade_path_loss, LinkGeometry};
pub use sampling::{
    circular_std, ray_offsets, rms_delay_spread, sample_angles, sample_powers_delays, sample_xpr,
    AngleSpread, DelayProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    UmiStreetCanyon,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::UmiStreetCanyon => "umi",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "umi" | "umi-street-canyon" => Ok(Scenario::UmiStreetCanyon),
            _ => Err(Error::UnsupportedScenario(s.to_string())),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub fn as_str(&self) -> &'static str {
        match self {
            LinkState::Los => "los",
            LinkState::Nlos => "nlos",
        }
    }
}

impl FromStr for LinkState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "los" => Ok(LinkState::Los),
            "nlos" => Ok(LinkState::Nlos),
            _ => Err(Error::invalid("link_state", format!("`{s}` is not los/nlos"))),
        }
    }
}

impl fmt::Display for LinkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Delay spread in seconds, angle spreads in degrees, SF and K in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeScaleParams {
    pub delay_spread: f64,
    pub asa_deg: f64,
    pub zsa_deg: f64,
    pub asd_deg: f64,
    pub zsd_deg: f64,
    pub shadow_fading_db: f64,
    pub k_factor_db: f64,
}

impl Default for LargeScaleParams {
    fn default() -> Self {
        Self {
            delay_spread: 100e-9,
            asa_deg: 20.0,
            zsa_deg: 5.0,
            asd_deg: 20.0,
            zsd_deg: 5.0,
            shadow_fading_db: 0.0,
            k_factor_db: 9.0,
        }
    }
}

impl LargeScaleParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delay_spread > 0.0) || !self.delay_spread.is_finite() {
            return Err(Error::invalid("delay_spread", "must be positive"));
        }
        for (name, v) in [
            ("asa", self.asa_deg),
            ("zsa", self.zsa_deg),
            ("asd", self.asd_deg),
            ("zsd", self.zsd_deg),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid("angle_spread", format!("{name} = {v} must be positive")));
            }
        }
        if !self.shadow_fading_db.is_finite() || !self.k_factor_db.is_finite() {
            return Err(Error::invalid("large_scale", "SF and K must be finite"));
        }
        Ok(())
    }

    pub fn arrival_spread(&self) -> AngleSpread {
        AngleSpread::new(self.asa_deg, self.zsa_deg)
    }

    pub fn departure_spread(&self) -> AngleSpread {
        AngleSpread::new(self.asd_deg, self.zsd_deg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub carrier_hz: f64,
    pub link_state: LinkState,
    pub clusters: usize,
    pub rays_per_cluster: usize,
    pub lsp: LargeScaleParams,
    pub xpr_mean_db: f64,
    pub xpr_std_db: f64,
    /// Share of a spread carried by the intra-cluster ray offsets, as a
    /// fraction of the std. The cluster centres carry `sqrt(1 - rho^2)`,
    /// so the pooled marginal keeps the configured spread.
    pub intra_cluster_fraction: f64,
    /// Heights used by [`path_loss`] when no endpoints are at hand.
    pub bs_height: f64,
    pub ut_height: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(carrier_hz: f64, link_state: LinkState) -> Self {
        Self {
            scenario: Scenario::UmiStreetCanyon,
            carrier_hz,
            link_state,
            clusters: 5,
            rays_per_cluster: 20,
            lsp: LargeScaleParams::default(),
            xpr_mean_db: 8.0,
            xpr_std_db: 3.0,
            intra_cluster_fraction: 0.5,
            bs_height: 10.0,
            ut_height: 1.5,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > 0.0) || !self.carrier_hz.is_finite() {
            return Err(Error::invalid("carrier", "must be positive"));
        }
        if self.clusters == 0 || self.rays_per_cluster == 0 {
            return Err(Error::invalid("clusters", "n and m must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.intra_cluster_fraction) {
            return Err(Error::invalid("intra_cluster_fraction", "must be in [0, 1]"));
        }
        if !(self.xpr_std_db >= 0.0) || !self.xpr_mean_db.is_finite() {
            return Err(Error::invalid("xpr", "need finite mean and std >= 0"));
        }
        self.lsp.validate()
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn delay_profile(&self) -> DelayProfile {
        let delay_scaling = match self.link_state {
            LinkState::Los => 3.0,
            LinkState::Nlos => 2.1,
        };
        DelayProfile {
            delay_scaling,
            cluster_shadowing_db: 3.0,
        }
    }

    /// Generator seeded from `seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        self.rng_for(0)
    }

    /// Independent stream `stream` under the same seed; sweeps give every
    /// point its own stream so evaluation order never changes results.
    pub fn rng_for(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// One propagation path. Angles are global; departure is seen from the
/// link start, arrival from the link end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    /// `None` for the geometric LOS ray.
    pub cluster: Option<usize>,
    pub departure: SphericalAngle,
    pub arrival: SphericalAngle,
    pub power: f64,
    pub delay: f64,
    /// Linear cross-polarization ratio; infinite for the LOS ray.
    pub xpr: f64,
    /// Initial phases (vv, vh, hv, hh) in `[0, 2pi)`.
    pub phases: [f64; 4],
}

impl Ray {
    pub fn is_los(&self) -> bool {
        self.cluster.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubChannel {
    pub start: Position3,
    pub end: Position3,
    pub carrier_hz: f64,
    pub link_state: LinkState,
    pub path_loss_db: f64,
    pub los_ray: Option<Ray>,
    /// Stochastic rays, grouped by cluster and sorted by delay.
    pub rays: Vec<Ray>,
}

impl SubChannel {
    /// LOS ray first, then the stochastic rays.
    pub fn paths(&self) -> impl Iterator<Item = &Ray> {
        self.los_ray.iter().chain(self.rays.iter())
    }

    pub fn path_count(&self) -> usize {
        self.rays.len() + usize::from(self.los_ray.is_some())
    }

    pub fn total_power(&self) -> f64 {
        self.paths().map(|r| r.power).sum()
    }
}

/// Path loss in dB at `distance3d` using the configured heights, plus the
/// configured shadow fading.
pub fn path_loss(cfg: &ScenarioConfig, distance3d: f64) -> Result<f64> {
    let link = LinkGeometry {
        distance_3d: distance3d,
        bs_height: cfg.bs_height,
        ut_height: cfg.ut_height,
    };
    path_loss_for_link(cfg, link)
}

/// Path loss in dB for an explicit link geometry.
pub fn path_loss_for_link(cfg: &ScenarioConfig, link: LinkGeometry) -> Result<f64> {
    pathloss::umi_path_loss(cfg.scenario, cfg.link_state, cfg.carrier_hz, link)
        .map(|pl| pl + cfg.lsp.shadow_fading_db)
}

fn los_ray(carrier_hz: f64, start: Position3, end: Position3, power: f64) -> Result<Ray> {
    let dir = Direction3::between(start, end)?;
    let back = Direction3::between(end, start)?;
    let k = TAU * carrier_hz / SPEED_OF_LIGHT;
    let phase = (-k * start.distance(&end)).rem_euclid(TAU);
    let phase = if phase >= TAU { 0.0 } else { phase };
    Ok(Ray {
        cluster: None,
        departure: dir.angles(),
        arrival: back.angles(),
        power,
        delay: 0.0,
        xpr: f64::INFINITY,
        phases: [phase; 4],
    })
}

fn check_endpoints(start: Position3, end: Position3) -> Result<()> {
    if !start.is_finite() || !end.is_finite() {
        return Err(Error::invalid("position", "non-finite coordinate"));
    }
    if start.distance(&end) == 0.0 {
        return Err(Error::CoincidentEndpoints);
    }
    Ok(())
}

/// Draws one sub-channel realisation from `start` to `end`.
///
/// Path loss uses the endpoint heights; under LOS the geometric ray takes
/// `K/(K+1)` of the power.
pub fn generate_subchannel<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    start: Position3,
    end: Position3,
    rng: &mut R,
) -> Result<SubChannel> {
    cfg.validate()?;
    check_endpoints(start, end)?;
    let path_loss_db = path_loss_for_link(cfg, LinkGeometry::between(start, end))?;
    let (n, m) = (cfg.clusters, cfg.rays_per_cluster);
    let count = n * m;

    let (mut powers, delays) =
        sample_powers_delays(n, m, cfg.lsp.delay_spread, cfg.delay_profile(), rng)?;

    let rho = cfg.intra_cluster_fraction;
    let centre_share = (1.0 - rho * rho).sqrt();
    let los_dep = Direction3::between(start, end)?.angles();
    let los_arr = Direction3::between(end, start)?.angles();
    let dep_spread = cfg.lsp.departure_spread();
    let arr_spread = cfg.lsp.arrival_spread();
    let dep_centres = sample_angles(los_dep, dep_spread.scaled(centre_share), n, rng)?;
    let arr_centres = sample_angles(los_arr, arr_spread.scaled(centre_share), n, rng)?;
    let offsets = ray_offsets(m);

    let xpr = sample_xpr(cfg.xpr_mean_db, cfg.xpr_std_db, count, rng)?;
    let phases = sampling::sample_phases(count, rng);

    let los = match cfg.link_state {
        LinkState::Los => {
            let k = 10f64.powf(cfg.lsp.k_factor_db / 10.0);
            powers.iter_mut().for_each(|p| *p /= k + 1.0);
            Some(los_ray(cfg.carrier_hz, start, end, k / (k + 1.0))?)
        }
        LinkState::Nlos => None,
    };

    let mut rays = Vec::with_capacity(count);
    for c in 0..n {
        let deps = sampling::spread_rays(dep_centres[c], dep_spread.scaled(rho), &offsets);
        let arrs = sampling::spread_rays(arr_centres[c], arr_spread.scaled(rho), &offsets);
        for (j, (departure, arrival)) in deps.zip(arrs).enumerate() {
            let i = c * m + j;
            rays.push(Ray {
                cluster: Some(c),
                departure,
                arrival,
                power: powers[i],
                delay: delays[i],
                xpr: xpr[i],
                phases: phases[i],
            });
        }
    }

    Ok(SubChannel {
        start,
        end,
        carrier_hz: cfg.carrier_hz,
        link_state: cfg.link_state,
        path_loss_db,
        los_ray: los,
        rays,
    })
}

/// A deterministic single-ray LOS link: unit power, zero delay, no
/// cross-polar leakage, LOS path loss.
pub fn los_subchannel(cfg: &ScenarioConfig, start: Position3, end: Position3) -> Result<SubChannel> {
    check_endpoints(start, end)?;
    let mut los_cfg = cfg.clone();
    los_cfg.link_state = LinkState::Los;
    los_cfg.validate()?;
    Ok(SubChannel {
        start,
        end,
        carrier_hz: cfg.carrier_hz,
        link_state: LinkState::Los,
        path_loss_db: path_loss_for_link(&los_cfg, LinkGeometry::between(start, end))?,
        los_ray: Some(los_ray(cfg.carrier_hz, start, end, 1.0)?),
        rays: Vec::new(),
    })
}
