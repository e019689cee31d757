use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::SphericalAngle;

/// Per-draw angular spread in degrees: circular std of the azimuth and
/// std of the zenith.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSpread {
    pub azimuth_deg: f64,
    pub zenith_deg: f64,
}

impl AngleSpread {
    pub fn new(azimuth_deg: f64, zenith_deg: f64) -> Self {
        Self {
            azimuth_deg,
            zenith_deg,
        }
    }

    pub fn scaled(self, s: f64) -> Self {
        Self::new(self.azimuth_deg * s, self.zenith_deg * s)
    }
}

/// Draws `count` angles about `mean`: azimuth from a wrapped Gaussian,
/// zenith from a Laplacian with the given std, clipped to `[0, pi]`.
///
/// Each sample consumes two draws, azimuth first. A zero spread returns
/// the mean (the draws are still consumed).
pub fn sample_angles<R: Rng + ?Sized>(
    mean: SphericalAngle,
    spread: AngleSpread,
    count: usize,
    rng: &mut R,
) -> Result<Vec<SphericalAngle>> {
    if !(spread.azimuth_deg >= 0.0 && spread.zenith_deg >= 0.0)
        || !spread.azimuth_deg.is_finite()
        || !spread.zenith_deg.is_finite()
    {
        return Err(Error::invalid("spread", "must be finite and non-negative"));
    }
    let sigma_az = spread.azimuth_deg.to_radians();
    let b = spread.zenith_deg.to_radians() / std::f64::consts::SQRT_2;
    Ok((0..count)
        .map(|_| {
            let n: f64 = StandardNormal.sample(rng);
            let u: f64 = rng.random::<f64>() - 0.5;
            let lap = -b * u.signum() * (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln();
            SphericalAngle::clamped(mean.zenith() + lap, mean.azimuth() + sigma_az * n)
        })
        .collect())
}

/// Exponential delay profile and exponentially decaying cluster powers
/// with per-cluster log-normal shadowing.
///
/// Returns per-ray `(powers, delays)`, `n * m` entries each, grouped by
/// cluster and sorted by delay. The first cluster has zero delay; the
/// cluster power is split evenly over its `m` rays and the total is 1.
pub fn sample_powers_delays<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    delay_spread: f64,
    profile: DelayProfile,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("clusters", "n and m must be at least 1"));
    }
    if !(delay_spread > 0.0) || !delay_spread.is_finite() {
        return Err(Error::invalid("delay_spread", "must be positive"));
    }
    let r = profile.delay_scaling;
    let mut delays: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            -r * delay_spread * (1.0 - u).ln()
        })
        .collect();
    delays.sort_by(f64::total_cmp);
    let first = delays[0];
    delays.iter_mut().for_each(|t| *t -= first);

    let mut powers: Vec<f64> = delays
        .iter()
        .map(|&t| {
            let z: f64 = StandardNormal.sample(rng);
            (-t * (r - 1.0) / (r * delay_spread)).exp()
                * 10f64.powf(-profile.cluster_shadowing_db * z / 10.0)
        })
        .collect();
    let total: f64 = powers.iter().sum();
    powers.iter_mut().for_each(|p| *p /= total);

    let ray_powers = powers.iter().flat_map(|&p| std::iter::repeat_n(p / m as f64, m)).collect();
    let ray_delays = delays.iter().flat_map(|&t| std::iter::repeat_n(t, m)).collect();
    Ok((ray_powers, ray_delays))
}

/// Shape constants of the delay/power draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayProfile {
    /// Delay scaling `r_tau`.
    pub delay_scaling: f64,
    /// Per-cluster shadowing std in dB.
    pub cluster_shadowing_db: f64,
}

/// Cross-polarization ratios `10^(X/10)`, `X ~ N(mean_db, std_db)`.
pub fn sample_xpr<R: Rng + ?Sized>(
    mean_db: f64,
    std_db: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(std_db >= 0.0) || !mean_db.is_finite() || !std_db.is_finite() {
        return Err(Error::invalid("xpr", "need finite mean and std >= 0"));
    }
    Ok((0..count)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            10f64.powf((mean_db + std_db * z) / 10.0)
        })
        .collect())
}

pub(crate) fn sample_phases<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<[f64; 4]> {
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.random::<f64>() * TAU))
        .collect()
}

/// Unit-RMS intra-cluster offsets for `m` rays.
///
/// Twenty rays use the fixed 38.901 offset table; other counts use the
/// Gaussian quantiles at the bin centres `(i + 1/2) / m`. Either set is
/// rescaled to unit RMS so the cluster keeps its nominal spread.
pub fn ray_offsets(m: usize) -> Vec<f64> {
    const TABLE_20: [f64; 10] = [
        0.0447, 0.1413, 0.2492, 0.3715, 0.5129, 0.6797, 0.8844, 1.1481, 1.5195, 2.1551,
    ];
    let raw: Vec<f64> = if m == 20 {
        TABLE_20.iter().flat_map(|&a| [a, -a]).collect()
    } else if m == 1 {
        vec![0.0]
    } else {
        use statrs::distribution::{ContinuousCDF, Normal};
        let normal = Normal::standard();
        (0..m)
            .map(|i| normal.inverse_cdf((i as f64 + 0.5) / m as f64))
            .collect()
    };
    let rms = (raw.iter().map(|a| a * a).sum::<f64>() / m as f64).sqrt();
    if rms == 0.0 {
        raw
    } else {
        raw.into_iter().map(|a| a / rms).collect()
    }
}

/// Rays at `center + offset * spread`, zenith kept inside `[0, pi]`.
pub(crate) fn spread_rays(
    center: SphericalAngle,
    spread: AngleSpread,
    offsets: &[f64],
) -> impl Iterator<Item = SphericalAngle> + '_ {
    let (az, zen) = (spread.azimuth_deg.to_radians(), spread.zenith_deg.to_radians());
    offsets.iter().map(move |&o| {
        SphericalAngle::clamped(center.zenith() + o * zen, center.azimuth() + o * az)
    })
}

/// Circular standard deviation `sqrt(-2 ln R)` of a set of angles (rad).
pub fn circular_std(angles: impl IntoIterator<Item = f64>) -> f64 {
    let (mut c, mut s, mut n) = (0.0, 0.0, 0usize);
    for a in angles {
        c += a.cos();
        s += a.sin();
        n += 1;
    }
    let r = (c * c + s * s).sqrt() / n as f64;
    (-2.0 * r.ln()).sqrt()
}

/// Power-weighted rms spread of delays.
pub fn rms_delay_spread(powers: &[f64], delays: &[f64]) -> f64 {
    let total: f64 = powers.iter().sum();
    let mean = powers.iter().zip(delays).map(|(p, t)| p * t).sum::<f64>() / total;
    let second = powers.iter().zip(delays).map(|(p, t)| p * t * t).sum::<f64>() / total;
    (second - mean * mean).max(0.0).sqrt()
}
