//! Angles, unit vectors, element grid positions and frame transforms.
//!
//! Spherical angles follow the usual radio convention: zenith measured from
//! +z, azimuth measured in the xy-plane from +x towards +y.
//!
//! Orientations use the intrinsic Z-Y-X sequence (bearing about z, downtilt
//! about the new y, slant about the newest x). The resulting matrix
//! `R = Rz(bearing) * Ry(downtilt) * Rx(slant)` maps local coordinates to
//! global ones; [`Pose::to_local`] applies its transpose. A RIS panel's
//! local z-axis is its normal and its elements lie in the local xy-plane.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// Zenith/azimuth pair in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngle {
    zenith: f64,
    azimuth: f64,
}

impl SphericalAngle {
    /// Zenith must lie in `[0, pi]`; azimuth is wrapped into `[0, 2pi)`.
    pub fn new(zenith: f64, azimuth: f64) -> Result<Self> {
        if !zenith.is_finite() || !azimuth.is_finite() {
            return Err(Error::invalid("angle", "non-finite component"));
        }
        if !(0.0..=PI).contains(&zenith) {
            return Err(Error::invalid(
                "zenith",
                format!("{zenith} rad outside [0, pi]"),
            ));
        }
        Ok(Self {
            zenith,
            azimuth: wrap_azimuth(azimuth),
        })
    }

    pub fn from_degrees(zenith_deg: f64, azimuth_deg: f64) -> Result<Self> {
        Self::new(zenith_deg.to_radians(), azimuth_deg.to_radians())
    }

    /// Clamps the zenith into `[0, pi]` instead of rejecting it.
    pub fn clamped(zenith: f64, azimuth: f64) -> Self {
        Self {
            zenith: zenith.clamp(0.0, PI),
            azimuth: wrap_azimuth(azimuth),
        }
    }

    pub fn zenith(&self) -> f64 {
        self.zenith
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn direction(&self) -> Direction3 {
        direction_from_angles(*self)
    }
}

/// Wraps an azimuth into `[0, 2pi)`.
pub fn wrap_azimuth(azimuth: f64) -> f64 {
    let w = azimuth.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Unit vector in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction3 {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction3 {
    pub const Z: Direction3 = Direction3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Normalizes `(x, y, z)`. Fails on a zero or non-finite vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::invalid("direction", "zero or non-finite vector"));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Unit vector pointing from `from` to `to`.
    pub fn between(from: Position3, to: Position3) -> Result<Self> {
        let d = to - from;
        Self::new(d.x, d.y, d.z).map_err(|_| Error::CoincidentEndpoints)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Projection onto a position vector (dimension: meters).
    pub fn dot_position(&self, p: &Position3) -> f64 {
        self.x * p.x + self.y * p.y + self.z * p.z
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn angles(&self) -> SphericalAngle {
        angles_from_direction(*self)
    }

    fn from_array_unchecked(v: [f64; 3]) -> Self {
        Self {
            x: v[0],
            y: v[1],
            z: v[2],
        }
    }
}

/// Cartesian position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub const ORIGIN: Position3 = Position3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Position3) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Position3 {
    type Output = Position3;

    fn add(self, rhs: Position3) -> Position3 {
        Position3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Position3 {
    type Output = Position3;

    fn sub(self, rhs: Position3) -> Position3 {
        Position3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

/// Origin plus orientation of a local frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub origin: Position3,
    bearing: f64,
    downtilt: f64,
    slant: f64,
    /// Local-to-global rotation, row-major.
    rotation: [[f64; 3]; 3],
}

impl Pose {
    /// Angles in radians; see the module docs for the rotation order.
    pub fn new(origin: Position3, bearing: f64, downtilt: f64, slant: f64) -> Self {
        let (sa, ca) = bearing.sin_cos();
        let (sb, cb) = downtilt.sin_cos();
        let (sg, cg) = slant.sin_cos();
        let rotation = [
            [ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg],
            [sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg],
            [-sb, cb * sg, cb * cg],
        ];
        Self {
            origin,
            bearing,
            downtilt,
            slant,
            rotation,
        }
    }

    pub fn identity() -> Self {
        Self::new(Position3::ORIGIN, 0.0, 0.0, 0.0)
    }

    pub fn bearing(&self) -> f64 {
        self.bearing
    }

    pub fn downtilt(&self) -> f64 {
        self.downtilt
    }

    pub fn slant(&self) -> f64 {
        self.slant
    }

    pub fn rotation(&self) -> [[f64; 3]; 3] {
        self.rotation
    }

    /// Panel normal (local +z) expressed in global coordinates.
    pub fn normal(&self) -> Direction3 {
        self.to_global(Direction3::Z)
    }

    pub fn to_local(&self, global: Direction3) -> Direction3 {
        Direction3::from_array_unchecked(mul_transpose(&self.rotation, global.to_array()))
    }

    pub fn to_global(&self, local: Direction3) -> Direction3 {
        Direction3::from_array_unchecked(mul(&self.rotation, local.to_array()))
    }

    pub fn position_to_local(&self, global: Position3) -> Position3 {
        let [x, y, z] = mul_transpose(&self.rotation, (global - self.origin).to_array());
        Position3::new(x, y, z)
    }

    pub fn position_to_global(&self, local: Position3) -> Position3 {
        let [x, y, z] = mul(&self.rotation, local.to_array());
        self.origin + Position3::new(x, y, z)
    }
}

fn mul(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn mul_transpose(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

/// `(sin(zenith) cos(azimuth), sin(zenith) sin(azimuth), cos(zenith))`.
pub fn direction_from_angles(angle: SphericalAngle) -> Direction3 {
    let (st, ct) = angle.zenith.sin_cos();
    let (sp, cp) = angle.azimuth.sin_cos();
    Direction3::from_array_unchecked([st * cp, st * sp, ct])
}

/// Inverse of [`direction_from_angles`]. At the poles the azimuth is 0.
pub fn angles_from_direction(dir: Direction3) -> SphericalAngle {
    let z = dir.z.clamp(-1.0, 1.0);
    let rho = dir.x.hypot(dir.y);
    let zenith = rho.atan2(z);
    let azimuth = if rho == 0.0 { 0.0 } else { dir.y.atan2(dir.x) };
    SphericalAngle::clamped(zenith, azimuth)
}

/// Position of element `(x, y)` (1-based) in the panel's local frame.
/// The grid centroid sits at the local origin.
pub fn element_position(
    x: usize,
    y: usize,
    size_x: usize,
    size_y: usize,
    spacing: f64,
) -> Result<Position3> {
    if x == 0 || y == 0 || x > size_x || y > size_y {
        return Err(Error::GridIndex {
            x,
            y,
            size_x,
            size_y,
        });
    }
    if !(spacing > 0.0) {
        return Err(Error::invalid("spacing", "must be positive"));
    }
    Ok(Position3::new(
        grid_offset(x, size_x) * spacing,
        grid_offset(y, size_y) * spacing,
        0.0,
    ))
}

/// `i - (1 + n) / 2` for a 1-based index.
pub(crate) fn grid_offset(i: usize, n: usize) -> f64 {
    i as f64 - (1.0 + n as f64) / 2.0
}
