//! Circular-orbit geometry: period, sun direction, beta angle, cylindrical
//! umbra and Earth view factor.

use alloc::string::String;
use core::f64::consts::PI;

use libm::{asin, cos, sin, sqrt};

use crate::consts::{EARTH_MU_KM3_S2, EARTH_RADIUS_KM, NOMINAL_SOLAR_FLUX};
use crate::error::{out_of_range, Error, Result};
use crate::model::UNIT_TOLERANCE;
use crate::Vec3;

/// Default albedo correction factor.
pub const DEFAULT_ALBEDO_CORRECTION: f64 = 0.998;

/// One external thermal environment.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvCase {
    pub name: String,
    /// W/m²
    pub solar_flux: f64,
    /// W/m²
    pub earth_ir: f64,
    pub albedo: f64,
    pub albedo_correction: f64,
}

impl EnvCase {
    pub fn new(name: impl Into<String>, solar_flux: f64, earth_ir: f64, albedo: f64) -> Self {
        Self {
            name: name.into(),
            solar_flux,
            earth_ir,
            albedo,
            albedo_correction: DEFAULT_ALBEDO_CORRECTION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.solar_flux > 0.0) {
            return Err(out_of_range("solar flux", self.solar_flux));
        }
        if !(self.earth_ir >= 0.0) {
            return Err(out_of_range("Earth IR flux", self.earth_ir));
        }
        if !(0.0..=1.0).contains(&self.albedo) {
            return Err(out_of_range("albedo", self.albedo));
        }
        if !(self.albedo_correction > 0.0 && self.albedo_correction <= 1.0) {
            return Err(out_of_range("albedo correction", self.albedo_correction));
        }
        Ok(())
    }
}

/// Built-in environment cases: `hot`, `cold` and `nominal`.
pub fn env_case(name: &str) -> Result<EnvCase> {
    match name {
        "hot" => Ok(EnvCase::new("hot", 1414.0, 258.0, 0.35)),
        "cold" => Ok(EnvCase::new("cold", 1318.0, 216.0, 0.25)),
        // IR and albedo are the midpoints of the hot and cold cases.
        "nominal" => Ok(EnvCase::new("nominal", NOMINAL_SOLAR_FLUX, 237.0, 0.30)),
        _ => Err(Error::UnknownReference {
            kind: "environment case",
            name: name.into(),
        }),
    }
}

/// How eclipse timing is decided along the orbit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EclipseModel {
    /// Cylindrical umbra.
    #[default]
    Geometric,
    /// Fixed sun/eclipse split centred on the anti-solar point. Applied only on
    /// orbits that have a geometric eclipse at all.
    FixedSplit { sun_minutes: f64, eclipse_minutes: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpec {
    pub altitude_km: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    /// Unit vector towards the sun, inertial frame, fixed over a run.
    pub sun_direction: Vec3,
}

/// Satellite state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub time: f64,
    /// Unit vector from Earth centre to the satellite.
    pub position: Vec3,
    pub in_eclipse: bool,
    pub sun_direction: Vec3,
}

impl OrbitSpec {
    pub fn new(altitude_km: f64, inclination_deg: f64, raan_deg: f64, sun_direction: Vec3) -> Result<Self> {
        if !(altitude_km > 0.0) {
            return Err(out_of_range("altitude", altitude_km));
        }
        if !(0.0..=180.0).contains(&inclination_deg) {
            return Err(out_of_range("inclination", inclination_deg));
        }
        let n = sun_direction.norm();
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(out_of_range("sun direction norm", n));
        }
        Ok(Self {
            altitude_km,
            inclination_deg,
            raan_deg,
            sun_direction,
        })
    }

    /// Orbit whose sun direction sits `beta_deg` above the orbit plane, with
    /// its in-plane projection `sun_azimuth_deg` past the ascending node.
    pub fn with_beta(
        altitude_km: f64,
        inclination_deg: f64,
        raan_deg: f64,
        beta_deg: f64,
        sun_azimuth_deg: f64,
    ) -> Result<Self> {
        if !(-90.0..=90.0).contains(&beta_deg) {
            return Err(out_of_range("beta angle", beta_deg));
        }
        let mut orbit = Self::new(altitude_km, inclination_deg, raan_deg, Vec3::x())?;
        let (e1, e2) = orbit.in_plane_basis();
        let h = orbit.normal();
        let (b, az) = (beta_deg.to_radians(), sun_azimuth_deg.to_radians());
        orbit.sun_direction = (cos(b) * (cos(az) * e1 + sin(az) * e2) + sin(b) * h).normalize();
        Ok(orbit)
    }

    pub fn radius_km(&self) -> f64 {
        EARTH_RADIUS_KM + self.altitude_km
    }

    pub fn period(&self) -> f64 {
        // altitude > 0 is enforced by the constructors
        orbital_period(self.altitude_km).unwrap_or(f64::NAN)
    }

    /// Orbit-plane normal (angular momentum direction).
    pub fn normal(&self) -> Vec3 {
        let (i, o) = (self.inclination_deg.to_radians(), self.raan_deg.to_radians());
        Vec3::new(sin(o) * sin(i), -cos(o) * sin(i), cos(i))
    }

    /// Ascending-node direction and the in-plane vector 90° ahead of it.
    pub fn in_plane_basis(&self) -> (Vec3, Vec3) {
        let o = self.raan_deg.to_radians();
        let e1 = Vec3::new(cos(o), sin(o), 0.0);
        (e1, self.normal().cross(&e1))
    }

    /// Unit position at `t` seconds after the ascending-node crossing.
    pub fn position(&self, t: f64) -> Vec3 {
        let u = 2.0 * PI * t / self.period();
        let (e1, e2) = self.in_plane_basis();
        cos(u) * e1 + sin(u) * e2
    }

    pub fn state_at(&self, t: f64, eclipse: EclipseModel) -> OrbitState {
        let position = self.position(t);
        let in_eclipse = match eclipse {
            EclipseModel::Geometric => eclipse_state(&position, &self.sun_direction, self.altitude_km),
            EclipseModel::FixedSplit {
                sun_minutes,
                eclipse_minutes,
            } => self.fixed_split_eclipse(&position, sun_minutes, eclipse_minutes),
        };
        OrbitState {
            time: t,
            position,
            in_eclipse,
            sun_direction: self.sun_direction,
        }
    }

    fn fixed_split_eclipse(&self, position: &Vec3, sun_minutes: f64, eclipse_minutes: f64) -> bool {
        if beta_angle(self).abs() >= critical_beta_deg(self.altitude_km) {
            return false;
        }
        let (e1, e2) = self.in_plane_basis();
        let anti = -self.sun_direction;
        let (ax, ay) = (anti.dot(&e1), anti.dot(&e2));
        let (px, py) = (position.dot(&e1), position.dot(&e2));
        let angle = libm::atan2(ax * py - ay * px, ax * px + ay * py).abs();
        let half = PI * eclipse_minutes / (sun_minutes + eclipse_minutes);
        angle < half
    }
}

/// Circular orbit period [s] at the given altitude [km].
pub fn orbital_period(altitude_km: f64) -> Result<f64> {
    let a = EARTH_RADIUS_KM + altitude_km;
    if !(a > 0.0) {
        return Err(out_of_range("altitude", altitude_km));
    }
    Ok(2.0 * PI * sqrt(a * a * a / EARTH_MU_KM3_S2))
}

/// Angle between the sun direction and the orbit plane [deg], in [−90, 90].
pub fn beta_angle(orbit: &OrbitSpec) -> f64 {
    asin(orbit.sun_direction.dot(&orbit.normal()).clamp(-1.0, 1.0)).to_degrees()
}

/// True inside the cylindrical umbra: anti-sunward and closer than one Earth
/// radius to the shadow axis.
pub fn eclipse_state(position: &Vec3, sun_direction: &Vec3, altitude_km: f64) -> bool {
    let along = position.dot(sun_direction);
    if along >= 0.0 {
        return false;
    }
    let r = EARTH_RADIUS_KM + altitude_km;
    r * sqrt((1.0 - along * along).max(0.0)) < EARTH_RADIUS_KM
}

/// Beta angle above which a circular orbit never enters the umbra [deg].
pub fn critical_beta_deg(altitude_km: f64) -> f64 {
    asin(EARTH_RADIUS_KM / (EARTH_RADIUS_KM + altitude_km)).to_degrees()
}

/// Fraction of the orbit spent in the cylindrical umbra.
pub fn eclipse_fraction(altitude_km: f64, beta_deg: f64) -> f64 {
    let r = EARTH_RADIUS_KM + altitude_km;
    let cb = cos(beta_deg.to_radians());
    let x = sqrt(r * r - EARTH_RADIUS_KM * EARTH_RADIUS_KM) / (r * cb);
    if x >= 1.0 {
        0.0
    } else {
        libm::acos(x) / PI
    }
}

/// Earth view factor of a nadir-facing flat plate, (R/(R+h))².
pub fn earth_view_factor(altitude_km: f64) -> f64 {
    let ratio = EARTH_RADIUS_KM / (EARTH_RADIUS_KM + altitude_km.max(0.0));
    ratio * ratio
}
