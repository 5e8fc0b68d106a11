//! Attitude modes and solar incidence on body-fixed patches.

use alloc::string::String;
use core::f64::consts::PI;

use nalgebra::{Rotation3, Unit};

use crate::error::{out_of_range, Result};
use crate::model::{SatelliteModel, UNIT_TOLERANCE};
use crate::orbit::{EclipseModel, OrbitSpec, OrbitState};
use crate::Vec3;

/// Body-to-inertial rotation.
pub type Attitude = Rotation3<f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum AttitudeMode {
    /// Constant-rate spin about a body-fixed axis that stays inertially fixed,
    /// starting from `initial`.
    FreeRotation {
        rate_deg_s: f64,
        axis: Vec3,
        initial: Attitude,
    },
    /// The named patch's normal tracks the sun.
    SunPointing { patch: String, normal: Vec3 },
    /// The named patch's normal tracks nadir.
    NadirPointing { patch: String, normal: Vec3 },
}

impl AttitudeMode {
    pub fn free_rotation(rate_deg_s: f64, axis: Vec3) -> Result<Self> {
        if !(rate_deg_s >= 0.0) {
            return Err(out_of_range("spin rate", rate_deg_s));
        }
        let n = axis.norm();
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(out_of_range("spin axis norm", n));
        }
        Ok(Self::FreeRotation {
            rate_deg_s,
            axis,
            initial: Attitude::identity(),
        })
    }

    pub fn sun_pointing(model: &SatelliteModel, patch: &str) -> Result<Self> {
        Ok(Self::SunPointing {
            patch: patch.into(),
            normal: model.patch(patch)?.normal,
        })
    }

    pub fn nadir_pointing(model: &SatelliteModel, patch: &str) -> Result<Self> {
        Ok(Self::NadirPointing {
            patch: patch.into(),
            normal: model.patch(patch)?.normal,
        })
    }

    pub fn with_initial(self, seed: Attitude) -> Self {
        match self {
            Self::FreeRotation { rate_deg_s, axis, .. } => Self::FreeRotation {
                rate_deg_s,
                axis,
                initial: seed,
            },
            other => other,
        }
    }
}

/// Shortest-arc rotation carrying unit vector `from` onto unit vector `to`.
pub fn align(from: &Vec3, to: &Vec3) -> Attitude {
    if let Some(r) = Rotation3::rotation_between(from, to) {
        return r;
    }
    // antiparallel: half turn about any perpendicular axis
    let trial = if from.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let axis = Unit::new_normalize(from.cross(&trial));
    Rotation3::from_axis_angle(&axis, PI)
}

/// Body-to-inertial attitude at time `t`.
pub fn attitude_at(mode: &AttitudeMode, state: &OrbitState, t: f64) -> Attitude {
    match mode {
        AttitudeMode::FreeRotation {
            rate_deg_s,
            axis,
            initial,
        } => {
            let spin = Rotation3::from_axis_angle(&Unit::new_unchecked(*axis), (rate_deg_s * t).to_radians());
            initial * spin
        }
        AttitudeMode::SunPointing { normal, .. } => align(normal, &state.sun_direction),
        AttitudeMode::NadirPointing { normal, .. } => align(normal, &-state.position),
    }
}

/// Cosine of the sun incidence angle on a patch, clamped at 0 for back-lit faces.
pub fn incidence_cosine(normal: &Vec3, attitude: &Attitude, sun_direction: &Vec3) -> f64 {
    (attitude * normal).dot(sun_direction).max(0.0)
}

/// Sunlit-time average of the incidence cosine on the mode's reference face.
///
/// Free rotation is treated as isotropic tumbling (¼, the sphere average of the
/// clamped cosine). Nadir pointing is averaged numerically over the sunlit
/// part of `orbit`.
pub fn spin_average_factor(mode: &AttitudeMode, orbit: &OrbitSpec, eclipse: EclipseModel) -> f64 {
    match mode {
        AttitudeMode::FreeRotation { .. } => 0.25,
        AttitudeMode::SunPointing { .. } => 1.0,
        AttitudeMode::NadirPointing { normal, .. } => {
            const SAMPLES: usize = 3600;
            let period = orbit.period();
            let (mut sum, mut lit) = (0.0, 0usize);
            for k in 0..SAMPLES {
                let t = period * k as f64 / SAMPLES as f64;
                let state = orbit.state_at(t, eclipse);
                if state.in_eclipse {
                    continue;
                }
                let att = attitude_at(mode, &state, t);
                sum += incidence_cosine(normal, &att, &state.sun_direction);
                lit += 1;
            }
            if lit == 0 {
                0.0
            } else {
                sum / lit as f64
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use libm::sqrt;

    fn diag() -> Vec3 {
        Vec3::new(1.0, 1.0, 1.0) / sqrt(3.0)
    }

    fn state(position: Vec3, sun: Vec3) -> OrbitState {
        OrbitState {
            time: 0.0,
            position,
            in_eclipse: false,
            sun_direction: sun,
        }
    }

    #[test]
    fn half_turn_after_ninety_seconds() {
        let mode = AttitudeMode::free_rotation(2.0, diag()).unwrap();
        let r = attitude_at(&mode, &state(Vec3::x(), Vec3::x()), 90.0);
        // a half turn fixes the axis and reverses everything perpendicular to it
        let perp = Vec3::new(1.0, -1.0, 0.0).normalize();
        assert_relative_eq!(r * diag(), diag(), epsilon = 1e-12);
        assert_relative_eq!(r * perp, -perp, epsilon = 1e-12);
    }

    #[test]
    fn sun_pointing_face_sees_full_sun() {
        let normal = Vec3::new(0.0, -1.0, 0.0);
        let mode = AttitudeMode::SunPointing {
            patch: "p".into(),
            normal,
        };
        for sun in [
            Vec3::x(),
            -Vec3::y(),
            Vec3::y(),
            Vec3::new(0.3, -0.4, 0.866).normalize(),
        ] {
            let r = attitude_at(&mode, &state(Vec3::z(), sun), 10.0);
            assert_relative_eq!(incidence_cosine(&normal, &r, &sun), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn nadir_face_dark_at_subsolar_point() {
        let normal = Vec3::z();
        let mode = AttitudeMode::NadirPointing {
            patch: "p".into(),
            normal,
        };
        let sun = Vec3::new(0.0, 0.6, 0.8);
        let r = attitude_at(&mode, &state(sun, sun), 0.0);
        assert_eq!(incidence_cosine(&normal, &r, &sun), 0.0);
        assert_relative_eq!(incidence_cosine(&-normal, &r, &sun), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incidence_examples() {
        let id = Attitude::identity();
        assert_eq!(incidence_cosine(&Vec3::x(), &id, &Vec3::x()), 1.0);
        assert_eq!(incidence_cosine(&Vec3::x(), &id, &Vec3::y()), 0.0);
        let sixty = Vec3::new(0.5, sqrt(3.0) / 2.0, 0.0);
        assert_relative_eq!(incidence_cosine(&Vec3::x(), &id, &sixty), 0.5, epsilon = 1e-15);
        assert_eq!(incidence_cosine(&Vec3::x(), &id, &-Vec3::x()), 0.0);
    }

    #[test]
    fn factors() {
        let orbit = OrbitSpec::with_beta(400.0, 51.6, 0.0, 75.0, 0.0).unwrap();
        let spin = AttitudeMode::free_rotation(2.0, diag()).unwrap();
        assert_eq!(spin_average_factor(&spin, &orbit, EclipseModel::Geometric), 0.25);
        let sun = AttitudeMode::SunPointing {
            patch: "p".into(),
            normal: Vec3::x(),
        };
        assert_eq!(spin_average_factor(&sun, &orbit, EclipseModel::Geometric), 1.0);
        // full-sun orbit, nadir face: lit only while over the night side
        let nadir = AttitudeMode::NadirPointing {
            patch: "p".into(),
            normal: Vec3::x(),
        };
        let f = spin_average_factor(&nadir, &orbit, EclipseModel::Geometric);
        // cos β · (1/π) for the clamped cosine of the in-plane component
        let expected = libm::cos(75f64.to_radians()) / PI;
        assert!((f - expected).abs() < 1e-3, "{f} vs {expected}");
    }

    #[test]
    fn antiparallel_alignment() {
        let r = align(&Vec3::z(), &-Vec3::z());
        assert_relative_eq!(r * Vec3::z(), -Vec3::z(), epsilon = 1e-12);
    }
}
