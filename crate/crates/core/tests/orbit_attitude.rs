//! Orbit geometry against closed forms, and attitude/incidence properties.

use approx::assert_relative_eq;
use nalgebra::{Quaternion, UnitQuaternion};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

use cubesat_preflight_core::attitude::{align, attitude_at, incidence_cosine, AttitudeMode};
use cubesat_preflight_core::consts::EARTH_RADIUS_KM;
use cubesat_preflight_core::orbit::{
    beta_angle, critical_beta_deg, earth_view_factor, eclipse_fraction, orbital_period, EclipseModel, OrbitSpec,
};
use cubesat_preflight_core::Vec3;

fn sampled_eclipse_fraction(orbit: &OrbitSpec, samples: usize) -> f64 {
    let p = orbit.period();
    let dark = (0..samples)
        .filter(|&k| {
            orbit
                .state_at(p * k as f64 / samples as f64, EclipseModel::Geometric)
                .in_eclipse
        })
        .count();
    dark as f64 / samples as f64
}

#[test]
fn period_and_view_factor_at_400_km() {
    let p = orbital_period(400.0).unwrap() / 60.0;
    assert!((p - 92.6).abs() / 92.6 < 0.002, "{p} min");
    assert_relative_eq!(earth_view_factor(400.0), 0.885, epsilon = 0.001);
}

#[test]
fn eclipse_fraction_at_zero_beta_matches_closed_form() {
    let oracle = (EARTH_RADIUS_KM / (EARTH_RADIUS_KM + 400.0)).asin() / std::f64::consts::PI;
    let orbit = OrbitSpec::with_beta(400.0, 51.6, 0.0, 0.0, 37.0).unwrap();
    assert!((sampled_eclipse_fraction(&orbit, 20_000) - oracle).abs() < 0.005);
    assert!((eclipse_fraction(400.0, 0.0) - oracle).abs() < 1e-12);
}

#[test]
fn no_eclipse_at_high_beta() {
    let orbit = OrbitSpec::with_beta(400.0, 51.6, 0.0, 80.0, 0.0).unwrap();
    assert_eq!(sampled_eclipse_fraction(&orbit, 5_000), 0.0);
    assert_eq!(eclipse_fraction(400.0, 80.0), 0.0);
    assert!(critical_beta_deg(400.0) < 80.0);
}

fn random_rotation(rng: &mut ChaCha8Rng) -> nalgebra::Rotation3<f64> {
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    UnitQuaternion::from_quaternion(Quaternion::new(g(), g(), g(), g())).to_rotation_matrix()
}

#[test]
fn isotropic_incidence_averages_one_quarter() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sun = Vec3::x();
    let normal = Vec3::new(0.3, -0.5, 0.81).normalize();
    let n = 200_000;
    let mean: f64 = (0..n)
        .map(|_| incidence_cosine(&normal, &random_rotation(&mut rng), &sun))
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.25).abs() < 0.003, "{mean}");
}

#[test]
fn sun_pointing_faces_the_sun_all_orbit() {
    let orbit = OrbitSpec::with_beta(400.0, 51.6, 10.0, 20.0, 45.0).unwrap();
    let normal = Vec3::new(0.2, 0.9, -0.1).normalize();
    let mode = AttitudeMode::SunPointing {
        patch: "p".into(),
        normal,
    };
    for k in 0..50 {
        let t = orbit.period() * k as f64 / 50.0;
        let s = orbit.state_at(t, EclipseModel::Geometric);
        let att = attitude_at(&mode, &s, t);
        assert_relative_eq!(incidence_cosine(&normal, &att, &s.sun_direction), 1.0, epsilon = 1e-12);
    }
}

proptest! {
    #[test]
    fn beta_round_trips(beta in -89.0f64..89.0, az in 0.0f64..360.0, raan in 0.0f64..360.0, inc in 0.0f64..180.0) {
        let orbit = OrbitSpec::with_beta(400.0, inc, raan, beta, az).unwrap();
        prop_assert!((beta_angle(&orbit) - beta).abs() < 1e-9);
        prop_assert!((orbit.sun_direction.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eclipse_fraction_bounded_and_monotone(h in 200.0f64..2000.0, b1 in 0.0f64..90.0, b2 in 0.0f64..90.0) {
        let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
        let (f_lo, f_hi) = (eclipse_fraction(h, lo), eclipse_fraction(h, hi));
        prop_assert!((0.0..=0.5).contains(&f_lo));
        prop_assert!(f_hi <= f_lo + 1e-15);
    }

    #[test]
    fn sampled_eclipse_agrees_with_closed_form(beta in -85.0f64..85.0, az in 0.0f64..360.0) {
        let orbit = OrbitSpec::with_beta(400.0, 51.6, 0.0, beta, az).unwrap();
        let f = sampled_eclipse_fraction(&orbit, 4000);
        prop_assert!((f - eclipse_fraction(400.0, beta)).abs() < 0.002);
    }

    #[test]
    fn positions_are_unit_and_periodic(t in 0.0f64..20_000.0) {
        let orbit = OrbitSpec::with_beta(400.0, 51.6, 20.0, 15.0, 0.0).unwrap();
        let p = orbit.position(t);
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
        prop_assert!((orbit.position(t + orbit.period()) - p).norm() < 1e-9);
        prop_assert!(p.dot(&orbit.normal()).abs() < 1e-12);
    }

    #[test]
    fn align_maps_from_onto_to(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let from: [f64; 3] = UnitSphere.sample(&mut rng);
        let to: [f64; 3] = if rng.random_bool(0.1) {
            [-from[0], -from[1], -from[2]]
        } else {
            UnitSphere.sample(&mut rng)
        };
        let (from, to) = (Vec3::from(from), Vec3::from(to));
        prop_assert!((align(&from, &to) * from - to).norm() < 1e-9);
    }

    #[test]
    fn incidence_cosine_is_clamped(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = Vec3::from(UnitSphere.sample(&mut rng));
        let s = Vec3::from(UnitSphere.sample(&mut rng));
        let c = incidence_cosine(&n, &random_rotation(&mut rng), &s);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn free_rotation_keeps_the_spin_axis(rate in 0.0f64..10.0, t in 0.0f64..6000.0) {
        let axis = Vec3::new(1.0, 1.0, 1.0).normalize();
        let mode = AttitudeMode::free_rotation(rate, axis).unwrap();
        let orbit = OrbitSpec::with_beta(400.0, 51.6, 0.0, 0.0, 0.0).unwrap();
        let att = attitude_at(&mode, &orbit.state_at(t, EclipseModel::Geometric), t);
        prop_assert!((att * axis - axis).norm() < 1e-9);
    }
}
