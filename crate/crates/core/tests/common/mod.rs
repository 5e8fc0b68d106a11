//! Small hand-built models shared by the integration tests.
#![allow(dead_code)]

use cubesat_preflight_core::attitude::AttitudeMode;
use cubesat_preflight_core::model::{
    Dissipation, FinishFraction, Material, PanelSpec, Provenance, SatelliteModel, SurfaceFinish, SurfacePatch,
    ThermalNode,
};
use cubesat_preflight_core::orbit::{EclipseModel, EnvCase, OrbitSpec};
use cubesat_preflight_core::power::ExtractionTable;
use cubesat_preflight_core::scenario::Scenarios;
use cubesat_preflight_core::thermal::{SimSettings, ThermalScenario};
use cubesat_preflight_core::Vec3;

pub const SIGMA: f64 = 5.670374e-8;

pub fn aluminium() -> Material {
    Material {
        name: "A6061".into(),
        youngs_modulus: 68.9e9,
        density: 2700.0,
        tensile_strength: 295e6,
        specific_heat: 897.0,
        conductivity: 167.0,
        allowable_stress_factor: None,
    }
}

pub fn finish(name: &str, alpha: f64, epsilon: f64) -> SurfaceFinish {
    SurfaceFinish {
        name: name.into(),
        alpha,
        epsilon,
        provenance: Provenance::Calibrated,
    }
}

pub fn patch(name: &str, area: f64, normal: Vec3, finish: &str) -> SurfacePatch {
    SurfacePatch {
        name: name.into(),
        area,
        normal: normal.normalize(),
        finishes: vec![FinishFraction::new(finish, 1.0)],
        cell_fraction: 0.0,
        string_id: None,
    }
}

pub fn node(name: &str, mass: f64, patches: Vec<SurfacePatch>) -> ThermalNode {
    ThermalNode {
        name: name.into(),
        mass,
        specific_heat: 900.0,
        material: None,
        patches,
        dissipation: Dissipation::constant(0.0),
    }
}

pub fn model(finishes: Vec<SurfaceFinish>, nodes: Vec<ThermalNode>) -> SatelliteModel {
    SatelliteModel {
        name: "test".into(),
        materials: vec![aluminium()],
        finishes,
        nodes,
        strings: Vec::new(),
        panels: Vec::new(),
        chain: Default::default(),
        requirements: Default::default(),
        scenarios: Scenarios::default(),
    }
}

/// Fibonacci lattice of `n` near-uniform unit normals.
pub fn sphere_normals(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Sun-only environment: no Earth IR and no albedo.
pub fn sun_only(flux: f64) -> EnvCase {
    EnvCase::new("sun_only", flux, 0.0, 0.0)
}

pub fn scenario(orbit: OrbitSpec, env: EnvCase, mode: AttitudeMode) -> ThermalScenario {
    ThermalScenario {
        orbit,
        env,
        mode,
        eclipse: EclipseModel::Geometric,
        extraction: ExtractionTable::none(),
        settings: SimSettings {
            tolerance: 1e-4,
            max_orbits: 200,
            ..SimSettings::default()
        },
    }
}

pub fn panel(length: f64, width: f64, thickness: f64, mass: f64) -> PanelSpec {
    PanelSpec {
        name: "p".into(),
        length,
        width,
        thickness,
        material: "A6061".into(),
        total_mass: mass,
    }
}
