//! TOML model files.
//!
//! Quantities carry their unit in the key name (`mass_g`, `area_mm2`,
//! `min_c`, ...) and are converted to SI on load. Unknown keys are rejected.

use std::fs;
use std::path::Path;

use cubesat_preflight_core::attitude::Attitude;
use cubesat_preflight_core::consts::{celsius_to_kelvin, kelvin_to_celsius};
use cubesat_preflight_core::model::{
    validate_model, BoundaryCondition, ChainLayout, Dissipation, FinishFraction, HingeSpec, HingeStiffness, Material,
    PanelSpec, PowerString, Provenance, Requirements, SatelliteModel, SurfaceFinish, SurfacePatch, TemperatureBand,
    ThermalNode,
};
use cubesat_preflight_core::orbit::EnvCase;
use cubesat_preflight_core::scenario::{
    AttitudeDefaults, CaseDef, OrbitDefaults, PowerSettings, Scenarios, SurfaceConfig,
};
use cubesat_preflight_core::thermal::SimSettings;
use cubesat_preflight_core::Vec3;
use nalgebra::Unit;
use serde::{Deserialize, Serialize};

/// Version of the file layout this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("reference error: unknown {kind} `{name}` (in {context})")]
    Reference {
        kind: &'static str,
        name: String,
        context: String,
    },
    #[error("invalid model:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub materials: Vec<MaterialDoc>,
    #[serde(default)]
    pub finishes: Vec<FinishDoc>,
    #[serde(default)]
    pub nodes: Vec<NodeDoc>,
    #[serde(default)]
    pub patches: Vec<PatchDoc>,
    #[serde(default)]
    pub strings: Vec<StringDoc>,
    #[serde(default)]
    pub panels: Vec<PanelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requirements: Option<RequirementsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<ScenariosDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialDoc {
    pub name: String,
    pub youngs_modulus_gpa: f64,
    pub density_g_cm3: f64,
    pub tensile_strength_mpa: f64,
    pub specific_heat_j_kgk: f64,
    pub conductivity_w_mk: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowable_stress_factor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProvenanceDoc {
    Measured,
    Datasheet,
    Calibrated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinishDoc {
    pub name: String,
    pub alpha: f64,
    pub epsilon: f64,
    pub provenance: ProvenanceDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub name: String,
    pub mass_g: f64,
    /// Falls back to the material's value when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specific_heat_j_kgk: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<String>,
    #[serde(default)]
    pub dissipation_sun_w: f64,
    #[serde(default)]
    pub dissipation_eclipse_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionDoc {
    pub finish: String,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchDoc {
    pub name: String,
    pub node: String,
    pub area_mm2: f64,
    pub normal: [f64; 3],
    pub finishes: Vec<FractionDoc>,
    #[serde(default)]
    pub cell_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub string: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringDoc {
    pub id: String,
    pub cells_in_series: u32,
    pub cell_area_cm2: f64,
    pub efficiency: f64,
    #[serde(default)]
    pub patches: Vec<String>,
    #[serde(default)]
    pub sun_orientable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_rated_power_w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelDoc {
    pub name: String,
    pub length_mm: f64,
    pub width_mm: f64,
    pub thickness_mm: f64,
    pub material: String,
    pub mass_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryDoc {
    ClampedFree,
    PinnedPinned,
    ClampedEnds,
    Free,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HingeDoc {
    pub joint: usize,
    /// Absent means a rigid joint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stiffness_nm_per_rad: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    #[serde(default)]
    pub gap_mm: f64,
    pub boundary: BoundaryDoc,
    #[serde(default = "default_elements")]
    pub elements_per_panel: usize,
    #[serde(default)]
    pub hinges: Vec<HingeDoc>,
}

fn default_elements() -> usize {
    ChainLayout::default().elements_per_panel
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandDoc {
    pub name: String,
    pub node: String,
    pub min_c: f64,
    pub max_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequirementsDoc {
    pub min_frequency_hz: f64,
    pub allowable_stress_factor: f64,
    pub quasi_static_g: f64,
    pub rail_load_n: f64,
    pub rail_section_mm2: f64,
    pub envelope_limit_mm: f64,
    #[serde(default)]
    pub temperature_bands: Vec<BandDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDoc {
    pub altitude_km: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseDoc {
    pub name: String,
    pub solar_flux_w_m2: f64,
    pub earth_ir_w_m2: f64,
    pub albedo: f64,
    pub albedo_correction: f64,
    pub beta_deg: f64,
    #[serde(default)]
    pub sun_azimuth_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfacePatchDoc {
    pub patch: String,
    pub finishes: Vec<FractionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub name: String,
    #[serde(default)]
    pub patches: Vec<SurfacePatchDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttitudeDoc {
    pub spin_rate_deg_s: f64,
    pub spin_axis: [f64; 3],
    /// Seed rotation applied before spinning: axis and angle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_axis: Option<[f64; 3]>,
    #[serde(default)]
    pub initial_angle_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sun_patch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nadir_patch: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerDoc {
    pub standby_consumption_w: f64,
    pub sun_minutes: f64,
    pub eclipse_minutes: f64,
    pub nominal_flux_w_m2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimDoc {
    pub dt_s: f64,
    pub tolerance_k: f64,
    pub max_orbits: usize,
    pub initial_temperature_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenariosDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitDoc>,
    #[serde(default)]
    pub cases: Vec<CaseDoc>,
    #[serde(default)]
    pub surfaces: Vec<SurfaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attitude: Option<AttitudeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<PowerDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimDoc>,
}

fn vec3(v: [f64; 3]) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn fractions(docs: &[FractionDoc]) -> Vec<FinishFraction> {
    docs.iter()
        .map(|f| FinishFraction::new(&f.finish, f.fraction))
        .collect()
}

fn fraction_docs(fs: &[FinishFraction]) -> Vec<FractionDoc> {
    fs.iter()
        .map(|f| FractionDoc {
            finish: f.finish.clone(),
            fraction: f.fraction,
        })
        .collect()
}

fn reference(kind: &'static str, name: &str, context: String) -> ConfigError {
    ConfigError::Reference {
        kind,
        name: name.to_owned(),
        context,
    }
}

impl ModelFile {
    /// Cross-reference pass: every name used must be defined.
    fn check_references(&self) -> Result<(), ConfigError> {
        let has_material = |n: &str| self.materials.iter().any(|m| m.name == n);
        let has_finish = |n: &str| self.finishes.iter().any(|f| f.name == n);
        let has_node = |n: &str| self.nodes.iter().any(|x| x.name == n);
        let has_patch = |n: &str| self.patches.iter().any(|p| p.name == n);
        let has_string = |n: &str| self.strings.iter().any(|s| s.id == n);

        for n in &self.nodes {
            if let Some(m) = &n.material {
                if !has_material(m) {
                    return Err(reference("material", m, format!("node `{}`", n.name)));
                }
            }
        }
        for p in &self.patches {
            let ctx = || format!("patch `{}`", p.name);
            if !has_node(&p.node) {
                return Err(reference("node", &p.node, ctx()));
            }
            for f in &p.finishes {
                if !has_finish(&f.finish) {
                    return Err(reference("finish", &f.finish, ctx()));
                }
            }
            if let Some(s) = &p.string {
                if !has_string(s) {
                    return Err(reference("string", s, ctx()));
                }
            }
        }
        for s in &self.strings {
            for p in &s.patches {
                if !has_patch(p) {
                    return Err(reference("patch", p, format!("string `{}`", s.id)));
                }
            }
        }
        for p in &self.panels {
            if !has_material(&p.material) {
                return Err(reference("material", &p.material, format!("panel `{}`", p.name)));
            }
        }
        if let Some(r) = &self.requirements {
            for b in &r.temperature_bands {
                if !has_node(&b.node) {
                    return Err(reference("node", &b.node, format!("temperature band `{}`", b.name)));
                }
            }
        }
        if let Some(s) = &self.scenarios {
            for surf in &s.surfaces {
                for sp in &surf.patches {
                    let ctx = || format!("surface `{}`", surf.name);
                    if !has_patch(&sp.patch) {
                        return Err(reference("patch", &sp.patch, ctx()));
                    }
                    for f in &sp.finishes {
                        if !has_finish(&f.finish) {
                            return Err(reference("finish", &f.finish, ctx()));
                        }
                    }
                }
            }
            if let Some(a) = &s.attitude {
                for p in [&a.sun_patch, &a.nadir_patch].into_iter().flatten() {
                    if !has_patch(p) {
                        return Err(reference("patch", p, "scenarios.attitude".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the SI model. References must already be resolved.
    pub fn to_model(&self) -> Result<SatelliteModel, ConfigError> {
        self.check_references()?;
        let materials: Vec<Material> = self
            .materials
            .iter()
            .map(|m| Material {
                name: m.name.clone(),
                youngs_modulus: m.youngs_modulus_gpa * 1e9,
                density: m.density_g_cm3 * 1e3,
                tensile_strength: m.tensile_strength_mpa * 1e6,
                specific_heat: m.specific_heat_j_kgk,
                conductivity: m.conductivity_w_mk,
                allowable_stress_factor: m.allowable_stress_factor,
            })
            .collect();
        let finishes = self
            .finishes
            .iter()
            .map(|f| SurfaceFinish {
                name: f.name.clone(),
                alpha: f.alpha,
                epsilon: f.epsilon,
                provenance: match f.provenance {
                    ProvenanceDoc::Measured => Provenance::Measured,
                    ProvenanceDoc::Datasheet => Provenance::Datasheet,
                    ProvenanceDoc::Calibrated => Provenance::Calibrated,
                },
            })
            .collect();
        let mut nodes = Vec::new();
        for n in &self.nodes {
            let specific_heat = match (n.specific_heat_j_kgk, &n.material) {
                (Some(c), _) => c,
                (None, Some(m)) => materials
                    .iter()
                    .find(|x| &x.name == m)
                    .map(|x| x.specific_heat)
                    .unwrap_or(f64::NAN),
                (None, None) => {
                    return Err(ConfigError::Schema(format!(
                        "node `{}` needs specific_heat_j_kgk or material",
                        n.name
                    )))
                }
            };
            nodes.push(ThermalNode {
                name: n.name.clone(),
                mass: n.mass_g * 1e-3,
                specific_heat,
                material: n.material.clone(),
                patches: self
                    .patches
                    .iter()
                    .filter(|p| p.node == n.name)
                    .map(|p| SurfacePatch {
                        name: p.name.clone(),
                        area: p.area_mm2 * 1e-6,
                        normal: vec3(p.normal),
                        finishes: fractions(&p.finishes),
                        cell_fraction: p.cell_fraction,
                        string_id: p.string.clone(),
                    })
                    .collect(),
                dissipation: Dissipation {
                    sunlit: n.dissipation_sun_w,
                    eclipse: n.dissipation_eclipse_w,
                },
            });
        }
        let strings = self
            .strings
            .iter()
            .map(|s| PowerString {
                id: s.id.clone(),
                cells_in_series: s.cells_in_series,
                cell_area: s.cell_area_cm2 * 1e-4,
                efficiency: s.efficiency,
                patches: s.patches.clone(),
                sun_orientable: s.sun_orientable,
                cell_rated_power: s.cell_rated_power_w,
            })
            .collect();
        let panels = self
            .panels
            .iter()
            .map(|p| PanelSpec {
                name: p.name.clone(),
                length: p.length_mm * 1e-3,
                width: p.width_mm * 1e-3,
                thickness: p.thickness_mm * 1e-3,
                material: p.material.clone(),
                total_mass: p.mass_g * 1e-3,
            })
            .collect();
        let chain = match &self.chain {
            None => ChainLayout::default(),
            Some(c) => ChainLayout {
                gap: c.gap_mm * 1e-3,
                hinges: c
                    .hinges
                    .iter()
                    .map(|h| HingeSpec {
                        joint: h.joint,
                        stiffness: h
                            .stiffness_nm_per_rad
                            .map_or(HingeStiffness::Rigid, HingeStiffness::Spring),
                    })
                    .collect(),
                boundary: match c.boundary {
                    BoundaryDoc::ClampedFree => BoundaryCondition::ClampedFree,
                    BoundaryDoc::PinnedPinned => BoundaryCondition::PinnedPinned,
                    BoundaryDoc::ClampedEnds => BoundaryCondition::ClampedEnds,
                    BoundaryDoc::Free => BoundaryCondition::Free,
                },
                elements_per_panel: c.elements_per_panel,
            },
        };
        let requirements = match &self.requirements {
            None => Requirements::default(),
            Some(r) => Requirements {
                min_frequency_hz: r.min_frequency_hz,
                allowable_stress_factor: r.allowable_stress_factor,
                quasi_static_g: r.quasi_static_g,
                rail_load: r.rail_load_n,
                rail_section_area: r.rail_section_mm2 * 1e-6,
                envelope_limit: r.envelope_limit_mm * 1e-3,
                temperature_bands: r
                    .temperature_bands
                    .iter()
                    .map(|b| TemperatureBand {
                        name: b.name.clone(),
                        node: b.node.clone(),
                        min: celsius_to_kelvin(b.min_c),
                        max: celsius_to_kelvin(b.max_c),
                    })
                    .collect(),
            },
        };
        Ok(SatelliteModel {
            name: self.name.clone(),
            materials,
            finishes,
            nodes,
            strings,
            panels,
            chain,
            requirements,
            scenarios: self
                .scenarios
                .as_ref()
                .map_or_else(Scenarios::default, scenarios_from_doc),
        })
    }

    /// Inverse of [`ModelFile::to_model`].
    pub fn from_model(model: &SatelliteModel) -> Self {
        let r = &model.requirements;
        ModelFile {
            schema_version: SCHEMA_VERSION,
            name: model.name.clone(),
            materials: model
                .materials
                .iter()
                .map(|m| MaterialDoc {
                    name: m.name.clone(),
                    youngs_modulus_gpa: scaled_back(m.youngs_modulus, 1e9),
                    density_g_cm3: scaled_back(m.density, 1e3),
                    tensile_strength_mpa: scaled_back(m.tensile_strength, 1e6),
                    specific_heat_j_kgk: m.specific_heat,
                    conductivity_w_mk: m.conductivity,
                    allowable_stress_factor: m.allowable_stress_factor,
                })
                .collect(),
            finishes: model
                .finishes
                .iter()
                .map(|f| FinishDoc {
                    name: f.name.clone(),
                    alpha: f.alpha,
                    epsilon: f.epsilon,
                    provenance: match f.provenance {
                        Provenance::Measured => ProvenanceDoc::Measured,
                        Provenance::Datasheet => ProvenanceDoc::Datasheet,
                        Provenance::Calibrated => ProvenanceDoc::Calibrated,
                    },
                })
                .collect(),
            nodes: model
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    name: n.name.clone(),
                    mass_g: scaled_back(n.mass, 1e-3),
                    specific_heat_j_kgk: Some(n.specific_heat),
                    material: n.material.clone(),
                    dissipation_sun_w: n.dissipation.sunlit,
                    dissipation_eclipse_w: n.dissipation.eclipse,
                })
                .collect(),
            patches: model
                .patches()
                .map(|(n, p)| PatchDoc {
                    name: p.name.clone(),
                    node: n.name.clone(),
                    area_mm2: scaled_back(p.area, 1e-6),
                    normal: arr(&p.normal),
                    finishes: fraction_docs(&p.finishes),
                    cell_fraction: p.cell_fraction,
                    string: p.string_id.clone(),
                })
                .collect(),
            strings: model
                .strings
                .iter()
                .map(|s| StringDoc {
                    id: s.id.clone(),
                    cells_in_series: s.cells_in_series,
                    cell_area_cm2: scaled_back(s.cell_area, 1e-4),
                    efficiency: s.efficiency,
                    patches: s.patches.clone(),
                    sun_orientable: s.sun_orientable,
                    cell_rated_power_w: s.cell_rated_power,
                })
                .collect(),
            panels: model
                .panels
                .iter()
                .map(|p| PanelDoc {
                    name: p.name.clone(),
                    length_mm: scaled_back(p.length, 1e-3),
                    width_mm: scaled_back(p.width, 1e-3),
                    thickness_mm: scaled_back(p.thickness, 1e-3),
                    material: p.material.clone(),
                    mass_g: scaled_back(p.total_mass, 1e-3),
                })
                .collect(),
            chain: Some(ChainDoc {
                gap_mm: scaled_back(model.chain.gap, 1e-3),
                boundary: match model.chain.boundary {
                    BoundaryCondition::ClampedFree => BoundaryDoc::ClampedFree,
                    BoundaryCondition::PinnedPinned => BoundaryDoc::PinnedPinned,
                    BoundaryCondition::ClampedEnds => BoundaryDoc::ClampedEnds,
                    BoundaryCondition::Free => BoundaryDoc::Free,
                },
                elements_per_panel: model.chain.elements_per_panel,
                hinges: model
                    .chain
                    .hinges
                    .iter()
                    .map(|h| HingeDoc {
                        joint: h.joint,
                        stiffness_nm_per_rad: match h.stiffness {
                            HingeStiffness::Rigid => None,
                            HingeStiffness::Spring(k) => Some(k),
                        },
                    })
                    .collect(),
            }),
            requirements: Some(RequirementsDoc {
                min_frequency_hz: r.min_frequency_hz,
                allowable_stress_factor: r.allowable_stress_factor,
                quasi_static_g: r.quasi_static_g,
                rail_load_n: r.rail_load,
                rail_section_mm2: scaled_back(r.rail_section_area, 1e-6),
                envelope_limit_mm: scaled_back(r.envelope_limit, 1e-3),
                temperature_bands: r
                    .temperature_bands
                    .iter()
                    .map(|b| BandDoc {
                        name: b.name.clone(),
                        node: b.node.clone(),
                        min_c: shortest_inverse(b.min, kelvin_to_celsius(b.min), celsius_to_kelvin),
                        max_c: shortest_inverse(b.max, kelvin_to_celsius(b.max), celsius_to_kelvin),
                    })
                    .collect(),
            }),
            scenarios: Some(scenarios_to_doc(&model.scenarios)),
        }
    }
}

fn scenarios_from_doc(d: &ScenariosDoc) -> Scenarios {
    let defaults = Scenarios::default();
    let orbit = d.orbit.as_ref().map_or(defaults.orbit.clone(), |o| OrbitDefaults {
        altitude_km: o.altitude_km,
        inclination_deg: o.inclination_deg,
        raan_deg: o.raan_deg,
    });
    let cases = if d.cases.is_empty() {
        defaults.cases.clone()
    } else {
        d.cases
            .iter()
            .map(|c| CaseDef {
                env: EnvCase {
                    name: c.name.clone(),
                    solar_flux: c.solar_flux_w_m2,
                    earth_ir: c.earth_ir_w_m2,
                    albedo: c.albedo,
                    albedo_correction: c.albedo_correction,
                },
                beta_deg: c.beta_deg,
                sun_azimuth_deg: c.sun_azimuth_deg,
            })
            .collect()
    };
    let surfaces = d
        .surfaces
        .iter()
        .map(|s| SurfaceConfig {
            name: s.name.clone(),
            patches: s
                .patches
                .iter()
                .map(|p| (p.patch.clone(), fractions(&p.finishes)))
                .collect(),
        })
        .collect();
    let attitude = d
        .attitude
        .as_ref()
        .map_or(defaults.attitude.clone(), |a| AttitudeDefaults {
            spin_rate_deg_s: a.spin_rate_deg_s,
            spin_axis: vec3(a.spin_axis),
            initial: match a.initial_axis {
                Some(ax) if a.initial_angle_deg != 0.0 => {
                    Attitude::from_axis_angle(&Unit::new_normalize(vec3(ax)), a.initial_angle_deg.to_radians())
                }
                _ => Attitude::identity(),
            },
            sun_patch: a.sun_patch.clone(),
            nadir_patch: a.nadir_patch.clone(),
        });
    let power = d.power.as_ref().map_or(defaults.power.clone(), |p| PowerSettings {
        standby_consumption: p.standby_consumption_w,
        sun_minutes: p.sun_minutes,
        eclipse_minutes: p.eclipse_minutes,
        nominal_flux: p.nominal_flux_w_m2,
    });
    let sim = d.sim.as_ref().map_or(defaults.sim, |s| SimSettings {
        dt: s.dt_s,
        tolerance: s.tolerance_k,
        max_orbits: s.max_orbits,
        initial_temperature: celsius_to_kelvin(s.initial_temperature_c),
    });
    Scenarios {
        orbit,
        cases,
        surfaces,
        attitude,
        power,
        sim,
    }
}

fn scenarios_to_doc(s: &Scenarios) -> ScenariosDoc {
    let a = &s.attitude;
    let (initial_axis, initial_angle_deg) = match a.initial.axis_angle() {
        Some((axis, angle)) => (Some(arr(&axis.into_inner())), angle.to_degrees()),
        None => (None, 0.0),
    };
    ScenariosDoc {
        orbit: Some(OrbitDoc {
            altitude_km: s.orbit.altitude_km,
            inclination_deg: s.orbit.inclination_deg,
            raan_deg: s.orbit.raan_deg,
        }),
        cases: s
            .cases
            .iter()
            .map(|c| CaseDoc {
                name: c.env.name.clone(),
                solar_flux_w_m2: c.env.solar_flux,
                earth_ir_w_m2: c.env.earth_ir,
                albedo: c.env.albedo,
                albedo_correction: c.env.albedo_correction,
                beta_deg: c.beta_deg,
                sun_azimuth_deg: c.sun_azimuth_deg,
            })
            .collect(),
        surfaces: s
            .surfaces
            .iter()
            .map(|sc| SurfaceDoc {
                name: sc.name.clone(),
                patches: sc
                    .patches
                    .iter()
                    .map(|(p, f)| SurfacePatchDoc {
                        patch: p.clone(),
                        finishes: fraction_docs(f),
                    })
                    .collect(),
            })
            .collect(),
        attitude: Some(AttitudeDoc {
            spin_rate_deg_s: a.spin_rate_deg_s,
            spin_axis: arr(&a.spin_axis),
            initial_axis,
            initial_angle_deg,
            sun_patch: a.sun_patch.clone(),
            nadir_patch: a.nadir_patch.clone(),
        }),
        power: Some(PowerDoc {
            standby_consumption_w: s.power.standby_consumption,
            sun_minutes: s.power.sun_minutes,
            eclipse_minutes: s.power.eclipse_minutes,
            nominal_flux_w_m2: s.power.nominal_flux,
        }),
        sim: Some(SimDoc {
            dt_s: s.sim.dt,
            tolerance_k: s.sim.tolerance,
            max_orbits: s.sim.max_orbits,
            initial_temperature_c: shortest_inverse(
                s.sim.initial_temperature,
                kelvin_to_celsius(s.sim.initial_temperature),
                celsius_to_kelvin,
            ),
        }),
    }
}

/// Shortest decimal `y` near `guess` with `load(y) == si` exactly, so a
/// written model reloads to the same SI values.
fn shortest_inverse(si: f64, guess: f64, load: impl Fn(f64) -> f64) -> f64 {
    let shortest = (1..=17)
        .filter_map(|digits| format!("{guess:.*e}", digits - 1).parse::<f64>().ok())
        .find(|y| load(*y) == si);
    // the exact inverse can sit a few ulps away from the naive one
    let nearby = || {
        (-4i64..=4)
            .map(|k| f64::from_bits((guess.to_bits() as i64 + k) as u64))
            .find(|y| load(*y) == si)
    };
    shortest.or_else(nearby).unwrap_or(guess)
}

/// File value for an SI quantity read back as `value * scale`.
fn scaled_back(si: f64, scale: f64) -> f64 {
    shortest_inverse(si, si / scale, |y| y * scale)
}

/// Parses model text without running the invariant checks.
pub fn parse_model_file(text: &str) -> Result<ModelFile, ConfigError> {
    if text.trim().is_empty() {
        return Err(ConfigError::Parse("file is empty".into()));
    }
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    match table.get("schema_version") {
        None => return Err(ConfigError::Schema("missing `schema_version`".into())),
        Some(toml::Value::Integer(v)) if *v == i64::from(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(ConfigError::Schema(format!(
                "unsupported schema_version {v}; this build reads version {SCHEMA_VERSION}"
            )))
        }
    }
    ModelFile::deserialize(table).map_err(|e| ConfigError::Schema(e.to_string()))
}

/// Parses, resolves and validates model text.
pub fn model_from_str(text: &str) -> Result<SatelliteModel, ConfigError> {
    let model = parse_model_file(text)?.to_model()?;
    let report = validate_model(&model);
    if !report.is_ok() {
        return Err(ConfigError::Invalid(report.errors));
    }
    Ok(model)
}

pub fn load_model(path: &Path) -> Result<SatelliteModel, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    model_from_str(&text)
}

/// TOML text of `model` in the current schema.
pub fn model_to_string(model: &SatelliteModel) -> String {
    toml::to_string(&ModelFile::from_model(model)).expect("model documents always serialize")
}
