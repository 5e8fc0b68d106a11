//! Satellite model: material and finish catalogs, thermal nodes with their
//! surface patches, power strings, structural panels and requirement limits.
//!
//! All quantities are SI (m, kg, K, Pa, W). Unit conversion happens where the
//! model is read from disk, never here.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{out_of_range, Error, Result};
use crate::scenario::Scenarios;
use crate::Vec3;

/// Tolerance for unit normals and finish-fraction sums.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Default fraction of tensile strength allowed as working stress.
pub const DEFAULT_ALLOWABLE_FACTOR: f64 = 0.30;

/// Absorptivity/emissivity above which a finish is flagged as suspicious.
pub const SUSPICIOUS_OPTICAL: f64 = 0.98;

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Pa
    pub youngs_modulus: f64,
    /// kg/m³
    pub density: f64,
    /// Pa
    pub tensile_strength: f64,
    /// J/(kg·K)
    pub specific_heat: f64,
    /// W/(m·K); carried for reference, the lumped thermal model ignores it.
    pub conductivity: f64,
    /// Per-material override of [`DEFAULT_ALLOWABLE_FACTOR`].
    pub allowable_stress_factor: Option<f64>,
}

impl Material {
    pub fn allowable_stress(&self) -> Result<f64> {
        allowable_stress(self, self.allowable_stress_factor.unwrap_or(DEFAULT_ALLOWABLE_FACTOR))
    }
}

/// Where a finish's optical values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Provenance {
    Measured,
    Datasheet,
    #[default]
    Calibrated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFinish {
    pub name: String,
    /// Solar absorptivity.
    pub alpha: f64,
    /// Infrared emissivity.
    pub epsilon: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinishFraction {
    pub finish: String,
    pub fraction: f64,
}

impl FinishFraction {
    pub fn new(finish: impl Into<String>, fraction: f64) -> Self {
        Self {
            finish: finish.into(),
            fraction,
        }
    }
}

/// One flat, externally facing surface of a thermal node.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePatch {
    pub name: String,
    /// m²
    pub area: f64,
    /// Outward unit normal in the body frame.
    pub normal: Vec3,
    pub finishes: Vec<FinishFraction>,
    /// Fraction of the area covered by solar cells.
    pub cell_fraction: f64,
    pub string_id: Option<String>,
}

/// Internal heat dissipation of a node [W].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dissipation {
    pub sunlit: f64,
    pub eclipse: f64,
}

impl Dissipation {
    pub fn constant(watts: f64) -> Self {
        Self {
            sunlit: watts,
            eclipse: watts,
        }
    }

    pub fn at(&self, in_eclipse: bool) -> f64 {
        if in_eclipse {
            self.eclipse
        } else {
            self.sunlit
        }
    }
}

/// An isothermal lumped mass exchanging heat radiatively with the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalNode {
    pub name: String,
    /// kg
    pub mass: f64,
    /// J/(kg·K)
    pub specific_heat: f64,
    /// Material the specific heat was taken from, if any.
    pub material: Option<String>,
    pub patches: Vec<SurfacePatch>,
    pub dissipation: Dissipation,
}

impl ThermalNode {
    /// m·c_p [J/K]
    pub fn heat_capacity(&self) -> f64 {
        self.mass * self.specific_heat
    }
}

/// A series string of solar cells feeding the bus.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerString {
    pub id: String,
    pub cells_in_series: u32,
    /// m² per cell
    pub cell_area: f64,
    pub efficiency: f64,
    pub patches: Vec<String>,
    /// Whether the string belongs to the set that can face the sun together.
    pub sun_orientable: bool,
    /// Datasheet maximum-power-point rating of one cell [W], if known.
    pub cell_rated_power: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    pub name: String,
    /// Span along the chain [m].
    pub length: f64,
    /// m
    pub width: f64,
    /// m
    pub thickness: f64,
    pub material: String,
    /// Structural plus smeared non-structural mass [kg].
    pub total_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HingeStiffness {
    Rigid,
    /// Torsional spring [N·m/rad].
    Spring(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HingeSpec {
    /// Joint index: 0 joins panel 0 and panel 1.
    pub joint: usize,
    pub stiffness: HingeStiffness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Root clamped, tip free.
    ClampedFree,
    /// Both chain ends pinned.
    PinnedPinned,
    /// Both outer hinge lines clamped.
    ClampedEnds,
    /// Unconstrained.
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLayout {
    /// Gap between adjacent panels [m].
    pub gap: f64,
    pub hinges: Vec<HingeSpec>,
    pub boundary: BoundaryCondition,
    pub elements_per_panel: usize,
}

impl Default for ChainLayout {
    fn default() -> Self {
        Self {
            gap: 0.0,
            hinges: Vec::new(),
            boundary: BoundaryCondition::ClampedFree,
            elements_per_panel: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureBand {
    pub name: String,
    pub node: String,
    /// K
    pub min: f64,
    /// K
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Requirements {
    pub min_frequency_hz: f64,
    pub allowable_stress_factor: f64,
    pub quasi_static_g: f64,
    /// N
    pub rail_load: f64,
    /// m²
    pub rail_section_area: f64,
    /// m beyond the rail plane
    pub envelope_limit: f64,
    pub temperature_bands: Vec<TemperatureBand>,
}

impl Default for Requirements {
    fn default() -> Self {
        Self {
            min_frequency_hz: 60.0,
            allowable_stress_factor: DEFAULT_ALLOWABLE_FACTOR,
            quasi_static_g: 9.0,
            rail_load: 46.6,
            rail_section_area: 0.0085 * 0.0085,
            envelope_limit: 0.0065,
            temperature_bands: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatelliteModel {
    pub name: String,
    pub materials: Vec<Material>,
    pub finishes: Vec<SurfaceFinish>,
    pub nodes: Vec<ThermalNode>,
    pub strings: Vec<PowerString>,
    pub panels: Vec<PanelSpec>,
    pub chain: ChainLayout,
    pub requirements: Requirements,
    pub scenarios: Scenarios,
}

impl SatelliteModel {
    pub fn material(&self, name: &str) -> Result<&Material> {
        self.materials
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| unknown("material", name))
    }

    pub fn finish(&self, name: &str) -> Result<&SurfaceFinish> {
        self.finishes
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| unknown("finish", name))
    }

    pub fn node(&self, name: &str) -> Result<&ThermalNode> {
        self.nodes
            .iter()
            .find(|n| n.name == name)
            .ok_or_else(|| unknown("node", name))
    }

    pub fn patches(&self) -> impl Iterator<Item = (&ThermalNode, &SurfacePatch)> {
        self.nodes.iter().flat_map(|n| n.patches.iter().map(move |p| (n, p)))
    }

    pub fn patch(&self, name: &str) -> Result<&SurfacePatch> {
        self.patches()
            .map(|(_, p)| p)
            .find(|p| p.name == name)
            .ok_or_else(|| unknown("patch", name))
    }

    pub fn string(&self, id: &str) -> Result<&PowerString> {
        self.strings
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| unknown("string", id))
    }

    pub fn total_node_mass(&self) -> f64 {
        self.nodes.iter().map(|n| n.mass).sum()
    }

    /// Copy of the model with the named surface configuration's finish
    /// assignments applied.
    pub fn with_surface(&self, name: &str) -> Result<SatelliteModel> {
        let surface = self
            .scenarios
            .surfaces
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| unknown("surface configuration", name))?;
        let mut model = self.clone();
        for (patch_name, finishes) in &surface.patches {
            let patch = model
                .nodes
                .iter_mut()
                .flat_map(|n| n.patches.iter_mut())
                .find(|p| &p.name == patch_name)
                .ok_or_else(|| unknown("patch", patch_name))?;
            patch.finishes = finishes.clone();
        }
        Ok(model)
    }
}

fn unknown(kind: &'static str, name: &str) -> Error {
    Error::UnknownReference {
        kind,
        name: name.into(),
    }
}

/// Findings of [`validate_model`]. The model is usable iff `errors` is empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, msg: String) {
        self.errors.push(msg);
    }

    fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }

    fn positive(&mut self, ctx: &str, field: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.error(format!("{ctx}: {field} must be > 0 (got {v})"));
        }
    }

    fn unit_interval(&mut self, ctx: &str, field: &str, v: f64) {
        if !(0.0..=1.0).contains(&v) {
            self.error(format!("{ctx}: {field} must lie in [0, 1] (got {v})"));
        }
    }
}

fn duplicates<'a>(report: &mut ValidationReport, kind: &str, names: impl Iterator<Item = &'a str>) {
    let mut seen: Vec<&str> = Vec::new();
    for n in names {
        if seen.contains(&n) {
            report.error(format!("duplicate {kind} name `{n}`"));
        } else {
            seen.push(n);
        }
    }
}

fn check_fractions(report: &mut ValidationReport, ctx: &str, fractions: &[FinishFraction], finishes: &[SurfaceFinish]) {
    if fractions.is_empty() {
        report.error(format!("{ctx}: no finishes assigned"));
        return;
    }
    let mut sum = 0.0;
    for f in fractions {
        report.unit_interval(ctx, "finish fraction", f.fraction);
        if !finishes.iter().any(|c| c.name == f.finish) {
            report.error(format!("{ctx}: unknown finish `{}`", f.finish));
        }
        sum += f.fraction;
    }
    if (sum - 1.0).abs() > UNIT_TOLERANCE {
        report.error(format!("{ctx}: finish fractions sum to {sum}, expected 1"));
    }
}

/// Checks every structural invariant of the model. Never fails; all findings
/// are collected in the report.
pub fn validate_model(model: &SatelliteModel) -> ValidationReport {
    let mut r = ValidationReport::default();

    duplicates(&mut r, "material", model.materials.iter().map(|m| m.name.as_str()));
    for m in &model.materials {
        let ctx = format!("material `{}`", m.name);
        r.positive(&ctx, "youngs_modulus", m.youngs_modulus);
        r.positive(&ctx, "density", m.density);
        r.positive(&ctx, "tensile_strength", m.tensile_strength);
        r.positive(&ctx, "specific_heat", m.specific_heat);
        r.positive(&ctx, "conductivity", m.conductivity);
        if let Some(f) = m.allowable_stress_factor {
            if !(f > 0.0 && f <= 1.0) {
                r.error(format!("{ctx}: allowable_stress_factor must lie in (0, 1] (got {f})"));
            }
        }
    }

    duplicates(&mut r, "finish", model.finishes.iter().map(|f| f.name.as_str()));
    for f in &model.finishes {
        let ctx = format!("finish `{}`", f.name);
        r.unit_interval(&ctx, "alpha", f.alpha);
        r.unit_interval(&ctx, "epsilon", f.epsilon);
        if f.alpha > SUSPICIOUS_OPTICAL && f.alpha <= 1.0 {
            r.warn(format!("{ctx}: alpha {} is unusually high", f.alpha));
        }
        if f.epsilon > SUSPICIOUS_OPTICAL && f.epsilon <= 1.0 {
            r.warn(format!("{ctx}: epsilon {} is unusually high", f.epsilon));
        }
    }

    duplicates(&mut r, "node", model.nodes.iter().map(|n| n.name.as_str()));
    duplicates(&mut r, "patch", model.patches().map(|(_, p)| p.name.as_str()));
    for node in &model.nodes {
        let ctx = format!("node `{}`", node.name);
        r.positive(&ctx, "mass", node.mass);
        r.positive(&ctx, "specific_heat", node.specific_heat);
        if node.dissipation.sunlit < 0.0 || node.dissipation.eclipse < 0.0 {
            r.error(format!("{ctx}: dissipation must be >= 0"));
        }
        if let Some(mat) = &node.material {
            if model.material(mat).is_err() {
                r.error(format!("{ctx}: unknown material `{mat}`"));
            }
        }
        if node.patches.is_empty() {
            r.warn(format!("{ctx}: has no surface patches and cannot exchange heat"));
        }
        for p in &node.patches {
            let ctx = format!("patch `{}`", p.name);
            r.positive(&ctx, "area", p.area);
            let n = p.normal.norm();
            if (n - 1.0).abs() > UNIT_TOLERANCE {
                r.error(format!("{ctx}: normal has length {n}, expected unit"));
            }
            r.unit_interval(&ctx, "cell_fraction", p.cell_fraction);
            check_fractions(&mut r, &ctx, &p.finishes, &model.finishes);
            if let Some(id) = &p.string_id {
                match model.string(id) {
                    Ok(s) if !s.patches.contains(&p.name) => {
                        r.error(format!("{ctx}: references string `{id}` which does not list it"))
                    }
                    Ok(_) => {}
                    Err(_) => r.error(format!("{ctx}: unknown string `{id}`")),
                }
            }
        }
    }
    if !(model.total_node_mass() > 0.0) {
        r.error("total node mass must be > 0".into());
    }

    duplicates(&mut r, "string", model.strings.iter().map(|s| s.id.as_str()));
    let mut claimed: Vec<&str> = Vec::new();
    for s in &model.strings {
        let ctx = format!("string `{}`", s.id);
        if s.cells_in_series < 1 {
            r.error(format!("{ctx}: needs at least one cell"));
        }
        r.positive(&ctx, "cell_area", s.cell_area);
        if !(s.efficiency > 0.0 && s.efficiency < 1.0) {
            r.error(format!("{ctx}: efficiency must lie in (0, 1) (got {})", s.efficiency));
        }
        if let Some(p) = s.cell_rated_power {
            r.positive(&ctx, "cell_rated_power", p);
        }
        for p in &s.patches {
            match model.patch(p) {
                Ok(patch) if patch.cell_fraction <= 0.0 => r.warn(format!("{ctx}: patch `{p}` carries no cells")),
                Ok(_) => {}
                Err(_) => r.error(format!("{ctx}: unknown patch `{p}`")),
            }
            if claimed.contains(&p.as_str()) {
                r.error(format!("{ctx}: patch `{p}` already belongs to another string"));
            }
            claimed.push(p);
        }
    }

    for p in &model.panels {
        let ctx = format!("panel `{}`", p.name);
        r.positive(&ctx, "length", p.length);
        r.positive(&ctx, "width", p.width);
        r.positive(&ctx, "thickness", p.thickness);
        r.positive(&ctx, "total_mass", p.total_mass);
        if model.material(&p.material).is_err() {
            r.error(format!("{ctx}: unknown material `{}`", p.material));
        }
    }
    if !model.panels.is_empty() {
        let chain = &model.chain;
        if chain.elements_per_panel < 8 {
            r.error(format!(
                "chain: elements_per_panel must be >= 8 (got {})",
                chain.elements_per_panel
            ));
        }
        if !(chain.gap >= 0.0) {
            r.error(format!("chain: gap must be >= 0 (got {})", chain.gap));
        }
        let joints = model.panels.len() - 1;
        let mut seen = Vec::new();
        for h in &chain.hinges {
            if h.joint >= joints {
                r.error(format!("chain: hinge joint {} out of range (0..{joints})", h.joint));
            }
            if seen.contains(&h.joint) {
                r.error(format!("chain: hinge joint {} defined twice", h.joint));
            }
            seen.push(h.joint);
            if let HingeStiffness::Spring(k) = h.stiffness {
                r.positive("chain", "hinge stiffness", k);
            }
        }
    }

    let req = &model.requirements;
    r.positive("requirements", "min_frequency_hz", req.min_frequency_hz);
    if !(req.allowable_stress_factor > 0.0 && req.allowable_stress_factor <= 1.0) {
        r.error(format!(
            "requirements: allowable_stress_factor must lie in (0, 1] (got {})",
            req.allowable_stress_factor
        ));
    }
    r.positive("requirements", "quasi_static_g", req.quasi_static_g);
    if req.rail_load < 0.0 {
        r.error("requirements: rail_load must be >= 0".into());
    }
    r.positive("requirements", "rail_section_area", req.rail_section_area);
    r.positive("requirements", "envelope_limit", req.envelope_limit);
    for b in &req.temperature_bands {
        let ctx = format!("temperature band `{}`", b.name);
        if !(b.min < b.max) {
            r.error(format!("{ctx}: min must be below max"));
        }
        if model.node(&b.node).is_err() {
            r.error(format!("{ctx}: unknown node `{}`", b.node));
        }
    }

    crate::scenario::validate_scenarios(model, &mut r.errors, &mut r.warnings);
    r
}

/// Area-weighted absorptivity and emissivity of a patch.
pub fn effective_optical_properties(patch: &SurfacePatch, finishes: &[SurfaceFinish]) -> Result<(f64, f64)> {
    patch.finishes.iter().try_fold((0.0, 0.0), |(a, e), ff| {
        let f = finishes
            .iter()
            .find(|f| f.name == ff.finish)
            .ok_or_else(|| unknown("finish", &ff.finish))?;
        Ok((a + ff.fraction * f.alpha, e + ff.fraction * f.epsilon))
    })
}

/// Working stress limit: `factor` × tensile strength.
pub fn allowable_stress(material: &Material, factor: f64) -> Result<f64> {
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(out_of_range("allowable stress factor", factor));
    }
    Ok(factor * material.tensile_strength)
}
