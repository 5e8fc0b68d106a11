//! Machine-readable summaries and the run manifest.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use cubesat_preflight_core::power::BudgetReport;
use cubesat_preflight_core::structural::{ModalResult, StaticResult};
use cubesat_preflight_core::thermal::{NodeSummary, TemperatureHistory};
use cubesat_preflight_core::vib::FrequencyCheck;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Provenance record written next to every set of results. Identical inputs
/// give identical manifests apart from `timestamp`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub model_file: Option<String>,
    pub model_sha256: Option<String>,
    pub scenario: Option<String>,
    pub parameters: Value,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, model: Option<(&str, &[u8])>, scenario: Option<String>, parameters: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_owned(),
            model_file: model.map(|(p, _)| p.to_owned()),
            model_sha256: model.map(|(_, b)| sha256_hex(b)),
            scenario,
            parameters,
            timestamp: OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BandJson {
    pub band: String,
    pub min_c: f64,
    pub max_c: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeJson {
    pub node: String,
    pub min_c: f64,
    pub max_c: f64,
    pub mean_c: f64,
    pub peak_to_peak_k: f64,
    pub orbits: usize,
    pub deviation_k: f64,
    pub energy_residual_k: f64,
    pub bands: Vec<BandJson>,
}

impl NodeJson {
    pub fn new(s: &NodeSummary, h: &TemperatureHistory) -> Self {
        Self {
            node: s.node.clone(),
            min_c: s.min_c,
            max_c: s.max_c,
            mean_c: s.mean_c,
            peak_to_peak_k: s.peak_to_peak(),
            orbits: h.orbits,
            deviation_k: h.deviation,
            energy_residual_k: h.energy_residual(),
            bands: s
                .checks
                .iter()
                .map(|c| BandJson {
                    band: c.band.clone(),
                    min_c: c.min_c,
                    max_c: c.max_c,
                    pass: c.pass,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThermalSummary {
    pub case: String,
    pub surface: String,
    pub mode: String,
    pub power: String,
    pub eclipse: String,
    pub orbit_period_s: f64,
    pub dt_s: f64,
    pub beta_deg: f64,
    pub nodes: Vec<NodeJson>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeAverageJson {
    pub mode: String,
    pub factor: f64,
    pub strings: usize,
    pub generation_w: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetJson {
    pub nominal_flux_w_m2: f64,
    pub cell_peak_w: f64,
    pub string_peak_w: f64,
    pub spin_average_w: f64,
    pub orientable_strings: Vec<String>,
    pub max_rated_w: f64,
    pub max_peak_w: f64,
    pub consumption_w: f64,
    pub required_w: f64,
    pub per_string_w: f64,
    pub gap_w: f64,
    pub margin_w: f64,
    pub mode_averages: Vec<ModeAverageJson>,
    pub quoted: QuotedJson,
    pub extraction_w: Vec<(String, Option<f64>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotedJson {
    pub cell_peak_w: f64,
    pub string_peak_w: f64,
    pub spin_average_w: f64,
    pub required_w: f64,
    pub per_string_w: f64,
    pub gap_w: f64,
}

impl From<&BudgetReport> for BudgetJson {
    fn from(r: &BudgetReport) -> Self {
        Self {
            nominal_flux_w_m2: r.nominal_flux,
            cell_peak_w: r.cell_peak,
            string_peak_w: r.string_peak,
            spin_average_w: r.spin_average,
            orientable_strings: r.orientable.clone(),
            max_rated_w: r.max_rated,
            max_peak_w: r.max_peak,
            consumption_w: r.consumption,
            required_w: r.required,
            per_string_w: r.per_string,
            gap_w: r.gap,
            margin_w: r.margin,
            mode_averages: r
                .mode_averages
                .iter()
                .map(|m| ModeAverageJson {
                    mode: m.mode.as_str().into(),
                    factor: m.factor,
                    strings: m.strings,
                    generation_w: m.generation,
                })
                .collect(),
            quoted: QuotedJson {
                cell_peak_w: r.quoted.cell_peak,
                string_peak_w: r.quoted.string_peak,
                spin_average_w: r.quoted.spin_average,
                required_w: r.quoted.required,
                per_string_w: r.quoted.per_string,
                gap_w: r.quoted.gap,
            },
            extraction_w: r.extraction.limits.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceJson {
    pub channel: String,
    pub frequency_hz: Option<f64>,
    pub magnification: Option<f64>,
    pub pass: bool,
    pub note: Option<String>,
}

impl ResonanceJson {
    pub fn from_check(c: &FrequencyCheck, magnification: f64) -> Self {
        Self {
            channel: c.channel.clone(),
            frequency_hz: Some(c.frequency),
            magnification: Some(magnification),
            pass: c.pass,
            note: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceReport {
    pub reference: String,
    pub limit_hz: f64,
    pub channels: Vec<ResonanceJson>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModalJson {
    pub boundary: String,
    pub span_m: f64,
    pub mass_kg: f64,
    pub rigid_modes: usize,
    pub frequencies_hz: Vec<f64>,
    pub min_frequency_hz: f64,
    /// Informational: the frequency requirement applies to the whole vehicle
    /// and is gated by `struct check`, not by the panel chain on its own.
    pub above_min_frequency: bool,
}

impl ModalJson {
    pub fn new(boundary: &str, span: f64, mass: f64, m: &ModalResult, limit: f64) -> Self {
        Self {
            boundary: boundary.into(),
            span_m: span,
            mass_kg: mass,
            rigid_modes: m.rigid_modes,
            frequencies_hz: m.frequencies.clone(),
            min_frequency_hz: limit,
            above_min_frequency: m.frequencies.first().is_some_and(|f| *f > limit),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StaticJson {
    pub g_level: f64,
    pub max_deflection_mm: f64,
    pub deflection_at_m: f64,
    pub max_stress_mpa: f64,
    pub stress_at_m: f64,
    pub stress_per_g_mpa: f64,
    pub allowable_stress_mpa: f64,
    pub allowable_acceleration_g: Option<f64>,
    pub envelope_limit_mm: f64,
    pub envelope_pass: bool,
    pub stress_pass: bool,
}

impl StaticJson {
    pub fn new(s: &StaticResult, per_g: f64, allowable: f64, envelope_limit: f64, envelope_pass: bool) -> Self {
        Self {
            g_level: s.g_level,
            max_deflection_mm: s.max_deflection * 1e3,
            deflection_at_m: s.deflection_at,
            max_stress_mpa: s.max_stress / 1e6,
            stress_at_m: s.stress_at,
            stress_per_g_mpa: per_g / 1e6,
            allowable_stress_mpa: allowable / 1e6,
            allowable_acceleration_g: (per_g > 0.0).then(|| allowable / per_g),
            envelope_limit_mm: envelope_limit * 1e3,
            envelope_pass,
            stress_pass: s.max_stress <= allowable,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub check: String,
    pub value: f64,
    pub limit: f64,
    pub unit: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckItem>,
    pub pass: bool,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}
