//! Solar string generation, sunlit-phase power requirement and the budget
//! report that also feeds electrical extraction into the thermal model.

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use libm::round;

use crate::attitude::spin_average_factor;
use crate::error::{out_of_range, Error, Result};
use crate::model::{PowerString, SatelliteModel};
use crate::orbit::{EclipseModel, OrbitSpec};
use crate::scenario::{ModeKind, PowerSettings};

/// Peak electrical output of one cell: η·S·A [W].
pub fn cell_peak_power(efficiency: f64, solar_flux: f64, cell_area: f64) -> f64 {
    efficiency * solar_flux * cell_area
}

/// Output of a series string at illumination `factor` (a cosine or an
/// orbit-average factor) [W].
pub fn string_power(string: &PowerString, factor: f64, solar_flux: f64) -> f64 {
    f64::from(string.cells_in_series) * cell_peak_power(string.efficiency, solar_flux, string.cell_area) * factor
}

/// Datasheet-rated string output, falling back to the η·S·A estimate.
pub fn string_rated_power(string: &PowerString, solar_flux: f64) -> f64 {
    match string.cell_rated_power {
        Some(p) => f64::from(string.cells_in_series) * p,
        None => string_power(string, 1.0, solar_flux),
    }
}

/// Generation needed while sunlit to cover `consumption` over the whole orbit.
pub fn required_generation(consumption: f64, sun_minutes: f64, eclipse_minutes: f64) -> Result<f64> {
    if !(sun_minutes > 0.0) {
        return Err(out_of_range("sunlit duration", sun_minutes));
    }
    if !(eclipse_minutes >= 0.0) {
        return Err(out_of_range("eclipse duration", eclipse_minutes));
    }
    Ok(consumption * (sun_minutes + eclipse_minutes) / sun_minutes)
}

/// Power generation state of the bus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerState {
    /// Standby: each string delivers only its share of the requirement.
    #[default]
    Minimum,
    /// Mission/charging: every string delivers all it can.
    Maximum,
}

impl PowerState {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Minimum => "min",
            Self::Maximum => "max",
        }
    }
}

impl FromStr for PowerState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Self::Minimum),
            "max" => Ok(Self::Maximum),
            other => Err(Error::UnknownReference {
                kind: "power state",
                name: other.into(),
            }),
        }
    }
}

/// Per-string cap on the electrical power drawn from the cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionTable {
    pub state: PowerState,
    /// `(string id, cap [W])`; `None` means everything available is drawn.
    pub limits: Vec<(String, Option<f64>)>,
}

impl ExtractionTable {
    /// No electrical extraction at all.
    pub fn none() -> Self {
        Self {
            state: PowerState::Minimum,
            limits: Vec::new(),
        }
    }

    pub fn limit(&self, string_id: &str) -> Option<Option<f64>> {
        self.limits.iter().find(|(id, _)| id == string_id).map(|(_, l)| *l)
    }
}

/// Share of the sunlit-phase requirement carried by each string [W].
pub fn per_string_requirement(model: &SatelliteModel) -> Result<f64> {
    let p = &model.scenarios.power;
    let required = required_generation(p.standby_consumption, p.sun_minutes, p.eclipse_minutes)?;
    if model.strings.is_empty() {
        return Ok(0.0);
    }
    Ok(required / model.strings.len() as f64)
}

pub fn extraction_table(model: &SatelliteModel, state: PowerState) -> Result<ExtractionTable> {
    let demand = per_string_requirement(model)?;
    let limit = match state {
        PowerState::Minimum => Some(demand),
        PowerState::Maximum => None,
    };
    Ok(ExtractionTable {
        state,
        limits: model.strings.iter().map(|s| (s.id.clone(), limit)).collect(),
    })
}

/// Average generation in one attitude mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAverage {
    pub mode: ModeKind,
    /// Sunlit-time illumination factor applied to the contributing strings.
    pub factor: f64,
    pub strings: usize,
    /// W
    pub generation: f64,
}

/// The same arithmetic carried out at the precision the figures are usually
/// quoted with (0.1 W for string and requirement, 0.01 W per string).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotedFigures {
    pub cell_peak: f64,
    pub string_peak: f64,
    pub spin_average: f64,
    pub required: f64,
    pub per_string: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetReport {
    pub nominal_flux: f64,
    pub cell_peak: f64,
    /// Peak output of the first string [W].
    pub string_peak: f64,
    /// Per-string free-rotation average [W].
    pub spin_average: f64,
    pub orientable: Vec<String>,
    /// Sun-orientable strings at their datasheet rating [W].
    pub max_rated: f64,
    /// Sun-orientable strings at η·S·A [W].
    pub max_peak: f64,
    pub consumption: f64,
    pub required: f64,
    pub per_string: f64,
    /// Peak string output minus the per-string requirement [W].
    pub gap: f64,
    pub mode_averages: Vec<ModeAverage>,
    /// Mean generation in free rotation minus the requirement [W].
    pub margin: f64,
    pub quoted: QuotedFigures,
    pub extraction: ExtractionTable,
}

/// Half-up rounding to `decimals` places, tolerant of values like 3.15 that
/// are stored just below the half. Dividing by the exact power of ten lands
/// on the double nearest the decimal figure.
fn round_to(x: f64, decimals: i32) -> f64 {
    let scale = (0..decimals).fold(1.0, |s, _| s * 10.0);
    round(x * scale + 1e-9) / scale
}

fn quoted(settings: &PowerSettings, string_peak: f64, n_strings: usize, cell_peak: f64) -> Result<QuotedFigures> {
    let string_q = round_to(string_peak, 1);
    let required_q = round_to(
        required_generation(
            settings.standby_consumption,
            settings.sun_minutes,
            settings.eclipse_minutes,
        )?,
        1,
    );
    let per_string_exact = if n_strings == 0 {
        0.0
    } else {
        required_q / n_strings as f64
    };
    Ok(QuotedFigures {
        cell_peak: round_to(cell_peak, 2),
        string_peak: string_q,
        spin_average: round_to(string_q * 0.25, 1),
        required: required_q,
        per_string: round_to(per_string_exact, 2),
        gap: round_to(string_q - per_string_exact, 2),
    })
}

/// The figures as quoted (rounded), from the first string and the power
/// settings alone. No orbit is propagated.
pub fn quoted_figures(model: &SatelliteModel) -> Result<QuotedFigures> {
    let flux = model.scenarios.power.nominal_flux;
    let (cell_peak, string_peak) = first_string_peaks(model, flux);
    quoted(&model.scenarios.power, string_peak, model.strings.len(), cell_peak)
}

fn first_string_peaks(model: &SatelliteModel, flux: f64) -> (f64, f64) {
    match model.strings.first() {
        Some(s) => (
            cell_peak_power(s.efficiency, flux, s.cell_area),
            string_power(s, 1.0, flux),
        ),
        None => (0.0, 0.0),
    }
}

/// Generation versus requirement for `model`. `orbit` and `eclipse` are used
/// for the numerically averaged nadir-pointing case.
pub fn budget_report(model: &SatelliteModel, orbit: &OrbitSpec, eclipse: EclipseModel) -> Result<BudgetReport> {
    let settings = &model.scenarios.power;
    let flux = settings.nominal_flux;
    let (cell_peak, string_peak) = first_string_peaks(model, flux);
    let orientable: Vec<&PowerString> = model.strings.iter().filter(|s| s.sun_orientable).collect();
    let max_rated = orientable.iter().map(|s| string_rated_power(s, flux)).sum();
    let max_peak: f64 = orientable.iter().map(|s| string_power(s, 1.0, flux)).sum();
    let required = required_generation(
        settings.standby_consumption,
        settings.sun_minutes,
        settings.eclipse_minutes,
    )?;
    let per_string = per_string_requirement(model)?;

    let mut mode_averages = Vec::new();
    let all_peak: f64 = model.strings.iter().map(|s| string_power(s, 1.0, flux)).sum();
    mode_averages.push(ModeAverage {
        mode: ModeKind::Spin,
        factor: 0.25,
        strings: model.strings.len(),
        generation: 0.25 * all_peak,
    });
    mode_averages.push(ModeAverage {
        mode: ModeKind::Sun,
        factor: 1.0,
        strings: orientable.len(),
        generation: max_peak,
    });
    if let Ok(mode) = model.scenarios.mode(model, ModeKind::Nadir) {
        let factor = spin_average_factor(&mode, orbit, eclipse);
        mode_averages.push(ModeAverage {
            mode: ModeKind::Nadir,
            factor,
            strings: orientable.len(),
            generation: factor * max_peak,
        });
    }

    Ok(BudgetReport {
        nominal_flux: flux,
        cell_peak,
        string_peak,
        spin_average: 0.25 * string_peak,
        orientable: orientable.iter().map(|s| s.id.clone()).collect(),
        max_rated,
        max_peak,
        consumption: settings.standby_consumption,
        required,
        per_string,
        gap: string_peak - per_string,
        mode_averages,
        margin: 0.25 * all_peak - required,
        quoted: quoted_figures(model)?,
        extraction: extraction_table(model, PowerState::Minimum)?,
    })
}
