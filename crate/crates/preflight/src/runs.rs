//! Scenario assembly shared by the command line, sweeps and tests.

use cubesat_preflight_core::model::SatelliteModel;
use cubesat_preflight_core::orbit::{beta_angle, EclipseModel};
use cubesat_preflight_core::power::{extraction_table, PowerState};
use cubesat_preflight_core::scenario::ModeKind;
use cubesat_preflight_core::thermal::{run_periodic, summarize, NodeSummary, TemperatureHistory, ThermalScenario};
use cubesat_preflight_core::Result;

use crate::report::{NodeJson, ThermalSummary};

/// Eclipse timing selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum EclipseChoice {
    /// Cylindrical umbra.
    #[default]
    Geom,
    /// 60 min sunlit / 30 min eclipse, centred on the anti-solar point.
    #[value(name = "fixed60_30")]
    Fixed60_30,
}

impl EclipseChoice {
    pub fn model(self) -> EclipseModel {
        match self {
            Self::Geom => EclipseModel::Geometric,
            Self::Fixed60_30 => EclipseModel::FixedSplit {
                sun_minutes: 60.0,
                eclipse_minutes: 30.0,
            },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Geom => "geom",
            Self::Fixed60_30 => "fixed60_30",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalRequest {
    pub case: String,
    /// Surface configuration applied on top of the model; `None` keeps the
    /// finishes as written.
    pub surface: Option<String>,
    pub mode: ModeKind,
    pub power: PowerState,
    /// Overrides the model's step when set [s].
    pub dt: Option<f64>,
    pub eclipse: EclipseChoice,
}

impl ThermalRequest {
    pub fn new(case: &str, surface: Option<&str>) -> Self {
        Self {
            case: case.into(),
            surface: surface.map(Into::into),
            mode: ModeKind::Spin,
            power: PowerState::Minimum,
            dt: None,
            eclipse: EclipseChoice::Geom,
        }
    }

    /// Short label, e.g. `cold_a_spin_min`.
    pub fn label(&self) -> String {
        format!(
            "{}_{}_{}_{}",
            self.case,
            self.surface.as_deref().unwrap_or("base"),
            self.mode.as_str(),
            self.power.as_str()
        )
    }
}

pub struct ThermalOutcome {
    pub histories: Vec<TemperatureHistory>,
    pub summaries: Vec<NodeSummary>,
    pub summary: ThermalSummary,
}

pub fn scenario_for(model: &SatelliteModel, req: &ThermalRequest) -> Result<ThermalScenario> {
    let case = model.scenarios.case(&req.case)?;
    let mut settings = model.scenarios.sim;
    if let Some(dt) = req.dt {
        settings.dt = dt;
    }
    Ok(ThermalScenario {
        orbit: model.scenarios.orbit_for(case)?,
        env: case.env.clone(),
        mode: model.scenarios.mode(model, req.mode)?,
        eclipse: req.eclipse.model(),
        extraction: extraction_table(model, req.power)?,
        settings,
    })
}

pub fn run_thermal(base: &SatelliteModel, req: &ThermalRequest) -> Result<ThermalOutcome> {
    let model = match &req.surface {
        Some(s) => base.with_surface(s)?,
        None => base.clone(),
    };
    let scenario = scenario_for(&model, req)?;
    let histories = run_periodic(&model, &scenario)?;
    let bands = &model.requirements.temperature_bands;
    let summaries: Vec<NodeSummary> = histories.iter().map(|h| summarize(h, bands)).collect();
    let summary = ThermalSummary {
        case: req.case.clone(),
        surface: req.surface.clone().unwrap_or_else(|| "base".into()),
        mode: req.mode.as_str().into(),
        power: req.power.as_str().into(),
        eclipse: req.eclipse.as_str().into(),
        orbit_period_s: scenario.orbit.period(),
        dt_s: histories.first().map_or(scenario.settings.dt, |h| h.dt),
        beta_deg: beta_angle(&scenario.orbit),
        nodes: summaries
            .iter()
            .zip(&histories)
            .map(|(s, h)| NodeJson::new(s, h))
            .collect(),
        pass: summaries.iter().all(NodeSummary::pass),
    };
    Ok(ThermalOutcome {
        histories,
        summaries,
        summary,
    })
}
