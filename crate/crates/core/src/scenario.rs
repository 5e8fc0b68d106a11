//! Scenario catalog: orbit defaults, named environment cases, surface
//! configurations, attitude and power settings, integrator settings.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use libm::sqrt;

use crate::attitude::{Attitude, AttitudeMode};
use crate::consts::NOMINAL_SOLAR_FLUX;
use crate::error::{Error, Result};
use crate::model::{FinishFraction, SatelliteModel, UNIT_TOLERANCE};
use crate::orbit::{env_case, EnvCase, OrbitSpec};
use crate::thermal::SimSettings;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDefaults {
    pub altitude_km: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
}

impl Default for OrbitDefaults {
    fn default() -> Self {
        Self {
            altitude_km: 400.0,
            inclination_deg: 51.6,
            raan_deg: 0.0,
        }
    }
}

/// An environment case together with the sun geometry it is flown in.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseDef {
    pub env: EnvCase,
    pub beta_deg: f64,
    pub sun_azimuth_deg: f64,
}

impl CaseDef {
    pub fn name(&self) -> &str {
        &self.env.name
    }
}

/// Finish assignments that replace the model's defaults on selected patches.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceConfig {
    pub name: String,
    pub patches: Vec<(String, Vec<FinishFraction>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttitudeDefaults {
    pub spin_rate_deg_s: f64,
    /// Body-frame spin axis (unit).
    pub spin_axis: Vec3,
    pub initial: Attitude,
    pub sun_patch: Option<String>,
    pub nadir_patch: Option<String>,
}

impl Default for AttitudeDefaults {
    fn default() -> Self {
        Self {
            spin_rate_deg_s: 2.0,
            spin_axis: Vec3::new(1.0, 1.0, 1.0) / sqrt(3.0),
            initial: Attitude::identity(),
            sun_patch: None,
            nadir_patch: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSettings {
    /// Standby bus consumption [W].
    pub standby_consumption: f64,
    pub sun_minutes: f64,
    pub eclipse_minutes: f64,
    /// Flux used for cell peak power [W/m²].
    pub nominal_flux: f64,
}

impl Default for PowerSettings {
    fn default() -> Self {
        Self {
            standby_consumption: 2.1,
            sun_minutes: 60.0,
            eclipse_minutes: 30.0,
            nominal_flux: NOMINAL_SOLAR_FLUX,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenarios {
    pub orbit: OrbitDefaults,
    pub cases: Vec<CaseDef>,
    pub surfaces: Vec<SurfaceConfig>,
    pub attitude: AttitudeDefaults,
    pub power: PowerSettings,
    pub sim: SimSettings,
}

impl Default for Scenarios {
    fn default() -> Self {
        let case = |name, beta_deg| CaseDef {
            env: env_case(name).expect("built-in case"),
            beta_deg,
            sun_azimuth_deg: 0.0,
        };
        Self {
            orbit: OrbitDefaults::default(),
            // full sun, typical, zero-beta sun/eclipse cycle
            cases: vec![case("hot", 75.0), case("nominal", 30.0), case("cold", 0.0)],
            surfaces: Vec::new(),
            attitude: AttitudeDefaults::default(),
            power: PowerSettings::default(),
            sim: SimSettings::default(),
        }
    }
}

/// Attitude mode selectors understood by the scenario catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Spin,
    Sun,
    Nadir,
}

impl ModeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Spin => "spin",
            Self::Sun => "sun",
            Self::Nadir => "nadir",
        }
    }
}

impl FromStr for ModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin" => Ok(Self::Spin),
            "sun" => Ok(Self::Sun),
            "nadir" => Ok(Self::Nadir),
            other => Err(Error::UnknownReference {
                kind: "attitude mode",
                name: other.into(),
            }),
        }
    }
}

impl Scenarios {
    pub fn case(&self, name: &str) -> Result<&CaseDef> {
        self.cases
            .iter()
            .find(|c| c.env.name == name)
            .ok_or_else(|| Error::UnknownReference {
                kind: "case",
                name: name.into(),
            })
    }

    pub fn orbit_for(&self, case: &CaseDef) -> Result<OrbitSpec> {
        OrbitSpec::with_beta(
            self.orbit.altitude_km,
            self.orbit.inclination_deg,
            self.orbit.raan_deg,
            case.beta_deg,
            case.sun_azimuth_deg,
        )
    }

    pub fn mode(&self, model: &SatelliteModel, kind: ModeKind) -> Result<AttitudeMode> {
        let missing = |what: &'static str| Error::Invalid {
            what,
            reason: "no pointing patch configured".into(),
        };
        match kind {
            ModeKind::Spin => Ok(
                AttitudeMode::free_rotation(self.attitude.spin_rate_deg_s, self.attitude.spin_axis)?
                    .with_initial(self.attitude.initial),
            ),
            ModeKind::Sun => {
                let p = self
                    .attitude
                    .sun_patch
                    .as_deref()
                    .ok_or_else(|| missing("sun pointing"))?;
                AttitudeMode::sun_pointing(model, p)
            }
            ModeKind::Nadir => {
                let p = self
                    .attitude
                    .nadir_patch
                    .as_deref()
                    .ok_or_else(|| missing("nadir pointing"))?;
                AttitudeMode::nadir_pointing(model, p)
            }
        }
    }
}

pub(crate) fn validate_scenarios(model: &SatelliteModel, errors: &mut Vec<String>, warnings: &mut Vec<String>) {
    let s = &model.scenarios;
    if !(s.orbit.altitude_km > 0.0) {
        errors.push(format!(
            "scenarios.orbit: altitude must be > 0 (got {})",
            s.orbit.altitude_km
        ));
    }
    if !(0.0..=180.0).contains(&s.orbit.inclination_deg) {
        errors.push(format!(
            "scenarios.orbit: inclination must lie in [0, 180] (got {})",
            s.orbit.inclination_deg
        ));
    }
    for c in &s.cases {
        if let Err(e) = c.env.validate() {
            errors.push(format!("case `{}`: {e}", c.env.name));
        }
        if !(-90.0..=90.0).contains(&c.beta_deg) {
            errors.push(format!("case `{}`: beta must lie in [-90, 90]", c.env.name));
        }
    }
    for surf in &s.surfaces {
        for (patch, fractions) in &surf.patches {
            let ctx = format!("surface `{}` patch `{patch}`", surf.name);
            if model.patch(patch).is_err() {
                errors.push(format!("{ctx}: unknown patch"));
            }
            let mut sum = 0.0;
            for f in fractions {
                if model.finish(&f.finish).is_err() {
                    errors.push(format!("{ctx}: unknown finish `{}`", f.finish));
                }
                sum += f.fraction;
            }
            if (sum - 1.0).abs() > UNIT_TOLERANCE {
                errors.push(format!("{ctx}: finish fractions sum to {sum}, expected 1"));
            }
        }
    }
    let a = &s.attitude;
    if !(a.spin_rate_deg_s >= 0.0) {
        errors.push("scenarios.attitude: spin rate must be >= 0".into());
    }
    if (a.spin_axis.norm() - 1.0).abs() > UNIT_TOLERANCE {
        errors.push("scenarios.attitude: spin axis must be a unit vector".into());
    }
    for p in [&a.sun_patch, &a.nadir_patch].into_iter().flatten() {
        if model.patch(p).is_err() {
            errors.push(format!("scenarios.attitude: unknown patch `{p}`"));
        }
    }
    let p = &s.power;
    if !(p.sun_minutes > 0.0) {
        errors.push("scenarios.power: sun_minutes must be > 0".into());
    }
    if !(p.eclipse_minutes >= 0.0) {
        errors.push("scenarios.power: eclipse_minutes must be >= 0".into());
    }
    if !(p.standby_consumption >= 0.0) {
        errors.push("scenarios.power: standby consumption must be >= 0".into());
    }
    if !(p.nominal_flux > 0.0) {
        errors.push("scenarios.power: nominal flux must be > 0".into());
    }
    let sim = &s.sim;
    if !(sim.dt > 0.0) {
        errors.push("scenarios.sim: dt must be > 0".into());
    }
    if !(sim.tolerance > 0.0) {
        errors.push("scenarios.sim: tolerance must be > 0".into());
    }
    if sim.max_orbits < 2 {
        errors.push("scenarios.sim: max_orbits must be >= 2".into());
    }
    if !(sim.initial_temperature > 0.0) {
        errors.push("scenarios.sim: initial temperature must be > 0 K".into());
    }
    if sim.dt > 60.0 {
        warnings.push(format!(
            "scenarios.sim: dt of {} s is coarse for spinning attitudes",
            sim.dt
        ));
    }
}
