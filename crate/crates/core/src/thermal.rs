//! Single-node orbital energy balance.
//!
//! Each node obeys `m·c_p·dT/dt = Q_s + Q_I + Q_A + Q_e − Q_sp` with no
//! conduction or radiative exchange between nodes. External forcing is
//! sampled once per step and held; only the `σεAT⁴` loss varies inside the
//! fourth-order Runge–Kutta step.

use alloc::string::String;
use alloc::vec::Vec;

use libm::ceil;

use crate::attitude::{attitude_at, AttitudeMode};
use crate::consts::{kelvin_to_celsius, STEFAN_BOLTZMANN};
use crate::error::{out_of_range, Error, Result};
use crate::model::{effective_optical_properties, SatelliteModel, TemperatureBand, ThermalNode};
use crate::orbit::{earth_view_factor, EclipseModel, EnvCase, OrbitSpec};
use crate::power::ExtractionTable;
use crate::Vec3;

/// Largest temperature change accepted in one step [K].
pub const STEP_GUARD: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    /// Requested step [s]; shortened so a whole number of steps fits one orbit.
    pub dt: f64,
    /// Orbit-to-orbit convergence tolerance [K].
    pub tolerance: f64,
    pub max_orbits: usize,
    /// K
    pub initial_temperature: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            dt: 1.0,
            tolerance: 0.1,
            max_orbits: 60,
            initial_temperature: 293.15,
        }
    }
}

/// Heat flow terms on one node at one instant [W]. `q_space` is the loss
/// magnitude; `p_electric` is the part of the absorbed sunlight leaving as
/// electrical power (already removed from `q_solar`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxBreakdown {
    pub q_solar: f64,
    pub q_ir: f64,
    pub q_albedo: f64,
    pub q_internal: f64,
    pub q_space: f64,
    pub p_electric: f64,
}

impl FluxBreakdown {
    /// Everything except the radiative loss.
    pub fn external(&self) -> f64 {
        self.q_solar + self.q_ir + self.q_albedo + self.q_internal
    }

    pub fn net(&self) -> f64 {
        self.external() - self.q_space
    }
}

/// Absorbed direct sunlight less electrical extraction.
pub fn q_solar(
    area: f64,
    alpha: f64,
    cos_incidence: f64,
    solar_flux: f64,
    in_eclipse: bool,
    p_electric: f64,
) -> Result<f64> {
    if in_eclipse {
        return Ok(0.0);
    }
    let absorbed = alpha * area * cos_incidence * solar_flux;
    if p_electric > absorbed * (1.0 + 1e-12) {
        return Err(Error::ExcessExtraction {
            extracted: p_electric,
            absorbed,
        });
    }
    Ok((absorbed - p_electric).max(0.0))
}

pub fn q_earth_ir(area: f64, epsilon: f64, view_factor: f64, earth_ir: f64, earth_weight: f64) -> f64 {
    epsilon * area * view_factor * earth_ir * earth_weight
}

#[allow(clippy::too_many_arguments)]
pub fn q_albedo(
    area: f64,
    alpha: f64,
    view_factor: f64,
    albedo_correction: f64,
    albedo: f64,
    solar_flux: f64,
    sun_zenith_cos: f64,
    earth_weight: f64,
) -> f64 {
    alpha * area * view_factor * albedo_correction * albedo * solar_flux * sun_zenith_cos.max(0.0) * earth_weight
}

/// Radiative loss to deep space for a node with `Σ ε·A = emissive_area`.
pub fn q_space(temperature: f64, emissive_area: f64) -> f64 {
    let t2 = temperature * temperature;
    STEFAN_BOLTZMANN * emissive_area * t2 * t2
}

/// A node reduced to what the integrator needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lumped {
    /// m·c_p [J/K]
    pub heat_capacity: f64,
    /// Σ ε·A [m²]
    pub emissive_area: f64,
}

impl Lumped {
    pub fn from_node(node: &ThermalNode, model: &SatelliteModel) -> Result<Self> {
        let mut emissive_area = 0.0;
        for p in &node.patches {
            let (_, eps) = effective_optical_properties(p, &model.finishes)?;
            emissive_area += eps * p.area;
        }
        Ok(Self {
            heat_capacity: node.heat_capacity(),
            emissive_area,
        })
    }

    fn rate(&self, temperature: f64, external: f64) -> f64 {
        (external - q_space(temperature, self.emissive_area)) / self.heat_capacity
    }
}

/// One RK4 step with `external` held constant over the step.
pub fn step_temperature(node: &Lumped, temperature: f64, external: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(out_of_range("time step", dt));
    }
    let k1 = node.rate(temperature, external);
    let k2 = node.rate(temperature + 0.5 * dt * k1, external);
    let k3 = node.rate(temperature + 0.5 * dt * k2, external);
    let k4 = node.rate(temperature + dt * k3, external);
    let delta = dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if !(delta.abs() <= STEP_GUARD) {
        return Err(Error::StepTooLarge {
            delta,
            limit: STEP_GUARD,
        });
    }
    Ok(temperature + delta)
}

/// Everything that defines one simulation run besides the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalScenario {
    pub orbit: OrbitSpec,
    pub env: EnvCase,
    pub mode: AttitudeMode,
    pub eclipse: EclipseModel,
    pub extraction: ExtractionTable,
    pub settings: SimSettings,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// s since the ascending-node crossing
    pub time: f64,
    /// K
    pub temperature: f64,
    pub flux: FluxBreakdown,
    pub in_eclipse: bool,
}

/// Final, converged orbit of one node. Samples run from 0 to one period
/// inclusive on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureHistory {
    pub node: String,
    pub orbit_period: f64,
    pub dt: f64,
    pub heat_capacity: f64,
    pub samples: Vec<Sample>,
    /// Orbits integrated, including the returned one.
    pub orbits: usize,
    /// Largest change against the previous orbit [K].
    pub deviation: f64,
}

impl TemperatureHistory {
    pub fn min(&self) -> f64 {
        self.samples.iter().map(|s| s.temperature).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.temperature)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Time-weighted mean over the orbit [K].
    pub fn mean(&self) -> f64 {
        let n = self.samples.len();
        if n < 2 {
            return self.samples.first().map_or(f64::NAN, |s| s.temperature);
        }
        let sum: f64 = self
            .samples
            .windows(2)
            .map(|w| 0.5 * (w[0].temperature + w[1].temperature))
            .sum();
        sum / (n - 1) as f64
    }

    /// `∫ΣQ dt / (m·c_p) − (T_end − T_start)` [K]. Held forcing is integrated
    /// exactly, the radiative loss by the trapezoidal rule.
    pub fn energy_residual(&self) -> f64 {
        let mut integral = 0.0;
        for w in self.samples.windows(2) {
            let dt = w[1].time - w[0].time;
            integral += dt * (w[0].flux.external() - 0.5 * (w[0].flux.q_space + w[1].flux.q_space));
        }
        let (first, last) = match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => (a.temperature, b.temperature),
            _ => return 0.0,
        };
        integral / self.heat_capacity - (last - first)
    }
}

struct PatchGeom {
    normal: Vec3,
    area: f64,
    alpha: f64,
    epsilon: f64,
    /// m² of cells, efficiency, extraction cap of the owning string
    cells: Option<(usize, f64, f64)>,
}

/// Held external forcing of `node` at each of the `n + 1` grid instants.
fn forcing(
    model: &SatelliteModel,
    node: &ThermalNode,
    scenario: &ThermalScenario,
    n: usize,
    dt: f64,
) -> Result<Vec<(FluxBreakdown, bool)>> {
    let env = &scenario.env;
    let orbit = &scenario.orbit;
    let view = earth_view_factor(orbit.altitude_km);

    // one slot per string with cells on this node; its patches share the cap
    let mut slots: Vec<(&str, Option<f64>)> = Vec::new();
    let mut patches = Vec::with_capacity(node.patches.len());
    for p in &node.patches {
        let (alpha, epsilon) = effective_optical_properties(p, &model.finishes)?;
        let owner = model.strings.iter().find(|s| s.patches.iter().any(|q| q == &p.name));
        let mut cells = None;
        if let Some(s) = owner.filter(|_| p.cell_fraction > 0.0) {
            if let Some(limit) = scenario.extraction.limit(&s.id) {
                let slot = match slots.iter().position(|(id, _)| *id == s.id) {
                    Some(i) => i,
                    None => {
                        slots.push((&s.id, limit));
                        slots.len() - 1
                    }
                };
                cells = Some((slot, p.area * p.cell_fraction, s.efficiency));
            }
        }
        patches.push(PatchGeom {
            normal: p.normal,
            area: p.area,
            alpha,
            epsilon,
            cells,
        });
    }

    let mut out = Vec::with_capacity(n + 1);
    let mut available = alloc::vec![0.0; slots.len()];
    let mut cosines = alloc::vec![0.0; patches.len()];
    for k in 0..=n {
        let tau = if k == n { 0.0 } else { k as f64 * dt };
        let state = orbit.state_at(tau, scenario.eclipse);
        let att = attitude_at(&scenario.mode, &state, tau);
        let sun = state.sun_direction;
        let nadir = -state.position;
        let zenith_cos = state.position.dot(&sun);

        available.iter_mut().for_each(|a| *a = 0.0);
        for (j, p) in patches.iter().enumerate() {
            cosines[j] = (att * p.normal).dot(&sun).max(0.0);
            if let (Some((slot, cell_area, eff)), false) = (p.cells, state.in_eclipse) {
                available[slot] += eff * env.solar_flux * cell_area * cosines[j];
            }
        }

        let mut f = FluxBreakdown {
            q_internal: node.dissipation.at(state.in_eclipse),
            ..FluxBreakdown::default()
        };
        for (j, p) in patches.iter().enumerate() {
            let n_inertial = att * p.normal;
            let weight = n_inertial.dot(&nadir).max(0.0);
            let mut p_elec = 0.0;
            if let (Some((slot, cell_area, eff)), false) = (p.cells, state.in_eclipse) {
                let total = available[slot];
                if total > 0.0 {
                    let drawn = slots[slot].1.map_or(total, |cap| cap.min(total));
                    p_elec = drawn * eff * env.solar_flux * cell_area * cosines[j] / total;
                }
            }
            f.q_solar += q_solar(p.area, p.alpha, cosines[j], env.solar_flux, state.in_eclipse, p_elec)?;
            f.p_electric += p_elec;
            f.q_ir += q_earth_ir(p.area, p.epsilon, view, env.earth_ir, weight);
            f.q_albedo += q_albedo(
                p.area,
                p.alpha,
                view,
                env.albedo_correction,
                env.albedo,
                env.solar_flux,
                zenith_cos,
                weight,
            );
        }
        if state.in_eclipse {
            f.q_albedo = 0.0;
        }
        out.push((f, state.in_eclipse));
    }
    Ok(out)
}

/// Steps per orbit and the effective step.
pub fn orbit_grid(period: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) {
        return Err(out_of_range("time step", dt));
    }
    let n = ceil(period / dt - 1e-9).max(1.0) as usize;
    Ok((n, period / n as f64))
}

fn run_node(model: &SatelliteModel, node: &ThermalNode, scenario: &ThermalScenario) -> Result<TemperatureHistory> {
    let s = &scenario.settings;
    let period = scenario.orbit.period();
    let (n, dt) = orbit_grid(period, s.dt)?;
    let lumped = Lumped::from_node(node, model)?;
    let drive = forcing(model, node, scenario, n, dt)?;

    let mut prev: Vec<f64> = Vec::with_capacity(n + 1);
    let mut cur: Vec<f64> = Vec::with_capacity(n + 1);
    let mut t = s.initial_temperature;
    let mut deviation = f64::INFINITY;
    for orbit in 1..=s.max_orbits {
        cur.clear();
        cur.push(t);
        for (f, _) in drive.iter().take(n) {
            t = step_temperature(&lumped, t, f.external(), dt)?;
            cur.push(t);
        }
        if orbit > 1 {
            deviation = cur.iter().zip(&prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if deviation < s.tolerance {
                let samples = cur
                    .iter()
                    .zip(&drive)
                    .enumerate()
                    .map(|(k, (&temperature, (f, ecl)))| Sample {
                        time: k as f64 * dt,
                        temperature,
                        flux: FluxBreakdown {
                            q_space: q_space(temperature, lumped.emissive_area),
                            ..*f
                        },
                        in_eclipse: *ecl,
                    })
                    .collect();
                return Ok(TemperatureHistory {
                    node: node.name.clone(),
                    orbit_period: period,
                    dt,
                    heat_capacity: lumped.heat_capacity,
                    samples,
                    orbits: orbit,
                    deviation,
                });
            }
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    Err(Error::NoConvergence {
        node: node.name.clone(),
        orbits: s.max_orbits,
        deviation,
    })
}

/// Integrates whole orbits from the initial temperature until each node's
/// orbit repeats within tolerance and returns that final orbit per node.
pub fn run_periodic(model: &SatelliteModel, scenario: &ThermalScenario) -> Result<Vec<TemperatureHistory>> {
    model.nodes.iter().map(|n| run_node(model, n, scenario)).collect()
}

/// As [`run_periodic`] for a single named node.
pub fn run_periodic_node(model: &SatelliteModel, scenario: &ThermalScenario, node: &str) -> Result<TemperatureHistory> {
    run_node(model, model.node(node)?, scenario)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandCheck {
    pub band: String,
    /// °C
    pub min_c: f64,
    /// °C
    pub max_c: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSummary {
    pub node: String,
    pub min_c: f64,
    pub max_c: f64,
    pub mean_c: f64,
    pub checks: Vec<BandCheck>,
}

impl NodeSummary {
    pub fn peak_to_peak(&self) -> f64 {
        self.max_c - self.min_c
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Orbit extremes of a history and their check against every band that
/// names its node.
pub fn summarize(history: &TemperatureHistory, bands: &[TemperatureBand]) -> NodeSummary {
    let (lo, hi) = (history.min(), history.max());
    let checks = bands
        .iter()
        .filter(|b| b.node == history.node)
        .map(|b| BandCheck {
            band: b.name.clone(),
            min_c: kelvin_to_celsius(b.min),
            max_c: kelvin_to_celsius(b.max),
            pass: lo >= b.min && hi <= b.max,
        })
        .collect();
    NodeSummary {
        node: history.node.clone(),
        min_c: kelvin_to_celsius(lo),
        max_c: kelvin_to_celsius(hi),
        mean_c: kelvin_to_celsius(history.mean()),
        checks,
    }
}
